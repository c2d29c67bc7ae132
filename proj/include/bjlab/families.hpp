#pragma once
#include <optional>
#include <vector>

#include "bjlab/common.hpp"

namespace bjlab {

// one power-law annular piece  coeff * |t|^exponent on r_in <= |t| <= r_out
struct radial_shell {
    double coeff = 1.0;
    double exponent = 0.0;
    double r_in = 0.0;
    double r_out = 1.0;
};

// finite sum of annular power-law pieces; shells may not overlap
struct radial_profile {
    int d = 2;
    std::vector<radial_shell> shells;

    double eval(double t) const {
        for (const auto& s : shells)
            if (t >= s.r_in && t <= s.r_out)
                return s.coeff * std::pow(t, s.exponent);
        return 0.0;
    }
    double support_radius() const {
        double r = 0.0;
        for (const auto& s : shells) r = std::max(r, s.r_out);
        return r;
    }
};

// |t|^{-d/2} on r1 <= |t| <= r2   (log-divergent homogeneous annulus)
radial_profile annulus_profile(int d, double r1, double r2);

// shorthand for annulus_profile(d, 1, R)
radial_profile f_R_profile(int d, double R);

// |t|^{-alpha} on |t| <= 1, alpha in (0, d/2)
radial_profile falpha_profile(int d, double alpha);

struct superposition_info {
    int requested_n = 0;
    int achieved_n = 0;            // capped where radii underflow doubles
    std::vector<double> amplitude;  // a_n
    std::vector<double> growth;     // lambda_n
    std::vector<double> r_inner;    // r_n
    std::vector<double> r_outer;    // R_n
};

// sum of scaled annuli a_n f_{r_n,R_n} in d=2 with doubly exponentially
// shrinking radii; info records the achieved depth and the scale table
radial_profile make_annular_superposition(int n, superposition_info* info = nullptr);

// exact squared L2 norm of a profile
double l2_norm_squared(const radial_profile& f);

// exact integral of c * t^e dt over [a,b]; log branch at e = -1 (callers fold
// the surface-measure power t^{d-1} into e)
double power_integral(double c, double e, double a, double b);

double l1_norm(const radial_profile& f);
double linf_on_ball(const radial_profile& f, double center, double radius);

}  // namespace bjlab
