#include "bjlab/families.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace bjlab {

radial_profile annulus_profile(int d, double r1, double r2) {
    if (!(0.0 < r1 && r1 < r2)) throw std::invalid_argument("annulus_profile: need 0 < r1 < r2");
    radial_profile f;
    f.d = d;
    f.shells.push_back({1.0, -0.5 * d, r1, r2});
    return f;
}

radial_profile f_R_profile(int d, double R) {
    if (!(R > 1.0)) throw std::invalid_argument("f_R_profile: need R > 1");
    return annulus_profile(d, 1.0, R);
}

radial_profile falpha_profile(int d, double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5 * d))
        throw std::invalid_argument("falpha_profile: need 0 < alpha < d/2");
    radial_profile f;
    f.d = d;
    f.shells.push_back({1.0, -alpha, 0.0, 1.0});
    return f;
}

radial_profile make_annular_superposition(int n, superposition_info* info) {
    if (n < 1) throw std::invalid_argument("make_annular_superposition: need n >= 1");
    radial_profile f;
    f.d = 2;
    superposition_info inf;
    inf.requested_n = n;
    double outer = 0.1;
    for (int k = 1; k <= n; ++k) {
        const double lambda = static_cast<double>(k) * k * k + 2.0;
        const double inner = outer * std::exp(-lambda);
        if (!(inner > DBL_MIN)) break;  // radii decay doubly exponentially
        const double a = std::pow(static_cast<double>(k), -2.5);
        f.shells.push_back({a, -1.0, inner, outer});
        inf.amplitude.push_back(a);
        inf.growth.push_back(lambda);
        inf.r_inner.push_back(inner);
        inf.r_outer.push_back(outer);
        inf.achieved_n = k;
        outer = inner / 8.0;
    }
    if (info) *info = inf;
    return f;
}

double power_integral(double c, double e, double a, double b) {
    if (!(b > a)) return 0.0;
    if (e == -1.0) return c * std::log(b / a);
    // stable for extreme a,b: factor the dominant endpoint
    const double p = e + 1.0;
    if (std::abs(p * std::log(b / a)) < 1e-8) {
        // nearly log branch; expand to avoid cancellation
        const double L = std::log(b / a);
        return c * std::pow(a, p) * L * (1.0 + 0.5 * p * L);
    }
    return c / p * (std::pow(b, p) - std::pow(a, p));
}

double l2_norm_squared(const radial_profile& f) {
    double s = 0.0;
    for (const auto& sh : f.shells)
        s += omega(f.d) * power_integral(sh.coeff * sh.coeff, 2.0 * sh.exponent + f.d - 1,
                                         sh.r_in, sh.r_out);
    return s;
}

double l1_norm(const radial_profile& f) {
    double s = 0.0;
    for (const auto& sh : f.shells)
        s += omega(f.d) *
             power_integral(std::abs(sh.coeff), sh.exponent + f.d - 1, sh.r_in, sh.r_out);
    return s;
}

double linf_on_ball(const radial_profile& f, double center, double radius) {
    // sup of |f| over the radial band |t - center| <= radius
    const double lo = std::max(0.0, center - radius), hi = center + radius;
    double m = 0.0;
    for (const auto& sh : f.shells) {
        const double a = std::max(lo, sh.r_in), b = std::min(hi, sh.r_out);
        if (b < a) continue;
        const double t = sh.exponent < 0.0 ? a : b;  // monotone on the band
        if (t <= 0.0) return INFINITY;
        m = std::max(m, std::abs(sh.coeff) * std::pow(t, sh.exponent));
    }
    return m;
}

}  // namespace bjlab
