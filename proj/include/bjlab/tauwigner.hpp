#pragma once
#include <vector>

#include "bjlab/common.hpp"
#include "bjlab/families.hpp"

namespace bjlab {

struct quad_options {
    int nodes = 12;            // GL order per panel
    double log_factor = 2.0;   // log-subdivision ratio for wide spans
    int edge_levels = 7;       // dyadic refinement depth toward span edges
    double osc_frac = 0.75;    // max panel length in oscillation wavelengths
    int jump_depth = 9;        // cartesian: split depth at discontinuity spheres
    double grade_ratio = 0.5;  // geometric grading toward singular points
    double grade_floor = 1e-12;
    bool cartesian = false;    // force the d-dim tensor-panel path
    bool error_estimate = false;
};

struct wtau_result {
    cplx value{0.0, 0.0};
    double abs_error = 0.0;
};

// pointwise tau-Wigner transform of two radial profiles at z = (x, xi).
// dispatches: exact radial integral at x=xi=0, 1-d kernel reduction at x=0,
// reduced polar/axial quadrature otherwise; cartesian tensor panels on demand
wtau_result wtau_point(const radial_profile& f, const radial_profile& g, double tau,
                       const phase_point& z, const quad_options& opt = {});

// closed form at the origin for f_R; zero branch for min(tau,1-tau) <= 1/(R+1)
double wtau_fR_origin(int d, double R, double tau);

// ball radius outside which the integrand in y vanishes
double truncation_radius(const radial_profile& f, const radial_profile& g, double tau,
                         double absx);

// uniformly sampled complex signal on a cube, node j at lo + j*h per axis
struct sampled_signal {
    int d = 1;
    vec3 lo;
    double h = 1.0;
    int n = 0;  // points per axis
    std::vector<cplx> values;

    cplx interp(const vec3& p) const;  // multilinear, zero outside the cube
    double l2_norm_squared() const;
};

wtau_result wtau_point(const sampled_signal& f, const sampled_signal& g, double tau,
                       const phase_point& z, const quad_options& opt = {});

namespace detail {

// activity window(s) in tau within (0, 1/2] for one ordered shell pair
struct tau_interval {
    double lo = 0.0, hi = 0.0;
};
std::vector<tau_interval> pair_tau_windows(const radial_shell& a, const radial_shell& b,
                                           int d, double absx);

bool pair_active(const radial_shell& a, const radial_shell& b, int d, double absx,
                 double tau);

// single ordered shell pair at tau <= 1/2; xi split into components along and
// orthogonal to x
cplx wtau_pair(const radial_shell& a, const radial_shell& b, int d, double tau,
               double absx, double xi_par, double xi_perp, const quad_options& opt);

}  // namespace detail

}  // namespace bjlab
