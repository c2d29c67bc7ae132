#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "bjlab/families.hpp"
#include "bjlab/tauwigner.hpp"

namespace bjlab {

struct tau_panel {
    double lo = 0.0;
    double hi = 0.5;
    int nodes = 16;
};

// layout of the tau integration; when `panels` is non-empty it must cover
// [delta, 1-delta] exactly and is used verbatim, otherwise panels are built
// from activity windows with log subdivision and edge grading
struct tau_quadrature_spec {
    double delta = 0.0;
    double grade_ratio = 0.5;  // kept for serialized form; edge grading is dyadic
    int nodes = 16;
    double log_factor = 2.4;   // panel growth across wide windows
    double edge_floor = 1e-6;  // innermost edge panel as a fraction of the window
    double tail_rel = 1e-8;    // envelope target for a skipped (0, eps) endpoint
    std::vector<tau_panel> panels;
};

struct bj_result {
    cplx value{0.0, 0.0};
    double tail_bound = 0.0;  // envelope bound on the mass outside the range
};

// raised when the requested full integral has an endpoint tail that no
// available envelope can certify as finite
struct endpoint_divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// integral of wtau_point over tau in (0,1); activity windows make annular
// inputs exact, otherwise the (tau(1-tau))^{-d/2} and local-sup envelopes
// bound the endpoint tail or the endpoint-divergence error is raised
bj_result bj_point(const radial_profile& f, const radial_profile& g, const phase_point& z,
                   const tau_quadrature_spec& spec = {}, const quad_options& opt = {});

// integral over [delta, 1-delta] only; always finite
bj_result bj_incomplete_point(const radial_profile& f, const radial_profile& g,
                              const phase_point& z, double delta,
                              const tau_quadrature_spec& spec = {},
                              const quad_options& opt = {});

// largest delta with (r1+r2) delta + rho <= r1, the truncation threshold
// protecting the ball of radius rho for an annulus supported on [r1, r2]
double annulus_truncation_delta(double r1, double r2, double rho);

// plain graded quadrature of an explicit integrand over [delta, 1-delta];
// the integrand must be bounded there
cplx bj_integrate(const std::function<cplx(double)>& w, double delta,
                  const tau_quadrature_spec& spec = {});

}  // namespace bjlab
