#pragma once
#include <vector>

#include "bjlab/concentration.hpp"
#include "bjlab/wavepacket.hpp"

namespace bjlab {

// coefficients over a fixed gaussian wavepacket dictionary; after projection
// the represented function has unit norm under the analytic gram matrix
struct dictionary_coefficients {
    gauss_dictionary dict;
    std::vector<cplx> c;
};

struct ascent_options {
    int max_iters = 200;
    double init_step = 0.1;
    double backtrack = 0.5;  // line search shrink factor
    double armijo = 1e-4;    // sufficient-increase fraction
    double rel_improve_tol = 1e-6;
    double fd_step = 1e-4;  // central-difference probe step
    int grid_n = 11;        // cells per phase-space axis over the omega hull
    unsigned long long seed = 1;
    double bj_rel_tol = 1e-8;  // pair field quadrature tolerance
};

struct ascent_result {
    dictionary_coefficients best;
    concentration_report report;
    std::vector<double> trace;    // objective at the accepted iterates
    double max_norm_drift = 0.0;  // worst |gram norm - 1| along the run
    int iterations = 0;
};

// projected finite-difference ascent of the windowed p-norm of the transform
// over unit-norm dictionary coefficients; p must stay below the critical
// exponent, the objective is unbounded otherwise
ascent_result maximize_concentration(const omega_set& omega, double p,
                                     const gauss_dictionary& dict,
                                     const ascent_options& opt = {});

struct slope_pair {
    double coarse = 0.0;
    double fine = 0.0;
};

// directional derivatives of the normalized objective by central differences
// at two steps; a sound gradient makes them agree to first order
slope_pair objective_gradient_check(const omega_set& omega, double p,
                                    const gauss_dictionary& dict, const std::vector<cplx>& c,
                                    const std::vector<cplx>& dir, double step_coarse = 1e-3,
                                    double step_fine = 1e-4, const ascent_options& opt = {});

}  // namespace bjlab
