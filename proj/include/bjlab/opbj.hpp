#pragma once
#include <functional>
#include <string>
#include <vector>

#include "bjlab/concentration.hpp"
#include "bjlab/optimizer.hpp"

namespace bjlab {

// symbol a in L^q sampled at the cell centers of a grid that covers its
// support; values vanish off the support so Riemann sums never see the
// complement
struct symbol_field {
    omega_set support;
    phase_grid grid;
    std::vector<cplx> values;
    double q = 2.0;  // declared integrability exponent
};

// sample an explicit symbol over the member cells, zero elsewhere
symbol_field make_symbol(const omega_set& support, const phase_grid& grid,
                         const std::function<cplx(const phase_point&)>& a, double q);

void validate_symbol(const symbol_field& a);

// Riemann L^q norm over the support cells (max when q is infinite)
double symbol_lq_norm(const symbol_field& a);

// weak pairing <Op(a) f, g> = h^{2d} sum a(z) conj(W_BJ(g, f)(z)); the symbol
// only ever acts through the cross transform, no kernel is materialized
cplx opbj_pairing(const symbol_field& a, const radial_profile& f, const radial_profile& g,
                  const tau_quadrature_spec& spec = {}, const quad_options& opt = {});
cplx opbj_pairing(const symbol_field& a, const dictionary_coefficients& f,
                  const dictionary_coefficients& g, double rel_tol = 1e-10);

// boundedness threshold for the symbol exponent, 2d/(d+2)
double opbj_q_threshold(int d);

// "bounded" above the threshold, "unbounded" below it and at the planar
// endpoint, "open" exactly at the endpoint in higher dimensions
std::string opbj_regime(int d, double q);

struct norm_probe_result {
    double q = 0.0;
    double threshold = 0.0;
    std::string regime;
    double max_ratio = 0.0;      // largest |pairing| / (|f| |g|) seen
    std::vector<double> ratios;  // one entry per trial, seed-deterministic
};

// empirical lower estimate of the bilinear form norm: a seeded atom cloud is
// scattered one unit beyond the support hull and trials draw random
// coefficient pairs over it, so the atom-pair transforms are cached once and
// a longer run reproduces the ratios of a shorter run with the same seed
norm_probe_result opbj_norm_probe(const symbol_field& a, int trials, unsigned long long seed,
                                  int atoms = 4, double rel_tol = 1e-8);

}  // namespace bjlab
