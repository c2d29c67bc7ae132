#pragma once
#include <vector>

#include "bjlab/common.hpp"

namespace bjlab {

// gaussian wavepacket atoms built from phi(t) = 2^{d/4} exp(-pi |t|^2)
// (unit L2 norm), shifted in phase space by z0 = (a, w) as
// (pi(z0) phi)(t) = exp(2 pi i w.t) phi(t - a)

// <pi(z1) phi, pi(z2) phi>, exact
cplx gauss_overlap(int d, const phase_point& z1, const phase_point& z2);

// W_tau(pi(z1) phi, pi(z2) phi)(z), exact; tau in [0, 1]
cplx wtau_gauss(int d, double tau, const phase_point& z1, const phase_point& z2,
                const phase_point& z);

// tau average of wtau_gauss over (0, 1); equal-width composite quadrature
// with panel doubling until two refinement levels agree
cplx bj_gauss(int d, const phase_point& z1, const phase_point& z2, const phase_point& z,
              double rel_tol = 1e-10);

// finite atom list; coefficients c represent f = sum_k c_k pi(z_k) phi
struct gauss_dictionary {
    int d = 2;
    std::vector<phase_point> centers;
};

// K x K hermitian gram matrix, row-major: G[j*K + k] = <pi(z_j)phi, pi(z_k)phi>
std::vector<cplx> gram_matrix(const gauss_dictionary& dict);

// squared L2 norm of the represented function, c* G c
double dictionary_norm_squared(const gauss_dictionary& dict, const std::vector<cplx>& c);

// W_BJ(f, f)(z) for the represented function; real-valued
double bj_dictionary_point(const gauss_dictionary& dict, const std::vector<cplx>& c,
                           const phase_point& z, double rel_tol = 1e-10);

// atom-pair transforms cached over a fixed evaluation point list, so that
// repeated coefficient sweeps cost a quadratic form instead of quadratures
struct pair_field_cache {
    int K = 0;
    std::size_t npoints = 0;
    std::vector<cplx> data;  // pairs j <= k, pair-major, npoints values each

    const cplx* pair(int j, int k) const;  // requires j <= k
    // real field of W_BJ(f_c, f_c) at every cached point
    std::vector<double> self_field(const std::vector<cplx>& c) const;
    // complex field of W_BJ(f_b, f_a) at every cached point
    std::vector<cplx> cross_field(const std::vector<cplx>& cb,
                                  const std::vector<cplx>& ca) const;
};

pair_field_cache build_pair_field_cache(const gauss_dictionary& dict,
                                        const std::vector<phase_point>& points,
                                        double rel_tol = 1e-10);

}  // namespace bjlab
