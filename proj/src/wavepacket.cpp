#include "bjlab/wavepacket.hpp"

#include <cmath>
#include <stdexcept>

#include "bjlab/quadrature.hpp"

namespace bjlab {

namespace {

void check_dim(int d, const char* who) {
    if (d < 1 || d > 3) throw std::invalid_argument(std::string(who) + ": dimension must be 1..3");
}

}  // namespace

cplx gauss_overlap(int d, const phase_point& z1, const phase_point& z2) {
    check_dim(d, "gauss_overlap");
    double da2 = 0.0, dw2 = 0.0, ph = 0.0;
    for (int i = 0; i < d; ++i) {
        const double da = z1.x[i] - z2.x[i];
        const double dw = z1.xi[i] - z2.xi[i];
        da2 += da * da;
        dw2 += dw * dw;
        ph += dw * 0.5 * (z1.x[i] + z2.x[i]);
    }
    const double amp = std::exp(-0.5 * pi * (da2 + dw2));
    const double a = 2.0 * pi * ph;
    return {amp * std::cos(a), amp * std::sin(a)};
}

// gaussian integrals close: with u0 = x - a1, v0 = x - a2, c = tau^2 + tau'^2,
// m = tau u0 - tau' v0, b = tau w1 + tau' w2 - xi, s = tau' u0 + tau v0,
// W_tau = 2^{d/2} c^{-d/2} exp(-pi (|s|^2 + |b|^2)/c)
//         exp(2 pi i ((w1 - w2).x - b.m/c))
cplx wtau_gauss(int d, double tau, const phase_point& z1, const phase_point& z2,
                const phase_point& z) {
    check_dim(d, "wtau_gauss");
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::invalid_argument("wtau_gauss: tau must lie in [0, 1]");
    const double tp = 1.0 - tau;
    const double c = tau * tau + tp * tp;
    double s2 = 0.0, b2 = 0.0, bm = 0.0, wx = 0.0;
    for (int i = 0; i < d; ++i) {
        const double u0 = z.x[i] - z1.x[i];
        const double v0 = z.x[i] - z2.x[i];
        const double m = tau * u0 - tp * v0;
        const double b = tau * z1.xi[i] + tp * z2.xi[i] - z.xi[i];
        const double s = tp * u0 + tau * v0;
        s2 += s * s;
        b2 += b * b;
        bm += b * m;
        wx += (z1.xi[i] - z2.xi[i]) * z.x[i];
    }
    const double amp =
        std::pow(2.0, 0.5 * d) * std::pow(c, -0.5 * d) * std::exp(-pi * (s2 + b2) / c);
    const double ph = 2.0 * pi * (wx - bm / c);
    return {amp * std::cos(ph), amp * std::sin(ph)};
}

cplx bj_gauss(int d, const phase_point& z1, const phase_point& z2, const phase_point& z,
              double rel_tol) {
    check_dim(d, "bj_gauss");
    // uniform envelope: (s, b) is affine in tau, |s|^2 + |b|^2 = |P + tau Q|^2,
    // and c >= 1/2, so |W_tau| <= 2^d exp(-pi min_tau |P + tau Q|^2); skip the
    // quadrature when the whole integrand is beneath notice
    {
        double pp = 0.0, pq = 0.0, qq = 0.0;
        for (int i = 0; i < d; ++i) {
            const double u0 = z.x[i] - z1.x[i];
            const double v0 = z.x[i] - z2.x[i];
            const double ps = u0, qs = v0 - u0;
            const double pb = z2.xi[i] - z.xi[i], qb = z1.xi[i] - z2.xi[i];
            pp += ps * ps + pb * pb;
            pq += ps * qs + pb * qb;
            qq += qs * qs + qb * qb;
        }
        double t = qq > 0.0 ? -pq / qq : 0.0;
        t = std::min(1.0, std::max(0.0, t));
        const double m2 = pp + t * (2.0 * pq + t * qq);
        if (std::pow(2.0, d) * std::exp(-pi * m2) < 1e-60) return {0.0, 0.0};
    }
    // panel count seeded by the shift scales: both the phase twist and the
    // width of the gaussian ridge in tau grow with them
    double scale = 0.0;
    for (int i = 0; i < d; ++i)
        scale = std::max({scale, std::abs(z.x[i] - z1.x[i]), std::abs(z.x[i] - z2.x[i]),
                          std::abs(z1.xi[i] - z.xi[i]), std::abs(z2.xi[i] - z.xi[i])});
    int n = 6 + static_cast<int>(2.0 * scale * scale);
    const gl_rule& rule = gauss_legendre(12);
    std::vector<double> nodes, weights;
    auto sweep = [&](int panels) {
        nodes.clear();
        weights.clear();
        for (int k = 0; k < panels; ++k)
            map_rule(rule, double(k) / panels, double(k + 1) / panels, nodes, weights);
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc += weights[i] * wtau_gauss(d, nodes[i], z1, z2, z);
        return acc;
    };
    cplx prev = sweep(n);
    for (int iter = 0; iter < 8; ++iter) {
        n *= 2;
        const cplx cur = sweep(n);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + 1e-16) return cur;
        prev = cur;
    }
    throw std::runtime_error("bj_gauss: tau quadrature did not converge");
}

std::vector<cplx> gram_matrix(const gauss_dictionary& dict) {
    check_dim(dict.d, "gram_matrix");
    const int K = static_cast<int>(dict.centers.size());
    if (K == 0) throw std::invalid_argument("gram_matrix: empty dictionary");
    std::vector<cplx> G(static_cast<std::size_t>(K) * K);
    for (int j = 0; j < K; ++j) {
        G[j * K + j] = {1.0, 0.0};
        for (int k = j + 1; k < K; ++k) {
            const cplx v = gauss_overlap(dict.d, dict.centers[j], dict.centers[k]);
            G[j * K + k] = v;
            G[k * K + j] = std::conj(v);
        }
    }
    return G;
}

double dictionary_norm_squared(const gauss_dictionary& dict, const std::vector<cplx>& c) {
    const int K = static_cast<int>(dict.centers.size());
    if (static_cast<int>(c.size()) != K)
        throw std::invalid_argument("dictionary_norm_squared: coefficient count mismatch");
    double s = 0.0;
    for (int j = 0; j < K; ++j) s += std::norm(c[j]);
    for (int j = 0; j < K; ++j)
        for (int k = j + 1; k < K; ++k) {
            const cplx v = gauss_overlap(dict.d, dict.centers[j], dict.centers[k]);
            s += 2.0 * (c[j] * std::conj(c[k]) * v).real();
        }
    return s;
}

double bj_dictionary_point(const gauss_dictionary& dict, const std::vector<cplx>& c,
                           const phase_point& z, double rel_tol) {
    const int K = static_cast<int>(dict.centers.size());
    if (static_cast<int>(c.size()) != K)
        throw std::invalid_argument("bj_dictionary_point: coefficient count mismatch");
    double s = 0.0;
    for (int j = 0; j < K; ++j) {
        s += std::norm(c[j]) * bj_gauss(dict.d, dict.centers[j], dict.centers[j], z, rel_tol).real();
        for (int k = j + 1; k < K; ++k) {
            const cplx v = bj_gauss(dict.d, dict.centers[j], dict.centers[k], z, rel_tol);
            s += 2.0 * (c[j] * std::conj(c[k]) * v).real();
        }
    }
    return s;
}

const cplx* pair_field_cache::pair(int j, int k) const {
    if (j > k || k >= K) throw std::invalid_argument("pair_field_cache: bad pair index");
    const std::size_t p = static_cast<std::size_t>(j) * K - static_cast<std::size_t>(j) * (j - 1) / 2 +
                          static_cast<std::size_t>(k - j);
    return data.data() + p * npoints;
}

std::vector<double> pair_field_cache::self_field(const std::vector<cplx>& c) const {
    if (static_cast<int>(c.size()) != K)
        throw std::invalid_argument("self_field: coefficient count mismatch");
    std::vector<double> out(npoints, 0.0);
    for (int j = 0; j < K; ++j) {
        const cplx* diag = pair(j, j);
        const double w = std::norm(c[j]);
        for (std::size_t i = 0; i < npoints; ++i) out[i] += w * diag[i].real();
        for (int k = j + 1; k < K; ++k) {
            const cplx w2 = 2.0 * c[j] * std::conj(c[k]);
            const cplx* pf = pair(j, k);
            for (std::size_t i = 0; i < npoints; ++i) out[i] += (w2 * pf[i]).real();
        }
    }
    return out;
}

std::vector<cplx> pair_field_cache::cross_field(const std::vector<cplx>& cb,
                                                const std::vector<cplx>& ca) const {
    if (static_cast<int>(cb.size()) != K || static_cast<int>(ca.size()) != K)
        throw std::invalid_argument("cross_field: coefficient count mismatch");
    std::vector<cplx> out(npoints, cplx{0.0, 0.0});
    for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k) {
            const cplx w = cb[j] * std::conj(ca[k]);
            if (j <= k) {
                const cplx* pf = pair(j, k);
                for (std::size_t i = 0; i < npoints; ++i) out[i] += w * pf[i];
            } else {
                const cplx* pf = pair(k, j);
                for (std::size_t i = 0; i < npoints; ++i) out[i] += w * std::conj(pf[i]);
            }
        }
    return out;
}

pair_field_cache build_pair_field_cache(const gauss_dictionary& dict,
                                        const std::vector<phase_point>& points,
                                        double rel_tol) {
    check_dim(dict.d, "build_pair_field_cache");
    pair_field_cache cache;
    cache.K = static_cast<int>(dict.centers.size());
    cache.npoints = points.size();
    if (cache.K == 0) throw std::invalid_argument("build_pair_field_cache: empty dictionary");
    const std::size_t pairs = static_cast<std::size_t>(cache.K) * (cache.K + 1) / 2;
    cache.data.resize(pairs * cache.npoints);
    std::size_t p = 0;
    for (int j = 0; j < cache.K; ++j)
        for (int k = j; k < cache.K; ++k, ++p)
            for (std::size_t i = 0; i < cache.npoints; ++i)
                cache.data[p * cache.npoints + i] =
                    bj_gauss(dict.d, dict.centers[j], dict.centers[k], points[i], rel_tol);
    return cache;
}

}  // namespace bjlab
