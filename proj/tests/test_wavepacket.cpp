#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "bjlab/bornjordan.hpp"
#include "bjlab/slices.hpp"
#include "bjlab/tauwigner.hpp"
#include "bjlab/wavepacket.hpp"
#include "doctest.h"

using namespace bjlab;

namespace {

phase_point atom(double a0, double w0, double a1 = 0.0, double w1 = 0.0) {
    phase_point z;
    z.x[0] = a0;
    z.x[1] = a1;
    z.xi[0] = w0;
    z.xi[1] = w1;
    return z;
}

// pi(z) phi in one dimension, evaluated directly
cplx atom_value_1d(const phase_point& z, double t) {
    const double g = std::pow(2.0, 0.25) * std::exp(-pi * (t - z.x[0]) * (t - z.x[0]));
    const double ph = 2.0 * pi * z.xi[0] * t;
    return {g * std::cos(ph), g * std::sin(ph)};
}

// trapezoid inner product <f, g> on [-L, L]; integrands decay like gaussians
// so the rule is spectrally accurate
cplx direct_overlap_1d(const phase_point& z1, const phase_point& z2, double L, int n) {
    const double h = 2.0 * L / n;
    cplx s{0.0, 0.0};
    for (int i = 0; i <= n; ++i) {
        const double t = -L + i * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        s += w * atom_value_1d(z1, t) * std::conj(atom_value_1d(z2, t));
    }
    return h * s;
}

}  // namespace

TEST_CASE("overlaps match direct integration") {
    const auto z1 = atom(0.3, -0.7);
    const auto z2 = atom(-0.5, 0.4);
    const cplx direct = direct_overlap_1d(z1, z2, 9.0, 6000);
    const cplx closed = gauss_overlap(1, z1, z2);
    CHECK(std::abs(closed - direct) < 1e-12);

    // unit diagonal and cauchy-schwarz
    CHECK(gauss_overlap(2, z1, z1) == cplx{1.0, 0.0});
    CHECK(std::abs(gauss_overlap(3, atom(1.0, 2.0), atom(-1.0, 0.5))) < 1.0);

    // separable across axes: a 2-d overlap is the product of its axis factors
    const auto p1 = atom(0.4, -0.2, -0.3, 0.8);
    const auto p2 = atom(-0.1, 0.5, 0.6, -0.4);
    const cplx ax0 = gauss_overlap(1, atom(p1.x[0], p1.xi[0]), atom(p2.x[0], p2.xi[0]));
    const cplx ax1 = gauss_overlap(1, atom(p1.x[1], p1.xi[1]), atom(p2.x[1], p2.xi[1]));
    CHECK(std::abs(gauss_overlap(2, p1, p2) - ax0 * ax1) < 1e-15);

    CHECK_THROWS(gauss_overlap(0, z1, z2));
}

TEST_CASE("closed form matches the sampled transform engine") {
    const auto z1 = atom(0.4, 0.2);
    const auto z2 = atom(-0.3, 0.6);
    const auto fs = sample_signal(1, -8.0, 8.0, 2048,
                                  [&](const vec3& p) { return atom_value_1d(z1, p[0]); });
    const auto gs = sample_signal(1, -8.0, 8.0, 2048,
                                  [&](const vec3& p) { return atom_value_1d(z2, p[0]); });
    for (double tau : {0.25, 0.5, 0.8})
        for (const auto& z : {atom(0.0, 0.0), atom(0.2, -0.3), atom(1.0, 0.5)}) {
            const cplx closed = wtau_gauss(1, tau, z1, z2, z);
            const cplx engine = wtau_point(fs, gs, tau, z).value;
            CAPTURE(tau);
            CHECK(std::abs(closed - engine) < 1e-4);
        }
}

TEST_CASE("phase space pairings reproduce overlap products") {
    // sum_z W_tau(f1,g1) conj(W_tau(f2,g2)) h^2 = <f1,f2> conj(<g1,g2>)
    const auto f1 = atom(0.5, -0.3);
    const auto g1 = atom(-0.2, 0.1);
    const auto f2 = atom(-0.4, 0.6);
    const auto g2 = atom(0.3, 0.2);
    for (double tau : {0.35, 0.5}) {
        const int n = 140;
        const double L = 5.0, h = 2.0 * L / n;
        cplx lhs{0.0, 0.0};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto z = atom(-L + (i + 0.5) * h, -L + (j + 0.5) * h);
                lhs += wtau_gauss(1, tau, f1, g1, z) * std::conj(wtau_gauss(1, tau, f2, g2, z));
            }
        lhs *= h * h;
        const cplx rhs = gauss_overlap(1, f1, f2) * std::conj(gauss_overlap(1, g1, g2));
        CAPTURE(tau);
        CHECK(std::abs(lhs - rhs) < 1e-6);
    }
}

TEST_CASE("tau averaged gaussian center values") {
    // integral of 2^{d/2} (tau^2 + tau'^2)^{-d/2} over (0,1)
    const phase_point o;
    CHECK(bj_gauss(1, o, o, o).real() ==
          doctest::Approx(2.0 * std::asinh(1.0)).epsilon(1e-10));
    CHECK(bj_gauss(2, o, o, o).real() == doctest::Approx(pi).epsilon(1e-10));
    CHECK(bj_gauss(3, o, o, o).real() ==
          doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(std::abs(bj_gauss(2, o, o, o).imag()) < 1e-14);

    // the magnitude is maximal at the atom center
    portable_rng rng(11ull);
    for (int t = 0; t < 20; ++t) {
        const auto z = atom(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        CHECK(std::abs(bj_gauss(2, o, o, z)) <= pi * (1.0 + 1e-12));
    }
}

TEST_CASE("pair transforms are covariant and hermitian") {
    const auto z0 = atom(0.7, -0.4, -0.2, 0.3);
    const auto z = atom(0.3, 0.2, 0.5, -0.1);
    phase_point shifted;
    for (int i = 0; i < 2; ++i) {
        shifted.x[i] = z.x[i] - z0.x[i];
        shifted.xi[i] = z.xi[i] - z0.xi[i];
    }
    CHECK(std::abs(bj_gauss(2, z0, z0, z) - bj_gauss(2, phase_point{}, phase_point{}, shifted)) <
          1e-12);

    const auto a1 = atom(0.5, 0.3);
    const auto a2 = atom(-0.4, -0.6);
    const auto w = atom(0.2, 0.1);
    CHECK(std::abs(bj_gauss(1, a1, a2, w) - std::conj(bj_gauss(1, a2, a1, w))) < 1e-13);

    // independent tau panelization through the generic integrator
    const cplx via_generic = bj_integrate(
        [&](double t) { return wtau_gauss(1, t, a1, a2, w); }, 0.0, {});
    CHECK(std::abs(bj_gauss(1, a1, a2, w) - via_generic) < 1e-9);
}

TEST_CASE("dictionary norms match direct synthesis") {
    gauss_dictionary dict;
    dict.d = 1;
    dict.centers = {atom(0.0, 0.0), atom(0.8, -0.5), atom(-0.6, 0.9)};
    const std::vector<cplx> c = {{0.6, -0.2}, {-0.3, 0.4}, {0.2, 0.7}};

    const double h = 18.0 / 9000;
    double direct = 0.0;
    for (int i = 0; i <= 9000; ++i) {
        const double t = -9.0 + i * h;
        cplx v{0.0, 0.0};
        for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * atom_value_1d(dict.centers[k], t);
        direct += ((i == 0 || i == 9000) ? 0.5 : 1.0) * std::norm(v);
    }
    direct *= h;
    CHECK(dictionary_norm_squared(dict, c) == doctest::Approx(direct).epsilon(1e-10));

    const auto G = gram_matrix(dict);
    for (int j = 0; j < 3; ++j) {
        CHECK(G[j * 3 + j] == cplx{1.0, 0.0});
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(G[j * 3 + k] - std::conj(G[k * 3 + j])) == 0.0);
    }

    // positive semidefinite in practice: random coefficient draws
    portable_rng rng(5ull);
    for (int t = 0; t < 20; ++t) {
        std::vector<cplx> r(3);
        for (auto& v : r) v = {rng.gauss(), rng.gauss()};
        CHECK(dictionary_norm_squared(dict, r) >= -1e-12);
    }

    CHECK_THROWS(dictionary_norm_squared(dict, {c[0], c[1]}));
    CHECK_THROWS(gram_matrix(gauss_dictionary{2, {}}));
}

TEST_CASE("pair field cache equals direct evaluation") {
    gauss_dictionary dict;
    dict.d = 2;
    dict.centers = {atom(0.0, 0.0, 0.0, 0.0), atom(0.7, -0.3, 0.2, 0.5),
                    atom(-0.5, 0.4, -0.6, -0.2)};
    const std::vector<cplx> c = {{0.5, 0.1}, {-0.2, 0.6}, {0.3, -0.4}};

    portable_rng rng(99ull);
    std::vector<phase_point> pts;
    for (int i = 0; i < 12; ++i)
        pts.push_back(atom(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                           rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)));

    const auto cache = build_pair_field_cache(dict, pts);
    REQUIRE(cache.K == 3);
    REQUIRE(cache.npoints == pts.size());

    const auto field = cache.self_field(c);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(field[i] == doctest::Approx(bj_dictionary_point(dict, c, pts[i])).epsilon(1e-11));

    // the cross field with equal arguments is the (real) self field
    const auto cross = cache.cross_field(c, c);
    std::vector<cplx> c2 = {{0.1, -0.7}, {0.4, 0.2}, {-0.6, 0.3}};
    const auto ab = cache.cross_field(c, c2);
    const auto ba = cache.cross_field(c2, c);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(std::abs(cross[i].imag()) < 1e-12);
        CHECK(cross[i].real() == doctest::Approx(field[i]).epsilon(1e-12));
        CHECK(std::abs(ab[i] - std::conj(ba[i])) < 1e-12);
    }

    CHECK_THROWS(cache.pair(2, 1));
}
