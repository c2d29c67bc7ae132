#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cfloat>
#include <cmath>

#include "bjlab/families.hpp"
#include "doctest.h"

using namespace bjlab;

TEST_CASE("sphere area and critical exponent formulas") {
    CHECK(omega(1) == 2.0);
    CHECK(omega(2) == doctest::Approx(2.0 * pi).epsilon(1e-15));
    CHECK(omega(3) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(omega(4) == doctest::Approx(2.0 * pi * pi).epsilon(1e-14));
    CHECK(omega(6) == doctest::Approx(pi * pi * pi).epsilon(1e-14));
    CHECK_THROWS(omega(0));

    CHECK(std::isinf(critical_exponent(1)));
    CHECK(std::isinf(critical_exponent(2)));
    CHECK(critical_exponent(3) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(critical_exponent(6) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS(critical_exponent(0));
}

TEST_CASE("annulus norm identity across random draws") {
    portable_rng rng(20240901ULL);
    for (int d = 2; d <= 3; ++d)
        for (int trial = 0; trial < 50; ++trial) {
            const double r1 = std::exp(rng.uniform(-4.0, 1.0));
            const double r2 = r1 * std::exp(rng.uniform(0.1, 4.0));
            auto f = annulus_profile(d, r1, r2);
            const double expect = omega(d) * std::log(r2 / r1);
            CHECK(l2_norm_squared(f) == doctest::Approx(expect).epsilon(1e-14));
        }
}

TEST_CASE("power profile norm identity") {
    portable_rng rng(77ULL);
    for (int d = 2; d <= 3; ++d)
        for (int trial = 0; trial < 50; ++trial) {
            const double alpha = rng.uniform(0.05, 0.5 * d - 0.05);
            auto f = falpha_profile(d, alpha);
            const double expect = omega(d) / (d - 2.0 * alpha);
            CHECK(l2_norm_squared(f) == doctest::Approx(expect).epsilon(1e-14));
        }
}

TEST_CASE("profile constructors reject bad parameters") {
    CHECK_THROWS(annulus_profile(2, 0.0, 1.0));
    CHECK_THROWS(annulus_profile(2, 2.0, 1.0));
    CHECK_THROWS(f_R_profile(2, 1.0));
    CHECK_THROWS(falpha_profile(2, 0.0));
    CHECK_THROWS(falpha_profile(2, 1.0));  // needs alpha < d/2
    CHECK_THROWS(falpha_profile(3, 1.5));
}

TEST_CASE("power integral branches agree at the log crossover") {
    const double a = 0.3, b = 2.7;
    CHECK(power_integral(2.0, -1.0, a, b) ==
          doctest::Approx(2.0 * std::log(b / a)).epsilon(1e-15));
    // tiny exponent perturbations must bracket the log value smoothly
    const double up = power_integral(1.0, -1.0 + 1e-9, a, b);
    const double dn = power_integral(1.0, -1.0 - 1e-9, a, b);
    const double mid = std::log(b / a);
    CHECK(std::abs(up - mid) < 1e-8);
    CHECK(std::abs(dn - mid) < 1e-8);
    CHECK(((up - mid) * (dn - mid)) < 0.0);
    CHECK(power_integral(3.0, 2.0, 0.0, 2.0) == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("profile l1 norm and local sup") {
    auto f = f_R_profile(2, std::exp(1.0));
    CHECK(l1_norm(f) == doctest::Approx(2.0 * pi * (std::exp(1.0) - 1.0)).epsilon(1e-14));
    CHECK(linf_on_ball(f, 1.2, 0.1) == doctest::Approx(1.0 / 1.1).epsilon(1e-14));
    CHECK(linf_on_ball(f, 0.3, 0.2) == 0.0);  // ball misses the support
    auto g = falpha_profile(2, 0.7);
    CHECK(std::isinf(linf_on_ball(g, 0.0, 0.5)));  // unbounded at the origin
    CHECK(linf_on_ball(g, 0.5, 0.1) == doctest::Approx(std::pow(0.4, -0.7)).epsilon(1e-14));
}

TEST_CASE("annular superposition scales") {
    superposition_info info;
    auto f = make_annular_superposition(6, &info);
    CHECK(info.requested_n == 6);
    CHECK(info.achieved_n == 6);
    REQUIRE(info.amplitude.size() == 6);
    for (int k = 1; k <= 6; ++k) {
        CHECK(info.growth[k - 1] == doctest::Approx(k * k * k + 2.0));
        CHECK(info.amplitude[k - 1] == doctest::Approx(std::pow(k, -2.5)));
        CHECK(info.r_inner[k - 1] ==
              doctest::Approx(info.r_outer[k - 1] * std::exp(-info.growth[k - 1])));
        if (k < 6)
            CHECK(info.r_outer[k] == doctest::Approx(info.r_inner[k - 1] / 8.0));
    }
    CHECK(info.r_outer[0] == doctest::Approx(0.1));
    REQUIRE(f.shells.size() == 6);
    // shells are disjoint and ordered outer to inner
    for (size_t i = 0; i + 1 < f.shells.size(); ++i)
        CHECK(f.shells[i + 1].r_out < f.shells[i].r_in);
    // inside shell k the profile is a_k / t
    const double t = 0.5 * (info.r_inner[2] + info.r_outer[2]);
    CHECK(f.eval(t) == doctest::Approx(info.amplitude[2] / t));

    // deep radii underflow doubles; depth is capped rather than producing zeros
    superposition_info deep;
    make_annular_superposition(12, &deep);
    CHECK(deep.achieved_n < 12);
    CHECK(deep.achieved_n >= 6);
    for (int k = 0; k < deep.achieved_n; ++k) CHECK(deep.r_inner[k] >= DBL_MIN);
}
