#pragma once
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bjlab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// surface measure of the unit sphere S^{d-1}, 2 pi^{d/2} / Gamma(d/2)
inline double omega(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * pi;
        case 3: return 4.0 * pi;
        default:
            if (d < 1) throw std::invalid_argument("omega: dimension must be positive");
            return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
    }
}

// largest p for which the tau-integrated L^p envelope stays finite;
// infinite through dimension two, 2d/(d-2) above
inline double critical_exponent(int d) {
    if (d < 1) throw std::invalid_argument("critical_exponent: dimension must be positive");
    if (d <= 2) return std::numeric_limits<double>::infinity();
    return 2.0 * d / (d - 2.0);
}

struct vec3 {
    double c[3] = {0.0, 0.0, 0.0};
    double& operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }
};

inline double norm(const vec3& v, int d) {
    if (d == 1) return std::abs(v[0]);
    if (d == 2) return std::hypot(v[0], v[1]);
    return std::hypot(v[0], v[1], v[2]);
}

inline double dot(const vec3& a, const vec3& b, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

struct phase_point {
    vec3 x;
    vec3 xi;
};

// deterministic rng: fixed algorithm and fixed mapping to doubles so that
// sequences are identical across platforms and standard library versions
class portable_rng {
  public:
    explicit portable_rng(std::uint64_t seed) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        // splitmix64 state expansion feeding xoshiro256++
        std::uint64_t x = seed;
        for (auto& si : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            si = z ^ (z >> 31);
        }
        have_gauss_ = false;
    }

    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double gauss() {
        if (have_gauss_) {
            have_gauss_ = false;
            return cached_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2.0 * pi * u2);
        have_gauss_ = true;
        return r * std::cos(2.0 * pi * u2);
    }

  private:
    std::uint64_t s_[4] = {};
    bool have_gauss_ = false;
    double cached_ = 0.0;
};

// %.17g round-trips doubles exactly; used for all file output
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace bjlab
