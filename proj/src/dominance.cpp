#include "bjlab/dominance.hpp"

#include <cmath>
#include <stdexcept>

#include "bjlab/bornjordan.hpp"
#include "bjlab/bounds.hpp"

namespace bjlab {

namespace {

phase_point axis_point(double absx, double absxi) {
    phase_point z;
    z.x[0] = absx;
    z.xi[0] = absxi;
    return z;
}

// Re W_tau f_R(x, xi) against the cosine-damped value at xi = 0
dominance_row cosine_trial(portable_rng& rng, int d) {
    dominance_row row;
    row.kind = "cosine";
    row.d = d;
    row.tau = rng.uniform(0.1, 0.9);
    row.absx = rng.uniform(0.0, 1.0);
    row.R = rng.uniform(2.0, 6.0);
    const double v = rng.uniform(0.1, 1.0);
    row.absxi = v / (4.0 * (row.R + row.absx));

    const radial_profile f = f_R_profile(d, row.R);
    const double at_zero = wtau_point(f, f, row.tau, axis_point(row.absx, 0.0)).value.real();
    row.numeric = wtau_point(f, f, row.tau, axis_point(row.absx, row.absxi)).value.real();
    row.bound = std::cos(4.0 * pi * (row.R + row.absx) * row.absxi) * at_zero;
    const double scale = std::max(std::abs(at_zero), 1e-12);
    row.margin = (row.numeric - row.bound) / scale;
    row.pass = row.margin >= -1e-6;
    return row;
}

// W_tau f_R(x, 0) against the logarithmic position floor
dominance_row position_trial(portable_rng& rng, int d) {
    dominance_row row;
    row.kind = "position";
    row.d = d;
    row.tau = rng.uniform(0.05, 0.5);
    row.absx = rng.uniform(0.0, 0.6);
    const double u = rng.uniform(1.5, 6.0);
    row.R = u * (1.0 + row.absx) / row.tau + row.absx;

    const bound_report lb = lb_wtau_x0(d, row.R, row.absx, row.tau);
    if (!lb.valid) throw std::logic_error("dominance: drew an invalid position tuple");
    const radial_profile f = f_R_profile(d, row.R);
    row.numeric = wtau_point(f, f, row.tau, axis_point(row.absx, 0.0)).value.real();
    row.bound = lb.value.value();
    row.margin = (row.numeric - row.bound) / std::max(row.bound, 1e-12);
    row.pass = row.margin >= -1e-9;
    return row;
}

// W_BJ f_R(x, xi) against the oscillation-damped window floor
dominance_row window_trial(portable_rng& rng, int d) {
    dominance_row row;
    row.kind = "window";
    row.d = d;
    row.absx = rng.uniform(0.0, 0.8);
    const double rmin = d == 2 ? 2.0 + 3.0 * row.absx : 4.0 + 5.0 * row.absx;
    row.R = rmin * rng.uniform(1.1, 2.2);
    const double w = rng.uniform(0.15, 0.9);
    row.absxi = w / (8.0 * (row.R + row.absx));

    const bound_report lb = lb_bj(d, row.R, row.absx, row.absxi);
    if (!lb.valid) throw std::logic_error("dominance: drew an invalid window tuple");
    const radial_profile f = f_R_profile(d, row.R);
    row.numeric = bj_point(f, f, axis_point(row.absx, row.absxi)).value.real();
    row.bound = lb.value.value();
    row.margin = (row.numeric - row.bound) / std::max(std::abs(row.bound), 1e-12);
    row.pass = row.margin >= -1e-9;
    return row;
}

}  // namespace

std::vector<dominance_row> dominance_trials(int per_lemma, std::uint64_t seed) {
    if (per_lemma < 1) throw std::invalid_argument("dominance: need at least one tuple per floor");
    portable_rng rng(seed);
    std::vector<dominance_row> rows;
    rows.reserve(static_cast<std::size_t>(per_lemma) * 3);
    for (int t = 0; t < per_lemma; ++t) {
        rows.push_back(cosine_trial(rng, 1 + t % 3));
        rows.push_back(position_trial(rng, 1 + t % 3));
        rows.push_back(window_trial(rng, 2 + t % 2));
    }
    return rows;
}

}  // namespace bjlab
