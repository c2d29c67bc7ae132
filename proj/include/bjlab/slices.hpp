#pragma once

#include <functional>
#include <vector>

#include "bjlab/common.hpp"
#include "bjlab/tauwigner.hpp"

namespace bjlab {

/// uniform symmetric y-grid feeding the transform; the xi grid is its dual
struct slice_grid {
    int d = 1;
    int n = 128;           // samples per axis, also the transform size
    double y_half = 10.0;  // grid covers [-y_half, y_half] per axis

    double step() const { return 2.0 * y_half / n; }
    double xi(int k) const { return (k - n / 2) / (n * step()); }
    long size() const {
        long s = 1;
        for (int i = 0; i < d; ++i) s *= n;
        return s;
    }
};

struct wigner_slice {
    double tau = 0.5;
    vec3 x{};
    slice_grid grid;
    std::vector<cplx> values;  // row-major, first axis slowest

    const cplx& at(int k0, int k1 = 0, int k2 = 0) const;
};

/// transform slice: samples y -> f(x+tau y) conj(g(x-(1-tau)y)) on the grid
/// and applies a DFT with the continuous normalization step^d
wigner_slice wtau_slice(const sampled_signal& f, const sampled_signal& g, double tau,
                        const vec3& x, const slice_grid& grid);

/// y-extent on which both interpolants can be nonzero, symmetrized
double slice_y_half(const sampled_signal& f, const sampled_signal& g, double tau,
                    const vec3& x);

/// tabulate a function on the cell-centered grid [lo,hi]^d with n points per axis
sampled_signal sample_signal(int d, double lo, double hi, int n,
                             const std::function<cplx(const vec3&)>& fn);

}  // namespace bjlab
