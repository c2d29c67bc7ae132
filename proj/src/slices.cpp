#include "bjlab/slices.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace bjlab {

namespace {
// fftw planning is not thread-safe; execution is
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

const cplx& wigner_slice::at(int k0, int k1, int k2) const {
    long idx = k0;
    if (grid.d > 1) idx = idx * grid.n + k1;
    if (grid.d > 2) idx = idx * grid.n + k2;
    return values[idx];
}

double slice_y_half(const sampled_signal& f, const sampled_signal& g, double tau,
                    const vec3& x) {
    const double tp = 1.0 - tau;
    double half = 0.0;
    for (int ax = 0; ax < f.d; ++ax) {
        const double fa0 = (f.lo[ax] - x[ax]) / tau;
        const double fa1 = (f.lo[ax] + f.h * (f.n - 1) - x[ax]) / tau;
        const double gb0 = (x[ax] - (g.lo[ax] + g.h * (g.n - 1))) / tp;
        const double gb1 = (x[ax] - g.lo[ax]) / tp;
        const double lo = std::max(std::min(fa0, fa1), std::min(gb0, gb1));
        const double hi = std::min(std::max(fa0, fa1), std::max(gb0, gb1));
        if (!(hi > lo)) return 0.0;
        half = std::max({half, std::abs(lo), std::abs(hi)});
    }
    return half;
}

wigner_slice wtau_slice(const sampled_signal& f, const sampled_signal& g, double tau,
                        const vec3& x, const slice_grid& grid) {
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("wtau_slice: tau must lie in (0,1)");
    if (f.d != g.d || f.d != grid.d)
        throw std::invalid_argument("wtau_slice: dimension mismatch");
    if (f.h != g.h)
        throw std::invalid_argument("wtau_slice: signal grids must share a step");

    wigner_slice out;
    out.tau = tau;
    out.x = x;
    out.grid = grid;
    const int d = grid.d, n = grid.n;
    const long total = grid.size();
    out.values.assign(total, cplx{0.0, 0.0});
    const double h = grid.step();
    const double y0 = -grid.y_half + 0.5 * h;  // cell centers
    const double tp = 1.0 - tau;

    fftw_complex* buf = fftw_alloc_complex(total);
    for (long idx = 0; idx < total; ++idx) {
        long ii = idx;
        int j[3] = {0, 0, 0};
        for (int ax = d - 1; ax >= 0; --ax) {
            j[ax] = static_cast<int>(ii % n);
            ii /= n;
        }
        vec3 y, pa, pb;
        int parity = 0;
        for (int ax = 0; ax < d; ++ax) {
            y[ax] = y0 + j[ax] * h;
            pa[ax] = x[ax] + tau * y[ax];
            pb[ax] = x[ax] - tp * y[ax];
            parity += j[ax];
        }
        cplx v = f.interp(pa) * std::conj(g.interp(pb));
        if (parity & 1) v = -v;
        buf[idx][0] = v.real();
        buf[idx][1] = v.imag();
    }

    int dims[3] = {n, n, n};
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft(d, dims, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }

    double hd = 1.0;
    for (int ax = 0; ax < d; ++ax) hd *= h;
    for (long idx = 0; idx < total; ++idx) {
        long ii = idx;
        int k[3] = {0, 0, 0};
        for (int ax = d - 1; ax >= 0; --ax) {
            k[ax] = static_cast<int>(ii % n);
            ii /= n;
        }
        double xy = 0.0;
        for (int ax = 0; ax < d; ++ax) xy += grid.xi(k[ax]) * y0;
        const double ph = -2.0 * pi * xy;
        out.values[idx] =
            hd * cplx{buf[idx][0], buf[idx][1]} * cplx{std::cos(ph), std::sin(ph)};
    }
    fftw_free(buf);
    return out;
}

sampled_signal sample_signal(int d, double lo, double hi, int n,
                             const std::function<cplx(const vec3&)>& fn) {
    sampled_signal s;
    s.d = d;
    s.n = n;
    s.h = (hi - lo) / n;
    long total = 1;
    for (int ax = 0; ax < d; ++ax) {
        s.lo[ax] = lo + 0.5 * s.h;
        total *= n;
    }
    s.values.resize(total);
    for (long idx = 0; idx < total; ++idx) {
        long ii = idx;
        vec3 p;
        for (int ax = d - 1; ax >= 0; --ax) {
            p[ax] = s.lo[ax] + static_cast<int>(ii % n) * s.h;
            ii /= n;
        }
        s.values[idx] = fn(p);
    }
    return s;
}

}  // namespace bjlab
