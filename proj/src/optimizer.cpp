#include "bjlab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bjlab {

namespace {

struct objective_context {
    gauss_dictionary dict;
    double p = 2.0;
    double cell_vol = 0.0;
    std::size_t npoints = 0;
    pair_field_cache cache;
    int grid_n = 0;
};

objective_context make_context(const omega_set& omega, double p, const gauss_dictionary& dict,
                               const ascent_options& opt) {
    validate_omega(omega);
    const int d = dict.d;
    if (d < 1 || d > 3) throw std::invalid_argument("optimizer: dimension must be 1..3");
    if (omega.dimension != 2 * d) throw std::invalid_argument("optimizer: dimension mismatch");
    const int K = static_cast<int>(dict.centers.size());
    if (K < 1 || K > 64)
        throw std::invalid_argument("optimizer: dictionary size must lie in 1..64");
    if (std::isnan(p) || p < 1.0 || !(p < critical_exponent(d)))
        throw std::invalid_argument(
            "optimizer: p must lie in [1, critical exponent); the objective is unbounded at and "
            "beyond the critical exponent");
    if (opt.grid_n < 1) throw std::invalid_argument("optimizer: grid_n must be positive");

    // cell grid over the hull of omega, keeping only cells whose centers are
    // inside; these are the fixed evaluation nodes of the objective
    phase_grid grid;
    grid.d = d;
    for (int a = 0; a < 2 * d; ++a) {
        grid.lo[a] = omega.boxes[0].lo[a];
        grid.hi[a] = omega.boxes[0].hi[a];
        for (const auto& b : omega.boxes) {
            grid.lo[a] = std::min(grid.lo[a], b.lo[a]);
            grid.hi[a] = std::max(grid.hi[a], b.hi[a]);
        }
        grid.n[a] = opt.grid_n;
    }
    std::vector<phase_point> pts;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const phase_point z = grid.point(i);
        std::array<double, 6> c{};
        for (int a = 0; a < d; ++a) {
            c[a] = z.x[a];
            c[d + a] = z.xi[a];
        }
        if (omega.contains(c)) pts.push_back(z);
    }
    if (pts.empty()) throw std::invalid_argument("optimizer: no grid cells inside omega");

    objective_context ctx;
    ctx.dict = dict;
    ctx.p = p;
    ctx.cell_vol = grid.cell_volume();
    ctx.npoints = pts.size();
    ctx.cache = build_pair_field_cache(dict, pts, opt.bj_rel_tol);
    ctx.grid_n = opt.grid_n;
    return ctx;
}

std::vector<cplx> normalized(const gauss_dictionary& dict, std::vector<cplx> c) {
    const double n2 = dictionary_norm_squared(dict, c);
    if (!std::isfinite(n2) || !(n2 > 1e-14))
        throw std::runtime_error("optimizer: degenerate coefficient norm");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& v : c) v *= s;
    return c;
}

double objective(const objective_context& ctx, const std::vector<cplx>& unit_c) {
    const auto field = ctx.cache.self_field(unit_c);
    double acc = 0.0;
    for (double v : field) acc += std::pow(std::abs(v), ctx.p);
    const double J = std::pow(ctx.cell_vol * acc, 1.0 / ctx.p);
    if (!std::isfinite(J))
        throw std::runtime_error("optimizer: non-finite objective value, aborting ascent");
    return J;
}

}  // namespace

ascent_result maximize_concentration(const omega_set& omega, double p,
                                     const gauss_dictionary& dict, const ascent_options& opt) {
    const objective_context ctx = make_context(omega, p, dict, opt);
    const int K = static_cast<int>(dict.centers.size());

    portable_rng rng(opt.seed);
    std::vector<cplx> c(K);
    for (auto& v : c) v = {rng.gauss(), rng.gauss()};
    c = normalized(dict, c);

    ascent_result res;
    res.max_norm_drift = std::abs(dictionary_norm_squared(dict, c) - 1.0);
    double J = objective(ctx, c);
    res.trace.push_back(J);

    const double h = opt.fd_step;
    for (int iter = 0; iter < opt.max_iters; ++iter) {
        // central differences of the normalized objective in 2K real coords
        std::vector<cplx> g(K);
        double gnorm2 = 0.0;
        for (int k = 0; k < K; ++k)
            for (int comp = 0; comp < 2; ++comp) {
                auto probe = [&](double sign) {
                    std::vector<cplx> cc = c;
                    if (comp == 0)
                        cc[k] += cplx{sign * h, 0.0};
                    else
                        cc[k] += cplx{0.0, sign * h};
                    return objective(ctx, normalized(dict, cc));
                };
                const double der = (probe(1.0) - probe(-1.0)) / (2.0 * h);
                if (comp == 0)
                    g[k] += cplx{der, 0.0};
                else
                    g[k] += cplx{0.0, der};
                gnorm2 += der * der;
            }
        if (gnorm2 == 0.0) break;

        // backtracking: accept only a sufficient increase
        double eta = opt.init_step;
        bool accepted = false;
        std::vector<cplx> cand;
        double Jc = J;
        for (int t = 0; t < 40; ++t) {
            std::vector<cplx> trial = c;
            for (int k = 0; k < K; ++k) trial[k] += eta * g[k];
            trial = normalized(dict, trial);
            const double Jt = objective(ctx, trial);
            if (Jt >= J + opt.armijo * eta * gnorm2) {
                accepted = true;
                cand = std::move(trial);
                Jc = Jt;
                break;
            }
            eta *= opt.backtrack;
        }
        if (!accepted) break;

        c = std::move(cand);
        res.max_norm_drift =
            std::max(res.max_norm_drift, std::abs(dictionary_norm_squared(dict, c) - 1.0));
        res.trace.push_back(Jc);
        res.iterations = iter + 1;
        const bool settled = Jc - J < opt.rel_improve_tol * std::max(std::abs(J), 1e-12);
        J = Jc;
        if (settled) break;
    }

    res.best.dict = dict;
    res.best.c = c;
    res.report.p = p;
    res.report.value = J;
    res.report.ratio = J;  // unit-norm input by construction
    res.report.resolution = ctx.grid_n;
    res.report.error = J * opt.bj_rel_tol;
    return res;
}

slope_pair objective_gradient_check(const omega_set& omega, double p,
                                    const gauss_dictionary& dict, const std::vector<cplx>& c,
                                    const std::vector<cplx>& dir, double step_coarse,
                                    double step_fine, const ascent_options& opt) {
    const objective_context ctx = make_context(omega, p, dict, opt);
    if (dir.size() != dict.centers.size() || c.size() != dict.centers.size())
        throw std::invalid_argument("objective_gradient_check: vector length mismatch");
    double dn = 0.0;
    for (const auto& v : dir) dn += std::norm(v);
    if (!(dn > 0.0)) throw std::invalid_argument("objective_gradient_check: zero direction");

    auto slope = [&](double step) {
        std::vector<cplx> plus = c, minus = c;
        for (std::size_t k = 0; k < c.size(); ++k) {
            plus[k] += step * dir[k];
            minus[k] -= step * dir[k];
        }
        return (objective(ctx, normalized(dict, plus)) -
                objective(ctx, normalized(dict, minus))) /
               (2.0 * step);
    };
    slope_pair out;
    out.coarse = slope(step_coarse);
    out.fine = slope(step_fine);
    return out;
}

}  // namespace bjlab
