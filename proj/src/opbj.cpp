#include "bjlab/opbj.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bjlab {

namespace {

void check_grid(const phase_grid& g) {
    if (g.d < 1 || g.d > 3) throw std::invalid_argument("opbj: grid dimension must be 1, 2, or 3");
    for (int a = 0; a < g.axes(); ++a) {
        if (g.n[a] < 1) throw std::invalid_argument("opbj: grid needs at least one cell per axis");
        if (!std::isfinite(g.lo[a]) || !std::isfinite(g.hi[a]) || !(g.lo[a] < g.hi[a]))
            throw std::invalid_argument("opbj: grid axis bounds must be finite and increasing");
    }
}

std::array<double, 6> flat_coords(const phase_point& z, int d) {
    std::array<double, 6> c{};
    for (int i = 0; i < d; ++i) {
        c[i] = z.x[i];
        c[d + i] = z.xi[i];
    }
    return c;
}

// support cells carrying a nonzero value, in flat grid order
struct member_cells {
    std::vector<phase_point> points;
    std::vector<cplx> values;
};

member_cells collect_members(const symbol_field& a) {
    member_cells m;
    const std::size_t total = a.grid.size();
    for (std::size_t i = 0; i < total; ++i) {
        if (a.values[i] == cplx{0.0, 0.0}) continue;
        m.points.push_back(a.grid.point(i));
        m.values.push_back(a.values[i]);
    }
    return m;
}

// atoms of both arguments in one dictionary, coefficients zero-padded; shared
// atom lists pass through untouched so the pair cache stays small
struct merged_pair {
    gauss_dictionary dict;
    std::vector<cplx> cf, cg;
};

merged_pair merge_dictionaries(const dictionary_coefficients& f, const dictionary_coefficients& g) {
    if (f.dict.d != g.dict.d)
        throw std::invalid_argument("opbj_pairing: dictionary dimensions disagree");
    const std::size_t kf = f.dict.centers.size();
    const std::size_t kg = g.dict.centers.size();
    if (kf == 0 || kg == 0) throw std::invalid_argument("opbj_pairing: empty dictionary");
    if (f.c.size() != kf || g.c.size() != kg)
        throw std::invalid_argument("opbj_pairing: coefficient count mismatch");

    const int d = f.dict.d;
    bool shared = kf == kg;
    for (std::size_t k = 0; shared && k < kf; ++k)
        for (int i = 0; i < d; ++i)
            if (f.dict.centers[k].x[i] != g.dict.centers[k].x[i] ||
                f.dict.centers[k].xi[i] != g.dict.centers[k].xi[i])
                shared = false;

    merged_pair m;
    if (shared) {
        m.dict = f.dict;
        m.cf = f.c;
        m.cg = g.c;
        return m;
    }
    m.dict.d = d;
    m.dict.centers = f.dict.centers;
    m.dict.centers.insert(m.dict.centers.end(), g.dict.centers.begin(), g.dict.centers.end());
    if (m.dict.centers.size() > 128)
        throw std::invalid_argument("opbj_pairing: merged dictionary exceeds 128 atoms");
    m.cf.assign(kf + kg, cplx{0.0, 0.0});
    m.cg.assign(kf + kg, cplx{0.0, 0.0});
    std::copy(f.c.begin(), f.c.end(), m.cf.begin());
    std::copy(g.c.begin(), g.c.end(), m.cg.begin() + static_cast<std::ptrdiff_t>(kf));
    return m;
}

}  // namespace

void validate_symbol(const symbol_field& a) {
    validate_omega(a.support);
    check_grid(a.grid);
    if (a.support.dimension != 2 * a.grid.d)
        throw std::invalid_argument("opbj: support and grid dimensions disagree");
    if (a.values.size() != a.grid.size())
        throw std::invalid_argument("opbj: value count does not match the grid");
    if (std::isnan(a.q) || a.q < 1.0)
        throw std::invalid_argument("opbj: integrability exponent must be at least one");
    for (const auto& b : a.support.boxes)
        for (int ax = 0; ax < a.support.dimension; ++ax) {
            const double span = std::abs(a.grid.lo[ax]) + std::abs(a.grid.hi[ax]);
            const double slack = 1e-12 * std::max(1.0, span);
            if (b.lo[ax] < a.grid.lo[ax] - slack || b.hi[ax] > a.grid.hi[ax] + slack)
                throw std::invalid_argument("opbj: grid does not cover the declared support");
        }
    const std::size_t total = a.grid.size();
    for (std::size_t i = 0; i < total; ++i) {
        const cplx v = a.values[i];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("opbj: symbol values must be finite");
        if (v == cplx{0.0, 0.0}) continue;
        if (!a.support.contains(flat_coords(a.grid.point(i), a.grid.d)))
            throw std::invalid_argument("opbj: symbol carries mass outside its support");
    }
}

symbol_field make_symbol(const omega_set& support, const phase_grid& grid,
                         const std::function<cplx(const phase_point&)>& a, double q) {
    if (!a) throw std::invalid_argument("make_symbol: missing sampler");
    validate_omega(support);
    check_grid(grid);
    if (support.dimension != 2 * grid.d)
        throw std::invalid_argument("opbj: support and grid dimensions disagree");

    symbol_field s;
    s.support = support;
    s.grid = grid;
    s.q = q;
    const std::size_t total = grid.size();
    s.values.assign(total, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < total; ++i) {
        const phase_point z = grid.point(i);
        if (support.contains(flat_coords(z, grid.d))) s.values[i] = a(z);
    }
    validate_symbol(s);
    return s;
}

double symbol_lq_norm(const symbol_field& a) {
    validate_symbol(a);
    if (std::isinf(a.q)) {
        double m = 0.0;
        for (const cplx& v : a.values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (const cplx& v : a.values)
        if (v != cplx{0.0, 0.0}) s += std::pow(std::abs(v), a.q);
    return std::pow(a.grid.cell_volume() * s, 1.0 / a.q);
}

cplx opbj_pairing(const symbol_field& a, const radial_profile& f, const radial_profile& g,
                  const tau_quadrature_spec& spec, const quad_options& opt) {
    validate_symbol(a);
    if (f.d != a.grid.d || g.d != a.grid.d)
        throw std::invalid_argument("opbj_pairing: profile dimension mismatch");
    if (!std::isfinite(f.support_radius()) || !std::isfinite(g.support_radius()))
        throw std::invalid_argument("opbj_pairing: profiles must be compactly supported");
    const member_cells m = collect_members(a);
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < m.points.size(); ++i)
        acc += m.values[i] * std::conj(bj_point(g, f, m.points[i], spec, opt).value);
    return a.grid.cell_volume() * acc;
}

cplx opbj_pairing(const symbol_field& a, const dictionary_coefficients& f,
                  const dictionary_coefficients& g, double rel_tol) {
    validate_symbol(a);
    if (f.dict.d != a.grid.d || g.dict.d != a.grid.d)
        throw std::invalid_argument("opbj_pairing: dictionary dimension mismatch");
    const merged_pair mp = merge_dictionaries(f, g);
    const member_cells m = collect_members(a);
    if (m.points.empty()) return {0.0, 0.0};
    const pair_field_cache cache = build_pair_field_cache(mp.dict, m.points, rel_tol);
    const std::vector<cplx> w = cache.cross_field(mp.cg, mp.cf);
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < m.points.size(); ++i) acc += m.values[i] * std::conj(w[i]);
    return a.grid.cell_volume() * acc;
}

double opbj_q_threshold(int d) {
    if (d < 1 || d > 3)
        throw std::invalid_argument("opbj_q_threshold: dimension must be 1, 2, or 3");
    return 2.0 * d / (d + 2.0);
}

std::string opbj_regime(int d, double q) {
    if (std::isnan(q) || q < 1.0)
        throw std::invalid_argument("opbj_regime: exponent must be at least one");
    const double thr = opbj_q_threshold(d);
    if (std::abs(q - thr) <= 1e-12 * std::max(1.0, thr)) return d > 2 ? "open" : "unbounded";
    return q > thr ? "bounded" : "unbounded";
}

norm_probe_result opbj_norm_probe(const symbol_field& a, int trials, unsigned long long seed,
                                  int atoms, double rel_tol) {
    validate_symbol(a);
    if (trials < 1) throw std::invalid_argument("opbj_norm_probe: need at least one trial");
    if (atoms < 1 || atoms > 32)
        throw std::invalid_argument("opbj_norm_probe: atom count must lie in [1, 32]");

    const int d = a.grid.d;
    norm_probe_result res;
    res.q = a.q;
    res.threshold = opbj_q_threshold(d);
    res.regime = opbj_regime(d, a.q);

    std::array<double, 6> blo{}, bhi{};
    for (int ax = 0; ax < a.support.dimension; ++ax) {
        blo[ax] = a.support.boxes.front().lo[ax];
        bhi[ax] = a.support.boxes.front().hi[ax];
    }
    for (const auto& b : a.support.boxes)
        for (int ax = 0; ax < a.support.dimension; ++ax) {
            blo[ax] = std::min(blo[ax], b.lo[ax]);
            bhi[ax] = std::max(bhi[ax], b.hi[ax]);
        }

    portable_rng rng(seed);
    gauss_dictionary dict;
    dict.d = d;
    for (int k = 0; k < atoms; ++k) {
        phase_point c;
        for (int i = 0; i < d; ++i) {
            c.x[i] = rng.uniform(blo[i] - 1.0, bhi[i] + 1.0);
            c.xi[i] = rng.uniform(blo[d + i] - 1.0, bhi[d + i] + 1.0);
        }
        dict.centers.push_back(c);
    }

    const member_cells m = collect_members(a);
    pair_field_cache cache;
    if (!m.points.empty()) cache = build_pair_field_cache(dict, m.points, rel_tol);

    const double vol = a.grid.cell_volume();
    res.ratios.reserve(static_cast<std::size_t>(trials));
    std::vector<cplx> cf(static_cast<std::size_t>(atoms)), cg(cf);
    for (int t = 0; t < trials; ++t) {
        for (auto& v : cf) v = cplx{rng.gauss(), rng.gauss()};
        for (auto& v : cg) v = cplx{rng.gauss(), rng.gauss()};
        const double nf = dictionary_norm_squared(dict, cf);
        const double ng = dictionary_norm_squared(dict, cg);
        if (!(nf > 1e-14) || !(ng > 1e-14))
            throw std::runtime_error("opbj_norm_probe: degenerate coefficient draw");
        double ratio = 0.0;
        if (!m.points.empty()) {
            const std::vector<cplx> w = cache.cross_field(cg, cf);
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < m.points.size(); ++i) acc += m.values[i] * std::conj(w[i]);
            ratio = std::abs(vol * acc) / std::sqrt(nf * ng);
        }
        res.ratios.push_back(ratio);
        res.max_ratio = std::max(res.max_ratio, ratio);
    }
    return res;
}

}  // namespace bjlab
