#include "bjlab/bornjordan.hpp"

#include <algorithm>
#include <cmath>

#include "bjlab/quadrature.hpp"

namespace bjlab {

namespace {

// merged activity windows of all ordered shell pairs plus every raw window
// edge; the integrand is continuous but kinked at interior edges
struct window_set {
    std::vector<detail::tau_interval> merged;
    std::vector<double> cuts;
};

// tau values where the inner integration geometry of one pair reconfigures
// (annulus edges aligning with |x| +- tau t extremes, or x/tau crossing the
// radial range); the integrand stays continuous but loses smoothness there
void pair_config_cuts(const radial_shell& a, const radial_shell& b, double absx,
                      std::vector<double>& cuts) {
    const double sa[4] = {a.r_in, a.r_out, -a.r_in, -a.r_out};
    const double sb[4] = {b.r_in, b.r_out, -b.r_in, -b.r_out};
    for (double u : sa)
        for (double v : sb) {
            if (u == v) continue;
            const double t = (u - absx) / (u - v);
            if (t > 0.0 && t < 0.5) cuts.push_back(t);
        }
    if (absx > 0.0)
        for (double v : {b.r_in, b.r_out})
            if (v > 0.0 && absx < 0.5 * v) cuts.push_back(absx / v);
}

window_set gather_windows(const radial_profile& f, const radial_profile& g, double absx) {
    window_set ws;
    std::vector<detail::tau_interval> raw;
    for (const auto& a : f.shells)
        for (const auto& b : g.shells) {
            for (const auto& w : detail::pair_tau_windows(a, b, f.d, absx)) {
                raw.push_back(w);
                ws.cuts.push_back(w.lo);
                ws.cuts.push_back(w.hi);
            }
            pair_config_cuts(a, b, absx, ws.cuts);
        }
    std::sort(raw.begin(), raw.end(),
              [](const detail::tau_interval& p, const detail::tau_interval& q) {
                  return p.lo < q.lo;
              });
    for (const auto& w : raw) {
        if (!ws.merged.empty() && w.lo <= ws.merged.back().hi)
            ws.merged.back().hi = std::max(ws.merged.back().hi, w.hi);
        else
            ws.merged.push_back(w);
    }
    std::sort(ws.cuts.begin(), ws.cuts.end());
    return ws;
}

// log subdivision across wide segments plus dyadic refinement of the
// outermost panels; level counts differ between true activity edges and
// interior kinks
std::vector<double> segment_edges(double a, double b, const tau_quadrature_spec& spec,
                                  int lo_levels, int hi_levels) {
    std::vector<double> e;
    if (a > 0.0 && b / a > spec.log_factor)
        e = log_edges(a, b, spec.log_factor);
    else
        e = {a, b};
    std::vector<double> out;
    {
        const double w = e[1] - e[0];
        out.push_back(e[0]);
        for (int l = lo_levels; l >= 1; --l) out.push_back(e[0] + w * std::ldexp(1.0, -l));
    }
    for (std::size_t i = 1; i + 1 < e.size(); ++i) out.push_back(e[i]);
    {
        const double w = e[e.size() - 1] - e[e.size() - 2];
        if (e.size() > 2) out.push_back(e[e.size() - 2]);
        for (int l = 1; l <= hi_levels; ++l)
            out.push_back(e[e.size() - 1] - w * std::ldexp(1.0, -l));
        out.push_back(e[e.size() - 1]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

cplx integrate_segment(const radial_profile& f, const radial_profile& g,
                       const phase_point& z, double a, double b,
                       const tau_quadrature_spec& spec, const quad_options& opt,
                       int lo_levels, int hi_levels) {
    if (!(b > a)) return {0.0, 0.0};
    const auto edges = segment_edges(a, b, spec, lo_levels, hi_levels);
    const gl_rule& rule = gauss_legendre(std::max(2, spec.nodes));
    std::vector<double> nodes, weights;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        map_rule(rule, edges[i], edges[i + 1], nodes, weights);
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < nodes.size(); ++i)
        s += weights[i] * wtau_point(f, g, nodes[i], z, opt).value;
    return s;
}

// integrate over [a,b] split at the interior window edges in `cuts`
cplx integrate_range(const radial_profile& f, const radial_profile& g, const phase_point& z,
                     double a, double b, const std::vector<double>& cuts,
                     const tau_quadrature_spec& spec, const quad_options& opt,
                     int edge_levels) {
    std::vector<double> pts{a};
    for (double c : cuts)
        if (c > a * (1.0 + 1e-14) + 1e-300 && c < b * (1.0 - 1e-14)) pts.push_back(c);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double p, double q) { return q - p <= 1e-12 * q; }),
              pts.end());
    pts.back() = b;
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        // true activity edges get deep refinement, interior reconfiguration
        // cuts are mild and need less
        const int lo_lv = (i == 0) ? edge_levels : 6;
        const int hi_lv = (i + 2 == pts.size()) ? edge_levels : 6;
        s += integrate_segment(f, g, z, pts[i], pts[i + 1], spec, opt, lo_lv, hi_lv);
    }
    return s;
}

// envelope at x = 0 exactly: |W_tau(0,xi)| <= tau'^{-d} int |f(tau u/tau')||g(u)| du,
// and per shell pair the f factor scales as (tau/tau')^{eA} while the u range
// stays inside [rB, (4/3) RB] for tau <= 1/4; the tau power integrates over
// (0,eps] iff eA > -1, and pairs with rA > 0 drop out once eps is below their
// activity threshold
double origin_tail(const radial_profile& f, const radial_profile& g, double eps) {
    const int d = f.d;
    double total = 0.0;
    for (const auto& a : f.shells)
        for (const auto& b : g.shells) {
            if (a.r_in > 0.0 && eps <= a.r_in / (a.r_in + b.r_out)) continue;
            const double w = a.exponent + b.exponent + d - 1;
            if (b.r_in <= 0.0 && w <= -1.0) return INFINITY;
            if (a.exponent <= -1.0) return INFINITY;
            const double radial = power_integral(1.0, w, b.r_in, (4.0 / 3.0) * b.r_out);
            const double tp_pow =
                (a.exponent + d >= 0.0) ? std::pow(4.0 / 3.0, a.exponent + d) : 1.0;
            total += std::abs(a.coeff * b.coeff) * omega(d) * radial * tp_pow *
                     std::pow(eps, 1.0 + a.exponent) / (1.0 + a.exponent);
        }
    return total;
}

// bound on the integral of |W_tau(f,g)(z)| over tau in (0, eps]:
// Cauchy-Schwarz gives (tau tau')^{-d/2} |f|_2 |g|_2, integrable for d = 1;
// substituting u = x - tau' y gives tau'^{-d} sup_{B(x, r)} |f| * |g|_1 with
// r = (tau/tau')(|x| + supp g), constant in tau once eps <= 1/4
double envelope_tail(const radial_profile& f, const radial_profile& g, double absx,
                     double eps) {
    double extra = 0.0;
    if (eps > 0.25) {
        // on [1/4, eps] the Cauchy-Schwarz envelope is bounded outright
        const double l2 = std::sqrt(l2_norm_squared(f) * l2_norm_squared(g));
        extra = (eps - 0.25) * std::pow(0.25 * 0.75, -0.5 * f.d) * l2;
        eps = 0.25;
    }
    double bound = INFINITY;
    if (f.d == 1) {
        const double l2 = std::sqrt(l2_norm_squared(f) * l2_norm_squared(g));
        bound = std::min(bound, 2.0 * std::sqrt(eps / (1.0 - eps)) * l2);
    }
    const double rad = (4.0 / 3.0) * eps * (absx + g.support_radius());
    const double sup = linf_on_ball(f, absx, rad);
    if (std::isfinite(sup))
        bound = std::min(bound, eps * std::pow(1.0 - eps, -f.d) * sup * l1_norm(g));
    if (absx == 0.0) bound = std::min(bound, origin_tail(f, g, eps));
    return bound + extra;
}

struct half_integral {
    cplx value{0.0, 0.0};
    double tail = 0.0;
};

// integral of W_tau(f,g)(z) over tau in (lo_cut, 1/2] restricted to the
// activity windows; when lo_cut = 0 and activity reaches tau = 0 the range is
// extended downward until the envelope certifies the remaining tail
half_integral integrate_ordering(const radial_profile& f, const radial_profile& g,
                                 const phase_point& z, double lo_cut, bool allow_tail,
                                 const tau_quadrature_spec& spec, const quad_options& opt) {
    const double absx = norm(z.x, f.d);
    const int edge_levels =
        std::max(4, (int)std::ceil(std::log2(1.0 / std::max(spec.edge_floor, 1e-18))));
    window_set ws = gather_windows(f, g, absx);

    half_integral out;
    bool open_at_zero = false;
    bool skipped_activity = false;  // windows cut off by lo_cut > 0
    double open_hi = 0.0;
    for (const auto& w : ws.merged) {
        double a = std::max(w.lo, lo_cut);
        double b = std::min(w.hi, 0.5);
        if (w.lo < lo_cut) skipped_activity = true;
        if (!(b > a)) continue;
        if (a <= 0.0) {
            open_at_zero = true;  // activity reaches tau = 0, needs the envelope
            open_hi = b;
            continue;
        }
        out.value += integrate_range(f, g, z, a, b, ws.cuts, spec, opt, edge_levels);
    }
    if (!open_at_zero) {
        // a full integral requested with a gap (0, lo_cut) still owes an
        // envelope bound when activity reaches into the gap
        if (allow_tail && skipped_activity && lo_cut > 0.0)
            out.tail = envelope_tail(f, g, absx, lo_cut);
        return out;
    }

    if (!allow_tail)
        throw std::logic_error("integrate_ordering: open window without tail handling");

    // progressive extension toward tau = 0 until the envelope tail is small
    // against everything accumulated so far
    double start = std::min(open_hi, 1e-3);
    out.value += integrate_range(f, g, z, start, open_hi, ws.cuts, spec, opt, edge_levels);
    double tail = envelope_tail(f, g, absx, start);
    int iter = 0;
    while (!(tail <= spec.tail_rel * (std::abs(out.value) + 1e-300))) {
        if (++iter > 120)
            throw endpoint_divergence_error(
                "bj_point: endpoint-divergence risk, the tau -> 0 tail envelope does not "
                "converge at this point");
        const double next = start * 0.25;
        out.value += integrate_range(f, g, z, next, start, ws.cuts, spec, opt, 10);
        start = next;
        tail = envelope_tail(f, g, absx, start);
    }
    out.tail = tail;
    return out;
}

bool same_profile(const radial_profile& a, const radial_profile& b) {
    if (a.d != b.d || a.shells.size() != b.shells.size()) return false;
    for (std::size_t i = 0; i < a.shells.size(); ++i) {
        const auto& p = a.shells[i];
        const auto& q = b.shells[i];
        if (p.coeff != q.coeff || p.exponent != q.exponent || p.r_in != q.r_in ||
            p.r_out != q.r_out)
            return false;
    }
    return true;
}

void validate_inputs(const radial_profile& f, const radial_profile& g) {
    if (f.d != g.d) throw std::invalid_argument("bj_point: dimension mismatch");
    if (f.shells.empty() || g.shells.empty())
        throw std::invalid_argument("bj_point: empty profile");
}

void validate_panels(const std::vector<tau_panel>& panels, double delta) {
    if (panels.empty()) throw std::invalid_argument("tau panels: empty list");
    std::vector<tau_panel> p = panels;
    std::sort(p.begin(), p.end(),
              [](const tau_panel& a, const tau_panel& b) { return a.lo < b.lo; });
    const double tol = 1e-12;
    if (std::abs(p.front().lo - delta) > tol || std::abs(p.back().hi - (1.0 - delta)) > tol)
        throw std::invalid_argument("tau panels: must cover [delta, 1-delta]");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i].hi > p[i].lo)) throw std::invalid_argument("tau panels: empty panel");
        if (p[i].nodes < 2) throw std::invalid_argument("tau panels: need nodes >= 2");
        if (i + 1 < p.size() && std::abs(p[i].hi - p[i + 1].lo) > tol)
            throw std::invalid_argument("tau panels: gap or overlap");
    }
}

// literal integration over user-supplied panels, no symmetry folding
cplx integrate_explicit(const radial_profile& f, const radial_profile& g,
                        const phase_point& z, const std::vector<tau_panel>& panels,
                        const quad_options& opt) {
    cplx s{0.0, 0.0};
    std::vector<double> nodes, weights;
    for (const auto& p : panels) {
        nodes.clear();
        weights.clear();
        map_rule(gauss_legendre(p.nodes), p.lo, p.hi, nodes, weights);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += weights[i] * wtau_point(f, g, nodes[i], z, opt).value;
    }
    return s;
}

bj_result bj_core(const radial_profile& f, const radial_profile& g, const phase_point& z,
                  double delta, bool full, const tau_quadrature_spec& spec,
                  const quad_options& opt) {
    validate_inputs(f, g);
    if (!(delta >= 0.0) || delta > 0.5)
        throw std::invalid_argument("bj: delta must lie in [0, 1/2]");
    if (delta == 0.5) return {};          // empty range [1/2, 1/2]
    if (delta == 0.0) full = true;        // incomplete with no gap is the full integral

    if (!spec.panels.empty()) {
        validate_panels(spec.panels, delta);
        bj_result r;
        r.value = integrate_explicit(f, g, z, spec.panels, opt);
        if (full && delta > 0.0) {
            const double absx = norm(z.x, f.d);
            r.tail_bound = envelope_tail(f, g, absx, delta) + envelope_tail(g, f, absx, delta);
        }
        return r;
    }

    // W_{1-tau}(f,g) = conj W_tau(g,f), so the [1/2, 1) half folds onto the
    // reversed ordering; for f = g the full integral is 2 Re of one half
    bj_result r;
    if (same_profile(f, g)) {
        const half_integral h = integrate_ordering(f, g, z, delta, full, spec, opt);
        r.value = {2.0 * h.value.real(), 0.0};
        r.tail_bound = 2.0 * h.tail;
        return r;
    }
    const half_integral h1 = integrate_ordering(f, g, z, delta, full, spec, opt);
    const half_integral h2 = integrate_ordering(g, f, z, delta, full, spec, opt);
    r.value = h1.value + std::conj(h2.value);
    r.tail_bound = h1.tail + h2.tail;
    return r;
}

}  // namespace

bj_result bj_point(const radial_profile& f, const radial_profile& g, const phase_point& z,
                   const tau_quadrature_spec& spec, const quad_options& opt) {
    return bj_core(f, g, z, spec.delta, true, spec, opt);
}

bj_result bj_incomplete_point(const radial_profile& f, const radial_profile& g,
                              const phase_point& z, double delta,
                              const tau_quadrature_spec& spec, const quad_options& opt) {
    return bj_core(f, g, z, delta, false, spec, opt);
}

double annulus_truncation_delta(double r1, double r2, double rho) {
    if (!(r1 > 0.0) || !(r2 > r1)) throw std::invalid_argument("annulus_truncation_delta: need 0 < r1 < r2");
    if (!(rho >= 0.0) || rho >= r1)
        throw std::invalid_argument("annulus_truncation_delta: need 0 <= rho < r1");
    return (r1 - rho) / (r1 + r2);
}

cplx bj_integrate(const std::function<cplx(double)>& w, double delta,
                  const tau_quadrature_spec& spec) {
    if (!(delta >= 0.0) || delta >= 0.5)
        throw std::invalid_argument("bj_integrate: delta must lie in [0, 1/2)");
    const double a = delta;
    const double b = 1.0 - delta;
    const double mid = 0.5;
    const double floor_w = (mid - a) * 1e-14;
    std::vector<double> edges = graded_edges(a, mid, a, spec.grade_ratio, floor_w);
    {
        std::vector<double> up = graded_edges(mid, b, b, spec.grade_ratio, floor_w);
        edges.insert(edges.end(), up.begin() + 1, up.end());
    }
    const gl_rule& rule = gauss_legendre(std::max(2, spec.nodes));
    std::vector<double> nodes, weights;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        map_rule(rule, edges[i], edges[i + 1], nodes, weights);
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * w(nodes[i]);
    return s;
}

}  // namespace bjlab
