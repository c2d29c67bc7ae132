#include "bjlab/tauwigner.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "bjlab/quadrature.hpp"

namespace bjlab {
namespace detail {

// ---------- activity geometry ----------
// factor A lives on |x + tau y| in [rA,RA]; in the u = x - (1-tau) y frame it
// becomes |x - tau u| in [rA(1-tau), RA(1-tau)] against the radial factor |u|.

bool pair_active(const radial_shell& a, const radial_shell& b, int d, double absx,
                 double tau) {
    const double tp = 1.0 - tau;
    if (d == 1) {
        // two intervals per factor in y; check the four combinations
        for (int sa = -1; sa <= 1; sa += 2)
            for (int sb = -1; sb <= 1; sb += 2) {
                // y in [ (sa*rA - x)/tau , (sa*RA - x)/tau ] (sa branch of A)
                double a0 = (sa * a.r_in - absx) / tau, a1 = (sa * a.r_out - absx) / tau;
                if (a0 > a1) std::swap(a0, a1);
                double b0 = (absx - sb * b.r_out) / tp, b1 = (absx - sb * b.r_in) / tp;
                if (b0 > b1) std::swap(b0, b1);
                if (std::max(a0, b0) <= std::min(a1, b1)) return true;
            }
        return false;
    }
    // annuli in y with center distance absx/(tau tp); multiplied through
    if (absx > a.r_out * tp + b.r_out * tau) return false;
    if (absx + a.r_out * tp < b.r_in * tau) return false;
    if (absx + b.r_out * tau < a.r_in * tp) return false;
    return true;
}

std::vector<tau_interval> pair_tau_windows(const radial_shell& a, const radial_shell& b,
                                           int d, double absx) {
    std::vector<tau_interval> out;
    if (d >= 2) {
        // the three activity constraints are linear in tau
        double lo = 0.0, hi = 0.5;
        const double ra = a.r_in, Ra = a.r_out, rb = b.r_in, Rb = b.r_out;
        // absx <= Ra(1-t) + Rb t
        if (Rb > Ra)
            lo = std::max(lo, (absx - Ra) / (Rb - Ra));
        else if (Rb < Ra)
            hi = std::min(hi, (Ra - absx) / (Ra - Rb));
        else if (absx > Ra)
            return out;
        // absx + Ra(1-t) >= rb t
        hi = std::min(hi, (absx + Ra) / (Ra + rb));
        // absx + Rb t >= ra(1-t)
        if (ra > absx) lo = std::max(lo, (ra - absx) / (ra + Rb));
        if (lo < hi) out.push_back({lo, hi});
        return out;
    }
    // d = 1: breakpoints where interval endpoints of the two factors touch
    std::set<double> cand{0.0, 0.5};
    for (double sa : {-a.r_out, -a.r_in, a.r_in, a.r_out})
        for (double sb : {-b.r_out, -b.r_in, b.r_in, b.r_out}) {
            const double den = sa - sb;
            if (den == 0.0) continue;
            const double t = (sa - absx) / den;
            if (t > 0.0 && t < 0.5) cand.insert(t);
        }
    std::vector<double> edges(cand.begin(), cand.end());
    tau_interval cur{-1.0, -1.0};
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        const double mid = 0.5 * (edges[i] + edges[i + 1]);
        if (pair_active(a, b, 1, absx, mid)) {
            if (cur.lo < 0.0) cur.lo = edges[i];
            cur.hi = edges[i + 1];
        } else if (cur.lo >= 0.0) {
            out.push_back(cur);
            cur = {-1.0, -1.0};
        }
    }
    if (cur.lo >= 0.0) out.push_back(cur);
    return out;
}

// ---------- reduced engine ----------

namespace {

struct pair_frame {
    // all lengths divided by the pair scale s; value = s_pow * integral
    double x = 0.0;          // |x|/s
    double pa = 0.0, pb = 0.0;  // A-window on p = |x - tau u|, scaled
    double t_lo = 0.0, t_hi = 0.0;
    double tau = 0.0, tp = 0.0;
    double ea = 0.0, eb = 0.0;
    double xi_par = 0.0, xi_perp = 0.0;  // include the s/(1-tau) factor
    double prefac = 0.0;     // cA cB (1-tau)^{-d-eA} s^{eA+eB+d}
    int d = 2;
};

// angular measure of the full sphere slice used by each reduction
double full_angle(int d) { return d == 2 ? 2.0 * pi : (d == 3 ? 4.0 * pi : 2.0); }

// cos(theta) window limit (d=2) / v window limit (d=3) for |x - h w| = r,
// factored so that no product of two extreme scales appears
inline double v_limit(double x, double h, double r) {
    return x / (2.0 * h) + ((h - r) / x) * ((h + r) / (2.0 * h));
}

inline double p_of_v(double x, double h, double v) {
    const double c = std::clamp(v, -1.0, 1.0);
    return std::hypot(x - h * c, h * std::sqrt(std::max(0.0, 1.0 - c * c)));
}

// exact angular integral of p^{ea} against dv (d=3) via p dp = -x h dv
double exact_v_integral(double x, double h, double ea, double p_lo, double p_hi,
                        double v_lo, double v_hi) {
    if (x == 0.0 || h == 0.0) {
        const double p = std::hypot(x, h);
        return std::pow(p, ea) * (v_hi - v_lo);
    }
    // p barely varies when x h is tiny; the power-integral difference would
    // cancel catastrophically, so fall back to the flat value
    if (p_hi - p_lo < 1e-6 * p_hi)
        return std::pow(0.5 * (p_lo + p_hi), ea) * (v_hi - v_lo);
    return power_integral(1.0, ea + 1.0, p_lo, p_hi) / (x * h);
}

struct angular_result {
    cplx val{0.0, 0.0};
};

// d=2 theta integral over the A-window at fixed t (all scaled quantities)
angular_result theta_integral(const pair_frame& fr, double t, const quad_options& opt) {
    angular_result res;
    const double h = fr.tau * t;
    double th_lo = 0.0, th_hi = pi;
    if (fr.x > 0.0 && h > 0.0) {
        const double v_hi = fr.pa > 0.0 ? v_limit(fr.x, h, fr.pa) : 1.0;
        const double v_lo = v_limit(fr.x, h, fr.pb);
        if (v_lo >= 1.0 || v_hi <= -1.0) return res;
        th_lo = std::acos(std::min(v_hi, 1.0));
        th_hi = std::acos(std::max(v_lo, -1.0));
        if (th_hi <= th_lo) return res;
    } else {
        const double p = std::hypot(fr.x, h);
        if (p < fr.pa || p > fr.pb) return res;
    }
    std::vector<double> edges{th_lo, th_hi};
    // grading toward the inner-circle tangency when the window reaches p = 0
    if (fr.pa == 0.0 && fr.x > 0.0 && h > 0.0)
        edges = graded_edges(th_lo, th_hi, th_lo, opt.grade_ratio,
                             (th_hi - th_lo) * opt.grade_floor);
    const double rate = t * std::max(std::abs(fr.xi_par), std::abs(fr.xi_perp));
    if (rate > 0.0) edges = cap_edges(edges, opt.osc_frac / rate);
    const gl_rule& gl = gauss_legendre(opt.nodes);
    cplx acc{0.0, 0.0};
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        const double mid = 0.5 * (edges[i] + edges[i + 1]);
        const double half = 0.5 * (edges[i + 1] - edges[i]);
        for (size_t k = 0; k < gl.node.size(); ++k) {
            const double th = mid + half * gl.node[k];
            const double w = half * gl.weight[k];
            const double ct = std::cos(th), st = std::sin(th);
            const double p = std::hypot(fr.x - h * ct, h * st);
            const double amp = std::pow(p, fr.ea) * 2.0 *
                               std::cos(2.0 * pi * t * fr.xi_perp * st);
            const double ph = 2.0 * pi * t * fr.xi_par * ct;
            acc += w * amp * cplx{std::cos(ph), std::sin(ph)};
        }
    }
    res.val = acc;
    return res;
}

// d=3 v integral at fixed t; exact in the unmodulated case, otherwise GL in
// the substituted variable q = p^{2+ea} (integrable endpoint p -> 0)
angular_result v_integral(const pair_frame& fr, double t, const quad_options& opt) {
    angular_result res;
    const double h = fr.tau * t;
    double v_lo = -1.0, v_hi = 1.0;
    if (fr.x > 0.0 && h > 0.0) {
        v_hi = fr.pa > 0.0 ? std::min(1.0, v_limit(fr.x, h, fr.pa)) : 1.0;
        v_lo = std::max(-1.0, v_limit(fr.x, h, fr.pb));
        if (v_lo >= v_hi) return res;
    } else {
        const double p = std::hypot(fr.x, h);
        if (p < fr.pa || p > fr.pb) return res;
        const double amp = std::pow(p, fr.ea);
        // x = 0: closed kernel over the sphere
        const double k = 2.0 * pi * t * std::hypot(fr.xi_par, fr.xi_perp);
        double kern = 2.0;
        if (k > 1e-8) kern = std::sin(k) / k * 2.0;
        else kern = 2.0 * (1.0 - k * k / 6.0);
        res.val = amp * kern;  // times 2pi applied by caller
        return res;
    }
    const double p_hi = p_of_v(fr.x, h, v_lo);
    const double p_lo = p_of_v(fr.x, h, v_hi);
    const bool modulated =
        t * std::max(std::abs(fr.xi_par), std::abs(fr.xi_perp)) * 2.0 * pi > 1e-7;
    if (!modulated) {
        res.val = exact_v_integral(fr.x, h, fr.ea, p_lo, p_hi, v_lo, v_hi);
        return res;
    }
    const gl_rule& gl = gauss_legendre(opt.nodes);
    cplx acc{0.0, 0.0};
    if (fr.ea < 0.0) {
        // q-substitution; dq = (2+ea) p^{1+ea} dp, dv = -p dp/(x h)
        const double g = 2.0 + fr.ea;
        const double q0 = std::pow(p_lo, g), q1 = std::pow(p_hi, g);
        const double rate = t * std::max(std::abs(fr.xi_par), std::abs(fr.xi_perp));
        // dv/dq peaks at the outer radius; size panels for that worst case
        const double dvdq = std::pow(p_hi, -fr.ea) / (g * fr.x * h);
        const int panels =
            std::max(1, std::min(4096, static_cast<int>(std::ceil(
                                            (q1 - q0) * dvdq * rate / opt.osc_frac))));
        for (int pan = 0; pan < panels; ++pan) {
            const double a = q0 + (q1 - q0) * pan / panels;
            const double b = q0 + (q1 - q0) * (pan + 1) / panels;
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (size_t k = 0; k < gl.node.size(); ++k) {
                const double q = mid + half * gl.node[k];
                const double w = half * gl.weight[k];
                const double p = std::pow(q, 1.0 / g);
                const double v = std::clamp(v_limit(fr.x, h, p), -1.0, 1.0);
                const double sv = std::sqrt(std::max(0.0, 1.0 - v * v));
                const double arg = 2.0 * pi * t * fr.xi_perp * sv;
                const double amp = std::cyl_bessel_j(0, arg);
                const double ph = 2.0 * pi * t * fr.xi_par * v;
                acc += (w / (g * fr.x * h)) * amp * cplx{std::cos(ph), std::sin(ph)};
            }
        }
        res.val = acc;
        return res;
    }
    // ea >= 0: plain GL in v with oscillation splitting
    std::vector<double> edges{v_lo, v_hi};
    const double rate = t * std::max(std::abs(fr.xi_par), std::abs(fr.xi_perp));
    if (rate > 0.0) edges = cap_edges(edges, opt.osc_frac / rate);
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        const double mid = 0.5 * (edges[i] + edges[i + 1]);
        const double half = 0.5 * (edges[i + 1] - edges[i]);
        for (size_t k = 0; k < gl.node.size(); ++k) {
            const double v = mid + half * gl.node[k];
            const double w = half * gl.weight[k];
            const double p = p_of_v(fr.x, h, v);
            const double sv = std::sqrt(std::max(0.0, 1.0 - v * v));
            const double amp =
                std::pow(p, fr.ea) * std::cyl_bessel_j(0, 2.0 * pi * t * fr.xi_perp * sv);
            const double ph = 2.0 * pi * t * fr.xi_par * v;
            acc += w * amp * cplx{std::cos(ph), std::sin(ph)};
        }
    }
    res.val = acc;
    return res;
}

// closed form for a whole t-span when the x-offset and the oscillation are
// both negligible there: full angular window, p = tau t to machine precision
bool negligible_span(const pair_frame& fr, double a, double b) {
    const double h_lo = fr.tau * a;
    if (fr.x > 1e-8 * h_lo) return false;
    if (fr.tau * a - fr.x < fr.pa || fr.tau * b + fr.x > fr.pb) return false;
    const double arg =
        2.0 * pi * b * (std::abs(fr.xi_par) + std::abs(fr.xi_perp));
    return arg < 1e-7;
}

cplx t_integral(const pair_frame& fr, const quad_options& opt) {
    // breakpoints: A-window tangencies, the singular center x/tau, zero
    std::set<double> bset{fr.t_lo, fr.t_hi};
    auto add = [&](double t) {
        if (t > fr.t_lo && t < fr.t_hi) bset.insert(t);
    };
    for (double pr : {fr.pa, fr.pb}) {
        add((fr.x + pr) / fr.tau);
        add(std::abs(fr.x - pr) / fr.tau);
        add((pr - fr.x) / fr.tau);
    }
    if (fr.pa == 0.0 && fr.x > 0.0) add(fr.x / fr.tau);
    std::vector<double> bks(bset.begin(), bset.end());

    const gl_rule& gl = gauss_legendre(opt.nodes);
    const double rate = std::max(std::abs(fr.xi_par), std::abs(fr.xi_perp));
    cplx acc{0.0, 0.0};
    const double comb = fr.eb + fr.d - 1.0;  // radial power of t
    for (size_t i = 0; i + 1 < bks.size(); ++i) {
        const double a = bks[i], b = bks[i + 1];
        if (b - a <= 0.0) continue;
        if (negligible_span(fr, a, b)) {
            acc += full_angle(fr.d) * std::pow(fr.tau, fr.ea) *
                   power_integral(1.0, fr.ea + comb, a, b);
            continue;
        }
        std::vector<double> edges;
        if (a > 0.0 && b / a > opt.log_factor)
            edges = log_edges(a, b, opt.log_factor);
        else
            edges = {a, b};
        // dyadic refinement toward span edges (window tangency kinks)
        std::vector<double> refined;
        for (size_t j = 0; j + 1 < edges.size(); ++j) {
            const bool first = (j == 0), last = (j + 2 == edges.size());
            double e0 = edges[j], e1 = edges[j + 1];
            refined.push_back(e0);
            const double w = e1 - e0;
            if (first)
                for (int L = opt.edge_levels; L >= 1; --L)
                    refined.push_back(e0 + w * std::ldexp(1.0, -L) * 0.5);
            if (last)
                for (int L = 1; L <= opt.edge_levels; ++L)
                    refined.push_back(e1 - w * std::ldexp(1.0, -L) * 0.5);
        }
        refined.push_back(edges.back());
        std::sort(refined.begin(), refined.end());
        refined.erase(std::unique(refined.begin(), refined.end()), refined.end());
        if (rate > 0.0) refined = cap_edges(refined, opt.osc_frac / rate);
        for (size_t j = 0; j + 1 < refined.size(); ++j) {
            const double mid = 0.5 * (refined[j] + refined[j + 1]);
            const double half = 0.5 * (refined[j + 1] - refined[j]);
            for (size_t k = 0; k < gl.node.size(); ++k) {
                const double t = mid + half * gl.node[k];
                const double w = half * gl.weight[k];
                angular_result ang;
                if (fr.d == 2)
                    ang = theta_integral(fr, t, opt);
                else
                    ang = v_integral(fr, t, opt);
                const double radial = std::pow(t, comb);
                const double mult = fr.d == 3 ? 2.0 * pi : 1.0;
                acc += w * radial * mult * ang.val;
            }
        }
    }
    return acc;
}

// d=1 reduction: u = sigma t, exact subinterval splits, no angular factor
cplx t_integral_1d(const pair_frame& fr, const quad_options& opt) {
    cplx acc{0.0, 0.0};
    const gl_rule& gl = gauss_legendre(opt.nodes);
    for (int sigma = -1; sigma <= 1; sigma += 2) {
        // p = |x - tau sigma t| must lie in [pa, pb], t in [t_lo, t_hi]
        // sigma branch: solve linear inclusions exactly
        std::vector<std::pair<double, double>> segs;
        const double tt = fr.tau * sigma;
        // x - tt t in [pa, pb]  or  in [-pb, -pa]
        for (int br = 0; br < 2; ++br) {
            const double wlo = br == 0 ? fr.pa : -fr.pb;
            const double whi = br == 0 ? fr.pb : -fr.pa;
            double s0, s1;
            if (tt == 0.0) continue;
            s0 = (fr.x - whi) / tt;
            s1 = (fr.x - wlo) / tt;
            if (s0 > s1) std::swap(s0, s1);
            s0 = std::max(s0, fr.t_lo);
            s1 = std::min(s1, fr.t_hi);
            if (s0 < s1) segs.push_back({s0, s1});
        }
        for (auto [a, b] : segs) {
            std::vector<double> edges;
            if (a > 0.0 && b / a > opt.log_factor)
                edges = log_edges(a, b, opt.log_factor);
            else
                edges = {a, b};
            const double rate = std::abs(fr.xi_par);
            if (rate > 0.0) edges = cap_edges(edges, opt.osc_frac / rate);
            for (size_t j = 0; j + 1 < edges.size(); ++j) {
                const double mid = 0.5 * (edges[j] + edges[j + 1]);
                const double half = 0.5 * (edges[j + 1] - edges[j]);
                for (size_t k = 0; k < gl.node.size(); ++k) {
                    const double t = mid + half * gl.node[k];
                    const double w = half * gl.weight[k];
                    const double p = std::abs(fr.x - tt * t);
                    const double amp = std::pow(p, fr.ea) * std::pow(t, fr.eb);
                    const double ph = 2.0 * pi * fr.xi_par * sigma * t;
                    acc += w * amp * cplx{std::cos(ph), std::sin(ph)};
                }
            }
        }
    }
    return acc;
}

}  // namespace

cplx wtau_pair(const radial_shell& a, const radial_shell& b, int d, double tau,
               double absx, double xi_par, double xi_perp, const quad_options& opt) {
    const double tp = 1.0 - tau;
    pair_frame fr;
    fr.d = d;
    fr.tau = tau;
    fr.tp = tp;
    fr.ea = a.exponent;
    fr.eb = b.exponent;
    const double pa_raw = a.r_in * tp, pb_raw = a.r_out * tp;
    double lo = b.r_in, hi = b.r_out;
    lo = std::max(lo, (pa_raw - absx) / tau);
    lo = std::max(lo, (absx - pb_raw) / tau);
    hi = std::min(hi, (absx + pb_raw) / tau);
    if (!(hi > lo)) return {0.0, 0.0};
    // pair scale: exponents of the test families collapse, so s carries no
    // weight there; keep the general power for other shells
    const double s = std::max({absx, hi, pb_raw});
    const double spow_exp = fr.ea + fr.eb + d;
    double spow = std::abs(spow_exp) < 1e-13 ? 1.0 : std::pow(s, spow_exp);
    fr.x = absx / s;
    fr.pa = pa_raw / s;
    fr.pb = pb_raw / s;
    fr.t_lo = lo / s;
    fr.t_hi = hi / s;
    fr.xi_par = xi_par * s / tp;
    fr.xi_perp = xi_perp * s / tp;
    const double pref = a.coeff * b.coeff * std::pow(tp, -d - fr.ea) * spow;
    cplx raw;
    if (d == 1)
        raw = t_integral_1d(fr, opt);
    else
        raw = t_integral(fr, opt);
    // phase from the frame change: e^{-2 pi i xi.x / (1-tau)}
    const double ph = -2.0 * pi * xi_par * absx / tp;
    return pref * raw * cplx{std::cos(ph), std::sin(ph)};
}

}  // namespace detail

double wtau_fR_origin(int d, double R, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("wtau_fR_origin: tau in (0,1)");
    if (!(R >= 1.0)) throw std::invalid_argument("wtau_fR_origin: R >= 1");
    const double s = std::min(tau, 1.0 - tau);
    if (s * (R + 1.0) <= 1.0) return 0.0;
    return omega(d) * std::pow(tau * (1.0 - tau), -0.5 * d) *
           std::log(R * s / (1.0 - s));
}

double truncation_radius(const radial_profile& f, const radial_profile& g, double tau,
                         double absx) {
    const double r0 = f.support_radius(), r1 = g.support_radius();
    return std::min(1.0 / tau, 1.0 / (1.0 - tau)) * (r0 + r1 + 2.0 * absx);
}

namespace {

// exact value at x = xi = 0: the pair integral is a pure power in t
cplx wtau_center_exact(const radial_profile& f, const radial_profile& g, double tau) {
    const double tp = 1.0 - tau;
    double acc = 0.0;
    for (const auto& a : f.shells)
        for (const auto& b : g.shells) {
            const double lo = std::max(a.r_in / tau, b.r_in / tp);
            const double hi = std::min(a.r_out / tau, b.r_out / tp);
            if (hi <= lo) continue;
            // integrand over y: cA (tau y)^{ea} cB (tp y)^{eb} y^{d-1}
            const double c = a.coeff * b.coeff * std::pow(tau, a.exponent) *
                             std::pow(tp, b.exponent);
            acc += omega(f.d) * power_integral(c, a.exponent + b.exponent + f.d - 1, lo, hi);
        }
    return {acc, 0.0};
}

struct geom_split {
    double absx = 0.0, xi_par = 0.0, xi_perp = 0.0;
};

geom_split split_geometry(int d, const phase_point& z) {
    geom_split g;
    g.absx = norm(z.x, d);
    if (g.absx > 0.0) {
        double par = dot(z.x, z.xi, d) / g.absx;
        double n2 = dot(z.xi, z.xi, d) - par * par;
        g.xi_par = par;
        g.xi_perp = std::sqrt(std::max(0.0, n2));
    } else {
        g.xi_par = norm(z.xi, d);
        g.xi_perp = 0.0;
    }
    return g;
}

cplx wtau_reduced(const radial_profile& f, const radial_profile& g, double tau,
                  const phase_point& z, const quad_options& opt) {
    const geom_split gs = split_geometry(f.d, z);
    cplx acc{0.0, 0.0};
    for (const auto& a : f.shells)
        for (const auto& b : g.shells) {
            if (!detail::pair_active(a, b, f.d, gs.absx, tau)) continue;
            acc += detail::wtau_pair(a, b, f.d, tau, gs.absx, gs.xi_par, gs.xi_perp, opt);
        }
    return acc;
}

// ---------- cartesian tensor-panel engine ----------

struct sphere {
    vec3 c;
    double r = 0.0;
};

struct cart_ctx {
    int d = 2;
    const radial_shell* a = nullptr;
    const radial_shell* b = nullptr;
    double tau = 0.0, tp = 0.0;
    vec3 xc_a, xc_b;  // centers of the two factor spheres in y
    std::vector<sphere> jumps;
    std::vector<vec3> sing;  // singular centers (power blowup)
    vec3 xi;
    const quad_options* opt = nullptr;
};

double box_min_dist(const vec3& c, const double* lo, const double* hi, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        const double dx = std::max({lo[i] - c[i], c[i] - hi[i], 0.0});
        s += dx * dx;
    }
    return std::sqrt(s);
}

double box_max_dist(const vec3& c, const double* lo, const double* hi, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        const double dx = std::max(std::abs(c[i] - lo[i]), std::abs(c[i] - hi[i]));
        s += dx * dx;
    }
    return std::sqrt(s);
}

cplx leaf_integral(const cart_ctx& cx, const double* lo, const double* hi, int nodes) {
    const gl_rule& gl = gauss_legendre(nodes);
    const int n = static_cast<int>(gl.node.size());
    cplx acc{0.0, 0.0};
    const int total = cx.d == 1 ? n : (cx.d == 2 ? n * n : n * n * n);
    for (int idx = 0; idx < total; ++idx) {
        int ii = idx;
        vec3 y;
        double w = 1.0;
        for (int ax = 0; ax < cx.d; ++ax) {
            const int k = ii % n;
            ii /= n;
            const double mid = 0.5 * (lo[ax] + hi[ax]), half = 0.5 * (hi[ax] - lo[ax]);
            y[ax] = mid + half * gl.node[k];
            w *= half * gl.weight[k];
        }
        vec3 wa, wb;
        for (int ax = 0; ax < cx.d; ++ax) {
            wa[ax] = y[ax] - cx.xc_a[ax];
            wb[ax] = y[ax] - cx.xc_b[ax];
        }
        const double pa = norm(wa, cx.d) * cx.tau;   // |x + tau y|
        const double pb = norm(wb, cx.d) * cx.tp;    // |x - (1-tau) y|
        if (pa < cx.a->r_in || pa > cx.a->r_out) continue;
        if (pb < cx.b->r_in || pb > cx.b->r_out) continue;
        double amp = cx.a->coeff * std::pow(pa, cx.a->exponent) * cx.b->coeff *
                     std::pow(pb, cx.b->exponent);
        const double ph = -2.0 * pi * dot(cx.xi, y, cx.d);
        acc += w * amp * cplx{std::cos(ph), std::sin(ph)};
    }
    return acc;
}

void cart_cell(const cart_ctx& cx, const double* lo, const double* hi, int depth,
               cplx& acc, double& crossed_mass) {
    // prune: cell outside either factor's support annulus
    const double da_min = box_min_dist(cx.xc_a, lo, hi, cx.d) * cx.tau;
    const double da_max = box_max_dist(cx.xc_a, lo, hi, cx.d) * cx.tau;
    if (da_max < cx.a->r_in || da_min > cx.a->r_out) return;
    const double db_min = box_min_dist(cx.xc_b, lo, hi, cx.d) * cx.tp;
    const double db_max = box_max_dist(cx.xc_b, lo, hi, cx.d) * cx.tp;
    if (db_max < cx.b->r_in || db_min > cx.b->r_out) return;

    bool crossed = false;
    for (const auto& sp : cx.jumps) {
        const double dmin = box_min_dist(sp.c, lo, hi, cx.d);
        const double dmax = box_max_dist(sp.c, lo, hi, cx.d);
        if (dmin <= sp.r && sp.r <= dmax) {
            crossed = true;
            break;
        }
    }
    double diag = 0.0;
    for (int i = 0; i < cx.d; ++i) diag += (hi[i] - lo[i]) * (hi[i] - lo[i]);
    diag = std::sqrt(diag);
    bool graded = false;
    for (const auto& c : cx.sing) {
        const double dist = box_min_dist(c, lo, hi, cx.d);
        if (diag > 0.35 * std::max(dist, 1e-300) && depth < 40) {
            graded = true;
            break;
        }
    }
    bool osc = false;
    for (int i = 0; i < cx.d; ++i)
        if ((hi[i] - lo[i]) * std::abs(cx.xi[i]) > cx.opt->osc_frac && depth < 40) osc = true;

    if ((crossed && depth < cx.opt->jump_depth) || graded || osc) {
        // split along the longest axis pair-wise (full dyadic split)
        double mid[3];
        for (int i = 0; i < cx.d; ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
        const int parts = 1 << cx.d;
        for (int m = 0; m < parts; ++m) {
            double l2[3], h2[3];
            for (int i = 0; i < cx.d; ++i) {
                if (m & (1 << i)) {
                    l2[i] = mid[i];
                    h2[i] = hi[i];
                } else {
                    l2[i] = lo[i];
                    h2[i] = mid[i];
                }
            }
            cart_cell(cx, l2, h2, depth + 1, acc, crossed_mass);
        }
        return;
    }
    const cplx v = leaf_integral(cx, lo, hi, 4);
    acc += v;
    if (crossed) crossed_mass += std::abs(v);
}

wtau_result wtau_cartesian(const radial_profile& f, const radial_profile& g, double tau,
                           const phase_point& z, const quad_options& opt) {
    wtau_result out;
    const double tp = 1.0 - tau;
    for (const auto& a : f.shells)
        for (const auto& b : g.shells) {
            cart_ctx cx;
            cx.d = f.d;
            cx.a = &a;
            cx.b = &b;
            cx.tau = tau;
            cx.tp = tp;
            cx.opt = &opt;
            cx.xi = z.xi;
            for (int i = 0; i < cx.d; ++i) {
                cx.xc_a[i] = -z.x[i] / tau;
                cx.xc_b[i] = z.x[i] / tp;
            }
            if (a.r_in > 0.0) cx.jumps.push_back({cx.xc_a, a.r_in / tau});
            cx.jumps.push_back({cx.xc_a, a.r_out / tau});
            if (b.r_in > 0.0) cx.jumps.push_back({cx.xc_b, b.r_in / tp});
            cx.jumps.push_back({cx.xc_b, b.r_out / tp});
            // power-law variation concentrates near the factor centers, so a
            // graded mesh toward them keeps the per-cell relative spread flat
            if (a.exponent != 0.0) cx.sing.push_back(cx.xc_a);
            if (b.exponent != 0.0) cx.sing.push_back(cx.xc_b);
            // bounding box: intersection of the two outer-ball boxes
            double lo[3], hi[3];
            bool empty = false;
            for (int i = 0; i < cx.d; ++i) {
                lo[i] = std::max(cx.xc_a[i] - a.r_out / tau, cx.xc_b[i] - b.r_out / tp);
                hi[i] = std::min(cx.xc_a[i] + a.r_out / tau, cx.xc_b[i] + b.r_out / tp);
                if (!(hi[i] > lo[i])) empty = true;
            }
            if (empty) continue;
            // initial panels split at the sphere extent planes per axis
            std::vector<double> cuts[3];
            long panels = 1;
            for (int i = 0; i < cx.d; ++i) {
                std::set<double> cs{lo[i], hi[i]};
                for (const auto& sp : cx.jumps)
                    for (double c : {sp.c[i] - sp.r, sp.c[i] + sp.r})
                        if (c > lo[i] && c < hi[i]) cs.insert(c);
                cuts[i].assign(cs.begin(), cs.end());
                panels *= static_cast<long>(cuts[i].size()) - 1;
            }
            double crossed_mass = 0.0;
            cplx acc{0.0, 0.0};
            for (long pidx = 0; pidx < panels; ++pidx) {
                long ii = pidx;
                double plo[3], phi[3];
                for (int i = 0; i < cx.d; ++i) {
                    const long k = ii % (cuts[i].size() - 1);
                    ii /= cuts[i].size() - 1;
                    plo[i] = cuts[i][k];
                    phi[i] = cuts[i][k + 1];
                }
                cart_cell(cx, plo, phi, 0, acc, crossed_mass);
            }
            out.value += acc;
            out.abs_error += crossed_mass * std::pow(0.5, opt.jump_depth);
        }
    return out;
}

}  // namespace

wtau_result wtau_point(const radial_profile& f, const radial_profile& g, double tau,
                       const phase_point& z, const quad_options& opt) {
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("wtau_point: tau must lie in (0,1)");
    if (f.d != g.d) throw std::invalid_argument("wtau_point: dimension mismatch");
    if (opt.cartesian) return wtau_cartesian(f, g, tau, z, opt);
    if (tau > 0.5) {
        // conjugate flip onto the well-conditioned half of the reduction
        wtau_result r = wtau_point(g, f, 1.0 - tau, z, opt);
        r.value = std::conj(r.value);
        return r;
    }
    wtau_result out;
    const double absx = norm(z.x, f.d), absxi = norm(z.xi, f.d);
    if (absx == 0.0 && absxi == 0.0) {
        out.value = wtau_center_exact(f, g, tau);
        out.abs_error = std::abs(out.value) * 1e-15;
        return out;
    }
    out.value = wtau_reduced(f, g, tau, z, opt);
    if (opt.error_estimate) {
        quad_options o2 = opt;
        o2.nodes = std::max(4, opt.nodes / 2);
        o2.edge_levels = std::max(3, opt.edge_levels - 2);
        const cplx v2 = wtau_reduced(f, g, tau, z, o2);
        out.abs_error = std::abs(out.value - v2);
    }
    return out;
}

// ---------- sampled signals ----------

cplx sampled_signal::interp(const vec3& p) const {
    int i0[3] = {0, 0, 0};
    double fr[3] = {0.0, 0.0, 0.0};
    for (int ax = 0; ax < d; ++ax) {
        const double u = (p[ax] - lo[ax]) / h;
        const double fl = std::floor(u);
        i0[ax] = static_cast<int>(fl);
        fr[ax] = u - fl;
        if (i0[ax] < -1 || i0[ax] > n - 1) return {0.0, 0.0};
    }
    cplx acc{0.0, 0.0};
    const int corners = 1 << d;
    for (int m = 0; m < corners; ++m) {
        double w = 1.0;
        long idx = 0;
        bool inside = true;
        for (int ax = 0; ax < d; ++ax) {
            const int bit = (m >> ax) & 1;
            const int i = i0[ax] + bit;
            if (i < 0 || i >= n) {
                inside = false;
                break;
            }
            w *= bit ? fr[ax] : 1.0 - fr[ax];
            idx = idx * n + i;
        }
        if (inside && w != 0.0) acc += w * values[idx];
    }
    return acc;
}

double sampled_signal::l2_norm_squared() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    for (int ax = 0; ax < d; ++ax) s *= h;
    return s;
}

wtau_result wtau_point(const sampled_signal& f, const sampled_signal& g, double tau,
                       const phase_point& z, const quad_options& opt) {
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("wtau_point: tau must lie in (0,1)");
    if (f.d != g.d) throw std::invalid_argument("wtau_point: dimension mismatch");
    const double tp = 1.0 - tau;
    // y-cube on which both interpolants can be nonzero
    const int d = f.d;
    double lo[3], hi[3];
    for (int ax = 0; ax < d; ++ax) {
        const double fa0 = (f.lo[ax] - z.x[ax]) / tau;
        const double fa1 = (f.lo[ax] + f.h * (f.n - 1) - z.x[ax]) / tau;
        const double gb0 = (z.x[ax] - (g.lo[ax] + g.h * (g.n - 1))) / tp;
        const double gb1 = (z.x[ax] - g.lo[ax]) / tp;
        lo[ax] = std::max(std::min(fa0, fa1), std::min(gb0, gb1));
        hi[ax] = std::min(std::max(fa0, fa1), std::max(gb0, gb1));
        if (!(hi[ax] > lo[ax])) return {};
    }
    // GL-2 per interpolation cell of the finer grid, capped for oscillation
    const double cell = std::min(f.h / tau, g.h / tp);
    wtau_result out;
    const gl_rule& gl = gauss_legendre(2);
    std::vector<std::vector<double>> nodes(d), weights(d);
    for (int ax = 0; ax < d; ++ax) {
        double step = cell;
        if (std::abs(z.xi[ax]) > 0.0)
            step = std::min(step, opt.osc_frac / std::abs(z.xi[ax]));
        const int k = std::max(1, static_cast<int>(std::ceil((hi[ax] - lo[ax]) / step)));
        for (int j = 0; j < k; ++j)
            map_rule(gl, lo[ax] + (hi[ax] - lo[ax]) * j / k,
                     lo[ax] + (hi[ax] - lo[ax]) * (j + 1) / k, nodes[ax], weights[ax]);
    }
    long total = 1;
    for (int ax = 0; ax < d; ++ax) total *= static_cast<long>(nodes[ax].size());
    cplx acc{0.0, 0.0};
    for (long idx = 0; idx < total; ++idx) {
        long ii = idx;
        vec3 y;
        double w = 1.0;
        for (int ax = 0; ax < d; ++ax) {
            const long k = ii % nodes[ax].size();
            ii /= nodes[ax].size();
            y[ax] = nodes[ax][k];
            w *= weights[ax][k];
        }
        vec3 pa, pb;
        for (int ax = 0; ax < d; ++ax) {
            pa[ax] = z.x[ax] + tau * y[ax];
            pb[ax] = z.x[ax] - tp * y[ax];
        }
        const cplx fv = f.interp(pa);
        if (fv == cplx{0.0, 0.0}) continue;
        const cplx gv = g.interp(pb);
        if (gv == cplx{0.0, 0.0}) continue;
        const double ph = -2.0 * pi * dot(z.xi, y, d);
        acc += w * fv * std::conj(gv) * cplx{std::cos(ph), std::sin(ph)};
    }
    out.value = acc;
    return out;
}

}  // namespace bjlab
