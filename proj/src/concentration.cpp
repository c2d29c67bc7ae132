#include "bjlab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bjlab {

namespace {

std::array<double, 6> flat_coords(const phase_point& z, int d) {
    std::array<double, 6> c{};
    for (int i = 0; i < d; ++i) {
        c[i] = z.x[i];
        c[d + i] = z.xi[i];
    }
    return c;
}

void validate_grid(const phase_grid& g, const char* who) {
    if (g.d < 1 || g.d > 3) throw std::invalid_argument(std::string(who) + ": dimension must be 1..3");
    for (int a = 0; a < g.axes(); ++a) {
        if (g.n[a] < 1) throw std::invalid_argument(std::string(who) + ": empty grid axis");
        if (!(g.hi[a] > g.lo[a]) || !std::isfinite(g.lo[a]) || !std::isfinite(g.hi[a]))
            throw std::invalid_argument(std::string(who) + ": degenerate grid axis");
    }
}

void check_p(double p, const char* who) {
    if (std::isnan(p) || p < 1.0)
        throw std::invalid_argument(std::string(who) + ": p must lie in [1, inf]");
}

// least squares slope/intercept of y against x
void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& slope,
              double& intercept) {
    slope = 0.0;
    intercept = 0.0;
    const std::size_t n = x.size();
    if (n < 2) return;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) return;
    slope = (n * sxy - sx * sy) / det;
    intercept = (sy - slope * sx) / n;
}

}  // namespace

double omega_box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
}

double omega_set::measure() const {
    double m = 0.0;
    for (const auto& b : boxes) m += b.volume();
    return m;
}

bool omega_set::contains(const std::array<double, 6>& c) const {
    for (const auto& b : boxes) {
        bool in = true;
        for (std::size_t i = 0; i < b.lo.size(); ++i)
            if (c[i] < b.lo[i] || c[i] > b.hi[i]) {
                in = false;
                break;
            }
        if (in) return true;
    }
    return false;
}

void validate_omega(const omega_set& omega) {
    if (omega.dimension != 2 && omega.dimension != 4 && omega.dimension != 6)
        throw std::invalid_argument("omega_set: dimension must be 2, 4 or 6");
    if (omega.boxes.empty()) throw std::invalid_argument("omega_set: no boxes");
    for (const auto& b : omega.boxes) {
        if (static_cast<int>(b.lo.size()) != omega.dimension ||
            static_cast<int>(b.hi.size()) != omega.dimension)
            throw std::invalid_argument("omega_set: corner length mismatch");
        for (int i = 0; i < omega.dimension; ++i)
            if (!(b.hi[i] > b.lo[i]) || !std::isfinite(b.lo[i]) || !std::isfinite(b.hi[i]))
                throw std::invalid_argument("omega_set: degenerate box");
    }
    for (std::size_t a = 0; a + 1 < omega.boxes.size(); ++a)
        for (std::size_t b = a + 1; b < omega.boxes.size(); ++b) {
            bool overlap = true;
            for (int i = 0; i < omega.dimension; ++i)
                if (!(omega.boxes[a].lo[i] < omega.boxes[b].hi[i] &&
                      omega.boxes[b].lo[i] < omega.boxes[a].hi[i])) {
                    overlap = false;
                    break;
                }
            if (overlap) throw std::invalid_argument("omega_set: box interiors overlap");
        }
    const double m = omega.measure();
    if (!(m > 0.0) || !std::isfinite(m))
        throw std::invalid_argument("omega_set: measure must be positive and finite");
}

phase_point density_point(const omega_set& omega) {
    validate_omega(omega);
    std::size_t best = 0;
    double best_vol = omega.boxes[0].volume();
    for (std::size_t i = 1; i < omega.boxes.size(); ++i) {
        const double v = omega.boxes[i].volume();
        if (v > best_vol) {
            best = i;
            best_vol = v;
        }
    }
    const int d = omega.dimension / 2;
    const auto& b = omega.boxes[best];
    phase_point z;
    for (int i = 0; i < d; ++i) {
        z.x[i] = 0.5 * (b.lo[i] + b.hi[i]);
        z.xi[i] = 0.5 * (b.lo[d + i] + b.hi[d + i]);
    }
    return z;
}

double phase_grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < axes(); ++a) v *= step(a);
    return v;
}

std::size_t phase_grid::size() const {
    std::size_t s = 1;
    for (int a = 0; a < axes(); ++a) s *= static_cast<std::size_t>(n[a]);
    return s;
}

phase_point phase_grid::point(std::size_t flat) const {
    std::array<int, 6> idx{};
    for (int a = axes() - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n[a]));
        flat /= static_cast<std::size_t>(n[a]);
    }
    phase_point z;
    for (int i = 0; i < d; ++i) {
        z.x[i] = lo[i] + (idx[i] + 0.5) * step(i);
        z.xi[i] = lo[d + i] + (idx[d + i] + 0.5) * step(d + i);
    }
    return z;
}

phase_grid cube_grid(int d, double half, int nc) {
    phase_grid g;
    g.d = d;
    for (int a = 0; a < 2 * d; ++a) {
        g.lo[a] = -half;
        g.hi[a] = half;
        g.n[a] = nc;
    }
    validate_grid(g, "cube_grid");
    return g;
}

phase_grid shrink_window_grid(int d, const phase_point& c, double R, int nx, int nxi) {
    if (!(R > 0.0)) throw std::invalid_argument("shrink_window_grid: R must be positive");
    phase_grid g;
    g.d = d;
    const double hxi = 1.0 / (9.0 * R);
    for (int i = 0; i < d; ++i) {
        g.lo[i] = c.x[i] - 1.0;
        g.hi[i] = c.x[i] + 1.0;
        g.n[i] = nx;
        g.lo[d + i] = c.xi[i] - hxi;
        g.hi[d + i] = c.xi[i] + hxi;
        g.n[d + i] = nxi;
    }
    validate_grid(g, "shrink_window_grid");
    return g;
}

phase_field sample_profile_field(const radial_profile& f, const phase_grid& grid,
                                 const field_options& opt) {
    validate_grid(grid, "sample_profile_field");
    if (grid.d != f.d) throw std::invalid_argument("sample_profile_field: dimension mismatch");
    phase_field field;
    field.grid = grid;
    field.values.resize(grid.size());
    field.provenance = opt.delta > 0.0 ? "truncated transform of a radial profile"
                                       : "full transform of a radial profile";
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        phase_point z = grid.point(i);
        for (int a = 0; a < grid.d; ++a) {
            z.x[a] -= opt.shift.x[a];
            z.xi[a] -= opt.shift.xi[a];
        }
        const bj_result r = opt.delta > 0.0
                                ? bj_incomplete_point(f, f, z, opt.delta, opt.tau_spec, opt.quad)
                                : bj_point(f, f, z, opt.tau_spec, opt.quad);
        if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
            throw std::runtime_error("sample_profile_field: non-finite sample");
        field.values[i] = r.value;
        field.max_tail = std::max(field.max_tail, r.tail_bound);
    }
    return field;
}

phase_field sample_field(int d, const std::function<cplx(const phase_point&)>& eval,
                         const phase_grid& grid) {
    validate_grid(grid, "sample_field");
    if (grid.d != d) throw std::invalid_argument("sample_field: dimension mismatch");
    phase_field field;
    field.grid = grid;
    field.values.resize(grid.size());
    field.provenance = "sampled evaluator";
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const cplx v = eval(grid.point(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::runtime_error("sample_field: non-finite sample");
        field.values[i] = v;
    }
    return field;
}

double lp_norm_on_omega(const phase_field& field, const omega_set& omega, double p) {
    validate_grid(field.grid, "lp_norm_on_omega");
    validate_omega(omega);
    check_p(p, "lp_norm_on_omega");
    if (omega.dimension != 2 * field.grid.d)
        throw std::invalid_argument("lp_norm_on_omega: dimension mismatch");
    // reject a region that misses the sampled box entirely
    bool meets = false;
    for (const auto& b : omega.boxes) {
        bool hit = true;
        for (int a = 0; a < field.grid.axes(); ++a)
            if (!(b.lo[a] < field.grid.hi[a] && field.grid.lo[a] < b.hi[a])) {
                hit = false;
                break;
            }
        if (hit) {
            meets = true;
            break;
        }
    }
    if (!meets)
        throw std::invalid_argument("lp_norm_on_omega: omega does not meet the field domain");

    const bool inf_p = std::isinf(p);
    double acc = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const auto c = flat_coords(field.grid.point(i), field.grid.d);
        if (!omega.contains(c)) continue;
        const double a = std::abs(field.values[i]);
        if (inf_p)
            peak = std::max(peak, a);
        else
            acc += std::pow(a, p);
    }
    if (inf_p) return peak;
    return std::pow(field.grid.cell_volume() * acc, 1.0 / p);
}

concentration_report concentration_ratio_field(const phase_field& field, double norm_squared,
                                               const omega_set& omega, double p) {
    if (!(norm_squared > 0.0) || !std::isfinite(norm_squared))
        throw std::invalid_argument("concentration_ratio_field: input norm must be positive");
    concentration_report rep;
    rep.p = p;
    rep.value = lp_norm_on_omega(field, omega, p);
    rep.ratio = rep.value / norm_squared;
    for (int a = 0; a < field.grid.axes(); ++a) rep.resolution = std::max(rep.resolution, field.grid.n[a]);
    if (std::isinf(p))
        rep.error = field.max_tail;
    else
        rep.error = field.max_tail *
                    std::pow(std::min(omega.measure(),
                                      field.grid.cell_volume() * double(field.grid.size())),
                             1.0 / p);
    return rep;
}

concentration_report concentration_ratio(const radial_profile& f, const omega_set& omega,
                                         double p, const phase_grid& grid,
                                         const field_options& opt) {
    const double n2 = l2_norm_squared(f);
    if (!(n2 > 0.0)) throw std::invalid_argument("concentration_ratio: zero profile");
    const phase_field field = sample_profile_field(f, grid, opt);
    return concentration_ratio_field(field, n2, omega, p);
}

blowup_table blowup_scan(int d, double p, const omega_set& omega,
                         const std::vector<double>& R_list, const scan_options& opt) {
    if (d < 1 || d > 3) throw std::invalid_argument("blowup_scan: dimension must be 1..3");
    validate_omega(omega);
    if (omega.dimension != 2 * d) throw std::invalid_argument("blowup_scan: dimension mismatch");
    check_p(p, "blowup_scan");
    const bool supercritical = p > critical_exponent(d) || (d == 2 && std::isinf(p));
    if (!supercritical)
        throw std::invalid_argument(
            "blowup_scan: subcritical p stays bounded; use concentration_ratio");
    if (opt.nx < 1 || opt.nx % 2 == 0)
        throw std::invalid_argument("blowup_scan: nx must be odd and positive");
    if (opt.nxi < 5 || opt.nxi % 2 == 0)
        throw std::invalid_argument("blowup_scan: nxi must be odd and at least 5");

    const phase_point z0 = density_point(omega);
    blowup_table table;
    table.p = p;
    field_options fopt;
    fopt.tau_spec = opt.tau_spec;
    fopt.quad = opt.quad;
    fopt.shift = z0;
    for (double R : R_list) {
        if (!(R > 1.0)) throw std::invalid_argument("blowup_scan: R must exceed 1");
        const radial_profile f = f_R_profile(d, R);
        const double n2 = l2_norm_squared(f);
        const phase_grid grid = shrink_window_grid(d, z0, R, opt.nx, opt.nxi);
        const phase_field field = sample_profile_field(f, grid, fopt);
        std::size_t center = 0;
        for (int a = 0; a < grid.axes(); ++a)
            center = center * static_cast<std::size_t>(grid.n[a]) +
                     static_cast<std::size_t>(grid.n[a] / 2);
        blowup_row row;
        row.R = R;
        row.center_value = std::abs(field.values[center]);
        row.center_ratio = row.center_value / n2;
        row.value = lp_norm_on_omega(field, omega, p);
        row.ratio = row.value / n2;
        table.rows.push_back(row);
    }
    std::vector<double> xs, ys;
    for (const auto& r : table.rows)
        if (r.ratio > 0.0) {
            xs.push_back(std::log(r.R));
            ys.push_back(std::log(r.ratio * std::log(r.R)));
        }
    double slope = 0.0, intercept = 0.0;
    fit_line(xs, ys, slope, intercept);
    table.fitted_exponent = slope;
    table.fitted_rate = std::exp(intercept);
    return table;
}

delta_table delta_scan(const omega_set& omega, const std::vector<double>& deltas,
                       const scan_options& opt) {
    validate_omega(omega);
    if (omega.dimension != 4) throw std::invalid_argument("delta_scan: needs d = 2 phase space");
    density_point(omega);  // precondition: a usable center exists
    delta_table table;
    for (double delta : deltas) {
        if (!(delta > 0.0) || delta > 1.0 / 3.0 + 1e-15)
            throw std::invalid_argument("delta_scan: delta must lie in (0, 1/3]");
        delta_row row;
        row.delta = delta;
        row.R = 1.0 / delta - 2.0;
        if (row.R > 1.0) {
            const radial_profile f = f_R_profile(2, row.R);
            const double n2 = l2_norm_squared(f);
            const bj_result r =
                bj_incomplete_point(f, f, phase_point{}, delta, opt.tau_spec, opt.quad);
            row.value = std::abs(r.value);
            row.ratio = row.value / n2;
            row.normalized = row.ratio / std::log(1.0 / delta);
        }
        // R <= 1 leaves the zero row, the limit value at the delta = 1/3 edge
        table.rows.push_back(row);
    }
    return table;
}

vanishing_table translation_vanishing(int d,
                                      const std::function<cplx(const phase_point&)>& centered,
                                      const omega_set& omega, double p,
                                      const std::vector<double>& magnitudes,
                                      const phase_grid& grid) {
    if (d < 1 || d > 3)
        throw std::invalid_argument("translation_vanishing: dimension must be 1..3");
    validate_omega(omega);
    if (omega.dimension != 2 * d)
        throw std::invalid_argument("translation_vanishing: dimension mismatch");
    check_p(p, "translation_vanishing");
    if (!(p < critical_exponent(d)))
        throw std::invalid_argument(
            "translation_vanishing: needs subcritical p, norms do not vanish otherwise");
    vanishing_table table;
    for (double s : magnitudes) {
        if (!(s >= 0.0)) throw std::invalid_argument("translation_vanishing: negative shift");
        const double comp = s / std::sqrt(2.0);
        const auto field = sample_field(d,
                                        [&](const phase_point& z) {
                                            phase_point w = z;
                                            w.x[0] -= comp;
                                            w.xi[0] -= comp;
                                            return centered(w);
                                        },
                                        grid);
        vanishing_row row;
        row.magnitude = s;
        row.value = lp_norm_on_omega(field, omega, p);
        table.rows.push_back(row);
    }
    return table;
}

vanishing_table translation_vanishing(const radial_profile& phi, const omega_set& omega,
                                      double p, const std::vector<double>& magnitudes,
                                      const phase_grid& grid, const field_options& opt) {
    auto centered = [&phi, &opt](const phase_point& z) {
        const bj_result r = opt.delta > 0.0
                                ? bj_incomplete_point(phi, phi, z, opt.delta, opt.tau_spec, opt.quad)
                                : bj_point(phi, phi, z, opt.tau_spec, opt.quad);
        return r.value;
    };
    return translation_vanishing(phi.d, centered, omega, p, magnitudes, grid);
}

}  // namespace bjlab
