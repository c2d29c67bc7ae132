#pragma once
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "bjlab/bornjordan.hpp"
#include "bjlab/families.hpp"

namespace bjlab {

// axis-aligned box in phase space R^{2d}, corners listed x-axes first
struct omega_box {
    std::vector<double> lo, hi;
    double volume() const;
};

// finite union of pairwise disjoint boxes
struct omega_set {
    int dimension = 2;  // 2d
    std::vector<omega_box> boxes;

    double measure() const;
    bool contains(const std::array<double, 6>& c) const;
};

// throws unless every box is non-degenerate, dimensions agree, interiors are
// pairwise disjoint and the total measure is positive and finite
void validate_omega(const omega_set& omega);

// center of the largest box; ties go to the lowest index
phase_point density_point(const omega_set& omega);

// uniform cell grid over a box in R^{2d}; samples live at cell centers
struct phase_grid {
    int d = 1;
    std::array<double, 6> lo{};
    std::array<double, 6> hi{};
    std::array<int, 6> n{};

    int axes() const { return 2 * d; }
    double step(int a) const { return (hi[a] - lo[a]) / n[a]; }
    double cell_volume() const;
    std::size_t size() const;
    phase_point point(std::size_t flat) const;  // cell center, row-major
};

// symmetric cube [-half, half]^{2d} with nc cells per axis
phase_grid cube_grid(int d, double half, int nc);

// the window B(x0, 1) x B(xi0, 1/(9R)) around c; odd counts keep c on-grid
phase_grid shrink_window_grid(int d, const phase_point& c, double R, int nx, int nxi);

// cell-center samples of a phase-space distribution on a grid
struct phase_field {
    phase_grid grid;
    std::vector<cplx> values;
    std::string provenance;
    double max_tail = 0.0;  // largest certified quadrature tail over the samples
};

struct field_options {
    tau_quadrature_spec tau_spec{};
    quad_options quad{};
    phase_point shift{};  // samples the transform at z - shift (shifted input)
    double delta = 0.0;   // > 0 restricts the tau integral to [delta, 1-delta]
};

// full-transform samples of a radial profile over the grid
phase_field sample_profile_field(const radial_profile& f, const phase_grid& grid,
                                 const field_options& opt = {});

// samples of an arbitrary evaluator (closed forms, dictionary fields)
phase_field sample_field(int d, const std::function<cplx(const phase_point&)>& eval,
                         const phase_grid& grid);

struct concentration_report {
    double p = 2.0;
    double value = 0.0;
    double ratio = 0.0;  // value / squared input norm, exactly
    int resolution = 0;  // finest cell count over the axes
    double error = 0.0;  // propagated quadrature tail estimate
};

// Riemann p-norm over the cells whose centers lie in omega; max for p = inf.
// throws when omega misses the grid box entirely or p < 1
double lp_norm_on_omega(const phase_field& field, const omega_set& omega, double p);

// ratio report from a precomputed field and the exact squared norm
concentration_report concentration_ratio_field(const phase_field& field, double norm_squared,
                                               const omega_set& omega, double p);

// end-to-end ratio for a radial profile; rejects the zero profile
concentration_report concentration_ratio(const radial_profile& f, const omega_set& omega,
                                         double p, const phase_grid& grid,
                                         const field_options& opt = {});

struct scan_options {
    int nx = 3;   // cells per position axis, odd
    int nxi = 5;  // cells per shrinking frequency axis, odd, at least 5
    tau_quadrature_spec tau_spec{};
    quad_options quad{};
};

struct blowup_row {
    double R = 0.0;
    double center_value = 0.0;  // |transform| at the window center
    double center_ratio = 0.0;
    double value = 0.0;  // p-norm over the shrinking window, max for p = inf
    double ratio = 0.0;
};

struct blowup_table {
    double p = 0.0;
    std::vector<blowup_row> rows;
    double fitted_exponent = 0.0;  // slope of log(ratio log R) against log R
    double fitted_rate = 0.0;      // exp of the fitted intercept
};

// growth of the annulus family concentration around the density point of
// omega; requires p beyond the critical exponent (or p = inf in d = 2),
// bounded subcritical scans are rejected
blowup_table blowup_scan(int d, double p, const omega_set& omega,
                         const std::vector<double>& R_list, const scan_options& opt = {});

struct delta_row {
    double delta = 0.0;
    double R = 0.0;      // 1/delta - 2
    double value = 0.0;  // on-center truncated transform
    double ratio = 0.0;
    double normalized = 0.0;  // ratio / log(1/delta)
};

struct delta_table {
    std::vector<delta_row> rows;
};

// truncated-transform growth in d = 2 as delta -> 0; deltas must lie in
// (0, 1/3]; a window degenerate at R <= 1 reports the limiting zero row
delta_table delta_scan(const omega_set& omega, const std::vector<double>& deltas,
                       const scan_options& opt = {});

struct vanishing_row {
    double magnitude = 0.0;
    double value = 0.0;
};

struct vanishing_table {
    std::vector<vanishing_row> rows;
};

// p-norms over omega of the transform of inputs shifted off to infinity;
// requires subcritical p. the shift of size s moves x_1 and xi_1 by s/sqrt(2)
vanishing_table translation_vanishing(int d,
                                      const std::function<cplx(const phase_point&)>& centered,
                                      const omega_set& omega, double p,
                                      const std::vector<double>& magnitudes,
                                      const phase_grid& grid);

// radial-profile convenience wrapper around the evaluator form
vanishing_table translation_vanishing(const radial_profile& phi, const omega_set& omega,
                                      double p, const std::vector<double>& magnitudes,
                                      const phase_grid& grid, const field_options& opt = {});

}  // namespace bjlab
