#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bjlab/dominance.hpp"
#include "bjlab/io.hpp"
#include "json.hpp"

namespace {

using namespace bjlab;
using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

omega_box cube_box(int dimension, double half) {
    omega_box b;
    b.lo.assign(dimension, -half);
    b.hi.assign(dimension, half);
    return b;
}

omega_set cube_omega(int dimension, double half) {
    omega_set o;
    o.dimension = dimension;
    o.boxes.push_back(cube_box(dimension, half));
    return o;
}

// |x| <= 1 crossed with the shrinking frequency ball of the window bound
omega_set corollary_window(int d, double R) {
    omega_set o;
    o.dimension = 2 * d;
    omega_box b;
    b.lo.assign(2 * d, -1.0);
    b.hi.assign(2 * d, 1.0);
    for (int i = d; i < 2 * d; ++i) {
        b.lo[i] = -1.0 / (9.0 * R);
        b.hi[i] = 1.0 / (9.0 * R);
    }
    o.boxes.push_back(b);
    return o;
}

omega_set resolve_omega(const run_config& c, const omega_set& fallback) {
    omega_set o = c.omega_path.empty() ? fallback : load_omega(c.omega_path);
    if (o.dimension != 2 * c.d)
        throw std::invalid_argument("omega: dimension " + std::to_string(o.dimension) +
                                    " does not match --d " + std::to_string(c.d));
    validate_omega(o);
    return o;
}

phase_grid grid_over_omega(const omega_set& o, int d, int n_per_axis) {
    phase_grid g;
    g.d = d;
    for (int ax = 0; ax < 2 * d; ++ax) {
        g.lo[ax] = o.boxes.front().lo[ax];
        g.hi[ax] = o.boxes.front().hi[ax];
        for (const auto& b : o.boxes) {
            g.lo[ax] = std::min(g.lo[ax], b.lo[ax]);
            g.hi[ax] = std::max(g.hi[ax], b.hi[ax]);
        }
        g.n[ax] = n_per_axis;
    }
    return g;
}

radial_profile resolve_profile(const run_config& c) {
    if (c.family == "fr") return f_R_profile(c.d, c.R);
    if (c.family == "falpha") return falpha_profile(c.d, c.alpha);
    throw std::invalid_argument("family: expected 'fr' or 'falpha', got '" + c.family + "'");
}

int pick_grid_n(const run_config& c, int d1, int d2, int d3) {
    if (c.grid_n > 0) return c.grid_n;
    return c.d == 1 ? d1 : (c.d == 2 ? d2 : d3);
}

int finish_csv(const run_config& c, const csv_table& table, clock_type::time_point t0) {
    const std::string text = table.to_string();
    if (c.out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    write_text_file(c.out_path, text);
    write_manifest(c.out_path, c, elapsed_ms(t0));
    std::printf("wrote %s (%zu rows)\n", c.out_path.c_str(), table.rows.size());
    return 0;
}

int run_ratio(const run_config& c, clock_type::time_point t0) {
    const radial_profile f = resolve_profile(c);
    const omega_set omega = resolve_omega(c, corollary_window(c.d, c.R));
    const phase_grid grid = grid_over_omega(omega, c.d, pick_grid_n(c, 9, 3, 1));
    field_options fo;
    fo.tau_spec = c.tau_spec;
    fo.quad = c.quad;
    const concentration_report rep = concentration_ratio(f, omega, c.p, grid, fo);

    std::printf("ratio d=%d family=%s p=%s value=%.12g ratio=%.12g resolution=%d error=%.3g\n",
                c.d, c.family.c_str(), exponent_to_string(c.p).c_str(), rep.value, rep.ratio,
                rep.resolution, rep.error);
    if (c.out_path.empty()) return 0;

    csv_table table;
    nlohmann::ordered_json h;
    h["subcommand"] = c.subcommand;
    h["d"] = c.d;
    h["family"] = c.family;
    h["p"] = exponent_to_string(c.p);
    h["R"] = c.R;
    h["alpha"] = c.alpha;
    table.header_json = h.dump();
    table.columns = {"p", "value", "ratio", "resolution", "error"};
    table.add_row({exponent_to_string(c.p), csv_num(rep.value), csv_num(rep.ratio),
                   std::to_string(rep.resolution), csv_num(rep.error)});
    return finish_csv(c, table, t0);
}

int run_scan_blowup(const run_config& c, clock_type::time_point t0) {
    const omega_set omega = resolve_omega(c, cube_omega(2 * c.d, 1.0));
    scan_options so;
    so.nx = c.nx;
    so.nxi = c.nxi;
    so.tau_spec = c.tau_spec;
    so.quad = c.quad;
    const blowup_table table = blowup_scan(c.d, c.p, omega, c.R_list, so);

    csv_table out;
    nlohmann::ordered_json h;
    h["subcommand"] = c.subcommand;
    h["d"] = c.d;
    h["p"] = exponent_to_string(c.p);
    h["nx"] = c.nx;
    h["nxi"] = c.nxi;
    h["fitted_exponent"] = table.fitted_exponent;
    h["fitted_rate"] = table.fitted_rate;
    out.header_json = h.dump();
    out.columns = {"R", "center_value", "center_ratio", "value", "ratio"};
    for (const auto& r : table.rows)
        out.add_row({csv_num(r.R), csv_num(r.center_value), csv_num(r.center_ratio),
                     csv_num(r.value), csv_num(r.ratio)});
    std::printf("scan-blowup d=%d p=%s rows=%zu fitted_exponent=%.6g fitted_rate=%.6g\n", c.d,
                exponent_to_string(c.p).c_str(), table.rows.size(), table.fitted_exponent,
                table.fitted_rate);
    return finish_csv(c, out, t0);
}

int run_scan_delta(const run_config& c, clock_type::time_point t0) {
    if (c.d != 2)
        throw std::invalid_argument("scan-delta: the truncated growth law is planar, use --d 2");
    const omega_set omega = resolve_omega(c, cube_omega(4, 1.0));
    scan_options so;
    so.tau_spec = c.tau_spec;
    so.quad = c.quad;
    const delta_table table = delta_scan(omega, c.deltas, so);

    csv_table out;
    nlohmann::ordered_json h;
    h["subcommand"] = c.subcommand;
    h["d"] = c.d;
    out.header_json = h.dump();
    out.columns = {"delta", "R", "value", "ratio", "normalized"};
    for (const auto& r : table.rows)
        out.add_row({csv_num(r.delta), csv_num(r.R), csv_num(r.value), csv_num(r.ratio),
                     csv_num(r.normalized)});
    std::printf("scan-delta rows=%zu\n", table.rows.size());
    return finish_csv(c, out, t0);
}

int run_translation(const run_config& c, clock_type::time_point t0) {
    const omega_set omega = resolve_omega(c, cube_omega(2 * c.d, 1.0));
    const phase_grid grid = grid_over_omega(omega, c.d, pick_grid_n(c, 9, 5, 3));
    std::vector<double> mags = c.magnitudes;
    if (mags.empty()) mags = {0.0, 2.0, 5.0, 10.0};

    const int d = c.d;
    const phase_point origin{};
    const auto eval = [d, origin](const phase_point& z) {
        return bj_gauss(d, origin, origin, z, 1e-8);
    };
    const vanishing_table table = translation_vanishing(d, eval, omega, c.p, mags, grid);

    csv_table out;
    nlohmann::ordered_json h;
    h["subcommand"] = c.subcommand;
    h["d"] = c.d;
    h["p"] = exponent_to_string(c.p);
    out.header_json = h.dump();
    out.columns = {"magnitude", "value"};
    for (const auto& r : table.rows) out.add_row({csv_num(r.magnitude), csv_num(r.value)});
    std::printf("translation-vanishing d=%d p=%s rows=%zu final=%.6g\n", c.d,
                exponent_to_string(c.p).c_str(), table.rows.size(),
                table.rows.empty() ? 0.0 : table.rows.back().value);
    return finish_csv(c, out, t0);
}

int run_optimize(const run_config& c, clock_type::time_point t0) {
    const omega_set omega = resolve_omega(c, cube_omega(2 * c.d, 1.0));
    if (c.atoms < 1 || c.atoms > 64)
        throw std::invalid_argument("optimize: atom count must lie in [1, 64]");

    // seeded atom cloud across the slightly inflated omega hull
    const phase_grid hull = grid_over_omega(omega, c.d, 1);
    portable_rng rng(c.seed);
    gauss_dictionary dict;
    dict.d = c.d;
    for (int k = 0; k < c.atoms; ++k) {
        phase_point z;
        for (int i = 0; i < c.d; ++i) {
            z.x[i] = rng.uniform(hull.lo[i] - 0.5, hull.hi[i] + 0.5);
            z.xi[i] = rng.uniform(hull.lo[c.d + i] - 0.5, hull.hi[c.d + i] + 0.5);
        }
        dict.centers.push_back(z);
    }

    ascent_options ao;
    ao.max_iters = c.iters;
    ao.grid_n = pick_grid_n(c, 11, 7, 3);
    ao.seed = c.seed;
    const ascent_result res = maximize_concentration(omega, c.p, dict, ao);

    nlohmann::ordered_json j;
    j["p"] = exponent_to_string(c.p);
    j["value"] = res.report.value;
    j["ratio"] = res.report.ratio;
    j["iterations"] = res.iterations;
    j["max_norm_drift"] = res.max_norm_drift;
    j["trace"] = res.trace;
    nlohmann::ordered_json centers = nlohmann::ordered_json::array();
    for (const auto& z : res.best.dict.centers) {
        nlohmann::ordered_json cj;
        std::vector<double> xs(c.d), ws(c.d);
        for (int i = 0; i < c.d; ++i) {
            xs[i] = z.x[i];
            ws[i] = z.xi[i];
        }
        cj["x"] = xs;
        cj["xi"] = ws;
        centers.push_back(cj);
    }
    j["centers"] = centers;
    nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
    for (const auto& v : res.best.c) coeffs.push_back({v.real(), v.imag()});
    j["coefficients"] = coeffs;

    std::printf("optimize d=%d p=%s value=%.12g iterations=%d\n", c.d,
                exponent_to_string(c.p).c_str(), res.report.value, res.iterations);
    const std::string text = j.dump(2) + "\n";
    if (c.out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    write_text_file(c.out_path, text);
    write_manifest(c.out_path, c, elapsed_ms(t0));
    std::printf("wrote %s\n", c.out_path.c_str());
    return 0;
}

int run_verify_bounds(const run_config& c, clock_type::time_point t0) {
    const std::vector<dominance_row> rows = dominance_trials(c.trials, c.seed);
    bool all_pass = true;
    for (const auto& r : rows) all_pass = all_pass && r.pass;

    csv_table out;
    nlohmann::ordered_json h;
    h["subcommand"] = c.subcommand;
    h["trials_per_floor"] = c.trials;
    h["seed"] = c.seed;
    h["all_pass"] = all_pass;
    out.header_json = h.dump();
    out.columns = {"kind", "d", "R", "absx", "absxi", "tau", "numeric", "bound", "margin", "pass"};
    for (const auto& r : rows)
        out.add_row({r.kind, std::to_string(r.d), csv_num(r.R), csv_num(r.absx), csv_num(r.absxi),
                     csv_num(r.tau), csv_num(r.numeric), csv_num(r.bound), csv_num(r.margin),
                     r.pass ? "1" : "0"});
    std::printf("verify-bounds rows=%zu all_pass=%s\n", rows.size(), all_pass ? "yes" : "no");
    const int rc = finish_csv(c, out, t0);
    if (rc != 0) return rc;
    if (!all_pass) {
        std::fprintf(stderr, "error: a quadrature value fell below its closed-form floor\n");
        return 2;
    }
    return 0;
}

int run_opbj_probe(const run_config& c, clock_type::time_point t0) {
    if (c.symbol_path.empty())
        throw std::invalid_argument("opbj-probe: --symbol FILE is required");
    symbol_field sym = load_symbol(c.symbol_path);
    if (c.q > 0.0) sym.q = c.q;  // flag override of the declared exponent
    const norm_probe_result probe = opbj_norm_probe(sym, c.trials, c.seed, c.atoms, 1e-8);

    csv_table out;
    nlohmann::ordered_json h;
    h["subcommand"] = c.subcommand;
    h["q"] = exponent_to_string(probe.q);
    h["threshold"] = probe.threshold;
    h["regime"] = probe.regime;
    h["max_ratio"] = probe.max_ratio;
    h["trials"] = c.trials;
    h["seed"] = c.seed;
    h["atoms"] = c.atoms;
    out.header_json = h.dump();
    out.columns = {"trial", "ratio"};
    for (std::size_t t = 0; t < probe.ratios.size(); ++t)
        out.add_row({std::to_string(t), csv_num(probe.ratios[t])});
    std::printf("opbj-probe q=%s threshold=%.6g regime=%s max_ratio=%.6g\n",
                exponent_to_string(probe.q).c_str(), probe.threshold, probe.regime.c_str(),
                probe.max_ratio);
    return finish_csv(c, out, t0);
}

int run_transform(const run_config& c, clock_type::time_point t0) {
    const radial_profile f = resolve_profile(c);
    if (!(c.half > 0.0)) throw std::invalid_argument("transform: --half must be positive");
    const phase_grid grid = cube_grid(c.d, c.half, pick_grid_n(c, 9, 5, 3));

    phase_field field;
    if (c.tau >= 0.0) {
        if (c.tau > 1.0) throw std::invalid_argument("transform: --tau must lie in [0, 1]");
        field.grid = grid;
        field.values.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            field.values[i] = wtau_point(f, f, c.tau, grid.point(i), c.quad).value;
        field.provenance = "tau-slice";
    } else {
        field_options fo;
        fo.tau_spec = c.tau_spec;
        fo.quad = c.quad;
        fo.delta = c.tau_spec.delta;
        field = sample_profile_field(f, grid, fo);
    }

    csv_table out;
    nlohmann::ordered_json h;
    h["subcommand"] = c.subcommand;
    h["d"] = c.d;
    h["family"] = c.family;
    h["R"] = c.R;
    h["alpha"] = c.alpha;
    h["tau"] = c.tau >= 0.0 ? nlohmann::ordered_json(c.tau) : nlohmann::ordered_json("bj");
    h["half"] = c.half;
    h["max_tail"] = field.max_tail;
    out.header_json = h.dump();
    for (int i = 0; i < c.d; ++i) out.columns.push_back("x" + std::to_string(i + 1));
    for (int i = 0; i < c.d; ++i) out.columns.push_back("xi" + std::to_string(i + 1));
    out.columns.push_back("re");
    out.columns.push_back("im");
    for (std::size_t flat = 0; flat < field.values.size(); ++flat) {
        const phase_point z = grid.point(flat);
        std::vector<std::string> row;
        for (int i = 0; i < c.d; ++i) row.push_back(csv_num(z.x[i]));
        for (int i = 0; i < c.d; ++i) row.push_back(csv_num(z.xi[i]));
        row.push_back(csv_num(field.values[flat].real()));
        row.push_back(csv_num(field.values[flat].imag()));
        out.add_row(std::move(row));
    }
    std::printf("transform d=%d rows=%zu max_tail=%.3g\n", c.d, out.rows.size(), field.max_tail);
    return finish_csv(c, out, t0);
}

int run(const run_config& c) {
    const auto t0 = clock_type::now();
    if (c.threads < 1) throw std::invalid_argument("threads: hint must be at least one");
    if (c.subcommand == "ratio") return run_ratio(c, t0);
    if (c.subcommand == "scan-blowup") return run_scan_blowup(c, t0);
    if (c.subcommand == "scan-delta") return run_scan_delta(c, t0);
    if (c.subcommand == "translation-vanishing") return run_translation(c, t0);
    if (c.subcommand == "optimize") return run_optimize(c, t0);
    if (c.subcommand == "verify-bounds") return run_verify_bounds(c, t0);
    if (c.subcommand == "opbj-probe") return run_opbj_probe(c, t0);
    if (c.subcommand == "transform") return run_transform(c, t0);
    throw std::invalid_argument("unknown subcommand '" + c.subcommand + "'");
}

}  // namespace

int main(int argc, char** argv) {
    run_config cfg;
    std::string p_str = "2", q_str = "-1", R_str = "e", R_list_str, deltas_str, mags_str;
    std::string config_path;

    CLI::App app{"phase-space concentration laboratory"};
    app.require_subcommand(0, 1);
    app.add_option("--config", config_path, "run a serialized config instead of flags");

    const auto add_common = [&](CLI::App* sc) {
        sc->add_option("--seed", cfg.seed, "rng seed");
        sc->add_option("--threads", cfg.threads, "worker hint; results identical for any value");
        sc->add_option("--out", cfg.out_path, "output file (stdout when omitted)");
        sc->add_option("--tau-nodes", cfg.tau_spec.nodes, "tau quadrature nodes per panel");
        sc->add_option("--tau-tail-rel", cfg.tau_spec.tail_rel, "tau endpoint tail target");
        sc->add_option("--tau-delta", cfg.tau_spec.delta, "restrict tau to [delta, 1-delta]");
        sc->add_option("--quad-nodes", cfg.quad.nodes, "spatial quadrature nodes per panel");
        sc->add_option("--quad-levels", cfg.quad.edge_levels, "spatial edge refinement depth");
    };
    const auto add_geometry = [&](CLI::App* sc) {
        sc->add_option("--d", cfg.d, "dimension")->check(CLI::Range(1, 3));
        sc->add_option("--omega", cfg.omega_path, "omega box-union json file");
        sc->add_option("--grid", cfg.grid_n, "cells per phase-space axis");
    };

    CLI::App* ratio = app.add_subcommand("ratio", "windowed p-norm of one transform");
    add_geometry(ratio);
    add_common(ratio);
    ratio->add_option("--p", p_str, "exponent, finite or 'inf'");
    ratio->add_option("--R", R_str, "annulus scale, accepts eK tokens");
    ratio->add_option("--family", cfg.family, "fr or falpha");
    ratio->add_option("--alpha", cfg.alpha, "falpha exponent");

    CLI::App* blowup = app.add_subcommand("scan-blowup", "window growth along a scale list");
    add_geometry(blowup);
    add_common(blowup);
    auto* blowup_p = blowup->add_option("--p", p_str, "exponent, finite or 'inf'");
    blowup->add_option("--R", R_list_str, "comma list of scales, eK tokens allowed")->required();
    blowup->add_option("--nx", cfg.nx, "cells per position axis, odd");
    blowup->add_option("--nxi", cfg.nxi, "cells per frequency axis, odd");

    CLI::App* sdelta = app.add_subcommand("scan-delta", "truncated-transform growth as delta -> 0");
    add_geometry(sdelta);
    add_common(sdelta);
    sdelta->add_option("--deltas", deltas_str, "comma list of truncations in (0, 1/3]")->required();

    CLI::App* trans = app.add_subcommand("translation-vanishing",
                                         "windowed norms of far-translated inputs");
    add_geometry(trans);
    add_common(trans);
    trans->add_option("--p", p_str, "subcritical exponent");
    trans->add_option("--magnitudes", mags_str, "comma list of shift sizes");

    CLI::App* opt = app.add_subcommand("optimize", "ascend the windowed concentration");
    add_geometry(opt);
    add_common(opt);
    opt->add_option("--p", p_str, "subcritical exponent");
    opt->add_option("--atoms", cfg.atoms, "dictionary size")->check(CLI::Range(1, 64));
    opt->add_option("--iters", cfg.iters, "ascent iteration cap");

    CLI::App* vb = app.add_subcommand("verify-bounds", "engine values against closed-form floors");
    add_common(vb);
    vb->add_option("--trials", cfg.trials, "tuples per floor inequality")->check(CLI::Range(1, 100000));

    CLI::App* probe = app.add_subcommand("opbj-probe", "empirical pairing-norm estimate");
    add_common(probe);
    probe->add_option("--symbol", cfg.symbol_path, "symbol json file")->required();
    probe->add_option("--q", q_str, "override the declared exponent");
    probe->add_option("--trials", cfg.trials, "coefficient draws");
    probe->add_option("--atoms", cfg.atoms, "atom cloud size")->check(CLI::Range(1, 32));

    CLI::App* tf = app.add_subcommand("transform", "dump transform samples on a grid");
    add_geometry(tf);
    add_common(tf);
    tf->add_option("--R", R_str, "annulus scale, accepts eK tokens");
    tf->add_option("--family", cfg.family, "fr or falpha");
    tf->add_option("--alpha", cfg.alpha, "falpha exponent");
    tf->add_option("--tau", cfg.tau, "single slice in [0, 1]; omit for the tau average");
    tf->add_option("--half", cfg.half, "window half-width");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            if (!app.get_subcommands().empty())
                throw std::invalid_argument("--config replaces the subcommand flags");
            cfg = config_from_json(read_text_file(config_path));
            return run(cfg);
        }
        const auto parsed = app.get_subcommands();
        if (parsed.empty()) {
            std::fprintf(stderr, "error: no subcommand given, see --help\n");
            return 1;
        }
        CLI::App* sc = parsed.front();
        cfg.subcommand = sc->get_name();
        if (cfg.subcommand == "scan-blowup" && blowup_p->count() == 0) p_str = "inf";
        cfg.p = parse_exponent(p_str);
        cfg.q = q_str == "-1" ? -1.0 : parse_exponent(q_str);
        cfg.R = parse_scale_token(R_str);
        if (!R_list_str.empty()) cfg.R_list = parse_scale_list(R_list_str);
        if (!deltas_str.empty()) cfg.deltas = parse_double_list(deltas_str);
        if (!mags_str.empty()) cfg.magnitudes = parse_double_list(mags_str);
        return run(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
