#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "bjlab/concentration.hpp"
#include "bjlab/opbj.hpp"

namespace bjlab {

// one bag of knobs for every subcommand, mirroring the CLI flags; serialized
// form is stable json so a run can be replayed from its manifest
struct run_config {
    std::string subcommand;
    int d = 2;
    double p = 2.0;  // infinity spelled "inf" in flags and json
    double q = 2.0;
    double alpha = 1.25;
    double R = 2.718281828459045;
    double tau = -1.0;  // transform slice; negative means the full tau average
    double half = 2.0;  // transform window half-width
    std::vector<double> R_list;
    std::vector<double> deltas;
    std::vector<double> magnitudes;
    int grid_n = 0;  // cells per axis, 0 picks the subcommand default
    int nx = 3;
    int nxi = 5;
    int trials = 50;
    int atoms = 4;
    int iters = 60;
    std::uint64_t seed = 1;
    int threads = 1;  // parallelism hint only, results identical for any value
    std::string family = "fr";
    std::string omega_path;
    std::string symbol_path;
    std::string out_path;
    tau_quadrature_spec tau_spec;
    quad_options quad;
};

// compact json, fixed key order; parse(serialize(c)) reproduces c exactly
std::string config_to_json(const run_config& c);
run_config config_from_json(const std::string& text);

// {"dimension": 2d, "boxes": [{"lo": [...], "hi": [...]}]}
std::string omega_to_json(const omega_set& o);
omega_set omega_from_json(const std::string& text);
omega_set load_omega(const std::string& path);

// {"support": <omega>, "grid": {"lo": [...], "hi": [...], "n": [...]},
//  "q": <num>, "constant": <num|[re,im]>} with an optional explicit
// "values": [[re,im], ...] array replacing the constant fill
symbol_field symbol_from_json(const std::string& text);
symbol_field load_symbol(const std::string& path);

// scale tokens: "e" and "eK" mean exp(1) and exp(K), anything else is a
// plain number; lists are comma separated
double parse_scale_token(const std::string& token);
std::vector<double> parse_scale_list(const std::string& csv);
std::vector<double> parse_double_list(const std::string& csv);

// exponent flag value: "inf" (or "infinity") maps to infinity
double parse_exponent(const std::string& token);
std::string exponent_to_string(double p);

// csv with a '# {json}' preamble line; every number is rendered with
// format_double so identical runs produce identical bytes
struct csv_table {
    std::string header_json;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
    std::string to_string() const;
};

std::string csv_num(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// <out>.manifest.json next to a written artifact: config echo, component
// versions, wall time
void write_manifest(const std::string& out_path, const run_config& c, double wall_ms);

}  // namespace bjlab
