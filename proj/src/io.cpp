#include "bjlab/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bjlab {

namespace {

using ordered = nlohmann::ordered_json;

ordered exponent_node(double p) {
    if (std::isinf(p)) return ordered("inf");
    return ordered(p);
}

double exponent_from_node(const ordered& node, const char* what) {
    if (node.is_string()) {
        const std::string s = node.get<std::string>();
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        throw std::invalid_argument(std::string(what) + ": unknown exponent token '" + s + "'");
    }
    return node.get<double>();
}

ordered tau_spec_to_node(const tau_quadrature_spec& s) {
    ordered j;
    j["delta"] = s.delta;
    j["grade_ratio"] = s.grade_ratio;
    j["nodes"] = s.nodes;
    j["log_factor"] = s.log_factor;
    j["edge_floor"] = s.edge_floor;
    j["tail_rel"] = s.tail_rel;
    ordered panels = ordered::array();
    for (const auto& p : s.panels) {
        ordered pj;
        pj["lo"] = p.lo;
        pj["hi"] = p.hi;
        pj["nodes"] = p.nodes;
        panels.push_back(pj);
    }
    j["panels"] = panels;
    return j;
}

tau_quadrature_spec tau_spec_from_node(const ordered& j) {
    tau_quadrature_spec s;
    s.delta = j.at("delta").get<double>();
    s.grade_ratio = j.at("grade_ratio").get<double>();
    s.nodes = j.at("nodes").get<int>();
    s.log_factor = j.at("log_factor").get<double>();
    s.edge_floor = j.at("edge_floor").get<double>();
    s.tail_rel = j.at("tail_rel").get<double>();
    for (const auto& pj : j.at("panels")) {
        tau_panel p;
        p.lo = pj.at("lo").get<double>();
        p.hi = pj.at("hi").get<double>();
        p.nodes = pj.at("nodes").get<int>();
        s.panels.push_back(p);
    }
    return s;
}

ordered quad_to_node(const quad_options& q) {
    ordered j;
    j["nodes"] = q.nodes;
    j["log_factor"] = q.log_factor;
    j["edge_levels"] = q.edge_levels;
    j["osc_frac"] = q.osc_frac;
    j["jump_depth"] = q.jump_depth;
    j["grade_ratio"] = q.grade_ratio;
    j["grade_floor"] = q.grade_floor;
    j["cartesian"] = q.cartesian;
    j["error_estimate"] = q.error_estimate;
    return j;
}

quad_options quad_from_node(const ordered& j) {
    quad_options q;
    q.nodes = j.at("nodes").get<int>();
    q.log_factor = j.at("log_factor").get<double>();
    q.edge_levels = j.at("edge_levels").get<int>();
    q.osc_frac = j.at("osc_frac").get<double>();
    q.jump_depth = j.at("jump_depth").get<int>();
    q.grade_ratio = j.at("grade_ratio").get<double>();
    q.grade_floor = j.at("grade_floor").get<double>();
    q.cartesian = j.at("cartesian").get<bool>();
    q.error_estimate = j.at("error_estimate").get<bool>();
    return q;
}

ordered omega_to_node(const omega_set& o) {
    ordered j;
    j["dimension"] = o.dimension;
    ordered boxes = ordered::array();
    for (const auto& b : o.boxes) {
        ordered bj;
        bj["lo"] = b.lo;
        bj["hi"] = b.hi;
        boxes.push_back(bj);
    }
    j["boxes"] = boxes;
    return j;
}

omega_set omega_from_node(const ordered& j) {
    omega_set o;
    o.dimension = j.at("dimension").get<int>();
    for (const auto& bj : j.at("boxes")) {
        omega_box b;
        b.lo = bj.at("lo").get<std::vector<double>>();
        b.hi = bj.at("hi").get<std::vector<double>>();
        o.boxes.push_back(std::move(b));
    }
    return o;
}

ordered parse_text(const std::string& text, const char* what) {
    try {
        return ordered::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string(what) + ": json parse failure: " + e.what());
    }
}

}  // namespace

std::string config_to_json(const run_config& c) {
    ordered j;
    j["subcommand"] = c.subcommand;
    j["d"] = c.d;
    j["p"] = exponent_node(c.p);
    j["q"] = exponent_node(c.q);
    j["alpha"] = c.alpha;
    j["R"] = c.R;
    j["tau"] = c.tau;
    j["half"] = c.half;
    j["R_list"] = c.R_list;
    j["deltas"] = c.deltas;
    j["magnitudes"] = c.magnitudes;
    j["grid_n"] = c.grid_n;
    j["nx"] = c.nx;
    j["nxi"] = c.nxi;
    j["trials"] = c.trials;
    j["atoms"] = c.atoms;
    j["iters"] = c.iters;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["family"] = c.family;
    j["omega_path"] = c.omega_path;
    j["symbol_path"] = c.symbol_path;
    j["out_path"] = c.out_path;
    j["tau_spec"] = tau_spec_to_node(c.tau_spec);
    j["quad"] = quad_to_node(c.quad);
    return j.dump();
}

run_config config_from_json(const std::string& text) {
    const ordered j = parse_text(text, "config");
    run_config c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.d = j.at("d").get<int>();
    c.p = exponent_from_node(j.at("p"), "config");
    c.q = exponent_from_node(j.at("q"), "config");
    c.alpha = j.at("alpha").get<double>();
    c.R = j.at("R").get<double>();
    c.tau = j.at("tau").get<double>();
    c.half = j.at("half").get<double>();
    c.R_list = j.at("R_list").get<std::vector<double>>();
    c.deltas = j.at("deltas").get<std::vector<double>>();
    c.magnitudes = j.at("magnitudes").get<std::vector<double>>();
    c.grid_n = j.at("grid_n").get<int>();
    c.nx = j.at("nx").get<int>();
    c.nxi = j.at("nxi").get<int>();
    c.trials = j.at("trials").get<int>();
    c.atoms = j.at("atoms").get<int>();
    c.iters = j.at("iters").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.threads = j.at("threads").get<int>();
    c.family = j.at("family").get<std::string>();
    c.omega_path = j.at("omega_path").get<std::string>();
    c.symbol_path = j.at("symbol_path").get<std::string>();
    c.out_path = j.at("out_path").get<std::string>();
    c.tau_spec = tau_spec_from_node(j.at("tau_spec"));
    c.quad = quad_from_node(j.at("quad"));
    return c;
}

std::string omega_to_json(const omega_set& o) { return omega_to_node(o).dump(); }

omega_set omega_from_json(const std::string& text) {
    const omega_set o = omega_from_node(parse_text(text, "omega"));
    validate_omega(o);
    return o;
}

omega_set load_omega(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw std::invalid_argument("omega file '" + path + "': " + e.what());
    }
    try {
        return omega_from_json(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument("omega file '" + path + "': " + e.what());
    }
}

symbol_field symbol_from_json(const std::string& text) {
    const ordered j = parse_text(text, "symbol");
    symbol_field s;
    s.support = omega_from_node(j.at("support"));
    const ordered& gj = j.at("grid");
    const auto lo = gj.at("lo").get<std::vector<double>>();
    const auto hi = gj.at("hi").get<std::vector<double>>();
    const auto n = gj.at("n").get<std::vector<int>>();
    if (lo.size() != hi.size() || lo.size() != n.size() || lo.empty() || lo.size() > 6 ||
        lo.size() % 2 != 0)
        throw std::invalid_argument("symbol: grid arrays need matching even length up to six");
    s.grid.d = static_cast<int>(lo.size()) / 2;
    for (std::size_t a = 0; a < lo.size(); ++a) {
        s.grid.lo[a] = lo[a];
        s.grid.hi[a] = hi[a];
        s.grid.n[a] = n[a];
    }
    s.q = exponent_from_node(j.at("q"), "symbol");

    if (j.contains("values")) {
        for (const auto& vj : j.at("values")) {
            if (!vj.is_array() || vj.size() != 2)
                throw std::invalid_argument("symbol: values entries must be [re, im] pairs");
            s.values.push_back(cplx{vj[0].get<double>(), vj[1].get<double>()});
        }
    } else {
        cplx fill{1.0, 0.0};
        if (j.contains("constant")) {
            const ordered& cj = j.at("constant");
            if (cj.is_array()) {
                if (cj.size() != 2)
                    throw std::invalid_argument("symbol: constant must be a number or [re, im]");
                fill = cplx{cj[0].get<double>(), cj[1].get<double>()};
            } else {
                fill = cplx{cj.get<double>(), 0.0};
            }
        }
        const omega_set& sup = s.support;
        return make_symbol(sup, s.grid, [fill](const phase_point&) { return fill; }, s.q);
    }
    validate_symbol(s);
    return s;
}

symbol_field load_symbol(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw std::invalid_argument("symbol file '" + path + "': " + e.what());
    }
    try {
        return symbol_from_json(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument("symbol file '" + path + "': " + e.what());
    }
}

double parse_scale_token(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("scale list: empty token");
    if (token == "e") return std::exp(1.0);
    if (token[0] == 'e') {
        char* end = nullptr;
        const double k = std::strtod(token.c_str() + 1, &end);
        if (end && *end == '\0' && std::isfinite(k)) return std::exp(k);
        throw std::invalid_argument("scale list: bad token '" + token + "'");
    }
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (!end || *end != '\0' || !std::isfinite(v))
        throw std::invalid_argument("scale list: bad token '" + token + "'");
    return v;
}

namespace {

std::vector<std::string> split_commas(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(csv);
    while (std::getline(in, cur, ',')) out.push_back(cur);
    return out;
}

}  // namespace

std::vector<double> parse_scale_list(const std::string& csv) {
    std::vector<double> out;
    for (const auto& tok : split_commas(csv)) out.push_back(parse_scale_token(tok));
    if (out.empty()) throw std::invalid_argument("scale list: no tokens");
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    for (const auto& tok : split_commas(csv)) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (!end || *end != '\0' || tok.empty())
            throw std::invalid_argument("number list: bad token '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("number list: no tokens");
    return out;
}

double parse_exponent(const std::string& token) {
    if (token == "inf" || token == "infinity") return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (!end || *end != '\0' || token.empty() || std::isnan(v))
        throw std::invalid_argument("exponent: bad token '" + token + "'");
    return v;
}

std::string exponent_to_string(double p) {
    if (std::isinf(p)) return "inf";
    return format_double(p);
}

void csv_table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw std::invalid_argument("csv: row width does not match the column list");
    rows.push_back(std::move(cells));
}

std::string csv_table::to_string() const {
    std::string out = "# " + header_json + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += columns[i];
        out += (i + 1 < columns.size()) ? ',' : '\n';
    }
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out += (i + 1 < row.size()) ? ',' : '\n';
        }
    return out;
}

std::string csv_num(double v) { return format_double(v); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("unreadable file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

void write_manifest(const std::string& out_path, const run_config& c, double wall_ms) {
    ordered j;
    j["config"] = ordered::parse(config_to_json(c));
    ordered versions;
    versions["artifact"] = "0.1.0";
    versions["compiler"] = __VERSION__;
    versions["json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_PATCH);
    j["versions"] = versions;
    j["wall_ms"] = wall_ms;
    write_text_file(out_path + ".manifest.json", j.dump(2) + "\n");
}

}  // namespace bjlab
