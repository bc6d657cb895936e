#include "bh/experiment.hpp"

#include "bh/corpus.hpp"
#include "bh/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bh {

using nlohmann::json;

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"specfun_check", "transform_roundtrip", "translation_props",
                                                "equivalence",   "embedding",           "capacity",
                                                "removability"};
    return names;
}

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "experiment", "a", "M", "R", "Xi", "rule", "corpus", "m", "p", "s", "eps", "t_grid", "k_files",
        "rho", "s_list", "a_list", "scales", "refinements", "max_iterations", "seed", "out"};
    return keys;
}

template <class T>
void read(const json& doc, const char* key, T& target) {
    if (!doc.contains(key)) return;
    try {
        target = doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
}

bool is_rule(const std::string& rule) {
    return rule == "composite" || rule == "gauss_legendre_mapped" || rule == "graded";
}

bool log_spaced(const std::vector<double>& t) {
    if (t.size() < 3) return true;
    const double r0 = std::log(t[1] / t[0]);
    for (std::size_t i = 2; i < t.size(); ++i) {
        if (std::abs(std::log(t[i] / t[i - 1]) - r0) > 1e-6 * std::max(1.0, std::abs(r0))) return false;
    }
    return true;
}

std::filesystem::path resolve(const ExperimentConfig& c, const std::string& file) {
    std::filesystem::path p(file);
    if (p.is_relative() && !c.base_dir.empty()) p = c.base_dir / p;
    return p.lexically_normal();
}

}  // namespace

ExperimentConfig parse_config(const json& doc, std::vector<Diagnostic>* unknown) {
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    ExperimentConfig c;
    read(doc, "experiment", c.experiment);
    read(doc, "a", c.a);
    read(doc, "M", c.M);
    read(doc, "R", c.R);
    read(doc, "Xi", c.Xi);
    read(doc, "rule", c.rule);
    read(doc, "corpus", c.corpus);
    read(doc, "m", c.m);
    read(doc, "p", c.p);
    read(doc, "s", c.s);
    read(doc, "eps", c.eps);
    read(doc, "t_grid", c.t_grid);
    read(doc, "k_files", c.k_files);
    read(doc, "rho", c.rho);
    read(doc, "s_list", c.s_list);
    read(doc, "a_list", c.a_list);
    read(doc, "scales", c.scales);
    read(doc, "refinements", c.refinements);
    read(doc, "max_iterations", c.max_iterations);
    read(doc, "seed", c.seed);
    read(doc, "out", c.out);
    if (unknown) {
        for (const auto& [key, value] : doc.items()) {
            if (!known_keys().count(key)) unknown->push_back({Severity::warning, "unknown config key '" + key + "'"});
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::vector<Diagnostic>* unknown) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    ExperimentConfig c = parse_config(doc, unknown);
    c.base_dir = path.parent_path();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json doc = json::object();
    doc["experiment"] = c.experiment;
    doc["a"] = c.a;
    doc["M"] = c.M;
    doc["R"] = c.R;
    doc["Xi"] = c.Xi;
    doc["rule"] = c.rule;
    doc["corpus"] = c.corpus;
    doc["m"] = c.m;
    doc["p"] = c.p;
    doc["s"] = c.s;
    doc["eps"] = c.eps;
    doc["t_grid"] = c.t_grid;
    std::vector<std::string> files;
    for (const auto& f : c.k_files) files.push_back(std::filesystem::absolute(resolve(c, f)).lexically_normal().string());
    doc["k_files"] = files;
    doc["rho"] = c.rho;
    doc["s_list"] = c.s_list;
    doc["a_list"] = c.a_list;
    doc["scales"] = c.scales;
    doc["refinements"] = c.refinements;
    doc["max_iterations"] = c.max_iterations;
    doc["seed"] = c.seed;
    doc["out"] = c.out;
    return doc;
}

std::vector<std::vector<double>> load_point_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("K file not found: " + path.string());
    json doc;
    std::vector<std::vector<double>> pts;
    try {
        doc = json::parse(in);
        pts = doc.get<std::vector<std::vector<double>>>();
    } catch (const json::exception& e) {
        throw std::invalid_argument("K file " + path.string() + " is not a JSON array of points: " + e.what());
    }
    for (const auto& x : pts) {
        if (x.empty() || x.size() != pts.front().size()) {
            throw std::invalid_argument("K file " + path.string() + ": points must share one nonzero dimension");
        }
    }
    return pts;
}

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
    std::vector<Diagnostic> out;
    const auto error = [&](std::string msg) { out.push_back({Severity::error, std::move(msg)}); };
    const auto warn = [&](std::string msg) { out.push_back({Severity::warning, std::move(msg)}); };
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end()) {
        error("unknown experiment '" + c.experiment + "'");
    }
    if (c.a.empty() || c.a.size() > 3) error("weight a must have 1 to 3 components");
    for (double ai : c.a) {
        if (!(ai > 0.0)) error("weight components must be positive");
    }
    if (c.M < 8) error("M must be at least 8");
    if (!(c.R > 0.0) || !(c.Xi > 0.0)) error("cutoffs R and Xi must be positive");
    if (!is_rule(c.rule)) error("unknown axis rule '" + c.rule + "'");
    if (!(c.p >= 1.0)) error("p must be at least 1");
    if (c.m < 1 || c.m > 3) error("m must lie in 1..3");
    if (!c.t_grid.empty()) {
        for (double t : c.t_grid) {
            if (!(t > 0.0)) error("t_grid entries must be positive");
        }
        if (!std::is_sorted(c.t_grid.begin(), c.t_grid.end())) error("t_grid must be increasing");
        else if (!log_spaced(c.t_grid)) warn("t_grid is not log-spaced");
    }
    const bool capacity_like = c.experiment == "capacity" || c.experiment == "removability";
    if (c.experiment == "embedding") {
        if (!(c.s > 0.0 && c.s < 2.0)) error("embedding requires 0 < s < 2");
        if (!(c.eps > 0.0 && c.eps < c.s)) error("embedding requires 0 < ε < s");
        if (!(c.p > 1.0)) error("embedding requires p > 1");
        if (!(c.s - c.eps > 0.0)) warn("s - ε is not positive");
    }
    if (capacity_like) {
        if (!(c.s > 0.0 && c.s < 2.0)) error(c.experiment + " requires 0 < s < 2");
        if (!(c.p > 1.0) || !std::isfinite(c.p)) error(c.experiment + " requires 1 < p < inf");
        if (c.k_files.empty()) error(c.experiment + " requires at least one K file (k_files)");
        for (const auto& f : c.k_files) {
            const auto path = resolve(c, f);
            if (!std::filesystem::exists(path)) {
                error("K file not found: " + path.string());
                continue;
            }
            try {
                const auto pts = load_point_set(path);
                for (const auto& x : pts) {
                    if (x.size() != c.a.size()) {
                        error("K file " + path.string() + ": point dimension differs from the weight");
                        break;
                    }
                    bool inside = true;
                    for (double v : x) inside = inside && v > 0.0 && v < c.R;
                    if (!inside) {
                        error("K file " + path.string() + ": point outside the open grid domain (0, R)^n");
                        break;
                    }
                }
                if (c.experiment == "removability" && pts.empty()) error("removability requires a nonempty K");
            } catch (const std::exception& e) {
                error(e.what());
            }
        }
        for (double r : c.rho) {
            if (!(r >= 0.0)) error("rho entries must be nonnegative");
        }
    }
    if (c.experiment == "removability") {
        if (c.s_list.empty() || c.s_list.size() != c.a_list.size()) {
            error("removability requires s_list and a_list of equal nonzero length");
        }
        for (double sk : c.s_list) {
            if (!(sk >= 0.0 && sk < c.s)) error("removability requires 0 <= s_k < s for every s_k");
        }
        for (double sc : c.scales) {
            if (!(sc > 0.0 && sc <= 1.0)) error("scales must lie in (0, 1]");
        }
    }
    if (c.experiment == "equivalence" || c.experiment == "embedding" || c.experiment == "translation_props" ||
        c.experiment == "transform_roundtrip") {
        try {
            const WeightVector w(c.a);
            for (const auto& item : standard_corpus(w, c.corpus)) {
                if (item.decay_radius > c.R) {
                    warn("corpus item '" + item.id + "' decays only beyond R = " + std::to_string(c.R));
                }
            }
        } catch (const std::exception& e) {
            error(e.what());
        }
    }
    return out;
}

bool ExperimentOutput::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

int ExperimentOutput::exit_code() const {
    if (!converged) return 3;
    return passed() ? 0 : 1;
}

std::string format_cell(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isnan(*d)) return "nan";
        if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        return buf;
    }
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
    const std::string& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

std::string to_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out << (i ? "," : "") << format_cell(Cell{table.header[i]});
    }
    out << "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << "\r\n";
    }
    return out.str();
}

json summary_json(const ExperimentOutput& output, const ExperimentConfig& config) {
    json doc = json::object();
    doc["experiment"] = output.experiment;
    doc["seed"] = config.seed;
    json checks = json::array();
    for (const auto& c : output.checks) {
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"relation", c.relation},
                          {"pass", c.pass}});
    }
    doc["checks"] = checks;
    doc["metrics"] = output.metrics;
    doc["diagnostics"] = output.diagnostics;
    doc["converged"] = output.converged;
    doc["pass"] = output.passed();
    doc["exit_code"] = output.exit_code();
    return doc;
}

void write_artifacts(const ExperimentOutput& output, const ExperimentConfig& config) {
    const std::filesystem::path dir(config.out);
    std::filesystem::create_directories(dir);
    const auto write = [](const std::filesystem::path& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << text;
    };
    for (std::size_t i = 0; i < output.tables.size(); ++i) {
        const std::string name = i == 0 ? output.experiment : output.experiment + "_" + output.tables[i].name;
        write(dir / (name + ".csv"), to_csv(output.tables[i]));
    }
    write(dir / (output.experiment + "_summary.json"), summary_json(output, config).dump(2) + "\n");
    write(dir / (output.experiment + "_config.json"), config_to_json(config).dump(2) + "\n");
}

int run(const ExperimentConfig& config, std::ostream& log) {
    bool invalid = false;
    for (const auto& d : validate(config)) {
        log << (d.severity == Severity::error ? "error: " : "warning: ") << d.message << "\n";
        invalid = invalid || d.severity == Severity::error;
    }
    if (invalid) return 2;
    ExperimentOutput output;
    try {
        output = run_experiment(config);
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
    write_artifacts(output, config);
    for (const auto& c : output.checks) {
        log << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.value << " " << c.relation << " " << c.threshold
            << "\n";
    }
    for (const auto& d : output.diagnostics) log << "note: " << d << "\n";
    if (!output.converged) log << "error: numerical non-convergence\n";
    return output.exit_code();
}

}  // namespace bh
