#pragma once

// Experiment driver: configuration, validation, execution and report files.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace bh {

const std::vector<std::string>& experiment_names();

struct ExperimentConfig {
    std::string experiment;
    std::vector<double> a{1.0};
    std::size_t M = 128;
    double R = 12.0;
    double Xi = 12.0;
    std::string rule = "composite";
    std::string corpus = "gaussians";
    int m = 1;
    double p = 2.0;
    double s = 1.0;
    double eps = 0.5;
    std::vector<double> t_grid;           ///< empty: 12 log points on [0.05, 2]
    std::vector<std::string> k_files;     ///< K-set files (JSON arrays of points)
    std::vector<double> rho{0.2, 0.1, 0.05};
    std::vector<double> s_list{1.0};
    std::vector<double> a_list{1.0};
    std::vector<double> scales{1.0, 0.5, 0.25, 0.125};
    std::size_t refinements = 2;
    std::size_t max_iterations = 5000;
    std::uint64_t seed = 0;
    std::string out = "results";
    std::filesystem::path base_dir;       ///< directory for relative K paths (not echoed)
};

enum class Severity { warning, error };

struct Diagnostic {
    Severity severity = Severity::error;
    std::string message;
};

/// Parses a flat JSON object. Unknown keys become warnings through validate(); type
/// errors throw std::invalid_argument.
ExperimentConfig parse_config(const nlohmann::json& doc, std::vector<Diagnostic>* unknown = nullptr);
ExperimentConfig load_config(const std::filesystem::path& path, std::vector<Diagnostic>* unknown = nullptr);

/// Resolved configuration as a flat JSON object that parses back to the same config.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Lints the configuration; errors make run() refuse the config.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

/// Reads a JSON array of points.
std::vector<std::vector<double>> load_point_set(const std::filesystem::path& path);

using Cell = std::variant<std::string, double, long long, bool>;

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  ///< "<=" or ">="
    bool pass = false;
};

struct ExperimentOutput {
    std::string experiment;
    std::vector<Table> tables;
    std::vector<Check> checks;
    nlohmann::json metrics = nlohmann::json::object();
    std::vector<std::string> diagnostics;
    bool converged = true;

    bool passed() const;
    int exit_code() const;  ///< 0 pass, 1 check failure, 3 non-convergence
};

/// Executes a validated configuration in memory.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// 17 significant digits, RFC-4180 quoting.
std::string format_cell(const Cell& cell);
std::string to_csv(const Table& table);
nlohmann::json summary_json(const ExperimentOutput& output, const ExperimentConfig& config);

/// Writes <experiment>.csv (plus <experiment>_<table>.csv for further tables),
/// <experiment>_summary.json and <experiment>_config.json into config.out.
void write_artifacts(const ExperimentOutput& output, const ExperimentConfig& config);

/// Full pipeline with exit codes: 0 pass, 1 check failure, 2 config invalid, 3 non-convergence.
int run(const ExperimentConfig& config, std::ostream& log);

}  // namespace bh
