#include "bh/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

int main(int argc, char** argv) {
    CLI::App app{"Weighted Bessel harmonic analysis experiments"};
    std::string experiment;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    std::optional<int> m;
    std::optional<double> p;
    std::optional<double> s;
    std::optional<double> eps;
    std::vector<double> a;
    std::optional<std::string> corpus;
    bool list = false;
    bool version = false;

    app.add_option("experiment", experiment, "Experiment name (see --list)");
    app.add_option("--config", config_path, "Flat JSON configuration file");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Seed for randomized probe points");
    app.add_option("--set", sets, "K-set file (JSON array of points); replaces k_files");
    app.add_option("--m", m, "Difference / Laplacian order");
    app.add_option("--p", p, "Lebesgue exponent");
    app.add_option("--s", s, "Smoothness order");
    app.add_option("--eps", eps, "Embedding offset");
    app.add_option("--a", a, "Weight exponents")->expected(1, 3);
    app.add_option("--corpus", corpus, "Corpus selector");
    app.add_flag("--list", list, "List experiments");
    app.add_flag("--version", version, "Print build information");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (version) {
        std::cout << "bessel-harmonics " << BH_VERSION << " (C++" << __cplusplus / 100 % 100 << ", "
#if defined(__clang__)
                  << "clang " << __clang_version__
#elif defined(__GNUC__)
                  << "gcc " << __VERSION__
#else
                  << "unknown compiler"
#endif
                  << ")\n";
        return 0;
    }
    if (list) {
        for (const auto& name : bh::experiment_names()) std::cout << name << "\n";
        return 0;
    }
    if (experiment.empty()) {
        std::cerr << "error: an experiment name is required (see --list)\n";
        return 2;
    }

    bh::ExperimentConfig config;
    try {
        std::vector<bh::Diagnostic> unknown;
        if (!config_path.empty()) config = bh::load_config(config_path, &unknown);
        for (const auto& d : unknown) std::cerr << "warning: " << d.message << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (!config.experiment.empty() && config.experiment != experiment) {
        std::cerr << "error: config names experiment '" << config.experiment << "' but '" << experiment
                  << "' was requested\n";
        return 2;
    }
    config.experiment = experiment;
    if (out_dir) config.out = *out_dir;
    if (seed) config.seed = *seed;
    if (!sets.empty()) {
        config.k_files = sets;
        config.base_dir.clear();
    }
    if (m) config.m = *m;
    if (p) config.p = *p;
    if (s) config.s = *s;
    if (eps) config.eps = *eps;
    if (!a.empty()) config.a = a;
    if (corpus) config.corpus = *corpus;
    try {
        return bh::run(config, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
