// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any fails.

#include "bh/corpus.hpp"
#include "bh/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace bh;

namespace {

struct Run {
    ExperimentOutput output;
    double seconds = 0.0;
};

ExperimentConfig config_for(const std::string& name) {
    return load_config(std::string(BH_CONFIG_DIR) + "/" + name + ".json");
}

Run execute(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    Run r;
    r.output = run_experiment(config);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::map<std::string, Run>& cache() {
    static std::map<std::string, Run> runs;
    return runs;
}

const Run& run_named(const std::string& name) {
    auto it = cache().find(name);
    if (it == cache().end()) it = cache().emplace(name, execute(config_for(name))).first;
    return it->second;
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

struct Outcome {
    bool pass = true;
    std::size_t checks = 0;
    std::size_t passed = 0;
    double seconds = 0.0;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        ++checks;
        if (ok) {
            ++passed;
        } else {
            pass = false;
            notes.push_back(what);
        }
    }
};

using Selector = std::function<bool(const std::string&)>;

// Applies the selected checks of the named runs and the runtime budget.
Outcome from_checks(const std::vector<std::string>& configs, const Selector& select, double budget) {
    Outcome o;
    for (const auto& name : configs) {
        const Run& r = run_named(name);
        o.seconds += r.seconds;
        o.require(r.output.converged, name + ": numerical non-convergence");
        std::size_t used = 0;
        for (const auto& c : r.output.checks) {
            if (!select(c.name)) continue;
            ++used;
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s: %s = %.6g (%s %.6g)", name.c_str(), c.name.c_str(), c.value,
                          c.relation.c_str(), c.threshold);
            o.require(c.pass, buf);
        }
        o.require(used > 0, name + ": no matching checks");
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "runtime %.3g s exceeds %.3g s", o.seconds, budget);
    o.require(o.seconds < budget, buf);
    return o;
}

bool any(const std::string&) { return true; }

Outcome criterion_equivalence() {
    Outcome o = from_checks({"equivalence"}, any, 300.0);
    const Run& r = run_named("equivalence");
    const double C = r.output.metrics.value("constant", 0.0);
    char buf[128];
    std::snprintf(buf, sizeof buf, "pinned constant: measured %.9g, expected 4.23076", C);
    o.require(std::abs(C - 4.23076) <= 1e-5 * 4.23076, buf);
    const std::size_t items = standard_corpus(WeightVector({1.0}), "equivalence").size();
    o.require(items == 6, "corpus must hold 6 functions, found " + std::to_string(items));
    const std::size_t rows = r.output.tables.empty() ? 0 : r.output.tables[0].rows.size();
    o.require(rows == 6 * 12, "expected 72 (function, t) rows, found " + std::to_string(rows));
    return o;
}

std::string serialize(const ExperimentOutput& out, const ExperimentConfig& config) {
    std::string s;
    for (const auto& t : out.tables) s += to_csv(t);
    s += summary_json(out, config).dump(2);
    s += config_to_json(config).dump(2);
    return s;
}

Outcome criterion_determinism() {
    Outcome o;
    for (const char* name : {"specfun_check", "transform_roundtrip", "transform_roundtrip_2d", "translation_props",
                             "equivalence", "embedding", "capacity", "capacity_2d", "removability"}) {
        const ExperimentConfig config = config_for(name);
        const Run a = execute(config);
        const Run b = execute(config);
        o.seconds += a.seconds + b.seconds;
        o.require(serialize(a.output, config) == serialize(b.output, config), std::string(name) + ": reruns differ");
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> evaluate;
    };
    const std::vector<Criterion> criteria{
        {1, "special functions", [] { return from_checks({"specfun_check"}, any, 1.0); }},
        {2, "Hankel transform, n = 1 and n = 2",
         [] { return from_checks({"transform_roundtrip", "transform_roundtrip_2d"}, any, 10.0); }},
        {3, "generalized translation",
         [] {
             return from_checks({"translation_props"},
                                [](const std::string& n) {
                                    return contains(n, "contraction") || contains(n, "commutativity residual") ||
                                           contains(n, "symmetry") || contains(n, "spectral law");
                                },
                                30.0);
         }},
        {4, "Bessel convolution",
         [] {
             return from_checks({"translation_props"},
                                [](const std::string& n) {
                                    return contains(n, "Young") || contains(n, "convolution commutativity") ||
                                           contains(n, "direct convolution");
                                },
                                30.0);
         }},
        {5, "K-functional and modulus equivalence", criterion_equivalence},
        {6, "Gagliardo seminorms",
         [] { return from_checks({"embedding"}, [](const std::string& n) { return contains(n, "Gagliardo"); }, 120.0); }},
        {7, "potentials and embeddings",
         [] {
             return from_checks({"embedding"}, [](const std::string& n) { return !contains(n, "Gagliardo"); }, 180.0);
         }},
        {8, "capacities", [] { return from_checks({"capacity", "capacity_2d"}, any, 120.0); }},
        {9, "determinism", criterion_determinism},
    };

    bool all = true;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.evaluate();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        all = all && o.pass;
        std::printf("%s criterion %d: %s (%zu/%zu checks, %.3f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.passed,
                    o.checks, o.seconds);
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
