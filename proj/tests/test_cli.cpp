#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bh/experiment.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace bh;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("bh_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

int cli(const std::string& args) {
    const std::string cmd = std::string("\"") + BH_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool has_error(const std::vector<Diagnostic>& ds, const std::string& needle) {
    for (const auto& d : ds) {
        if (d.severity == Severity::error && d.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

bool has_warning(const std::vector<Diagnostic>& ds, const std::string& needle) {
    for (const auto& d : ds) {
        if (d.severity == Severity::warning && d.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("experiment registry") {
    const auto& names = experiment_names();
    CHECK(names.size() == 7);
    for (const char* n : {"specfun_check", "transform_roundtrip", "translation_props", "equivalence", "embedding",
                          "capacity", "removability"}) {
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    }
}

TEST_CASE("config parsing and echo") {
    std::vector<Diagnostic> unknown;
    const json doc = {{"experiment", "embedding"}, {"a", {0.5, 1.5}}, {"M", 64}, {"s", 1.2}, {"colour", "blue"}};
    const ExperimentConfig c = parse_config(doc, &unknown);
    CHECK(c.experiment == "embedding");
    CHECK(c.a == std::vector<double>{0.5, 1.5});
    CHECK(c.M == 64);
    CHECK(c.s == 1.2);
    CHECK(c.p == 2.0);
    REQUIRE(unknown.size() == 1);
    CHECK(unknown[0].severity == Severity::warning);
    CHECK(unknown[0].message.find("colour") != std::string::npos);
    const json echo = config_to_json(c);
    CHECK(config_to_json(parse_config(echo)) == echo);
    CHECK_THROWS_AS(parse_config(json{{"M", "many"}}), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(json::array({1, 2})), std::invalid_argument);
}

TEST_CASE("validation messages") {
    ExperimentConfig c;
    c.experiment = "embedding";
    c.s = 1.0;
    c.eps = 1.0;
    CHECK(has_error(validate(c), "0 < ε < s"));
    c.eps = 0.5;
    CHECK(!has_error(validate(c), ""));
    c.t_grid = {0.1, 0.2, 0.25, 1.0};
    CHECK(has_warning(validate(c), "not log-spaced"));
    c.t_grid = {0.2, 0.1};
    CHECK(has_error(validate(c), "increasing"));

    ExperimentConfig k;
    k.experiment = "capacity";
    k.k_files = {"/nonexistent/set.json"};
    CHECK(has_error(validate(k), "K file not found: /nonexistent/set.json"));
    k.k_files.clear();
    CHECK(has_error(validate(k), "requires at least one K file"));

    ExperimentConfig r;
    r.experiment = "removability";
    r.s = 1.0;
    r.s_list = {1.0};
    const fs::path dir = scratch("validate");
    write_text(dir / "k.json", "[[1.0]]");
    r.k_files = {(dir / "k.json").string()};
    CHECK(has_error(validate(r), "0 <= s_k < s"));

    ExperimentConfig u;
    u.experiment = "nothing";
    CHECK(has_error(validate(u), "unknown experiment"));
}

TEST_CASE("point set files") {
    const fs::path dir = scratch("points");
    write_text(dir / "ok.json", "[[1.0, 2.0], [0.5, 0.25]]");
    const auto pts = load_point_set(dir / "ok.json");
    REQUIRE(pts.size() == 2);
    CHECK(pts[1] == std::vector<double>{0.5, 0.25});
    write_text(dir / "bad.json", "{\"x\": 1}");
    CHECK_THROWS(load_point_set(dir / "bad.json"));
    write_text(dir / "ragged.json", "[[1.0, 2.0], [0.5]]");
    CHECK_THROWS(load_point_set(dir / "ragged.json"));
    write_text(dir / "hollow.json", "[[]]");
    CHECK_THROWS(load_point_set(dir / "hollow.json"));
}

TEST_CASE("CSV cells") {
    CHECK(format_cell(Cell{0.1}) == "0.10000000000000001");
    CHECK(std::stod(format_cell(Cell{M_PI})) == M_PI);
    CHECK(format_cell(Cell{2.0 / 3.0}) == "0.66666666666666663");
    CHECK(format_cell(Cell{1e-300}) == "1e-300");
    CHECK(format_cell(Cell{42LL}) == "42");
    CHECK(format_cell(Cell{true}) == "true");
    CHECK(format_cell(Cell{std::nan("")}) == "nan");
    CHECK(format_cell(Cell{std::string("plain")}) == "plain");
    CHECK(format_cell(Cell{std::string("a,b")}) == "\"a,b\"");
    CHECK(format_cell(Cell{std::string("say \"hi\"")}) == "\"say \"\"hi\"\"\"");
    CHECK(format_cell(Cell{std::string("two\nlines")}) == "\"two\nlines\"");
    const Table t{"", {"id", "value"}, {{std::string("x,y"), 0.5}, {std::string("z"), 2LL}}};
    CHECK(to_csv(t) == "id,value\r\n\"x,y\",0.5\r\nz,2\r\n");
}

TEST_CASE("run writes artifacts deterministically") {
    const fs::path dir = scratch("run");
    ExperimentConfig c;
    c.experiment = "specfun_check";
    c.out = (dir / "a").string();
    std::ostringstream log1;
    CHECK(run(c, log1) == 0);
    c.out = (dir / "b").string();
    std::ostringstream log2;
    CHECK(run(c, log2) == 0);
    CHECK(log1.str() == log2.str());
    for (const char* f : {"specfun_check.csv", "specfun_check_summary.json"}) {
        REQUIRE(fs::exists(dir / "a" / f));
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
    const json summary = json::parse(slurp(dir / "a" / "specfun_check_summary.json"));
    REQUIRE(summary["checks"].is_array());
    REQUIRE(!summary["checks"].empty());
    for (const auto& chk : summary["checks"]) {
        CHECK(chk.contains("threshold"));
        CHECK(chk.contains("relation"));
    }
    CHECK(summary["exit_code"] == 0);
    const json echo = json::parse(slurp(dir / "a" / "specfun_check_config.json"));
    CHECK(echo["experiment"] == "specfun_check");
    const std::string csv = slurp(dir / "a" / "specfun_check.csv");
    CHECK(csv.find("\r\n") != std::string::npos);

    ExperimentConfig bad;
    bad.experiment = "embedding";
    bad.eps = 2.0;
    std::ostringstream log3;
    CHECK(run(bad, log3) == 2);
    CHECK(log3.str().find("error:") != std::string::npos);
}

TEST_CASE("command-line exit codes") {
    const fs::path dir = scratch("exe");
    CHECK(cli("--list") == 0);
    CHECK(cli("--version") == 0);
    CHECK(cli("--no-such-flag") == 2);
    CHECK(cli("") == 2);
    const std::string cfg = std::string(BH_CONFIG_DIR) + "/specfun_check.json";
    CHECK(cli("specfun_check --config \"" + cfg + "\" --out \"" + (dir / "ok").string() + "\"") == 0);
    CHECK(fs::exists(dir / "ok" / "specfun_check.csv"));
    CHECK(cli("embedding --config \"" + cfg + "\"") == 2);
    write_text(dir / "bad.json", "{\"experiment\": \"embedding\", \"s\": 1.0, \"eps\": 1.5}");
    CHECK(cli("embedding --config \"" + (dir / "bad.json").string() + "\" --out \"" + (dir / "x").string() + "\"") == 2);
    write_text(dir / "broken.json", "{ not json");
    CHECK(cli("embedding --config \"" + (dir / "broken.json").string() + "\"") == 2);
    write_text(dir / "cap.json", "{\"experiment\": \"capacity\", \"k_files\": [\"missing.json\"]}");
    CHECK(cli("capacity --config \"" + (dir / "cap.json").string() + "\"") == 2);
}
