#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rbmo/cli.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kData = RBMO_TEST_DATA_DIR;

std::string fresh_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("rbmo_cli_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run(std::initializer_list<std::string> args) { return rbmo::run_cli(std::vector(args)); }

}  // namespace

TEST_CASE("cli: missing input is a usage error (exit 2)") {
    CHECK(run({"analyze", "--out", fresh_dir("a")}) == 2);
    CHECK(run({"analyze", "--space", "/nonexistent.json", "--out", fresh_dir("b")}) == 2);
    CHECK(run({"rbmo", "--generate", "uniform_grid(4,1)", "--f", "spike:0", "--rho", "0.5",
               "--out", fresh_dir("c")}) == 2);
}

TEST_CASE("cli: analyze passes on a grid with ball-measure lambda") {
    const std::string out = fresh_dir("analyze");
    CHECK(run({"analyze", "--generate", "uniform_grid(16,1)", "--lambda", "ballmeasure", "--out",
               out}) == 0);
    CHECK(fs::exists(fs::path(out) / "diagnostics.json"));
    CHECK(fs::exists(fs::path(out) / "kernel_bounds.csv"));
    CHECK(fs::exists(fs::path(out) / "canonical_balls.csv"));
}

TEST_CASE("cli: analyze fails with an undersized power law (exit 1)") {
    CHECK(run({"analyze", "--space", kData + "/s3_space.json", "--lambda", "power:0.1:1", "--out",
               fresh_dir("bad")}) == 1);
}

TEST_CASE("cli: rbmo constant function emits A = 0") {
    const std::string out = fresh_dir("const");
    CHECK(run({"rbmo", "--generate", "uniform_grid(6,1)", "--f", "constant:3", "--out", out}) == 0);
    const std::string fam = slurp(fs::path(out) / "family.json");
    CHECK(fam.find("\"A\": 0.0") != std::string::npos);
}

TEST_CASE("cli: rbmo on the S3 fixture matches the committed golden file") {
    const std::string out = fresh_dir("golden");
    CHECK(run({"rbmo", "--space", kData + "/s3_space.json", "--lambda", "power:2:1", "--f",
               "spike:2", "--rho", "2", "--out", out}) == 0);
    CHECK(slurp(fs::path(out) / "family.json") == slurp(kData + "/s3_family_golden.json"));
    CHECK(fs::exists(fs::path(out) / "slack.csv"));
    CHECK(fs::exists(fs::path(out) / "problem.triplets"));
    CHECK(fs::exists(fs::path(out) / "section5.json"));
}

TEST_CASE("cli: scale cap refuses 25 points without --force") {
    CHECK(run({"rbmo", "--generate", "uniform_grid(25,1)", "--f", "spike:0", "--out",
               fresh_dir("cap")}) == 2);
}

TEST_CASE("cli: jn with a constant function emits a header-only tail CSV") {
    const std::string out = fresh_dir("jnconst");
    CHECK(run({"jn", "--generate", "uniform_grid(8,1)", "--f", "constant:1", "--out", out}) == 0);
    CHECK(slurp(fs::path(out) / "tail.csv") == "t,tail,envelope\n");
    CHECK(fs::exists(fs::path(out) / "tail.gnuplot"));
}

TEST_CASE("cli: jn on a spike emits a consistent tail curve") {
    const std::string out = fresh_dir("jnspike");
    CHECK(run({"jn", "--generate", "uniform_grid(20,1)", "--f", "spike:0", "--out", out}) == 0);
    const std::string csv = slurp(fs::path(out) / "tail.csv");
    CHECK(csv.find("t,tail,envelope\n") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 3);
    const std::string rep = slurp(fs::path(out) / "jn_report.json");
    CHECK(rep.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("cli: maximal command writes the profile and the weak-type report") {
    const std::string out = fresh_dir("max");
    CHECK(run({"maximal", "--generate", "uniform_grid(12,1)", "--f", "random:4", "--t-grid",
               "0.01:1:20", "--out", out}) == 0);
    const std::string rep = slurp(fs::path(out) / "weak_type.json");
    CHECK(rep.find("\"pass\": true") != std::string::npos);
    CHECK(slurp(fs::path(out) / "maximal_profile.csv").find("point,value\n") == 0);
}

TEST_CASE("cli: rho-independence check runs when --sigma is given") {
    const std::string out = fresh_dir("sigma");
    CHECK(run({"rbmo", "--generate", "uniform_grid(8,1)", "--f", "random:2", "--rho", "2",
               "--sigma", "1.5", "--out", out}) == 0);
    const std::string rep = slurp(fs::path(out) / "compare_rho.json");
    CHECK(rep.find("\"monotone_ok\": true") != std::string::npos);
}

TEST_CASE("cli: config file supplies defaults, flags win") {
    const std::string out = fresh_dir("config");
    const fs::path cfg = fs::path(out) / "cfg.json";
    {
        std::ofstream o(cfg);
        o << R"json({"generate": "uniform_grid(6,1)", "f": "constant:2", "rho": 3.0})json";
    }
    CHECK(run({"rbmo", "--config", cfg.string(), "--out", out}) == 0);
    const std::string fam = slurp(fs::path(out) / "family.json");
    CHECK(fam.find("\"rho\": 3.0") != std::string::npos);
}

TEST_CASE("cli: reruns are byte-identical") {
    const std::string out1 = fresh_dir("rep1");
    const std::string out2 = fresh_dir("rep2");
    for (const std::string& out : {out1, out2})
        CHECK(run({"rbmo", "--generate", "cantor_dust(3)", "--f", "random:5", "--out", out}) == 0);
    CHECK(slurp(fs::path(out1) / "family.json") == slurp(fs::path(out2) / "family.json"));
    CHECK(slurp(fs::path(out1) / "slack.csv") == slurp(fs::path(out2) / "slack.csv"));
}
