#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "mixclust/io.hpp"

using nlohmann::json;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("mixclust_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MIXCLUST_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("generate + cluster + verify happy path") {
    TempDir dir;
    const std::string common = "--n 60 --m 40 --k 2 --sigma-sq 0.5 --seed 3 --c 2e-5";
    CHECK(run_cli("generate " + common + " --out " + dir.file("a.mat") +
                  " --labels " + dir.file("a.labels") + " --params " +
                  dir.file("a.params")) == 0);
    CHECK(std::filesystem::exists(dir.file("a.mat")));

    CHECK(run_cli("cluster --k 2 --seed 5 --in " + dir.file("a.mat") + " --out " +
                  dir.file("a.pred") + " --labels " + dir.file("a.labels") +
                  " --params " + dir.file("a.params") + " --c 2e-5") == 0);
    const json report = json::parse(mixclust::io::read_text(dir.file("a.pred") + ".report.json"));
    CHECK(report["accuracy"].get<double>() == 1.0);
    CHECK(report["config"]["subcommand"] == "cluster");
    CHECK(report.contains("estimated_centers"));
    CHECK_FALSE(report.contains("timings_ms"));

    CHECK(run_cli("verify --seed 5 --in " + dir.file("a.mat") + " --labels " +
                  dir.file("a.labels") + " --params " + dir.file("a.params") +
                  " --out " + dir.file("a.verify.json") + " --c 2e-5") == 0);
    const json verify = json::parse(mixclust::io::read_text(dir.file("a.verify.json")));
    CHECK(verify["all_checks_satisfied"].get<bool>());
    CHECK(verify["reports"].size() >= 5);
}

TEST_CASE("timings appear only when requested") {
    TempDir dir;
    const std::string common = "--n 40 --m 30 --k 2 --sigma-sq 0.5 --seed 1 --c 2e-5";
    REQUIRE(run_cli("generate " + common + " --out " + dir.file("b.mat") +
                    " --labels " + dir.file("b.labels") + " --params " +
                    dir.file("b.params")) == 0);
    REQUIRE(run_cli("cluster --k 2 --seed 2 --timings --in " + dir.file("b.mat") +
                    " --out " + dir.file("b.pred")) == 0);
    const json report = json::parse(mixclust::io::read_text(dir.file("b.pred") + ".report.json"));
    CHECK(report.contains("timings_ms"));
    CHECK(report["timings_ms"]["total"].get<double>() > 0.0);
}

TEST_CASE("bench: empty grid yields a bare header, 2x2 grid yields 4 rows") {
    TempDir dir;
    mixclust::io::write_text(dir.file("empty.json"), R"({"configs":[],"seeds":[]})");
    CHECK(run_cli("bench --in " + dir.file("empty.json") + " --out " +
                  dir.file("empty.csv")) == 0);
    const std::string empty = mixclust::io::read_text(dir.file("empty.csv"));
    CHECK(empty ==
          "n,m,k,sigma_sq,family,c,seed,accuracy,separation_margin,"
          "svd_ms,kmeans_ms,project_ms,total_ms\n");

    mixclust::io::write_text(
        dir.file("grid.json"),
        R"({"configs":[{"n":40,"m":30,"k":2,"sigma_sq":0.5,"c":2e-5},
                       {"n":50,"m":30,"k":2,"sigma_sq":0.5,"c":2e-5}],
            "seeds":[1,2]})");
    CHECK(run_cli("bench --in " + dir.file("grid.json") + " --out " +
                  dir.file("grid.csv")) == 0);
    const std::string table = mixclust::io::read_text(dir.file("grid.csv"));
    int lines = 0;
    for (char ch : table)
        if (ch == '\n') ++lines;
    CHECK(lines == 5);  // header + 4 rows

    CHECK(run_cli("bench --format json --in " + dir.file("grid.json") + " --out " +
                  dir.file("grid.jsonout")) == 0);
    const json rows = json::parse(mixclust::io::read_text(dir.file("grid.jsonout")));
    CHECK(rows.size() == 4);
    CHECK(rows[0]["accuracy"].get<double>() == 1.0);
}

TEST_CASE("exit codes: usage 1, io 2") {
    TempDir dir;
    CHECK(run_cli("cluster --k 2 --in " + dir.file("missing.mat") + " --out " +
                  dir.file("x.pred")) == 2);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("generate --n 10 --m 10 --k 3 --sigma-sq 0.5 --c 1.0 --out " +
                  dir.file("x.mat") + " --labels " + dir.file("x.labels") +
                  " --params " + dir.file("x.params")) == 1);  // unreachable separation
}
