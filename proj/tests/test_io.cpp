#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "mixclust/errors.hpp"
#include "mixclust/io.hpp"
#include "mixclust/model.hpp"
#include "oracles.hpp"

using namespace mixclust;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("mixclust_io_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("matrix round-trip is exact for 0/1 and decimal data") {
    TempDir dir;
    Matrix binary(5, 7);
    CounterRng rng(1, 1);
    for (double& v : binary.a) v = (rng.next_unit() < 0.5) ? 1.0 : 0.0;
    io::write_matrix(dir.file("bin.mat"), binary, true);
    CHECK(io::read_matrix(dir.file("bin.mat")) == binary);

    const Matrix dense = oracles::random_gaussian(6, 4, 2);
    io::write_matrix(dir.file("dense.mat"), dense, false);
    CHECK(io::read_matrix(dir.file("dense.mat")) == dense);
}

TEST_CASE("labels round-trip") {
    TempDir dir;
    const std::vector<int> labels{0, 2, 1, 1, 0, 2, 2};
    io::write_labels(dir.file("x.labels"), labels);
    CHECK(io::read_labels(dir.file("x.labels")) == labels);
}

TEST_CASE("params round-trip preserves every field exactly") {
    TempDir dir;
    auto params = model::make_separated_params(25, 3, 0.37, {0.5, 0.25, 0.25}, 40, 1e-6);
    params.centers.at(7, 1) = 0.123456789012345671;  // not representable shortly
    io::write_params(dir.file("x.params"), params);
    const auto loaded = io::read_params(dir.file("x.params"));
    CHECK(loaded.k == params.k);
    CHECK(loaded.n == params.n);
    CHECK(loaded.sigma_sq == params.sigma_sq);
    CHECK(loaded.weights == params.weights);
    CHECK(loaded.centers == params.centers);
    CHECK(loaded.family == params.family);
}

TEST_CASE("missing and malformed files raise IoError") {
    TempDir dir;
    CHECK_THROWS_AS(io::read_matrix(dir.file("absent.mat")), IoError);
    CHECK_THROWS_AS(io::read_params(dir.file("absent.params")), IoError);

    io::write_text(dir.file("bad.mat"), "2 2\n1 0\n");
    CHECK_THROWS_AS(io::read_matrix(dir.file("bad.mat")), IoError);

    io::write_text(dir.file("bad.params"), "k 2\nn 3\nbogus 1\n");
    CHECK_THROWS_AS(io::read_params(dir.file("bad.params")), IoError);

    io::write_text(dir.file("short.params"),
                   "k 2\nn 2\nsigma_sq 0.5\nfamily bernoulli\nweights 0.5 0.5\n"
                   "center 0.1 0.2\n");
    CHECK_THROWS_AS(io::read_params(dir.file("short.params")), IoError);
}

TEST_CASE("writes land atomically under the final name") {
    TempDir dir;
    io::write_text(dir.file("a.txt"), "hello\n");
    CHECK(io::read_text(dir.file("a.txt")) == "hello\n");
    CHECK_FALSE(std::filesystem::exists(dir.file("a.txt") + ".tmp"));
}
