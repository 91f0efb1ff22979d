#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mixclust/kernels.hpp"
#include "mixclust/rng.hpp"
#include "oracles.hpp"

using namespace mixclust;
using kernels::Exec;

TEST_CASE("serial and parallel kernel paths are bit-identical") {
    const Matrix a = oracles::random_uniform(37, 53, 1);
    const Matrix b = oracles::random_uniform(53, 29, 2);

    Matrix cs, cp;
    kernels::matmul(a, b, cs, Exec::Serial);
    kernels::matmul(a, b, cp, Exec::Parallel);
    CHECK(cs == cp);

    kernels::matmul_trans_a(a, a, cs, Exec::Serial);
    kernels::matmul_trans_a(a, a, cp, Exec::Parallel);
    CHECK(cs == cp);

    kernels::matmul_trans_b(b, b, cs, Exec::Serial);
    kernels::matmul_trans_b(b, b, cp, Exec::Parallel);
    CHECK(cs == cp);

    CHECK(kernels::frobenius_sq(a, Exec::Serial) ==
          kernels::frobenius_sq(a, Exec::Parallel));

    const Matrix points = oracles::random_uniform(8, 500, 3);
    const Matrix centers = oracles::random_uniform(8, 5, 4);
    std::vector<int> as(500), ap(500);
    std::vector<double> d1s(500), d1p(500), d2s(500), d2p(500);
    kernels::nearest_assign(points, centers, as.data(), d1s.data(), d2s.data(),
                            Exec::Serial);
    kernels::nearest_assign(points, centers, ap.data(), d1p.data(), d2p.data(),
                            Exec::Parallel);
    CHECK(as == ap);
    CHECK(d1s == d1p);
    CHECK(d2s == d2p);

    Matrix sums_s, sums_p;
    std::vector<long long> counts_s, counts_p;
    kernels::cluster_sums(points, as.data(), 5, sums_s, counts_s, Exec::Serial);
    kernels::cluster_sums(points, ap.data(), 5, sums_p, counts_p, Exec::Parallel);
    CHECK(sums_s == sums_p);
    CHECK(counts_s == counts_p);

    Matrix mu = oracles::random_uniform(40, 3, 5, 0.0, 0.6);
    std::vector<int> labels(90);
    for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = static_cast<int>(j % 3);
    Matrix gs, gp;
    kernels::bernoulli_columns(mu, labels, 99, gs, Exec::Serial);
    kernels::bernoulli_columns(mu, labels, 99, gp, Exec::Parallel);
    CHECK(gs == gp);
    kernels::gaussian_columns(mu, labels, 0.25, 99, gs, Exec::Serial);
    kernels::gaussian_columns(mu, labels, 0.25, 99, gp, Exec::Parallel);
    CHECK(gs == gp);

    std::vector<double> xs(20000);
    CounterRng rng(7, 7);
    for (double& v : xs) v = rng.next_gaussian();
    CHECK(kernels::det_sum(xs.data(), xs.size(), Exec::Serial) ==
          kernels::det_sum(xs.data(), xs.size(), Exec::Parallel));
}

TEST_CASE("matmul matches a naive triple loop") {
    const Matrix a = oracles::random_uniform(9, 7, 10);
    const Matrix b = oracles::random_uniform(7, 11, 11);
    Matrix c;
    kernels::matmul(a, b, c);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 11; ++j) {
            double expect = 0.0;
            for (int t = 0; t < 7; ++t) expect += a.at(i, t) * b.at(t, j);
            CHECK(c.at(i, j) == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("frobenius_sq matches the naive double loop") {
    const Matrix a = oracles::random_uniform(10, 10, 12);
    const double expect = oracles::naive_frobenius_sq(a);
    CHECK(kernels::frobenius_sq(a) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(kernels::frobenius_sq(Matrix(4, 4)) == 0.0);
    Matrix ones(2, 2);
    for (double& v : ones.a) v = 1.0;
    CHECK(kernels::frobenius_sq(ones) == 4.0);
}

TEST_CASE("counter rng is deterministic, stream-separated, unit-ranged") {
    CounterRng a(123, 5), b(123, 5), c(123, 6);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        CHECK(va != c.next_u64());
    }
    CounterRng u(9, 0);
    for (int i = 0; i < 10000; ++i) {
        const double v = u.next_unit();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(fork_seed(1, 2) != fork_seed(1, 3));
    CHECK(fork_seed(1, 2) == fork_seed(1, 2));
}

TEST_CASE("nearest_assign breaks ties toward the lower center index") {
    Matrix points(1, 1);
    points.at(0, 0) = 0.5;
    Matrix centers(1, 2);
    centers.at(0, 0) = 0.0;
    centers.at(0, 1) = 1.0;
    int assign = -1;
    double d1 = 0, d2 = 0;
    kernels::nearest_assign(points, centers, &assign, &d1, &d2);
    CHECK(assign == 0);
    CHECK(d1 == doctest::Approx(0.25));
    CHECK(d2 == doctest::Approx(0.25));
}
