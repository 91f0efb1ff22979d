// Compares the serial reference kernels against the OpenMP kernels on
// fixed workloads and reports wall time plus a bitwise-equality check.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "mixclust/kernels.hpp"
#include "mixclust/linalg.hpp"
#include "mixclust/rng.hpp"

using namespace mixclust;
using kernels::Exec;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t stream) {
    Matrix m(rows, cols);
    CounterRng rng(42, stream);
    for (double& v : m.a) v = 2.0 * rng.next_unit() - 1.0;
    return m;
}

double time_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        if (ms < best) best = ms;
    }
    return best;
}

void report(const std::string& name, double serial_ms, double parallel_ms,
            bool identical) {
    std::printf("%-28s %10.2f ms %10.2f ms   x%-6.2f %s\n", name.c_str(),
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "bit-identical" : "MISMATCH");
}

} // namespace

int main() {
    std::printf("%-28s %13s %13s   %-7s\n", "kernel", "serial", "openmp", "speedup");

    {
        const Matrix a = random_matrix(512, 512, 1);
        const Matrix b = random_matrix(512, 512, 2);
        Matrix cs, cp;
        const double ts = time_ms([&] { kernels::matmul(a, b, cs, Exec::Serial); });
        const double tp = time_ms([&] { kernels::matmul(a, b, cp, Exec::Parallel); });
        report("matmul 512x512", ts, tp, cs == cp);
    }
    {
        const Matrix a = random_matrix(600, 400, 3);
        const Matrix b = random_matrix(600, 500, 4);
        Matrix cs, cp;
        const double ts = time_ms([&] { kernels::matmul_trans_a(a, b, cs, Exec::Serial); });
        const double tp = time_ms([&] { kernels::matmul_trans_a(a, b, cp, Exec::Parallel); });
        report("matmul_trans_a 400x600x500", ts, tp, cs == cp);
    }
    {
        const Matrix a = random_matrix(2000, 2000, 5);
        double vs = 0, vp = 0;
        const double ts = time_ms([&] { vs = kernels::frobenius_sq(a, Exec::Serial); });
        const double tp = time_ms([&] { vp = kernels::frobenius_sq(a, Exec::Parallel); });
        report("frobenius_sq 2000x2000", ts, tp, vs == vp);
    }
    {
        const Matrix a = random_matrix(800, 300, 6);
        linalg::SvdOptions serial_opts, parallel_opts;
        serial_opts.exec = Exec::Serial;
        parallel_opts.exec = Exec::Parallel;
        linalg::SvdResult rs, rp;
        const double ts = time_ms([&] { rs = linalg::svd_jacobi(a, serial_opts); }, 1);
        const double tp = time_ms([&] { rp = linalg::svd_jacobi(a, parallel_opts); }, 1);
        report("jacobi svd 800x300", ts, tp,
               rs.sigma == rp.sigma && rs.u == rp.u && rs.v == rp.v);
    }
    {
        const Matrix points = random_matrix(64, 20000, 7);
        const Matrix centers = random_matrix(64, 16, 8);
        std::vector<int> as(20000), ap(20000);
        std::vector<double> d1s(20000), d1p(20000), d2s(20000), d2p(20000);
        const double ts = time_ms([&] {
            kernels::nearest_assign(points, centers, as.data(), d1s.data(), d2s.data(),
                                    Exec::Serial);
        });
        const double tp = time_ms([&] {
            kernels::nearest_assign(points, centers, ap.data(), d1p.data(), d2p.data(),
                                    Exec::Parallel);
        });
        report("nearest_assign 20k x 16", ts, tp, as == ap && d1s == d1p && d2s == d2p);
    }
    {
        Matrix centers = random_matrix(1000, 4, 9);
        for (double& v : centers.a) v = 0.5 * (v + 1.0) * 0.5;  // into [0, 0.5]
        std::vector<int> labels(4000);
        for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = static_cast<int>(j % 4);
        Matrix os, op;
        const double ts = time_ms([&] {
            kernels::bernoulli_columns(centers, labels, 7, os, Exec::Serial);
        });
        const double tp = time_ms([&] {
            kernels::bernoulli_columns(centers, labels, 7, op, Exec::Parallel);
        });
        report("bernoulli gen 1000x4000", ts, tp, os == op);
    }
    return 0;
}
