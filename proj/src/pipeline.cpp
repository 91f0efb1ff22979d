#include "mixclust/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mixclust/assignment.hpp"
#include "mixclust/kernels.hpp"
#include "mixclust/kmeans.hpp"
#include "mixclust/linalg.hpp"
#include "mixclust/rng.hpp"

namespace mixclust::pipeline {

namespace {

constexpr std::uint64_t kSplitLabel = 1;
constexpr std::uint64_t kKmeansHalf1Label = 2;
constexpr std::uint64_t kKmeansHalf2Label = 3;

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

struct CentersOut {
    CenterSet set;
    double svd_ms = 0.0;
    double kmeans_ms = 0.0;
    double kmeans_margin = std::numeric_limits<double>::infinity();
};

CentersOut centers_detailed(const Matrix& a_half, int k, std::uint64_t seed,
                            double tol) {
    if (a_half.cols < k)
        throw std::invalid_argument("centers: fewer columns than clusters");
    CentersOut out;

    auto t0 = std::chrono::steady_clock::now();
    const auto rank_k = linalg::rank_k_approx(a_half, k, tol);
    out.svd_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    kmeans::L22Instance instance{rank_k.approx, k};
    kmeans::L22Options opts;
    opts.min_assign_margin = &out.kmeans_margin;
    const auto solution = kmeans::solve_l22(instance, seed, opts);
    out.kmeans_ms = ms_since(t0);

    // Average the original (raw) columns of each denoised cluster.
    Matrix sums;
    std::vector<long long> counts;
    kernels::cluster_sums(a_half, solution.assignment.data(), k, sums, counts);
    out.set.centers = Matrix(a_half.rows, k);
    for (int r = 0; r < k; ++r) {
        const double inv = 1.0 / static_cast<double>(counts[static_cast<std::size_t>(r)]);
        const double* s = sums.col(r);
        double* c = out.set.centers.col(r);
        for (int i = 0; i < a_half.rows; ++i) c[i] = s[i] * inv;
    }
    return out;
}

} // namespace

SplitPlan split(int m, std::uint64_t seed) {
    if (m < 2) throw std::invalid_argument("split: m must be >= 2");
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    CounterRng rng(seed, 0x511ULL);
    for (int i = m - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_u64() %
                                       static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    const int size1 = (m + 1) / 2;
    SplitPlan plan;
    plan.seed = seed;
    plan.half1.assign(order.begin(), order.begin() + size1);
    plan.half2.assign(order.begin() + size1, order.end());
    std::sort(plan.half1.begin(), plan.half1.end());
    std::sort(plan.half2.begin(), plan.half2.end());
    return plan;
}

CenterSet centers(const Matrix& a_half, int k, std::uint64_t seed, double tol) {
    return centers_detailed(a_half, k, seed, tol).set;
}

Clustering project_assign(const Matrix& samples, const CenterSet& estimated,
                          double* min_margin) {
    const int n = samples.rows, m = samples.cols, k = estimated.centers.cols;
    if (k < 1) throw std::invalid_argument("project_assign: k must be >= 1");
    if (estimated.centers.rows != n)
        throw std::invalid_argument("project_assign: dimension mismatch");

    Clustering out;
    out.k = k;
    out.assignment.assign(static_cast<std::size_t>(m), 0);
    if (min_margin) *min_margin = std::numeric_limits<double>::infinity();
    if (k == 1) return out;

    // Center Gram matrix and per-sample center dot products; every pair
    // statistic is then O(1).
    Matrix gram, dots;
    kernels::matmul_trans_a(estimated.centers, estimated.centers, gram);
    kernels::matmul_trans_a(estimated.centers, samples, dots);

    std::vector<double> margins(static_cast<std::size_t>(m),
                                std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        auto stat = [&](int r, int s) {
            // |(v - c_r).(c_s - c_r)|
            return std::abs(dots.at(s, j) - dots.at(r, j) - gram.at(r, s) +
                            gram.at(r, r));
        };
        int chosen = -1;
        for (int r = 0; r < k && chosen < 0; ++r) {
            bool ok = true;
            for (int s = 0; s < k && ok; ++s) {
                if (s == r) continue;
                if (stat(r, s) > stat(s, r)) ok = false;
            }
            if (ok) chosen = r;
        }
        if (chosen < 0) {
            // No qualifier (possible only through floating-point asymmetry):
            // smallest worst-case statistic, lowest index on ties.
            double best = std::numeric_limits<double>::infinity();
            for (int r = 0; r < k; ++r) {
                double worst = 0.0;
                for (int s = 0; s < k; ++s)
                    if (s != r) worst = std::max(worst, stat(r, s));
                if (worst < best) {
                    best = worst;
                    chosen = r;
                }
            }
        }
        out.assignment[static_cast<std::size_t>(j)] = chosen;
        double margin = std::numeric_limits<double>::infinity();
        for (int s = 0; s < k; ++s) {
            if (s == chosen) continue;
            const double gap =
                gram.at(chosen, chosen) - 2.0 * gram.at(chosen, s) + gram.at(s, s);
            const double rel =
                (stat(s, chosen) - stat(chosen, s)) / std::max(gap, 1e-300);
            margin = std::min(margin, rel);
        }
        margins[static_cast<std::size_t>(j)] = margin;
    }
    if (min_margin)
        for (double g : margins) *min_margin = std::min(*min_margin, g);
    return out;
}

std::vector<int> match_clusters(const CenterSet& theta, const CenterSet& nu,
                                double* margin) {
    const int k = theta.centers.cols;
    if (nu.centers.cols != k || nu.centers.rows != theta.centers.rows)
        throw std::invalid_argument("match_clusters: center set shapes differ");
    Matrix cost(k, k);
    for (int r = 0; r < k; ++r)
        for (int s = 0; s < k; ++s) {
            double d = 0.0;
            const double* tr = theta.centers.col(r);
            const double* ns = nu.centers.col(s);
            for (int i = 0; i < theta.centers.rows; ++i) {
                const double diff = tr[i] - ns[i];
                d += diff * diff;
            }
            cost.at(r, s) = d;
        }
    auto perm = solve_assignment(cost);
    if (margin) {
        *margin = std::numeric_limits<double>::infinity();
        if (k <= 7) {
            std::vector<int> p(static_cast<std::size_t>(k));
            std::iota(p.begin(), p.end(), 0);
            double best = std::numeric_limits<double>::infinity();
            double second = std::numeric_limits<double>::infinity();
            do {
                double total = 0.0;
                for (int r = 0; r < k; ++r)
                    total += cost.at(r, p[static_cast<std::size_t>(r)]);
                if (total < best) {
                    second = best;
                    best = total;
                } else if (total < second) {
                    second = total;
                }
            } while (std::next_permutation(p.begin(), p.end()));
            if (std::isfinite(second))
                *margin = (second - best) / std::max(second, 1e-300);
        }
    }
    return perm;
}

ClusterRun cluster_run(const Matrix& a, int k, std::uint64_t seed, double tol) {
    if (k < 1) throw std::invalid_argument("cluster: k must be >= 1");
    if (a.cols < 2 * k)
        throw std::invalid_argument("cluster: need m >= 2k samples");
    const auto t_total = std::chrono::steady_clock::now();

    ClusterRun run;
    run.plan = split(a.cols, fork_seed(seed, kSplitLabel));
    const Matrix a1 = select_columns(a, run.plan.half1);
    const Matrix a2 = select_columns(a, run.plan.half2);

    auto c1 = centers_detailed(a1, k, fork_seed(seed, kKmeansHalf1Label), tol);
    auto c2 = centers_detailed(a2, k, fork_seed(seed, kKmeansHalf2Label), tol);
    run.theta = std::move(c1.set);
    run.nu = std::move(c2.set);
    run.timings.svd_ms = c1.svd_ms + c2.svd_ms;
    run.timings.kmeans_ms = c1.kmeans_ms + c2.kmeans_ms;
    run.min_kmeans_margin = std::min(c1.kmeans_margin, c2.kmeans_margin);

    const auto t_project = std::chrono::steady_clock::now();
    double margin1 = 0.0, margin2 = 0.0;
    // Cross-half usage: centers from one half assign the other half's samples.
    const Clustering p1 = project_assign(a1, run.nu, &margin1);
    const Clustering p2 = project_assign(a2, run.theta, &margin2);
    run.timings.project_ms = ms_since(t_project);
    run.min_project_margin = std::min(margin1, margin2);

    run.theta_to_nu = match_clusters(run.theta, run.nu, &run.match_margin);

    run.labels.k = k;
    run.labels.assignment.assign(static_cast<std::size_t>(a.cols), 0);
    for (std::size_t i = 0; i < run.plan.half1.size(); ++i)
        run.labels.assignment[static_cast<std::size_t>(run.plan.half1[i])] =
            p1.assignment[i];
    for (std::size_t i = 0; i < run.plan.half2.size(); ++i)
        run.labels.assignment[static_cast<std::size_t>(run.plan.half2[i])] =
            run.theta_to_nu[static_cast<std::size_t>(p2.assignment[i])];

    run.timings.total_ms = ms_since(t_total);
    return run;
}

Clustering cluster(const Matrix& a, int k, std::uint64_t seed, double tol) {
    return cluster_run(a, k, seed, tol).labels;
}

} // namespace mixclust::pipeline
