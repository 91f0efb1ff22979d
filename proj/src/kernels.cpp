#include "mixclust/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixclust/rng.hpp"

namespace mixclust::kernels {

namespace {

constexpr std::size_t kSumBlock = 4096;

// Neumaier variant of Kahan summation.
double neumaier(const double* x, std::size_t n) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = sum + x[i];
        if (std::abs(sum) >= std::abs(x[i]))
            comp += (sum - t) + x[i];
        else
            comp += (x[i] - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double neumaier_sq(const double* x, std::size_t n) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i] * x[i];
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

} // namespace

double dot(const double* x, const double* y, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double det_sum(const double* x, std::size_t n, Exec exec) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(nblocks);
    const long long nb = static_cast<long long>(nblocks);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel && nb > 1)
    for (long long b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
        const std::size_t len = std::min(kSumBlock, n - lo);
        partial[static_cast<std::size_t>(b)] = neumaier(x + lo, len);
    }
    return neumaier(partial.data(), nblocks);
}

void matmul(const Matrix& A, const Matrix& B, Matrix& C, Exec exec) {
    C = Matrix(A.rows, B.cols);
    const int n = A.rows, inner = A.cols, m = B.cols;
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int j = 0; j < m; ++j) {
        double* cj = C.col(j);
        const double* bj = B.col(j);
        for (int t = 0; t < inner; ++t) {
            const double w = bj[t];
            if (w == 0.0) continue;
            const double* at = A.col(t);
            for (int i = 0; i < n; ++i) cj[i] += w * at[i];
        }
    }
}

void matmul_trans_a(const Matrix& A, const Matrix& B, Matrix& C, Exec exec) {
    C = Matrix(A.cols, B.cols);
    const int m = B.cols, k = A.cols, n = A.rows;
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int j = 0; j < m; ++j) {
        double* cj = C.col(j);
        const double* bj = B.col(j);
        for (int r = 0; r < k; ++r) cj[r] = dot(A.col(r), bj, n);
    }
}

void matmul_trans_b(const Matrix& A, const Matrix& B, Matrix& C, Exec exec) {
    // C(:,j) = sum_t A(:,t) * B(j,t)
    C = Matrix(A.rows, B.rows);
    const int n = A.rows, inner = A.cols, m = B.rows;
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int j = 0; j < m; ++j) {
        double* cj = C.col(j);
        for (int t = 0; t < inner; ++t) {
            const double w = B.at(j, t);
            if (w == 0.0) continue;
            const double* at = A.col(t);
            for (int i = 0; i < n; ++i) cj[i] += w * at[i];
        }
    }
}

void subtract(const Matrix& A, const Matrix& B, Matrix& out, Exec exec) {
    out = Matrix(A.rows, A.cols);
    const long long total = static_cast<long long>(A.size());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (long long i = 0; i < total; ++i)
        out.a[static_cast<std::size_t>(i)] =
            A.a[static_cast<std::size_t>(i)] - B.a[static_cast<std::size_t>(i)];
}

double frobenius_sq(const Matrix& A, Exec exec) {
    const std::size_t n = A.size();
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(nblocks);
    const long long nb = static_cast<long long>(nblocks);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel && nb > 1)
    for (long long b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
        const std::size_t len = std::min(kSumBlock, n - lo);
        partial[static_cast<std::size_t>(b)] = neumaier_sq(A.a.data() + lo, len);
    }
    return neumaier(partial.data(), nblocks);
}

void jacobi_rotate_round(Matrix& W, Matrix& V,
                         const std::vector<std::pair<int, int>>& pairs,
                         double tol, bool& rotated, Exec exec) {
    const int n = W.rows;
    const int vrows = V.rows;
    const long long np = static_cast<long long>(pairs.size());
    std::vector<unsigned char> did(pairs.size(), 0);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (long long idx = 0; idx < np; ++idx) {
        const int p = pairs[static_cast<std::size_t>(idx)].first;
        const int q = pairs[static_cast<std::size_t>(idx)].second;
        double* wp = W.col(p);
        double* wq = W.col(q);
        const double app = dot(wp, wp, n);
        const double aqq = dot(wq, wq, n);
        const double apq = dot(wp, wq, n);
        if (std::abs(apq) <= tol * std::sqrt(app * aqq)) continue;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < n; ++i) {
            const double a = wp[i], b = wq[i];
            wp[i] = c * a - s * b;
            wq[i] = s * a + c * b;
        }
        double* vp = V.col(p);
        double* vq = V.col(q);
        for (int i = 0; i < vrows; ++i) {
            const double a = vp[i], b = vq[i];
            vp[i] = c * a - s * b;
            vq[i] = s * a + c * b;
        }
        did[static_cast<std::size_t>(idx)] = 1;
    }
    for (unsigned char d : did)
        if (d) { rotated = true; break; }
}

void nearest_assign(const Matrix& points, const Matrix& centers,
                    int* assign, double* d1, double* d2, Exec exec) {
    const int n = points.rows, m = points.cols, k = centers.cols;
    constexpr double inf = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int j = 0; j < m; ++j) {
        const double* pj = points.col(j);
        double best = inf, second = inf;
        int best_r = 0;
        for (int r = 0; r < k; ++r) {
            const double* cr = centers.col(r);
            double d = 0.0;
            for (int i = 0; i < n; ++i) {
                const double diff = pj[i] - cr[i];
                d += diff * diff;
            }
            if (d < best) {
                second = best;
                best = d;
                best_r = r;
            } else if (d < second) {
                second = d;
            }
        }
        assign[j] = best_r;
        d1[j] = best;
        if (d2) d2[j] = second;  // +inf when k == 1
    }
}

void cluster_sums(const Matrix& points, const int* assign, int k,
                  Matrix& sums, std::vector<long long>& counts, Exec exec) {
    const int n = points.rows, m = points.cols;
    sums = Matrix(n, k);
    counts.assign(static_cast<std::size_t>(k), 0);
    for (int j = 0; j < m; ++j) counts[static_cast<std::size_t>(assign[j])]++;
    // Parallel over coordinates: each row of `sums` has a single writer.
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j)
            sums.at(i, assign[j]) += points.at(i, j);
    }
}

void bernoulli_columns(const Matrix& centers, const std::vector<int>& labels,
                       std::uint64_t seed, Matrix& out, Exec exec) {
    const int n = centers.rows;
    const int m = static_cast<int>(labels.size());
    out = Matrix(n, m);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int j = 0; j < m; ++j) {
        CounterRng rng(seed, static_cast<std::uint64_t>(j));
        const double* mu = centers.col(labels[static_cast<std::size_t>(j)]);
        double* vj = out.col(j);
        for (int i = 0; i < n; ++i)
            vj[i] = (rng.next_unit() <= mu[i]) ? 1.0 : 0.0;
    }
}

void gaussian_columns(const Matrix& centers, const std::vector<int>& labels,
                      double sigma_sq, std::uint64_t seed, Matrix& out, Exec exec) {
    const int n = centers.rows;
    const int m = static_cast<int>(labels.size());
    const double sd = std::sqrt(sigma_sq);
    out = Matrix(n, m);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (int j = 0; j < m; ++j) {
        CounterRng rng(seed, static_cast<std::uint64_t>(j));
        const double* mu = centers.col(labels[static_cast<std::size_t>(j)]);
        double* vj = out.col(j);
        for (int i = 0; i < n; ++i)
            vj[i] = mu[i] + sd * rng.next_gaussian();
    }
}

} // namespace mixclust::kernels
