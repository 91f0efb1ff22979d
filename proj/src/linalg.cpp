#include "mixclust/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mixclust/errors.hpp"
#include "mixclust/rng.hpp"

namespace mixclust::linalg {

namespace {

using kernels::Exec;

// Tournament (circle-method) schedule: cols-1 rounds of disjoint column
// pairs covering every pair once per sweep.
std::vector<std::vector<std::pair<int, int>>> round_robin_rounds(int cols) {
    const int padded = (cols % 2 == 0) ? cols : cols + 1;
    std::vector<int> slot(padded);
    std::iota(slot.begin(), slot.end(), 0);
    std::vector<std::vector<std::pair<int, int>>> rounds;
    for (int t = 0; t < padded - 1; ++t) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < padded / 2; ++i) {
            int p = slot[i], q = slot[padded - 1 - i];
            if (p >= cols || q >= cols) continue;  // dummy from odd padding
            if (p > q) std::swap(p, q);
            pairs.emplace_back(p, q);
        }
        rounds.push_back(std::move(pairs));
        // rotate slots 1..padded-1 right by one, slot 0 fixed
        const int last = slot[padded - 1];
        for (int i = padded - 1; i >= 2; --i) slot[i] = slot[i - 1];
        slot[1] = last;
    }
    return rounds;
}

// Orthogonalizes the columns of `work` in place; returns true if any pair
// rotated during the final sweep budget, throws on non-convergence.
void jacobi_orthogonalize(Matrix& work, Matrix& v, double tol, int max_sweeps,
                          Exec exec) {
    const auto rounds = round_robin_rounds(work.cols);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (const auto& pairs : rounds)
            kernels::jacobi_rotate_round(work, v, pairs, tol, rotated, exec);
        if (!rotated) return;
    }
    throw NumericalError("svd: Jacobi sweeps exhausted without convergence (cap " +
                         std::to_string(max_sweeps) + ")");
}

struct SortedSpectrum {
    std::vector<double> sigma;
    std::vector<int> order;
};

SortedSpectrum column_norms_sorted(const Matrix& work) {
    const int m = work.cols;
    std::vector<double> sigma(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        sigma[static_cast<std::size_t>(j)] =
            std::sqrt(kernels::dot(work.col(j), work.col(j), work.rows));
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return sigma[static_cast<std::size_t>(a)] > sigma[static_cast<std::size_t>(b)];
    });
    std::vector<double> sorted(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        sorted[static_cast<std::size_t>(j)] =
            sigma[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
    return {std::move(sorted), std::move(order)};
}

int effective_max_sweeps(const Matrix& a, const SvdOptions& opts) {
    if (opts.max_sweeps > 0) return opts.max_sweeps;
    return 10 * std::max(1, std::min(a.rows, a.cols));
}

// Small dense symmetric eigensolver (cyclic two-sided Jacobi), used by the
// block-power Rayleigh-Ritz step. Returns eigenvalues descending, vectors as
// columns of `vecs`.
void sym_eig_small(Matrix s, std::vector<double>& vals, Matrix& vecs) {
    const int n = s.rows;
    vecs = Matrix(n, n);
    for (int i = 0; i < n; ++i) vecs.at(i, i) = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += s.at(p, q) * s.at(p, q);
        if (off <= 1e-24 * (1.0 + kernels::frobenius_sq(s, Exec::Serial))) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = s.at(p, q);
                if (apq == 0.0) continue;
                const double theta = (s.at(q, q) - s.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = c * t;
                for (int i = 0; i < n; ++i) {
                    const double aip = s.at(i, p), aiq = s.at(i, q);
                    s.at(i, p) = c * aip - sn * aiq;
                    s.at(i, q) = sn * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = s.at(p, i), aqi = s.at(q, i);
                    s.at(p, i) = c * api - sn * aqi;
                    s.at(q, i) = sn * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = vecs.at(i, p), viq = vecs.at(i, q);
                    vecs.at(i, p) = c * vip - sn * viq;
                    vecs.at(i, q) = sn * vip + c * viq;
                }
            }
        }
    }
    vals.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return s.at(a, a) > s.at(b, b);
    });
    Matrix sorted_vecs(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        vals[static_cast<std::size_t>(j)] = s.at(src, src);
        for (int i = 0; i < n; ++i) sorted_vecs.at(i, j) = vecs.at(i, src);
    }
    vecs = std::move(sorted_vecs);
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Degenerate
// columns are replaced by deterministic pseudo-random directions.
void orthonormalize_columns(Matrix& v) {
    const int n = v.rows, k = v.cols;
    int fallback = 0;
    for (int j = 0; j < k; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int t = 0; t < j; ++t) {
                const double proj = kernels::dot(v.col(t), v.col(j), n);
                double* vj = v.col(j);
                const double* vt = v.col(t);
                for (int i = 0; i < n; ++i) vj[i] -= proj * vt[i];
            }
        }
        double norm = std::sqrt(kernels::dot(v.col(j), v.col(j), n));
        while (norm < 1e-150) {
            CounterRng rng(0x0DDBA11ULL, static_cast<std::uint64_t>(fallback++));
            double* vj = v.col(j);
            for (int i = 0; i < n; ++i) vj[i] = rng.next_gaussian();
            for (int t = 0; t < j; ++t) {
                const double proj = kernels::dot(v.col(t), v.col(j), n);
                const double* vt = v.col(t);
                for (int i = 0; i < n; ++i) vj[i] -= proj * vt[i];
            }
            norm = std::sqrt(kernels::dot(v.col(j), v.col(j), n));
        }
        double* vj = v.col(j);
        for (int i = 0; i < n; ++i) vj[i] /= norm;
    }
}

RankKResult rank_k_block_power(const Matrix& a, int k, const SvdOptions& opts) {
    const int m = a.cols;
    const int cap = effective_max_sweeps(a, opts);
    Matrix v(m, k);
    for (int j = 0; j < k; ++j) {
        CounterRng rng(0xB10C0FEEULL, static_cast<std::uint64_t>(j));
        for (int i = 0; i < m; ++i) v.at(i, j) = rng.next_gaussian();
    }
    orthonormalize_columns(v);
    std::vector<double> prev(static_cast<std::size_t>(k), 0.0);
    Matrix y, z;
    bool converged = false;
    for (int iter = 0; iter < cap; ++iter) {
        kernels::matmul(a, v, y, opts.exec);         // y = A v
        kernels::matmul_trans_a(a, y, z, opts.exec); // z = A^T A v
        v = z;
        orthonormalize_columns(v);
        kernels::matmul(a, v, y, opts.exec);
        double worst = 0.0;
        for (int j = 0; j < k; ++j) {
            const double s = std::sqrt(kernels::dot(y.col(j), y.col(j), a.rows));
            const double scale = std::max(s, 1e-300);
            worst = std::max(worst, std::abs(s - prev[static_cast<std::size_t>(j)]) / scale);
            prev[static_cast<std::size_t>(j)] = s;
        }
        if (worst <= opts.tol) { converged = true; break; }
    }
    if (!converged)
        throw NumericalError("rank_k_approx: block power iteration did not converge");

    // Rayleigh-Ritz on the converged subspace.
    kernels::matmul(a, v, y, opts.exec);
    Matrix gram;
    kernels::matmul_trans_a(y, y, gram, opts.exec);
    std::vector<double> vals;
    Matrix rot;
    sym_eig_small(gram, vals, rot);
    Matrix u;
    kernels::matmul(y, rot, u, opts.exec);
    Matrix v_rot;
    kernels::matmul(v, rot, v_rot, opts.exec);
    RankKResult out;
    out.k_used = k;
    out.singular_values.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
        out.singular_values[static_cast<std::size_t>(j)] =
            std::sqrt(std::max(0.0, vals[static_cast<std::size_t>(j)]));
    // approx = (A V R)(V R)^T; u's columns already carry sigma.
    kernels::matmul_trans_b(u, v_rot, out.approx, opts.exec);
    return out;
}

} // namespace

SvdResult svd_jacobi(const Matrix& a, const SvdOptions& opts) {
    if (!all_finite(a))
        throw std::invalid_argument("svd: input has non-finite entries");
    const bool tall = a.rows >= a.cols;
    Matrix work = tall ? a : transpose(a);
    const int r = work.cols;  // = min(a.rows, a.cols)
    Matrix v(r, r);
    for (int i = 0; i < r; ++i) v.at(i, i) = 1.0;
    jacobi_orthogonalize(work, v, opts.tol, effective_max_sweeps(a, opts), opts.exec);

    auto spectrum = column_norms_sorted(work);
    Matrix u(work.rows, r), vk(r, r);
    for (int j = 0; j < r; ++j) {
        const int src = spectrum.order[static_cast<std::size_t>(j)];
        const double s = spectrum.sigma[static_cast<std::size_t>(j)];
        const double inv = (s > 1e-300) ? 1.0 / s : 0.0;
        const double* wsrc = work.col(src);
        double* uj = u.col(j);
        for (int i = 0; i < work.rows; ++i) uj[i] = wsrc[i] * inv;
        const double* vsrc = v.col(src);
        double* vj = vk.col(j);
        for (int i = 0; i < r; ++i) vj[i] = vsrc[i];
    }
    SvdResult out;
    out.sigma = std::move(spectrum.sigma);
    if (tall) {
        out.u = std::move(u);
        out.v = std::move(vk);
    } else {
        out.u = std::move(vk);
        out.v = std::move(u);
    }
    return out;
}

RankKResult rank_k_approx(const Matrix& a, int k, double tol, const SvdOptions& opts) {
    if (k < 1) throw std::invalid_argument("rank_k_approx: k must be >= 1");
    if (!all_finite(a))
        throw std::invalid_argument("rank_k_approx: input has non-finite entries");
    SvdOptions effective = opts;
    effective.tol = tol;
    if (effective.method == SvdOptions::Method::BlockPower &&
        k < std::min(a.rows, a.cols))
        return rank_k_block_power(a, k, effective);

    const SvdResult svd = svd_jacobi(a, effective);
    const int r = static_cast<int>(svd.sigma.size());
    const int kk = std::min(k, r);
    Matrix u_scaled(a.rows, kk), v_top(a.cols, kk);
    for (int j = 0; j < kk; ++j) {
        const double s = svd.sigma[static_cast<std::size_t>(j)];
        const double* uj = svd.u.col(j);
        double* dst = u_scaled.col(j);
        for (int i = 0; i < a.rows; ++i) dst[i] = uj[i] * s;
        const double* vj = svd.v.col(j);
        double* vdst = v_top.col(j);
        for (int i = 0; i < a.cols; ++i) vdst[i] = vj[i];
    }
    RankKResult out;
    out.k_used = kk;
    out.singular_values = svd.sigma;
    kernels::matmul_trans_b(u_scaled, v_top, out.approx, effective.exec);
    return out;
}

double spectral_norm(const Matrix& a, double tol) {
    SvdOptions opts;
    opts.tol = tol;
    const SvdResult svd = svd_jacobi(a, opts);
    return svd.sigma.empty() ? 0.0 : svd.sigma.front();
}

double frobenius_norm_sq(const Matrix& a) {
    return kernels::frobenius_sq(a);
}

} // namespace mixclust::linalg
