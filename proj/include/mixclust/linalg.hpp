#ifndef MIXCLUST_LINALG_HPP
#define MIXCLUST_LINALG_HPP

#include <vector>

#include "mixclust/kernels.hpp"
#include "mixclust/matrix.hpp"

namespace mixclust::linalg {

struct SvdOptions {
    double tol = 1e-10;   // relative off-diagonal threshold / convergence tol
    int max_sweeps = 0;   // 0 -> 10 * min(rows, cols)
    enum class Method { Jacobi, BlockPower } method = Method::Jacobi;
    kernels::Exec exec = kernels::default_exec;
};

/// Thin SVD. U is rows x r, V is cols x r, r = min(rows, cols); singular
/// values are sorted non-increasing.
struct SvdResult {
    Matrix u;
    std::vector<double> sigma;
    Matrix v;
};

/// Deterministic one-sided Jacobi with a fixed round-robin rotation
/// schedule; pairs within a round touch disjoint columns, so the parallel
/// path matches the serial one bitwise.
SvdResult svd_jacobi(const Matrix& a, const SvdOptions& opts = {});

struct RankKResult {
    Matrix approx;
    std::vector<double> singular_values;
    int k_used = 0;
};

/// Best rank-k approximation in Frobenius norm (top-k singular triples).
/// The default Jacobi path returns the full spectrum in singular_values;
/// the opt-in block-power path returns only the leading k values.
RankKResult rank_k_approx(const Matrix& a, int k, double tol = 1e-10,
                          const SvdOptions& opts = {});

/// Largest singular value, within tol relative error.
double spectral_norm(const Matrix& a, double tol = 1e-10);

/// Sum of squared entries (compensated summation).
double frobenius_norm_sq(const Matrix& a);

} // namespace mixclust::linalg

#endif
