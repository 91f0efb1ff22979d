#ifndef MIXCLUST_KERNELS_HPP
#define MIXCLUST_KERNELS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "mixclust/matrix.hpp"

namespace mixclust::kernels {

// Every kernel has a serial path and an OpenMP path selected by Exec.
// The parallel paths assign each output element (or each fixed-size
// reduction block) to exactly one thread with the same arithmetic order
// as the serial path, so the two are bit-identical for any thread count.
enum class Exec { Serial, Parallel };

inline constexpr Exec default_exec = Exec::Parallel;

double dot(const double* x, const double* y, int n);

/// Neumaier-compensated sum over fixed 4096-element blocks.
double det_sum(const double* x, std::size_t n, Exec exec = default_exec);

/// C = A * B
void matmul(const Matrix& A, const Matrix& B, Matrix& C, Exec exec = default_exec);
/// C = A^T * B
void matmul_trans_a(const Matrix& A, const Matrix& B, Matrix& C, Exec exec = default_exec);
/// C = A * B^T
void matmul_trans_b(const Matrix& A, const Matrix& B, Matrix& C, Exec exec = default_exec);

void subtract(const Matrix& A, const Matrix& B, Matrix& out, Exec exec = default_exec);

double frobenius_sq(const Matrix& A, Exec exec = default_exec);

/// One round of one-sided Jacobi column rotations. Pairs within a round are
/// disjoint. Columns of W (and the matching columns of V) are rotated in
/// place when the normalized off-diagonal exceeds tol. Sets `rotated` true
/// if any pair rotated.
void jacobi_rotate_round(Matrix& W, Matrix& V,
                         const std::vector<std::pair<int, int>>& pairs,
                         double tol, bool& rotated, Exec exec = default_exec);

/// Nearest and second-nearest squared distances from each point (column) to
/// the centers. d2 may be null when second distances are not needed.
void nearest_assign(const Matrix& points, const Matrix& centers,
                    int* assign, double* d1, double* d2, Exec exec = default_exec);

/// Per-cluster column sums and member counts of an assignment.
void cluster_sums(const Matrix& points, const int* assign, int k,
                  Matrix& sums, std::vector<long long>& counts, Exec exec = default_exec);

/// Column j is a Bernoulli draw around centers.col(labels[j]); entry (i,j) is
/// 1 with probability centers(i, labels[j]). Column randomness is stream j of
/// the counter generator, so generation is schedule-independent.
void bernoulli_columns(const Matrix& centers, const std::vector<int>& labels,
                       std::uint64_t seed, Matrix& out, Exec exec = default_exec);

/// Column j is centers.col(labels[j]) + N(0, sigma_sq) per coordinate.
void gaussian_columns(const Matrix& centers, const std::vector<int>& labels,
                      double sigma_sq, std::uint64_t seed, Matrix& out,
                      Exec exec = default_exec);

} // namespace mixclust::kernels

#endif
