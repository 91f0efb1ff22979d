#ifndef MIXCLUST_PIPELINE_HPP
#define MIXCLUST_PIPELINE_HPP

#include <cstdint>
#include <vector>

#include "mixclust/matrix.hpp"

namespace mixclust::pipeline {

struct Clustering {
    std::vector<int> assignment;  // values in [0, k)
    int k = 0;
};

struct SplitPlan {
    std::vector<int> half1;  // sorted, size ceil(m/2)
    std::vector<int> half2;  // sorted, size floor(m/2)
    std::uint64_t seed = 0;
};

struct CenterSet {
    Matrix centers;  // n x k, column r = center r
};

struct StageTimings {
    double svd_ms = 0.0;
    double kmeans_ms = 0.0;
    double project_ms = 0.0;
    double total_ms = 0.0;
};

/// Uniform balanced split of [0, m) determined by the seed.
SplitPlan split(int m, std::uint64_t seed);

/// Rank-k denoise, l2^2-cluster the denoised columns, then average the
/// ORIGINAL columns of each cluster.
CenterSet centers(const Matrix& a_half, int k, std::uint64_t seed, double tol);

/// Places each sample (column) with the center whose paired projection
/// statistic |(v - c_r).(c_s - c_r)| is dominated for every s; lowest
/// qualifying index wins, and samples with no qualifier (floating-point
/// asymmetry only) fall back to the smallest worst-case statistic.
/// min_margin, when given, receives the smallest relative decision gap.
Clustering project_assign(const Matrix& samples, const CenterSet& estimated,
                          double* min_margin = nullptr);

/// Permutation pi minimizing sum_r ||theta_r - nu_pi(r)||^2 (exact
/// assignment). margin, when given, receives the relative cost gap to the
/// second-best permutation (enumerated for k <= 7, +inf beyond).
std::vector<int> match_clusters(const CenterSet& theta, const CenterSet& nu,
                                double* margin = nullptr);

struct ClusterRun {
    Clustering labels;
    SplitPlan plan;
    CenterSet theta;  // from half 1, used to assign half 2
    CenterSet nu;     // from half 2, used to assign half 1
    std::vector<int> theta_to_nu;
    double min_kmeans_margin = 0.0;
    double min_project_margin = 0.0;
    double match_margin = 0.0;
    StageTimings timings;
};

/// Full pipeline with intermediates exposed: split, cross-half center
/// estimation, cross-half projection, label alignment, merge.
ClusterRun cluster_run(const Matrix& a, int k, std::uint64_t seed, double tol);

/// The merged partition only.
Clustering cluster(const Matrix& a, int k, std::uint64_t seed, double tol);

} // namespace mixclust::pipeline

#endif
