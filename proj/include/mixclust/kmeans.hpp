#ifndef MIXCLUST_KMEANS_HPP
#define MIXCLUST_KMEANS_HPP

#include <cstdint>
#include <vector>

#include "mixclust/matrix.hpp"

namespace mixclust::kmeans {

/// Sum-of-squared-distances clustering instance; columns of `points` are the
/// input vectors.
struct L22Instance {
    Matrix points;
    int k = 0;
};

struct L22Solution {
    Matrix centers;               // d x k, column r = center r
    std::vector<int> assignment;  // per point, nearest center (lowest index on ties)
    double cost = 0.0;
};

struct L22Options {
    int lloyd_max_iters = 500;
    double lloyd_rel_tol = 1e-9;
    double swap_rel_improvement = 1e-6;
    int max_accepted_swaps = 1024;
    bool kmeanspp_init = false;           // optional seeded D^2 init
    std::vector<double>* cost_trace = nullptr;  // appended after each descent step
    double* min_assign_margin = nullptr;  // smallest relative nearest/second gap seen
};

/// Farthest-point init + Lloyd + single-swap local search over input points
/// as candidate centers. Deterministic given (instance order, seed); the
/// default init ignores the seed (it is purely geometric), the seed drives
/// the optional kmeanspp_init.
L22Solution solve_l22(const L22Instance& instance, std::uint64_t seed,
                      const L22Options& opts = {});

/// Exact optimum by enumerating partitions into at most k non-empty groups
/// with centroid centers. Guarded to instances with <= 12 points.
L22Solution brute_force_l22(const L22Instance& instance);

} // namespace mixclust::kmeans

#endif
