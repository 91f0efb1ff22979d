#ifndef MIXCLUST_ASSIGNMENT_HPP
#define MIXCLUST_ASSIGNMENT_HPP

#include <vector>

#include "mixclust/matrix.hpp"

namespace mixclust {

/// Exact minimum-cost perfect matching on a k x k cost matrix
/// (cost.at(r, s) = cost of pairing row r with column s).
/// Returns perm with perm[r] = s. O(k^3) potentials + augmenting paths.
std::vector<int> solve_assignment(const Matrix& cost);

} // namespace mixclust

#endif
