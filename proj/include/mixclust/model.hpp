#ifndef MIXCLUST_MODEL_HPP
#define MIXCLUST_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixclust/matrix.hpp"

namespace mixclust::model {

enum class Family { Bernoulli, SphericalGaussian };

/// Ground-truth generative description of a k-component mixture.
struct MixtureParams {
    int k = 0;
    int n = 0;
    Matrix centers;               // n x k, column r = component center
    std::vector<double> weights;  // k non-negative, sum 1
    double sigma_sq = 0.0;        // in (0, 1]; per-coordinate cap (Bernoulli)
                                  // or per-coordinate variance (Gaussian)
    Family family = Family::Bernoulli;
};

/// Throws std::invalid_argument on any violated invariant: weights sum to 1
/// (1e-12), Bernoulli coordinates in [0, sigma_sq], sigma_sq in (0, 1],
/// center shape k x n.
void validate(const MixtureParams& params);

/// Advisory note when sigma_sq sits below the log^6(n)/n floor; never an error.
std::optional<std::string> sigma_floor_warning(const MixtureParams& params);

struct DataMatrix {
    Matrix values;                          // n x m, column j = sample j
    std::optional<std::vector<int>> labels; // component index per column
    std::optional<Matrix> expected;         // column j = center of its component
};

/// Largest-remainder rounding of w_r * m to integer counts summing to m;
/// remainder ties go to the lower index.
std::vector<int> component_counts(const std::vector<double>& weights, int m);

/// Draws m samples (columns), labels and expectation included. Column j's
/// randomness is stream j of the counter generator, so the result is a pure
/// function of (params, m, seed). Throws if any component count rounds to 0.
DataMatrix sample_mixture(const MixtureParams& params, int m, std::uint64_t seed);

struct SeparationReport {
    Matrix pair_distances_sq;  // k x k, symmetric, zero diagonal
    double required_bound = 0.0;
    double c = 0.0;
    double w_min = 0.0;
    bool satisfied = false;
    double margin = 0.0;  // min over pairs of distance^2 / required_bound
};

/// 8100 * c * k * sigma^2 * (1/w_min) * (1 + n/m + log m), natural log.
double separation_required_bound(double c, int k, double sigma_sq, double w_min,
                                 double n, double m);

/// Advisory check of the pairwise-separation condition; requires k >= 2.
SeparationReport separation_report(const MixtureParams& params, int m, double c);

/// Centers with disjoint coordinate blocks at height sigma_sq, block size
/// chosen as the smallest b with 2*b*sigma_sq^2 meeting the separation bound
/// at the given c. Throws when k*b > n.
MixtureParams make_separated_params(int n, int k, double sigma_sq,
                                    std::vector<double> weights, int m, double c,
                                    Family family = Family::Bernoulli);

} // namespace mixclust::model

#endif
