#ifndef MIXCLUST_EVAL_HPP
#define MIXCLUST_EVAL_HPP

#include <string>
#include <utility>
#include <vector>

#include "mixclust/model.hpp"
#include "mixclust/pipeline.hpp"

namespace mixclust::eval {

struct AccuracyReport {
    std::vector<int> best_permutation;  // true label r -> predicted label
    double accuracy = 0.0;
    std::vector<std::vector<long long>> confusion;  // [true][predicted]
};

/// Permutation-optimal label agreement (exact assignment on the confusion
/// counts).
AccuracyReport accuracy(const pipeline::Clustering& predicted,
                        const std::vector<int>& truth);

struct BoundReport {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool satisfied = false;
    std::vector<std::pair<std::string, double>> context;
};

/// Measured spectral constant ||A - E(A)||^2 / (sigma^2 (m + n)).
double measured_spectral_constant(const model::DataMatrix& data,
                                  const model::MixtureParams& params);

/// Advisory: the measured spectral constant against a configured cap.
BoundReport spectral_bound_report(const model::DataMatrix& data,
                                  const model::MixtureParams& params,
                                  double c_max = 4.0);

/// Deterministic inequality ||A^(k) - E(A)||_F^2 <= 8 k ||A - E(A)||^2,
/// checked with 1e-8 relative slack; holds on every input with ground truth.
BoundReport frobenius_bound_check(const model::DataMatrix& data, int k);

/// Fraction of (sample, foreign-center) pairs with
/// |(v - mu_r).(mu_s - mu_r)| > (1/10)||mu_s - mu_r||^2; zero-distance center
/// pairs are excluded. Advisory against a frequency threshold.
BoundReport deviation_check(const model::DataMatrix& data,
                            const model::MixtureParams& params,
                            double threshold = 0.01);

/// max_r ||estimated_r - true_r||^2 against
/// 81 c_hat k sigma^2 (1/w_min)(1 + n/m). Sets must be aligned beforehand.
BoundReport center_error_report(const pipeline::CenterSet& estimated,
                                const pipeline::CenterSet& truth,
                                const model::MixtureParams& params, int m,
                                double c_hat);

/// max over samples u and center pairs (r, t) of |(u - mu_r).(delta_r +
/// delta_t)|, deltas taken from the opposite half's aligned estimates,
/// against 15 c_hat k sigma^2 (1/w_min)(1 + n/m + log m).
BoundReport cross_term_check(const model::DataMatrix& data,
                             const model::MixtureParams& params,
                             const pipeline::CenterSet& theta_aligned,
                             const pipeline::CenterSet& nu_aligned,
                             const pipeline::SplitPlan& plan, double c_hat);

} // namespace mixclust::eval

#endif
