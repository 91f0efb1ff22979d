#include "mixclust/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mixclust/assignment.hpp"
#include "mixclust/kernels.hpp"
#include "mixclust/linalg.hpp"

namespace mixclust::eval {

namespace {

void require_truth(const model::DataMatrix& data, const char* who) {
    if (!data.expected.has_value() || !data.labels.has_value())
        throw std::invalid_argument(std::string(who) + ": ground truth missing");
}

double w_min_of(const model::MixtureParams& params) {
    return *std::min_element(params.weights.begin(), params.weights.end());
}

Matrix noise_of(const model::DataMatrix& data) {
    Matrix diff;
    kernels::subtract(data.values, *data.expected, diff);
    return diff;
}

} // namespace

AccuracyReport accuracy(const pipeline::Clustering& predicted,
                        const std::vector<int>& truth) {
    const int k = predicted.k;
    const std::size_t m = predicted.assignment.size();
    if (truth.size() != m)
        throw std::invalid_argument("accuracy: label length mismatch");
    for (int t : truth)
        if (t < 0 || t >= k)
            throw std::invalid_argument("accuracy: true label outside [0, k)");

    AccuracyReport rep;
    rep.confusion.assign(static_cast<std::size_t>(k),
                         std::vector<long long>(static_cast<std::size_t>(k), 0));
    for (std::size_t j = 0; j < m; ++j)
        rep.confusion[static_cast<std::size_t>(truth[j])]
                     [static_cast<std::size_t>(predicted.assignment[j])]++;

    Matrix cost(k, k);
    for (int r = 0; r < k; ++r)
        for (int s = 0; s < k; ++s)
            cost.at(r, s) = -static_cast<double>(
                rep.confusion[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)]);
    rep.best_permutation = solve_assignment(cost);

    long long agree = 0;
    for (int r = 0; r < k; ++r)
        agree += rep.confusion[static_cast<std::size_t>(r)]
                              [static_cast<std::size_t>(rep.best_permutation[static_cast<std::size_t>(r)])];
    rep.accuracy = static_cast<double>(agree) / static_cast<double>(m);
    return rep;
}

double measured_spectral_constant(const model::DataMatrix& data,
                                  const model::MixtureParams& params) {
    const Matrix diff = noise_of(data);
    const double norm = linalg::spectral_norm(diff);
    const double denom =
        params.sigma_sq * (static_cast<double>(data.values.cols) + data.values.rows);
    return norm * norm / denom;
}

BoundReport spectral_bound_report(const model::DataMatrix& data,
                                  const model::MixtureParams& params,
                                  double c_max) {
    require_truth(data, "spectral_bound_report");
    BoundReport rep;
    rep.name = "spectral_constant";
    rep.measured = measured_spectral_constant(data, params);
    rep.bound = c_max;
    rep.satisfied = rep.measured <= rep.bound;
    rep.context = {{"sigma_sq", params.sigma_sq},
                   {"n", static_cast<double>(data.values.rows)},
                   {"m", static_cast<double>(data.values.cols)}};
    return rep;
}

BoundReport frobenius_bound_check(const model::DataMatrix& data, int k) {
    require_truth(data, "frobenius_bound_check");
    const Matrix diff = noise_of(data);
    const double spectral = linalg::spectral_norm(diff);
    const auto rank_k = linalg::rank_k_approx(data.values, k);
    Matrix approx_err;
    kernels::subtract(rank_k.approx, *data.expected, approx_err);

    BoundReport rep;
    rep.name = "frobenius_rank_k";
    rep.measured = linalg::frobenius_norm_sq(approx_err);
    rep.bound = 8.0 * k * spectral * spectral;
    rep.satisfied = rep.measured <= rep.bound * (1.0 + 1e-8);
    rep.context = {{"k", static_cast<double>(k)},
                   {"spectral_norm_sq", spectral * spectral}};
    return rep;
}

BoundReport deviation_check(const model::DataMatrix& data,
                            const model::MixtureParams& params,
                            double threshold) {
    require_truth(data, "deviation_check");
    if (params.k < 2)
        throw std::invalid_argument("deviation_check: needs k >= 2");
    const auto& labels = *data.labels;
    const int m = data.values.cols;
    const int n = data.values.rows;
    const int k = params.k;

    // Pairwise center differences and squared distances.
    Matrix dist_sq(k, k);
    for (int r = 0; r < k; ++r)
        for (int s = 0; s < k; ++s) {
            double d = 0.0;
            for (int i = 0; i < n; ++i) {
                const double diff = params.centers.at(i, r) - params.centers.at(i, s);
                d += diff * diff;
            }
            dist_sq.at(r, s) = d;
        }

    long long considered = 0, violated = 0;
    for (int j = 0; j < m; ++j) {
        const int r = labels[static_cast<std::size_t>(j)];
        const double* v = data.values.col(j);
        const double* mu_r = params.centers.col(r);
        for (int s = 0; s < k; ++s) {
            if (s == r || dist_sq.at(r, s) == 0.0) continue;
            const double* mu_s = params.centers.col(s);
            double inner = 0.0;
            for (int i = 0; i < n; ++i)
                inner += (v[i] - mu_r[i]) * (mu_s[i] - mu_r[i]);
            ++considered;
            if (std::abs(inner) > 0.1 * dist_sq.at(r, s)) ++violated;
        }
    }

    BoundReport rep;
    rep.name = "deviation_fraction";
    rep.measured = considered > 0
                       ? static_cast<double>(violated) / static_cast<double>(considered)
                       : 0.0;
    rep.bound = threshold;
    rep.satisfied = rep.measured <= rep.bound;
    rep.context = {{"pairs", static_cast<double>(considered)},
                   {"violations", static_cast<double>(violated)}};
    return rep;
}

BoundReport center_error_report(const pipeline::CenterSet& estimated,
                                const pipeline::CenterSet& truth,
                                const model::MixtureParams& params, int m,
                                double c_hat) {
    if (estimated.centers.cols != truth.centers.cols ||
        estimated.centers.rows != truth.centers.rows)
        throw std::invalid_argument("center_error_report: misaligned center sets");
    const int k = estimated.centers.cols;
    const int n = estimated.centers.rows;
    double worst = 0.0;
    for (int r = 0; r < k; ++r) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) {
            const double diff = estimated.centers.at(i, r) - truth.centers.at(i, r);
            d += diff * diff;
        }
        worst = std::max(worst, d);
    }
    const double w_min = w_min_of(params);
    BoundReport rep;
    rep.name = "center_error";
    rep.measured = worst;
    rep.bound = 81.0 * c_hat * k * params.sigma_sq * (1.0 / w_min) *
                (1.0 + static_cast<double>(n) / m);
    rep.satisfied = rep.measured <= rep.bound;
    rep.context = {{"c_hat", c_hat}, {"m", static_cast<double>(m)}};
    return rep;
}

BoundReport cross_term_check(const model::DataMatrix& data,
                             const model::MixtureParams& params,
                             const pipeline::CenterSet& theta_aligned,
                             const pipeline::CenterSet& nu_aligned,
                             const pipeline::SplitPlan& plan, double c_hat) {
    require_truth(data, "cross_term_check");
    const auto& labels = *data.labels;
    const int n = data.values.rows;
    const int k = params.k;
    if (plan.half1.size() + plan.half2.size() != labels.size())
        throw std::invalid_argument("cross_term_check: split does not cover data");

    // delta_r per half = aligned estimate minus true center; samples in one
    // half are scored against the opposite half's deltas.
    auto deltas_of = [&](const pipeline::CenterSet& set) {
        Matrix d(n, k);
        for (int r = 0; r < k; ++r)
            for (int i = 0; i < n; ++i)
                d.at(i, r) = set.centers.at(i, r) - params.centers.at(i, r);
        return d;
    };
    const Matrix delta_theta = deltas_of(theta_aligned);  // fitted on half 1
    const Matrix delta_nu = deltas_of(nu_aligned);        // fitted on half 2

    double worst = 0.0;
    auto scan = [&](const std::vector<int>& half, const Matrix& opposite_delta) {
        for (int col : half) {
            const int r = labels[static_cast<std::size_t>(col)];
            const double* u = data.values.col(col);
            const double* mu_r = params.centers.col(r);
            for (int t = 0; t < k; ++t) {
                if (t == r) continue;
                double inner = 0.0;
                for (int i = 0; i < n; ++i)
                    inner += (u[i] - mu_r[i]) *
                             (opposite_delta.at(i, r) + opposite_delta.at(i, t));
                worst = std::max(worst, std::abs(inner));
            }
        }
    };
    scan(plan.half1, delta_nu);
    scan(plan.half2, delta_theta);

    const double m = static_cast<double>(data.values.cols);
    BoundReport rep;
    rep.name = "cross_term";
    rep.measured = worst;
    rep.bound = 15.0 * c_hat * k * params.sigma_sq * (1.0 / w_min_of(params)) *
                (1.0 + n / m + std::log(m));
    rep.satisfied = rep.measured <= rep.bound;
    rep.context = {{"c_hat", c_hat}, {"m", m}};
    return rep;
}

} // namespace mixclust::eval
