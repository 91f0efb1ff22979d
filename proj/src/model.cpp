#include "mixclust/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mixclust/kernels.hpp"

namespace mixclust::model {

void validate(const MixtureParams& params) {
    if (params.k < 1) throw std::invalid_argument("mixture: k must be >= 1");
    if (params.n < 1) throw std::invalid_argument("mixture: n must be >= 1");
    if (params.centers.rows != params.n || params.centers.cols != params.k)
        throw std::invalid_argument("mixture: centers must be n x k");
    if (static_cast<int>(params.weights.size()) != params.k)
        throw std::invalid_argument("mixture: need k weights");
    if (!(params.sigma_sq > 0.0) || params.sigma_sq > 1.0)
        throw std::invalid_argument("mixture: sigma_sq must lie in (0, 1]");
    double total = 0.0;
    for (double w : params.weights) {
        if (w < 0.0) throw std::invalid_argument("mixture: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("mixture: weights must sum to 1");
    if (!all_finite(params.centers))
        throw std::invalid_argument("mixture: non-finite center entries");
    if (params.family == Family::Bernoulli) {
        for (double v : params.centers.a)
            if (v < 0.0 || v > params.sigma_sq)
                throw std::invalid_argument(
                    "mixture: Bernoulli center coordinates must lie in [0, sigma_sq]");
    }
}

std::optional<std::string> sigma_floor_warning(const MixtureParams& params) {
    const double lg = std::log(static_cast<double>(params.n));
    const double floor = std::pow(lg, 6.0) / params.n;
    if (params.sigma_sq >= floor) return std::nullopt;
    return "sigma_sq=" + std::to_string(params.sigma_sq) +
           " below the log^6(n)/n floor (" + std::to_string(floor) +
           "); fine at desk scale, tail guarantees may not apply";
}

std::vector<int> component_counts(const std::vector<double>& weights, int m) {
    const int k = static_cast<int>(weights.size());
    std::vector<int> counts(static_cast<std::size_t>(k));
    std::vector<double> remainder(static_cast<std::size_t>(k));
    int assigned = 0;
    for (int r = 0; r < k; ++r) {
        const double exact = weights[static_cast<std::size_t>(r)] * m;
        counts[static_cast<std::size_t>(r)] = static_cast<int>(std::floor(exact));
        remainder[static_cast<std::size_t>(r)] =
            exact - counts[static_cast<std::size_t>(r)];
        assigned += counts[static_cast<std::size_t>(r)];
    }
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return remainder[static_cast<std::size_t>(a)] >
               remainder[static_cast<std::size_t>(b)];
    });
    for (int i = 0; i < m - assigned; ++i)
        counts[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]++;
    return counts;
}

DataMatrix sample_mixture(const MixtureParams& params, int m, std::uint64_t seed) {
    validate(params);
    if (m < 1) throw std::invalid_argument("sample_mixture: m must be >= 1");
    const auto counts = component_counts(params.weights, m);
    for (int r = 0; r < params.k; ++r)
        if (counts[static_cast<std::size_t>(r)] == 0)
            throw std::invalid_argument(
                "sample_mixture: component " + std::to_string(r) +
                " would receive no samples at m=" + std::to_string(m));

    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(m));
    for (int r = 0; r < params.k; ++r)
        labels.insert(labels.end(), static_cast<std::size_t>(counts[static_cast<std::size_t>(r)]), r);

    DataMatrix out;
    if (params.family == Family::Bernoulli)
        kernels::bernoulli_columns(params.centers, labels, seed, out.values);
    else
        kernels::gaussian_columns(params.centers, labels, params.sigma_sq, seed, out.values);

    Matrix expected(params.n, m);
    for (int j = 0; j < m; ++j) {
        const double* mu = params.centers.col(labels[static_cast<std::size_t>(j)]);
        double* ej = expected.col(j);
        for (int i = 0; i < params.n; ++i) ej[i] = mu[i];
    }
    out.labels = std::move(labels);
    out.expected = std::move(expected);
    return out;
}

double separation_required_bound(double c, int k, double sigma_sq, double w_min,
                                 double n, double m) {
    return 8100.0 * c * k * sigma_sq * (1.0 / w_min) * (1.0 + n / m + std::log(m));
}

SeparationReport separation_report(const MixtureParams& params, int m, double c) {
    validate(params);
    if (params.k < 2)
        throw std::invalid_argument("separation_report: needs k >= 2");
    if (!(c > 0.0)) throw std::invalid_argument("separation_report: c must be > 0");
    if (m < 1) throw std::invalid_argument("separation_report: m must be >= 1");

    SeparationReport rep;
    rep.c = c;
    rep.w_min = *std::min_element(params.weights.begin(), params.weights.end());
    rep.required_bound = separation_required_bound(
        c, params.k, params.sigma_sq, rep.w_min, params.n, m);
    rep.pair_distances_sq = Matrix(params.k, params.k);
    double min_pair = std::numeric_limits<double>::infinity();
    for (int r = 0; r < params.k; ++r) {
        for (int s = r + 1; s < params.k; ++s) {
            double dist = 0.0;
            const double* cr = params.centers.col(r);
            const double* cs = params.centers.col(s);
            for (int i = 0; i < params.n; ++i) {
                const double diff = cr[i] - cs[i];
                dist += diff * diff;
            }
            rep.pair_distances_sq.at(r, s) = dist;
            rep.pair_distances_sq.at(s, r) = dist;
            min_pair = std::min(min_pair, dist);
        }
    }
    rep.margin = min_pair / rep.required_bound;
    rep.satisfied = rep.margin >= 1.0;
    return rep;
}

MixtureParams make_separated_params(int n, int k, double sigma_sq,
                                    std::vector<double> weights, int m, double c,
                                    Family family) {
    if (k < 1) throw std::invalid_argument("make_separated_params: k must be >= 1");
    if (weights.empty())
        weights.assign(static_cast<std::size_t>(k), 1.0 / k);
    MixtureParams params;
    params.k = k;
    params.n = n;
    params.sigma_sq = sigma_sq;
    params.family = family;
    params.weights = std::move(weights);
    params.centers = Matrix(n, k);
    if (k >= 2) {
        const double w_min =
            *std::min_element(params.weights.begin(), params.weights.end());
        const double bound =
            separation_required_bound(c, k, sigma_sq, w_min, n, m);
        const int block = std::max(
            1, static_cast<int>(std::ceil(bound / (2.0 * sigma_sq * sigma_sq))));
        if (static_cast<long long>(block) * k > n)
            throw std::invalid_argument(
                "make_separated_params: separation needs block size " +
                std::to_string(block) + " per component, but k*b exceeds n=" +
                std::to_string(n) + "; lower c or raise n");
        for (int r = 0; r < k; ++r)
            for (int i = r * block; i < (r + 1) * block; ++i)
                params.centers.at(i, r) = sigma_sq;
    }
    validate(params);
    return params;
}

} // namespace mixclust::model
