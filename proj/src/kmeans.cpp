#include "mixclust/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixclust/kernels.hpp"
#include "mixclust/rng.hpp"

namespace mixclust::kmeans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq_dist(const double* x, const double* y, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        const double diff = x[i] - y[i];
        s += diff * diff;
    }
    return s;
}

void copy_column(const Matrix& src, int j, Matrix& dst, int t) {
    const double* s = src.col(j);
    double* d = dst.col(t);
    for (int i = 0; i < src.rows; ++i) d[i] = s[i];
}

// First center: farthest point from the global centroid; then greedily the
// point maximizing its distance to the chosen set. Ties go to the lowest
// index. Purely geometric, so permutation of the input moves only tie cases.
Matrix farthest_point_init(const Matrix& points, int k) {
    const int d = points.rows, l = points.cols;
    std::vector<double> centroid(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < l; ++j) {
        const double* pj = points.col(j);
        for (int i = 0; i < d; ++i) centroid[static_cast<std::size_t>(i)] += pj[i];
    }
    for (double& c : centroid) c /= l;

    std::vector<bool> used(static_cast<std::size_t>(l), false);
    std::vector<double> min_dist(static_cast<std::size_t>(l), kInf);
    Matrix centers(d, k);
    int pick = 0;
    double best = -1.0;
    for (int j = 0; j < l; ++j) {
        const double dd = sq_dist(points.col(j), centroid.data(), d);
        if (dd > best) { best = dd; pick = j; }
    }
    for (int t = 0; t < k; ++t) {
        if (t > 0) {
            pick = -1;
            best = -1.0;
            for (int j = 0; j < l; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                if (min_dist[static_cast<std::size_t>(j)] > best) {
                    best = min_dist[static_cast<std::size_t>(j)];
                    pick = j;
                }
            }
        }
        used[static_cast<std::size_t>(pick)] = true;
        copy_column(points, pick, centers, t);
        for (int j = 0; j < l; ++j) {
            if (used[static_cast<std::size_t>(j)]) {
                min_dist[static_cast<std::size_t>(j)] = 0.0;
                continue;
            }
            const double dd = sq_dist(points.col(j), centers.col(t), d);
            min_dist[static_cast<std::size_t>(j)] =
                std::min(min_dist[static_cast<std::size_t>(j)], dd);
        }
    }
    return centers;
}

Matrix kmeanspp_init(const Matrix& points, int k, std::uint64_t seed) {
    const int d = points.rows, l = points.cols;
    CounterRng rng(seed, 0x5EEDULL);
    Matrix centers(d, k);
    int first = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(l));
    copy_column(points, first, centers, 0);
    std::vector<double> min_dist(static_cast<std::size_t>(l));
    for (int t = 1; t < k; ++t) {
        double total = 0.0;
        for (int j = 0; j < l; ++j) {
            double dd = kInf;
            for (int c = 0; c < t; ++c)
                dd = std::min(dd, sq_dist(points.col(j), centers.col(c), d));
            min_dist[static_cast<std::size_t>(j)] = dd;
            total += dd;
        }
        int pick = 0;
        if (total > 0.0) {
            const double target = rng.next_unit() * total;
            double acc = 0.0;
            for (int j = 0; j < l; ++j) {
                acc += min_dist[static_cast<std::size_t>(j)];
                if (acc >= target) { pick = j; break; }
            }
        }
        copy_column(points, pick, centers, t);
    }
    return centers;
}

struct LloydState {
    Matrix centers;
    std::vector<int> assign;
    std::vector<double> d1, d2;
    std::vector<long long> counts;
    double cost = 0.0;
};

void note_margins(const LloydState& st, const L22Options& opts) {
    if (!opts.min_assign_margin) return;
    for (std::size_t j = 0; j < st.d1.size(); ++j) {
        if (!std::isfinite(st.d2[j])) continue;
        const double denom = std::max(st.d2[j], 1e-300);
        const double margin = (st.d2[j] - st.d1[j]) / denom;
        if (margin < *opts.min_assign_margin) *opts.min_assign_margin = margin;
    }
}

// Assignment step plus empty-cluster repair: an empty cluster is reseeded at
// the point farthest from its currently assigned center, drawn from a
// cluster with at least two members. Returns true if any repair happened.
bool assign_and_repair(const Matrix& points, LloydState& st, const L22Options& opts) {
    const int l = points.cols;
    const int k = st.centers.cols;
    st.assign.resize(static_cast<std::size_t>(l));
    st.d1.resize(static_cast<std::size_t>(l));
    st.d2.resize(static_cast<std::size_t>(l));
    kernels::nearest_assign(points, st.centers, st.assign.data(), st.d1.data(),
                            st.d2.data());
    note_margins(st, opts);
    st.counts.assign(static_cast<std::size_t>(k), 0);
    for (int j = 0; j < l; ++j) st.counts[static_cast<std::size_t>(st.assign[j])]++;

    bool repaired = false;
    for (int r = 0; r < k; ++r) {
        if (st.counts[static_cast<std::size_t>(r)] > 0) continue;
        int steal = -1;
        double worst = -1.0;
        for (int j = 0; j < l; ++j) {
            if (st.counts[static_cast<std::size_t>(st.assign[j])] < 2) continue;
            if (st.d1[static_cast<std::size_t>(j)] > worst) {
                worst = st.d1[static_cast<std::size_t>(j)];
                steal = j;
            }
        }
        if (steal < 0) continue;  // unreachable when l >= k
        copy_column(points, steal, st.centers, r);
        st.counts[static_cast<std::size_t>(st.assign[steal])]--;
        st.assign[static_cast<std::size_t>(steal)] = r;
        st.counts[static_cast<std::size_t>(r)] = 1;
        st.d1[static_cast<std::size_t>(steal)] = 0.0;
        repaired = true;
    }
    st.cost = kernels::det_sum(st.d1.data(), st.d1.size());
    return repaired;
}

void update_centroids(const Matrix& points, LloydState& st) {
    Matrix sums;
    kernels::cluster_sums(points, st.assign.data(), st.centers.cols, sums, st.counts);
    for (int r = 0; r < st.centers.cols; ++r) {
        const double inv = 1.0 / static_cast<double>(st.counts[static_cast<std::size_t>(r)]);
        const double* s = sums.col(r);
        double* c = st.centers.col(r);
        for (int i = 0; i < points.rows; ++i) c[i] = s[i] * inv;
    }
}

void lloyd(const Matrix& points, LloydState& st, const L22Options& opts) {
    assign_and_repair(points, st, opts);
    if (opts.cost_trace) opts.cost_trace->push_back(st.cost);
    double prev = st.cost;
    for (int iter = 0; iter < opts.lloyd_max_iters; ++iter) {
        update_centroids(points, st);
        const bool repaired = assign_and_repair(points, st, opts);
        if (opts.cost_trace) opts.cost_trace->push_back(st.cost);
        if (!repaired && prev - st.cost <= opts.lloyd_rel_tol * std::max(prev, 1e-300))
            break;
        prev = st.cost;
    }
}

} // namespace

L22Solution solve_l22(const L22Instance& instance, std::uint64_t seed,
                      const L22Options& opts) {
    const Matrix& points = instance.points;
    const int l = points.cols, k = instance.k;
    if (k < 1) throw std::invalid_argument("solve_l22: k must be >= 1");
    if (l < k) throw std::invalid_argument("solve_l22: need at least k points");
    if (!all_finite(points))
        throw std::invalid_argument("solve_l22: non-finite input");

    LloydState st;
    st.centers = opts.kmeanspp_init ? kmeanspp_init(points, k, seed)
                                    : farthest_point_init(points, k);
    lloyd(points, st, opts);

    // Single-swap local search: replace one center by one input point when
    // that lowers the cost by more than the relative threshold; first
    // improvement, fixed scan order, Lloyd re-convergence after each accept.
    std::vector<double> dcand(static_cast<std::size_t>(l));
    std::vector<double> contrib(static_cast<std::size_t>(l));
    int accepted = 0;
    bool improved = true;
    while (improved && accepted < opts.max_accepted_swaps) {
        improved = false;
        for (int p = 0; p < l && !improved; ++p) {
            const double* vp = points.col(p);
#pragma omp parallel for schedule(static)
            for (int j = 0; j < l; ++j)
                dcand[static_cast<std::size_t>(j)] = sq_dist(points.col(j), vp, points.rows);
            for (int r = 0; r < k; ++r) {
                for (int j = 0; j < l; ++j) {
                    const double excl = (st.assign[static_cast<std::size_t>(j)] == r)
                                            ? st.d2[static_cast<std::size_t>(j)]
                                            : st.d1[static_cast<std::size_t>(j)];
                    contrib[static_cast<std::size_t>(j)] =
                        std::min(dcand[static_cast<std::size_t>(j)], excl);
                }
                const double swapped = kernels::det_sum(contrib.data(), contrib.size());
                if (swapped < (1.0 - opts.swap_rel_improvement) * st.cost) {
                    copy_column(points, p, st.centers, r);
                    lloyd(points, st, opts);
                    ++accepted;
                    improved = true;
                    break;
                }
            }
        }
    }

    L22Solution out;
    out.centers = std::move(st.centers);
    out.assignment = std::move(st.assign);
    out.cost = st.cost;
    return out;
}

L22Solution brute_force_l22(const L22Instance& instance) {
    const Matrix& points = instance.points;
    const int l = points.cols, k = instance.k, d = points.rows;
    if (l > 12) throw std::invalid_argument("brute_force_l22: more than 12 points");
    if (k < 1 || l < k) throw std::invalid_argument("brute_force_l22: need 1 <= k <= points");

    std::vector<int> labels(static_cast<std::size_t>(l), 0);
    std::vector<int> best_labels;
    double best_cost = kInf;

    Matrix sums(d, k);
    std::vector<int> counts(static_cast<std::size_t>(k));

    auto score = [&]() {
        std::fill(sums.a.begin(), sums.a.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (int j = 0; j < l; ++j) {
            const int g = labels[static_cast<std::size_t>(j)];
            counts[static_cast<std::size_t>(g)]++;
            const double* pj = points.col(j);
            double* sg = sums.col(g);
            for (int i = 0; i < d; ++i) sg[i] += pj[i];
        }
        double cost = 0.0;
        for (int j = 0; j < l; ++j) {
            const int g = labels[static_cast<std::size_t>(j)];
            const double* pj = points.col(j);
            const double* sg = sums.col(g);
            const double inv = 1.0 / counts[static_cast<std::size_t>(g)];
            for (int i = 0; i < d; ++i) {
                const double diff = pj[i] - sg[i] * inv;
                cost += diff * diff;
            }
        }
        return cost;
    };

    // Restricted-growth strings over exactly k labels (partitions of the
    // points into k non-empty groups, each counted once).
    auto enumerate = [&](auto&& self, int pos, int max_used) -> void {
        if (pos == l) {
            if (max_used != k) return;
            const double cost = score();
            if (cost < best_cost) {
                best_cost = cost;
                best_labels = labels;
            }
            return;
        }
        if (max_used + (l - pos) < k) return;  // cannot reach k labels
        const int limit = std::min(max_used, k - 1);
        for (int g = 0; g <= limit; ++g) {
            labels[static_cast<std::size_t>(pos)] = g;
            self(self, pos + 1, std::max(max_used, g + 1));
        }
    };
    enumerate(enumerate, 0, 0);

    L22Solution out;
    out.assignment = best_labels;
    out.cost = best_cost;
    out.centers = Matrix(d, k);
    std::fill(counts.begin(), counts.end(), 0);
    for (int j = 0; j < l; ++j) {
        const int g = best_labels[static_cast<std::size_t>(j)];
        counts[static_cast<std::size_t>(g)]++;
        const double* pj = points.col(j);
        double* cg = out.centers.col(g);
        for (int i = 0; i < d; ++i) cg[i] += pj[i];
    }
    for (int g = 0; g < k; ++g) {
        double* cg = out.centers.col(g);
        for (int i = 0; i < d; ++i) cg[i] /= counts[static_cast<std::size_t>(g)];
    }
    return out;
}

} // namespace mixclust::kmeans
