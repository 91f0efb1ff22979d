#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixclust/errors.hpp"
#include "mixclust/eval.hpp"
#include "mixclust/io.hpp"
#include "mixclust/kernels.hpp"
#include "mixclust/linalg.hpp"
#include "mixclust/model.hpp"
#include "mixclust/pipeline.hpp"

using nlohmann::json;
using namespace mixclust;

namespace {

std::vector<double> parse_weights(const std::string& csv, int k) {
    if (csv.empty()) return std::vector<double>(static_cast<std::size_t>(k), 1.0 / k);
    std::vector<double> weights;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        weights.push_back(std::stod(item));
    return weights;
}

json to_json(const eval::BoundReport& rep) {
    json ctx = json::object();
    for (const auto& [key, value] : rep.context) ctx[key] = value;
    return {{"name", rep.name},
            {"measured", rep.measured},
            {"bound", rep.bound},
            {"satisfied", rep.satisfied},
            {"context", ctx}};
}

json to_json(const model::SeparationReport& rep) {
    double min_pair = 0.0;
    const int k = rep.pair_distances_sq.rows;
    bool first = true;
    for (int r = 0; r < k; ++r)
        for (int s = r + 1; s < k; ++s) {
            const double d = rep.pair_distances_sq.at(r, s);
            if (first || d < min_pair) min_pair = d;
            first = false;
        }
    return {{"name", "separation_condition"},
            {"measured", min_pair},
            {"bound", rep.required_bound},
            {"satisfied", rep.satisfied},
            {"context", {{"c", rep.c}, {"w_min", rep.w_min}, {"margin", rep.margin}}}};
}

json centers_to_json(const Matrix& centers) {
    json rows = json::array();
    for (int r = 0; r < centers.cols; ++r) {
        json row = json::array();
        for (int i = 0; i < centers.rows; ++i) row.push_back(centers.at(i, r));
        rows.push_back(std::move(row));
    }
    return rows;
}

struct CommonArgs {
    int n = 100, m = 100, k = 2;
    double sigma_sq = 0.5, c = 1.0, tol = 1e-10;
    std::uint64_t seed = 0;
    std::string weights_csv;
    std::string family = "bernoulli";
    std::string in_path, out_path, labels_path, params_path;
    std::string format = "csv";
    double c_max = 4.0, dev_threshold = 0.01;
    bool timings = false;
};

model::Family parse_family(const std::string& name) {
    if (name == "bernoulli") return model::Family::Bernoulli;
    if (name == "gaussian") return model::Family::SphericalGaussian;
    throw std::invalid_argument("family must be 'bernoulli' or 'gaussian'");
}

json config_echo(const std::string& sub, const CommonArgs& a) {
    return {{"subcommand", sub}, {"n", a.n},
            {"m", a.m},          {"k", a.k},
            {"sigma_sq", a.sigma_sq}, {"weights", a.weights_csv},
            {"family", a.family},{"seed", a.seed},
            {"c", a.c},          {"tol", a.tol},
            {"in", a.in_path},   {"out", a.out_path},
            {"labels", a.labels_path}, {"params", a.params_path},
            {"format", a.format},{"c_max", a.c_max},
            {"dev_threshold", a.dev_threshold}};
}

int cmd_generate(const CommonArgs& a) {
    model::MixtureParams params;
    if (!a.in_path.empty()) {
        params = io::read_params(a.in_path);
        model::validate(params);
    } else {
        params = model::make_separated_params(a.n, a.k, a.sigma_sq,
                                              parse_weights(a.weights_csv, a.k),
                                              a.m, a.c, parse_family(a.family));
    }
    if (auto warning = model::sigma_floor_warning(params))
        std::cerr << "warning: " << *warning << "\n";
    const auto data = model::sample_mixture(params, a.m, a.seed);
    io::write_matrix(a.out_path, data.values,
                     params.family == model::Family::Bernoulli);
    io::write_labels(a.labels_path, *data.labels);
    io::write_params(a.params_path, params);
    return 0;
}

int cmd_cluster(const CommonArgs& a) {
    const Matrix samples = io::read_matrix(a.in_path);
    const auto run = pipeline::cluster_run(samples, a.k, a.seed, a.tol);
    io::write_labels(a.out_path, run.labels.assignment);

    json report;
    report["config"] = config_echo("cluster", a);
    report["reports"] = json::array();
    report["accuracy"] = nullptr;
    report["estimated_centers"] = {{"half1", centers_to_json(run.theta.centers)},
                                   {"half2", centers_to_json(run.nu.centers)}};
    if (!a.params_path.empty()) {
        const auto params = io::read_params(a.params_path);
        if (params.k >= 2)
            report["reports"].push_back(to_json(model::separation_report(params, samples.cols, a.c)));
    }
    if (!a.labels_path.empty()) {
        const auto truth = io::read_labels(a.labels_path);
        report["accuracy"] = eval::accuracy(run.labels, truth).accuracy;
    }
    if (a.timings)
        report["timings_ms"] = {{"svd", run.timings.svd_ms},
                                {"kmeans", run.timings.kmeans_ms},
                                {"project", run.timings.project_ms},
                                {"total", run.timings.total_ms}};
    io::write_text(a.out_path + ".report.json", report.dump(2) + "\n");
    return 0;
}

int cmd_verify(const CommonArgs& a) {
    const Matrix samples = io::read_matrix(a.in_path);
    const auto params = io::read_params(a.params_path);
    model::validate(params);
    const auto truth_labels = io::read_labels(a.labels_path);

    model::DataMatrix data;
    data.values = samples;
    data.labels = truth_labels;
    Matrix expected(params.n, samples.cols);
    for (int j = 0; j < samples.cols; ++j) {
        const int r = truth_labels[static_cast<std::size_t>(j)];
        for (int i = 0; i < params.n; ++i)
            expected.at(i, j) = params.centers.at(i, r);
    }
    data.expected = std::move(expected);

    const auto run = pipeline::cluster_run(samples, params.k, a.seed, a.tol);
    const double c_hat = eval::measured_spectral_constant(data, params);

    json reports = json::array();
    bool all_ok = true;
    auto add = [&](const eval::BoundReport& rep) {
        all_ok = all_ok && rep.satisfied;
        reports.push_back(to_json(rep));
    };

    add(eval::spectral_bound_report(data, params, a.c_max));
    add(eval::frobenius_bound_check(data, params.k));
    if (params.k >= 2) add(eval::deviation_check(data, params, a.dev_threshold));

    const pipeline::CenterSet truth_set{params.centers};
    auto align = [&](const pipeline::CenterSet& est) {
        const auto perm = pipeline::match_clusters(est, truth_set);
        pipeline::CenterSet aligned;
        aligned.centers = Matrix(params.n, params.k);
        for (int r = 0; r < params.k; ++r) {
            const double* src = est.centers.col(r);
            double* dst = aligned.centers.col(perm[static_cast<std::size_t>(r)]);
            for (int i = 0; i < params.n; ++i) dst[i] = src[i];
        }
        return aligned;
    };
    const auto theta_aligned = align(run.theta);
    const auto nu_aligned = align(run.nu);

    // Per-half center error against the half's own measured constant.
    auto half_report = [&](const pipeline::CenterSet& aligned,
                           const std::vector<int>& half, const char* name) {
        model::DataMatrix half_data;
        half_data.values = select_columns(samples, half);
        std::vector<int> half_labels;
        half_labels.reserve(half.size());
        for (int col : half) half_labels.push_back(truth_labels[static_cast<std::size_t>(col)]);
        Matrix half_expected(params.n, static_cast<int>(half.size()));
        for (std::size_t j = 0; j < half.size(); ++j)
            for (int i = 0; i < params.n; ++i)
                half_expected.at(i, static_cast<int>(j)) =
                    params.centers.at(i, half_labels[j]);
        half_data.labels = std::move(half_labels);
        half_data.expected = std::move(half_expected);
        const double c_hat_half = eval::measured_spectral_constant(half_data, params);
        auto rep = eval::center_error_report(aligned, truth_set, params,
                                             static_cast<int>(half.size()), c_hat_half);
        rep.name = name;
        return rep;
    };
    add(half_report(theta_aligned, run.plan.half1, "center_error_half1"));
    add(half_report(nu_aligned, run.plan.half2, "center_error_half2"));
    if (params.k >= 2)
        add(eval::cross_term_check(data, params, theta_aligned, nu_aligned,
                                   run.plan, c_hat));

    json report;
    report["config"] = config_echo("verify", a);
    report["reports"] = std::move(reports);
    report["accuracy"] = eval::accuracy(run.labels, truth_labels).accuracy;
    report["all_checks_satisfied"] = all_ok;
    if (params.k >= 2) {
        // advisory, not part of the aggregate: depends on the caller's c
        report["separation"] = to_json(model::separation_report(params, samples.cols, a.c));
    }
    if (a.timings)
        report["timings_ms"] = {{"svd", run.timings.svd_ms},
                                {"kmeans", run.timings.kmeans_ms},
                                {"project", run.timings.project_ms},
                                {"total", run.timings.total_ms}};
    io::write_text(a.out_path, report.dump(2) + "\n");
    return 0;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_bench(const CommonArgs& a) {
    const json grid = json::parse(io::read_text(a.in_path));
    const json configs = grid.value("configs", json::array());
    const json seeds = grid.value("seeds", json::array());

    json rows = json::array();
    for (const auto& cfg : configs) {
        const int n = cfg.value("n", a.n);
        const int m = cfg.value("m", a.m);
        const int k = cfg.value("k", a.k);
        const double sigma_sq = cfg.value("sigma_sq", a.sigma_sq);
        const double c = cfg.value("c", a.c);
        const double tol = cfg.value("tol", a.tol);
        const std::string family = cfg.value("family", a.family);
        std::vector<double> weights;
        if (cfg.contains("weights"))
            weights = cfg["weights"].get<std::vector<double>>();
        for (const auto& seed_json : seeds) {
            const std::uint64_t seed = seed_json.get<std::uint64_t>();
            const auto params = model::make_separated_params(
                n, k, sigma_sq, weights, m, c, parse_family(family));
            const auto data = model::sample_mixture(params, m, seed);
            const auto run = pipeline::cluster_run(data.values, k, seed, tol);
            const double acc = eval::accuracy(run.labels, *data.labels).accuracy;
            json row = {{"n", n},
                        {"m", m},
                        {"k", k},
                        {"sigma_sq", sigma_sq},
                        {"family", family},
                        {"c", c},
                        {"seed", seed},
                        {"accuracy", acc},
                        {"separation_margin",
                         k >= 2 ? json(model::separation_report(params, m, c).margin)
                                : json(nullptr)},
                        {"svd_ms", run.timings.svd_ms},
                        {"kmeans_ms", run.timings.kmeans_ms},
                        {"project_ms", run.timings.project_ms},
                        {"total_ms", run.timings.total_ms}};
            rows.push_back(std::move(row));
        }
    }

    if (a.format == "json") {
        io::write_text(a.out_path, rows.dump(2) + "\n");
        return 0;
    }
    static const char* columns[] = {"n",      "m",        "k",
                                    "sigma_sq", "family", "c",
                                    "seed",   "accuracy", "separation_margin",
                                    "svd_ms", "kmeans_ms", "project_ms",
                                    "total_ms"};
    std::string out;
    for (std::size_t i = 0; i < std::size(columns); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < std::size(columns); ++i) {
            if (i) out += ',';
            const auto& cell = row[columns[i]];
            if (cell.is_null())
                out += "";
            else if (cell.is_string())
                out += cell.get<std::string>();
            else if (cell.is_number_integer())
                out += std::to_string(cell.get<long long>());
            else if (cell.is_number_unsigned())
                out += std::to_string(cell.get<unsigned long long>());
            else
                out += format_double(cell.get<double>());
        }
        out += '\n';
    }
    io::write_text(a.out_path, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"projection-based clustering of Bernoulli/Gaussian mixtures"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n", args.n, "ambient dimension");
        sub->add_option("--m", args.m, "number of samples");
        sub->add_option("--k", args.k, "number of components");
        sub->add_option("--sigma-sq", args.sigma_sq, "coordinate cap / variance");
        sub->add_option("--weights", args.weights_csv, "comma-separated mixture weights");
        sub->add_option("--family", args.family, "bernoulli | gaussian");
        sub->add_option("--seed", args.seed, "64-bit seed");
        sub->add_option("--c", args.c, "separation-condition constant");
        sub->add_option("--tol", args.tol, "numerical tolerance");
        sub->add_option("--in", args.in_path, "input path");
        sub->add_option("--out", args.out_path, "output path");
        sub->add_option("--labels", args.labels_path, "labels path");
        sub->add_option("--params", args.params_path, "params path");
        sub->add_option("--format", args.format, "bench output format: csv | json");
        sub->add_option("--c-max", args.c_max, "spectral-constant cap");
        sub->add_option("--dev-threshold", args.dev_threshold, "deviation fraction cap");
        sub->add_flag("--timings", args.timings, "include timings in reports");
    };

    auto* generate = app.add_subcommand("generate", "sample a synthetic instance");
    auto* cluster = app.add_subcommand("cluster", "cluster a matrix file");
    auto* verify = app.add_subcommand("verify", "run bound checks on an instance");
    auto* bench = app.add_subcommand("bench", "run a parameter grid");
    for (auto* sub : {generate, cluster, verify, bench}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (generate->parsed()) return cmd_generate(args);
        if (cluster->parsed()) return cmd_cluster(args);
        if (verify->parsed()) return cmd_verify(args);
        if (bench->parsed()) return cmd_bench(args);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
