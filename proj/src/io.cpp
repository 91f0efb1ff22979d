#include "mixclust/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixclust/errors.hpp"

namespace mixclust::io {

namespace {

void atomic_write(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out << contents;
        out.flush();
        if (!out) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("rename failed: " + tmp + " -> " + path);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (!in && !in.eof()) throw IoError("read failed: " + path);
    return ss.str();
}

void format_value(std::string& out, double v, bool as_integer) {
    char buf[40];
    if (as_integer)
        std::snprintf(buf, sizeof buf, "%d", static_cast<int>(v));
    else
        std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

} // namespace

void write_matrix(const std::string& path, const Matrix& m, bool as_integers) {
    std::string out;
    out.reserve(m.size() * (as_integers ? 2 : 24) + 32);
    out += std::to_string(m.rows);
    out += ' ';
    out += std::to_string(m.cols);
    out += '\n';
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) {
            if (j) out += ' ';
            format_value(out, m.at(i, j), as_integers);
        }
        out += '\n';
    }
    atomic_write(path, out);
}

Matrix read_matrix(const std::string& path) {
    std::istringstream in(slurp(path));
    int rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows < 1 || cols < 1)
        throw IoError("matrix header malformed: " + path);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (!(in >> m.at(i, j)))
                throw IoError("matrix body truncated or malformed: " + path);
    return m;
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
    std::string out;
    out.reserve(labels.size() * 3);
    for (int v : labels) {
        out += std::to_string(v);
        out += '\n';
    }
    atomic_write(path, out);
}

std::vector<int> read_labels(const std::string& path) {
    std::istringstream in(slurp(path));
    std::vector<int> labels;
    int v = 0;
    while (in >> v) labels.push_back(v);
    if (!in.eof()) throw IoError("labels malformed: " + path);
    return labels;
}

void write_params(const std::string& path, const model::MixtureParams& params) {
    std::string out;
    out += "k " + std::to_string(params.k) + "\n";
    out += "n " + std::to_string(params.n) + "\n";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", params.sigma_sq);
    out += std::string("sigma_sq ") + buf + "\n";
    out += std::string("family ") +
           (params.family == model::Family::Bernoulli ? "bernoulli" : "gaussian") +
           "\n";
    out += "weights";
    for (double w : params.weights) {
        std::snprintf(buf, sizeof buf, " %.17g", w);
        out += buf;
    }
    out += '\n';
    for (int r = 0; r < params.k; ++r) {
        out += "center";
        for (int i = 0; i < params.n; ++i) {
            std::snprintf(buf, sizeof buf, " %.17g", params.centers.at(i, r));
            out += buf;
        }
        out += '\n';
    }
    atomic_write(path, out);
}

model::MixtureParams read_params(const std::string& path) {
    std::istringstream in(slurp(path));
    model::MixtureParams params;
    std::string line;
    int next_center = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "k") {
            ls >> params.k;
        } else if (key == "n") {
            ls >> params.n;
        } else if (key == "sigma_sq") {
            ls >> params.sigma_sq;
        } else if (key == "family") {
            std::string fam;
            ls >> fam;
            if (fam == "bernoulli")
                params.family = model::Family::Bernoulli;
            else if (fam == "gaussian")
                params.family = model::Family::SphericalGaussian;
            else
                throw IoError("params: unknown family '" + fam + "' in " + path);
        } else if (key == "weights") {
            double w = 0.0;
            while (ls >> w) params.weights.push_back(w);
        } else if (key == "center") {
            if (params.n < 1 || params.k < 1)
                throw IoError("params: center row before k/n in " + path);
            if (params.centers.empty()) params.centers = Matrix(params.n, params.k);
            if (next_center >= params.k)
                throw IoError("params: too many center rows in " + path);
            for (int i = 0; i < params.n; ++i)
                if (!(ls >> params.centers.at(i, next_center)))
                    throw IoError("params: short center row in " + path);
            ++next_center;
        } else {
            throw IoError("params: unknown key '" + key + "' in " + path);
        }
        if (ls.fail() && !ls.eof()) throw IoError("params: malformed line in " + path);
    }
    if (next_center != params.k)
        throw IoError("params: expected " + std::to_string(params.k) +
                      " center rows in " + path);
    return params;
}

void write_text(const std::string& path, const std::string& contents) {
    atomic_write(path, contents);
}

std::string read_text(const std::string& path) { return slurp(path); }

} // namespace mixclust::io
