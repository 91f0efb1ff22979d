#ifndef MIXCLUST_IO_HPP
#define MIXCLUST_IO_HPP

#include <string>
#include <vector>

#include "mixclust/matrix.hpp"
#include "mixclust/model.hpp"

namespace mixclust::io {

// Matrix file: first line "n m", then n rows of m space-separated values.
// Bernoulli data is written as 0/1 integers, everything else as %.17g
// decimals; both round-trip exactly. All writers go through a temp file and
// rename, so readers never observe partial output. Failures throw IoError.

void write_matrix(const std::string& path, const Matrix& m, bool as_integers);
Matrix read_matrix(const std::string& path);

// Labels file: one integer per line, m lines.
void write_labels(const std::string& path, const std::vector<int>& labels);
std::vector<int> read_labels(const std::string& path);

// Params file: "key value" lines (k, n, sigma_sq, family, weights) followed
// by k "center ..." rows of n coordinates each.
void write_params(const std::string& path, const model::MixtureParams& params);
model::MixtureParams read_params(const std::string& path);

void write_text(const std::string& path, const std::string& contents);
std::string read_text(const std::string& path);

} // namespace mixclust::io

#endif
