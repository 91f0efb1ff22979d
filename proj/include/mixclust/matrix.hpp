#ifndef MIXCLUST_MATRIX_HPP
#define MIXCLUST_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace mixclust {

/// Dense real matrix, column-major. Columns are samples/points throughout.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(j) * rows + i]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(j) * rows + i]; }

    double* col(int j) { return a.data() + static_cast<std::size_t>(j) * rows; }
    const double* col(int j) const { return a.data() + static_cast<std::size_t>(j) * rows; }

    std::size_t size() const { return a.size(); }
    bool empty() const { return rows == 0 || cols == 0; }

    bool operator==(const Matrix& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

Matrix transpose(const Matrix& m);

/// Columns `idx` of `m`, in the given order.
Matrix select_columns(const Matrix& m, const std::vector<int>& idx);

bool all_finite(const Matrix& m);

} // namespace mixclust

#endif
