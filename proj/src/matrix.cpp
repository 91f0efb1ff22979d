#include "mixclust/matrix.hpp"

#include <cmath>

namespace mixclust {

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (int j = 0; j < m.cols; ++j)
        for (int i = 0; i < m.rows; ++i)
            t.at(j, i) = m.at(i, j);
    return t;
}

Matrix select_columns(const Matrix& m, const std::vector<int>& idx) {
    Matrix out(m.rows, static_cast<int>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
        const double* src = m.col(idx[j]);
        double* dst = out.col(static_cast<int>(j));
        for (int i = 0; i < m.rows; ++i) dst[i] = src[i];
    }
    return out;
}

bool all_finite(const Matrix& m) {
    for (double v : m.a)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace mixclust
