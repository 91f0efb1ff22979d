#include "mixclust/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace mixclust {

std::vector<int> solve_assignment(const Matrix& cost) {
    if (cost.rows != cost.cols || cost.rows == 0)
        throw std::invalid_argument("solve_assignment: cost matrix must be square");
    const int n = cost.rows;
    const double inf = std::numeric_limits<double>::infinity();

    // Row/column potentials with 1-based sentinel column 0.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0);  // match[col 1..n] = row, 0 = free
    for (int r = 1; r <= n; ++r) {
        std::vector<double> min_slack(n + 1, inf);
        std::vector<int> prev(n + 1, 0);
        std::vector<bool> used(n + 1, false);
        int j0 = 0;
        match[0] = r;
        do {
            used[j0] = true;
            const int r0 = match[j0];
            double delta = inf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double slack = cost.at(r0 - 1, j - 1) - u[r0] - v[j];
                if (slack < min_slack[j]) {
                    min_slack[j] = slack;
                    prev[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        while (j0 != 0) {
            const int j1 = prev[j0];
            match[j0] = match[j1];
            j0 = j1;
        }
    }

    std::vector<int> perm(n, -1);
    for (int j = 1; j <= n; ++j)
        if (match[j] > 0) perm[match[j] - 1] = j - 1;
    return perm;
}

} // namespace mixclust
