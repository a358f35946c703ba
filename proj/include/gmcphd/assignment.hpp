#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "gmcphd/error.hpp"

namespace gmcphd::assignment {

/// Minimum-cost assignment of every row to a distinct column (rows <= cols),
/// O(rows² · cols) shortest augmenting paths with dual potentials.
/// Returns the column chosen for each row.
inline std::vector<Eigen::Index> solve_min_cost(const Eigen::MatrixXd& cost) {
    const Eigen::Index n = cost.rows();
    const Eigen::Index m = cost.cols();
    if (n > m) throw DataError("assignment needs rows <= cols");
    if (n == 0) return {};
    const double inf = std::numeric_limits<double>::infinity();

    // 1-based; column 0 is a virtual start.
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(m + 1), 0.0);
    std::vector<Eigen::Index> match(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
    std::vector<double> min_slack(static_cast<std::size_t>(m + 1));
    std::vector<char> used(static_cast<std::size_t>(m + 1));

    for (Eigen::Index row = 1; row <= n; ++row) {
        match[0] = row;
        Eigen::Index col0 = 0;
        std::fill(min_slack.begin(), min_slack.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[static_cast<std::size_t>(col0)] = 1;
            const Eigen::Index r = match[static_cast<std::size_t>(col0)];
            double delta = inf;
            Eigen::Index col1 = 0;
            for (Eigen::Index j = 1; j <= m; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (used[ju]) continue;
                const double reduced = cost(r - 1, j - 1) - u[static_cast<std::size_t>(r)] - v[ju];
                if (reduced < min_slack[ju]) {
                    min_slack[ju] = reduced;
                    way[ju] = col0;
                }
                if (min_slack[ju] < delta) {
                    delta = min_slack[ju];
                    col1 = j;
                }
            }
            for (Eigen::Index j = 0; j <= m; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (used[ju]) {
                    u[static_cast<std::size_t>(match[ju])] += delta;
                    v[ju] -= delta;
                } else {
                    min_slack[ju] -= delta;
                }
            }
            col0 = col1;
        } while (match[static_cast<std::size_t>(col0)] != 0);
        do {
            const Eigen::Index col1 = way[static_cast<std::size_t>(col0)];
            match[static_cast<std::size_t>(col0)] = match[static_cast<std::size_t>(col1)];
            col0 = col1;
        } while (col0 != 0);
    }

    std::vector<Eigen::Index> row_to_col(static_cast<std::size_t>(n), -1);
    for (Eigen::Index j = 1; j <= m; ++j) {
        const Eigen::Index r = match[static_cast<std::size_t>(j)];
        if (r != 0) row_to_col[static_cast<std::size_t>(r - 1)] = j - 1;
    }
    return row_to_col;
}

/// Sum of cost over an assignment, accumulated row by row.
inline double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<Eigen::Index>& row_to_col) {
    double s = 0.0;
    for (std::size_t r = 0; r < row_to_col.size(); ++r) s += cost(static_cast<Eigen::Index>(r), row_to_col[r]);
    return s;
}

namespace detail {
// Kuhn's augmenting path on edges with cost <= limit.
inline bool augment(const Eigen::MatrixXd& cost, double limit, Eigen::Index row, std::vector<char>& seen,
                    std::vector<Eigen::Index>& col_owner) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (cost(row, j) > limit || seen[ju]) continue;
        seen[ju] = 1;
        if (col_owner[ju] < 0 || augment(cost, limit, col_owner[ju], seen, col_owner)) {
            col_owner[ju] = row;
            return true;
        }
    }
    return false;
}

inline bool has_perfect_matching(const Eigen::MatrixXd& cost, double limit) {
    std::vector<Eigen::Index> col_owner(static_cast<std::size_t>(cost.cols()), -1);
    for (Eigen::Index r = 0; r < cost.rows(); ++r) {
        std::vector<char> seen(static_cast<std::size_t>(cost.cols()), 0);
        if (!augment(cost, limit, r, seen, col_owner)) return false;
    }
    return true;
}
}  // namespace detail

/// min over permutations of the max assigned cost, square matrices only.
inline double solve_bottleneck(const Eigen::MatrixXd& cost) {
    if (cost.rows() != cost.cols()) throw DataError("bottleneck assignment needs a square matrix");
    if (cost.size() == 0) return 0.0;
    std::vector<double> levels(cost.data(), cost.data() + cost.size());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::size_t lo = 0, hi = levels.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (detail::has_perfect_matching(cost, levels[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return levels[lo];
}

}  // namespace gmcphd::assignment
