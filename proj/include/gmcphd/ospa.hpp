#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gmcphd/assignment.hpp"
#include "gmcphd/gaussian.hpp"

namespace gmcphd {

/// Cutoff c > 0 and order ℓ in [1, ∞].
struct OspaParams {
    double cutoff = 30.0;
    double order = 1.0;

    void validate() const {
        if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw ConfigError("OSPA cutoff must be finite and > 0");
        if (!(order >= 1.0)) throw ConfigError("OSPA order must be >= 1");
    }
    bool infinite_order() const { return std::isinf(order); }
};

namespace detail {

inline bool lexicographically_less(std::span<const Vector> a, std::span<const Vector> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const Vector& u, const Vector& v) {
        return std::lexicographical_compare(u.begin(), u.end(), v.begin(), v.end());
    });
}

}  // namespace detail

/// For finite ℓ: total^ℓ = localization^ℓ + cardinality^ℓ. For ℓ = ∞ the
/// split is (bottleneck, 0) when sizes agree and (0, c) otherwise.
struct OspaResult {
    double total = 0.0;
    double localization = 0.0;
    double cardinality = 0.0;
};

/// OSPA distance between two finite point sets, optimal assignment solved
/// exactly on the cutoff distance matrix.
inline OspaResult ospa(std::span<const Vector> x_set, std::span<const Vector> y_set, const OspaParams& params) {
    params.validate();
    // Smaller set as rows; equal sizes are put in a canonical order so that
    // ospa(X, Y) and ospa(Y, X) perform identical arithmetic.
    if (x_set.size() > y_set.size() || (x_set.size() == y_set.size() && detail::lexicographically_less(y_set, x_set))) {
        std::swap(x_set, y_set);
    }
    const std::size_t m = x_set.size();
    const std::size_t n = y_set.size();
    if (n == 0) return {};

    const Eigen::Index dim = y_set[0].size();
    for (const auto* set : {&x_set, &y_set}) {
        for (const auto& v : *set) {
            if (v.size() != dim) {
                throw DataError("OSPA points must share one dimension (" + std::to_string(v.size()) +
                                " vs " + std::to_string(dim) + ")");
            }
        }
    }

    const double c = params.cutoff;
    Eigen::MatrixXd dist(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::min(c, (x_set[i] - y_set[j]).norm());
        }
    }

    if (params.infinite_order()) {
        if (m != n) return OspaResult{c, 0.0, c};
        const double b = assignment::solve_bottleneck(dist);
        return OspaResult{b, b, 0.0};
    }

    const double ell = params.order;
    const Eigen::MatrixXd cost = ell == 1.0 ? dist : Eigen::MatrixXd(dist.array().pow(ell));
    const double matched = m == 0 ? 0.0 : assignment::assignment_cost(cost, assignment::solve_min_cost(cost));
    const double nn = static_cast<double>(n);
    const double card_term = std::pow(c, ell) * static_cast<double>(n - m);

    OspaResult r;
    if (ell == 1.0) {
        r.localization = matched / nn;
        r.cardinality = card_term / nn;
        r.total = (matched + card_term) / nn;
    } else {
        r.localization = std::pow(matched / nn, 1.0 / ell);
        r.cardinality = std::pow(card_term / nn, 1.0 / ell);
        r.total = std::pow((matched + card_term) / nn, 1.0 / ell);
    }
    r.total = std::min(r.total, c);
    return r;
}

struct OspaSeries {
    std::vector<OspaResult> per_step;
    OspaResult mean;
    OspaResult max;
};

/// Per-step OSPA over aligned frames of position vectors, with mean/max of
/// each column.
inline OspaSeries ospa_series(std::span<const std::vector<Vector>> truth,
                              std::span<const std::vector<Vector>> estimates, const OspaParams& params) {
    if (truth.size() != estimates.size()) {
        throw DataError("OSPA series needs matching time ranges (" + std::to_string(truth.size()) + " vs " +
                        std::to_string(estimates.size()) + " steps)");
    }
    OspaSeries s;
    s.per_step.reserve(truth.size());
    for (std::size_t t = 0; t < truth.size(); ++t) s.per_step.push_back(ospa(truth[t], estimates[t], params));
    if (s.per_step.empty()) return s;
    for (const auto& r : s.per_step) {
        s.mean.total += r.total;
        s.mean.localization += r.localization;
        s.mean.cardinality += r.cardinality;
        s.max.total = std::max(s.max.total, r.total);
        s.max.localization = std::max(s.max.localization, r.localization);
        s.max.cardinality = std::max(s.max.cardinality, r.cardinality);
    }
    const double k = static_cast<double>(s.per_step.size());
    s.mean.total /= k;
    s.mean.localization /= k;
    s.mean.cardinality /= k;
    return s;
}

/// (p_x, p_y) of a [p_x, v_x, p_y, v_y] state.
inline Vector position_of(const Vector& state) {
    Vector p(2);
    p << state(0), state(2);
    return p;
}

}  // namespace gmcphd
