#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "gmcphd/gaussian.hpp"

namespace gmcphd {

namespace detail {

// Indices ordered by descending weight; ties keep the lower index first.
inline std::vector<std::size_t> by_descending_weight(const GaussianMixture& mixture) {
    std::vector<std::size_t> order(mixture.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return mixture[a].weight() > mixture[b].weight();
    });
    return order;
}

inline GaussianMixture rescaled_subset(const GaussianMixture& mixture,
                                       const std::vector<std::size_t>& keep,
                                       double target_mass) {
    double kept_mass = 0.0;
    for (std::size_t i : keep) kept_mass += mixture[i].weight();
    const double scale = kept_mass > 0.0 ? target_mass / kept_mass : 1.0;

    GaussianMixture out(mixture.dimension());
    out.reserve(keep.size());
    for (std::size_t i : keep) {
        out.push_back(scale == 1.0 ? mixture[i] : mixture[i].with_weight(mixture[i].weight() * scale));
    }
    return out;
}

}  // namespace detail

/// Drops components with weight < threshold and rescales the survivors so the
/// total mass is unchanged. The mass carries the expected object count, so the
/// survivors keep their relative proportions rather than being normalized to 1.
inline GaussianMixture prune(const GaussianMixture& mixture, double threshold) {
    if (!(threshold >= 0.0)) throw ConfigError("prune threshold must be >= 0");
    std::vector<std::size_t> keep;
    keep.reserve(mixture.size());
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        if (!(mixture[i].weight() < threshold)) keep.push_back(i);
    }
    if (keep.size() == mixture.size()) return mixture;
    return detail::rescaled_subset(mixture, keep, mixture.total_mass());
}

/// Moment-matched single Gaussian for a weighted group of components.
inline GaussianComponent moment_match(const GaussianMixture& mixture,
                                      const std::vector<std::size_t>& members) {
    const Eigen::Index n = mixture.dimension();
    double total = 0.0;
    for (std::size_t j : members) total += mixture[j].weight();

    // All-zero groups fall back to equal weights so the mean stays defined.
    auto rel = [&](std::size_t j) {
        return total > 0.0 ? mixture[j].weight() / total : 1.0 / static_cast<double>(members.size());
    };

    Vector mean = Vector::Zero(n);
    for (std::size_t j : members) mean += rel(j) * mixture[j].mean();

    Matrix cov = Matrix::Zero(n, n);
    for (std::size_t j : members) {
        const Vector d = mixture[j].mean() - mean;
        cov += rel(j) * (mixture[j].covariance() + d * d.transpose());
    }
    return GaussianComponent(total, std::move(mean), std::move(cov));
}

/// Greedy single-pass merge. The heaviest unprocessed component i absorbs
/// every unprocessed j with (x_i - x_j)^T P_i^{-1} (x_i - x_j) <= threshold;
/// the distance is anchored on P_i only. Absorbed components are not revisited
/// in the same pass, so clusters never chain through a merged mean.
inline GaussianMixture merge(const GaussianMixture& mixture, double threshold) {
    if (!(threshold > 0.0)) throw ConfigError("merge threshold must be > 0");
    const auto order = detail::by_descending_weight(mixture);
    std::vector<char> done(mixture.size(), 0);

    // Each output sits at its anchor's input position.
    std::vector<std::pair<std::size_t, GaussianComponent>> merged;
    std::vector<std::size_t> cluster;
    for (std::size_t i : order) {
        if (done[i]) continue;
        const GaussianComponent& anchor = mixture[i];
        cluster.clear();
        for (std::size_t j : order) {
            if (done[j]) continue;
            if (j == i || anchor.mahalanobis_squared(mixture[j].mean()) <= threshold) {
                cluster.push_back(j);
                done[j] = 1;
            }
        }
        merged.emplace_back(i, cluster.size() == 1 ? anchor : moment_match(mixture, cluster));
    }
    std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    GaussianMixture out(mixture.dimension());
    out.reserve(merged.size());
    for (auto& [index, component] : merged) out.push_back(std::move(component));
    return out;
}

/// Keeps the max_components heaviest components (original order preserved)
/// and rescales them to the input mass.
inline GaussianMixture cap_components(const GaussianMixture& mixture, std::size_t max_components) {
    if (max_components < 1) throw ConfigError("component cap must be >= 1");
    if (mixture.size() <= max_components) return mixture;
    auto order = detail::by_descending_weight(mixture);
    order.resize(max_components);
    std::sort(order.begin(), order.end());
    return detail::rescaled_subset(mixture, order, mixture.total_mass());
}

}  // namespace gmcphd
