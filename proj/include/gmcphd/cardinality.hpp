#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gmcphd/error.hpp"

namespace gmcphd {

/// Probability mass function over object counts 0..max_count(). Always
/// normalized; constructing from an unnormalized vector rescales it.
class CardinalityDistribution {
public:
    explicit CardinalityDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty()) throw DataError("cardinality distribution needs at least one entry");
        double total = 0.0;
        for (double p : probs_) {
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw NumericalError("cardinality probabilities must be finite and >= 0");
            }
            total += p;
        }
        if (!(total > 0.0)) throw NumericalError("cardinality distribution has zero total mass");
        for (double& p : probs_) p /= total;
    }

    static CardinalityDistribution point_mass(std::size_t n, std::size_t max_count) {
        if (n > max_count) throw ConfigError("point mass outside cardinality support");
        std::vector<double> p(max_count + 1, 0.0);
        p[n] = 1.0;
        return CardinalityDistribution(std::move(p));
    }

    /// Poisson(rate) restricted to 0..max_count and renormalized.
    static CardinalityDistribution truncated_poisson(double rate, std::size_t max_count) {
        if (!(rate >= 0.0) || !std::isfinite(rate)) throw ConfigError("poisson rate must be >= 0");
        std::vector<double> p(max_count + 1, 0.0);
        if (rate == 0.0) {
            p[0] = 1.0;
            return CardinalityDistribution(std::move(p));
        }
        const double log_rate = std::log(rate);
        for (std::size_t n = 0; n <= max_count; ++n) {
            const double k = static_cast<double>(n);
            p[n] = std::exp(k * log_rate - rate - std::lgamma(k + 1.0));
        }
        return CardinalityDistribution(std::move(p));
    }

    std::size_t max_count() const { return probs_.size() - 1; }
    std::span<const double> probs() const { return probs_; }
    double operator[](std::size_t n) const { return n < probs_.size() ? probs_[n] : 0.0; }

    double mean() const {
        double s = 0.0;
        for (std::size_t n = 0; n < probs_.size(); ++n) s += static_cast<double>(n) * probs_[n];
        return s;
    }

    /// argmax; ties resolve to the smaller count.
    std::size_t map_estimate() const {
        return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
    }

private:
    std::vector<double> probs_;
};

namespace cardinality_math {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log of n!/(n-m)!, -inf when n < m.
inline double log_permutation(std::size_t n, std::size_t m) {
    if (n < m) return neg_inf;
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(n - m) + 1.0);
}

inline double log_binomial(std::size_t n, std::size_t k) {
    if (k > n) return neg_inf;
    return log_permutation(n, k) - std::lgamma(static_cast<double>(k) + 1.0);
}

/// log(q^k) with 0^0 = 1.
inline double log_power(double q, std::size_t k) {
    if (k == 0) return 0.0;
    if (q <= 0.0) return neg_inf;
    return static_cast<double>(k) * std::log(q);
}

inline double log_sum_exp(std::span<const double> xs) {
    double hi = neg_inf;
    for (double x : xs) hi = std::max(hi, x);
    if (hi == neg_inf) return neg_inf;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - hi);
    return hi + std::log(s);
}

inline double safe_log(double x) { return x > 0.0 ? std::log(x) : neg_inf; }

}  // namespace cardinality_math

/// Cardinality prediction for independent survival with probability p_S and
/// an independent birth count:
///   p'(n) = sum_j p_B(n-j) sum_{l>=j} C(l,j) p_S^j (1-p_S)^(l-j) p(l)
/// truncated to the support of `prior` and renormalized.
inline CardinalityDistribution predict_cardinality(const CardinalityDistribution& prior,
                                                   double survival_probability,
                                                   const CardinalityDistribution& birth) {
    using namespace cardinality_math;
    if (!(survival_probability >= 0.0 && survival_probability <= 1.0)) {
        throw ConfigError("survival probability must lie in [0, 1]");
    }
    const std::size_t n_max = prior.max_count();

    // Survivor count distribution.
    std::vector<double> survivors(n_max + 1, 0.0);
    std::vector<double> terms;
    terms.reserve(n_max + 1);
    for (std::size_t j = 0; j <= n_max; ++j) {
        terms.clear();
        for (std::size_t l = j; l <= n_max; ++l) {
            if (prior[l] <= 0.0) continue;
            terms.push_back(log_binomial(l, j) + log_power(survival_probability, j) +
                            log_power(1.0 - survival_probability, l - j) + std::log(prior[l]));
        }
        survivors[j] = std::exp(log_sum_exp(terms));
    }

    std::vector<double> predicted(n_max + 1, 0.0);
    for (std::size_t n = 0; n <= n_max; ++n) {
        double s = 0.0;
        for (std::size_t j = 0; j <= n; ++j) s += birth[n - j] * survivors[j];
        predicted[n] = s;
    }
    return CardinalityDistribution(std::move(predicted));
}

/// Clutter-free cardinality update for m detections:
///   p+(n) ∝ p(n) n!/(n-m)! q_D^(n-m), zero for n < m.
inline CardinalityDistribution update_cardinality(const CardinalityDistribution& predicted,
                                                  std::size_t num_measurements,
                                                  double missed_detection_probability) {
    using namespace cardinality_math;
    const std::size_t n_max = predicted.max_count();
    const std::size_t m = num_measurements;
    if (m > n_max) {
        throw DataError(std::to_string(m) + " measurements exceed the cardinality support 0.." +
                        std::to_string(n_max));
    }
    std::vector<double> log_terms(n_max + 1, neg_inf);
    for (std::size_t n = m; n <= n_max; ++n) {
        log_terms[n] = safe_log(predicted[n]) + log_permutation(n, m) +
                       log_power(missed_detection_probability, n - m);
    }
    const double log_norm = log_sum_exp(log_terms);
    if (log_norm == neg_inf) {
        throw NumericalError("predicted cardinality has no mass at or above " + std::to_string(m) +
                             " objects");
    }
    std::vector<double> posterior(n_max + 1, 0.0);
    for (std::size_t n = m; n <= n_max; ++n) posterior[n] = std::exp(log_terms[n] - log_norm);
    return CardinalityDistribution(std::move(posterior));
}

/// Scale applied to every predicted component for the missed-detection term:
///   q_D * [sum_{n>=m+1} P^n_{m+1} p(n) q_D^(n-m-1)] / [mass * sum_{n>=m} P^n_m p(n) q_D^(n-m)]
inline double missed_detection_scale(const CardinalityDistribution& predicted,
                                     std::size_t num_measurements,
                                     double missed_detection_probability,
                                     double predicted_mass) {
    using namespace cardinality_math;
    const double q = missed_detection_probability;
    if (q <= 0.0 || !(predicted_mass > 0.0)) return 0.0;
    const std::size_t n_max = predicted.max_count();
    const std::size_t m = num_measurements;
    if (m > n_max) {
        throw DataError(std::to_string(m) + " measurements exceed the cardinality support 0.." +
                        std::to_string(n_max));
    }

    std::vector<double> num;
    std::vector<double> den;
    for (std::size_t n = m; n <= n_max; ++n) {
        const double lp = safe_log(predicted[n]);
        den.push_back(lp + log_permutation(n, m) + log_power(q, n - m));
        if (n >= m + 1) num.push_back(lp + log_permutation(n, m + 1) + log_power(q, n - m - 1));
    }
    const double log_den = log_sum_exp(den);
    if (log_den == neg_inf) {
        throw NumericalError("predicted cardinality has no mass at or above " + std::to_string(m) +
                             " objects");
    }
    const double log_num = log_sum_exp(num);
    if (log_num == neg_inf) return 0.0;
    return q * std::exp(log_num - log_den) / predicted_mass;
}

}  // namespace gmcphd
