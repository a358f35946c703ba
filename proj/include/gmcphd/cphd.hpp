#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmcphd/cardinality.hpp"
#include "gmcphd/gaussian.hpp"
#include "gmcphd/mixture_reduction.hpp"
#include "gmcphd/models.hpp"

namespace gmcphd {

/// Mixture management thresholds and the cardinality support.
struct FilterConfig {
    double prune_threshold = 1e-5;     // T
    double merge_threshold = 0.004;    // U
    std::size_t max_components = 200;  // J_max
    std::size_t max_cardinality = 64;  // support is 0..max_cardinality

    void validate() const {
        if (!(prune_threshold >= 0.0)) throw ConfigError("prune threshold must be >= 0");
        if (!(merge_threshold > 0.0)) throw ConfigError("merge threshold must be > 0");
        if (max_components < 1) throw ConfigError("max components must be >= 1");
        if (max_cardinality < 1) throw ConfigError("max cardinality must be >= 1");
    }
};

/// PHD intensity plus the full cardinality distribution.
struct FilterState {
    GaussianMixture intensity;
    CardinalityDistribution cardinality;
    long time_index = 0;

    double expected_cardinality() const { return cardinality.mean(); }

    /// |intensity mass - E[n]|; should stay small after each cycle.
    double consistency_gap() const { return std::abs(intensity.total_mass() - cardinality.mean()); }
};

struct Estimate {
    Vector state;
    double weight;
};

struct Extraction {
    std::vector<Estimate> estimates;
    std::size_t map_cardinality = 0;
    bool shortfall = false;  // fewer components than the MAP count
};

/// Broad single-object prior used when no initial intensity is supplied.
inline GaussianMixture default_prior(Eigen::Index dimension = 4) {
    GaussianMixture prior(dimension);
    prior.push_back(GaussianComponent(1.0, Vector::Zero(dimension), 100.0 * Matrix::Identity(dimension, dimension)));
    return prior;
}

/// Initial state: cardinality is a point mass on one object.
inline FilterState init(const FilterConfig& config, std::optional<GaussianMixture> prior = std::nullopt) {
    config.validate();
    GaussianMixture intensity = prior ? std::move(*prior) : default_prior();
    return FilterState{std::move(intensity), CardinalityDistribution::point_mass(1, config.max_cardinality), 0};
}

/// Prediction: survivors map (w, µ, P) -> (p_S w, F µ, Q + F P Fᵀ), births
/// are appended, and the cardinality is convolved with the birth count.
inline FilterState predict(const FilterState& state, const MotionModel& motion, const BirthModel& birth) {
    const Eigen::Index n = state.intensity.dimension();
    if (motion.state_dimension() != n || birth.intensity.dimension() != n) {
        throw DataError("motion/birth model dimension does not match the filter state");
    }
    const double p_s = motion.survival_probability;
    const Matrix& f = motion.transition;

    GaussianMixture predicted(n);
    predicted.reserve(state.intensity.size() + birth.intensity.size());
    predicted.append(birth.intensity);
    if (p_s > 0.0) {
        for (const auto& c : state.intensity) {
            predicted.push_back(GaussianComponent(p_s * c.weight(), f * c.mean(),
                                                  motion.process_noise + f * c.covariance() * f.transpose()));
        }
    }
    return FilterState{std::move(predicted),
                       predict_cardinality(state.cardinality, p_s, birth.cardinality),
                       state.time_index + 1};
}

namespace detail {

// Per-component quantities of the measurement update that do not depend on z.
struct InnovationTerms {
    Vector predicted_measurement;  // H µ
    Eigen::LLT<Matrix> innovation_chol;
    double log_normalizer;  // -0.5 (M log 2π + log det S)
    Matrix gain;            // K
    std::optional<GaussianComponent> posterior;  // P+ = (I - K H) P, weight/mean placeholders
};

inline InnovationTerms innovation_terms(const GaussianComponent& c, const MeasurementModel& model) {
    const Matrix& h = model.observation;
    const Matrix ph_t = c.covariance() * h.transpose();
    const Matrix s = symmetrized(model.measurement_noise + h * ph_t);

    InnovationTerms t;
    t.predicted_measurement = h * c.mean();
    t.innovation_chol.compute(s);
    const auto pivots = t.innovation_chol.matrixLLT().diagonal();
    if (t.innovation_chol.info() != Eigen::Success || !pivots.allFinite() ||
        (pivots.array().square() <= 1e-12).any()) {
        throw NumericalError("innovation covariance is numerically singular");
    }
    const double m = static_cast<double>(s.rows());
    t.log_normalizer = -0.5 * (m * std::log(2.0 * std::numbers::pi) + 2.0 * pivots.array().log().sum());
    // K = P Hᵀ S⁻¹ = (S⁻¹ H P)ᵀ
    t.gain = t.innovation_chol.solve(ph_t.transpose()).transpose();
    const Eigen::Index n = c.dimension();
    const Matrix p_post = (Matrix::Identity(n, n) - t.gain * h) * c.covariance();
    t.posterior.emplace(0.0, c.mean(), p_post);
    return t;
}

}  // namespace detail

/// Clutter-free measurement update without mixture reduction.
///
/// The intensity becomes a missed-detection copy of every predicted
/// component, scaled by missed_detection_scale(), plus one Kalman-updated
/// component per (measurement, component) pair with weight
/// p_D w_i q_i(z) / Σ_j w_j q_j(z). Cost is Θ(J·m) density evaluations.
inline FilterState correct(const FilterState& predicted, std::span<const Vector> measurements,
                           const MeasurementModel& model) {
    const GaussianMixture& prior = predicted.intensity;
    const Eigen::Index n = prior.dimension();
    if (model.state_dimension() != n) {
        throw DataError("measurement model state dimension does not match the filter state");
    }
    const std::size_t m = measurements.size();
    for (const auto& z : measurements) {
        if (z.size() != model.measurement_dimension()) {
            throw DataError("measurement has dimension " + std::to_string(z.size()) + ", expected " +
                            std::to_string(model.measurement_dimension()));
        }
    }
    const double p_d = model.detection_probability;
    const double q_d = model.missed_detection_probability();
    const double mass = prior.total_mass();

    CardinalityDistribution posterior_card = update_cardinality(predicted.cardinality, m, q_d);
    const double miss_scale = missed_detection_scale(predicted.cardinality, m, q_d, mass);

    const std::size_t j_count = prior.size();
    GaussianMixture updated(n);
    updated.reserve(j_count * (m + 1));
    if (miss_scale > 0.0) {
        for (const auto& c : prior) updated.push_back(c.with_weight(miss_scale * c.weight()));
    }

    if (m > 0 && j_count > 0 && p_d > 0.0) {
        std::vector<detail::InnovationTerms> terms;
        terms.reserve(j_count);
        std::vector<double> log_w(j_count);
        for (std::size_t i = 0; i < j_count; ++i) {
            terms.push_back(detail::innovation_terms(prior[i], model));
            log_w[i] = cardinality_math::safe_log(prior[i].weight());
        }

        std::vector<double> log_a(j_count);
        std::vector<Vector> innovations(j_count);
        for (const auto& z : measurements) {
            for (std::size_t i = 0; i < j_count; ++i) {
                innovations[i] = z - terms[i].predicted_measurement;
                const double maha = terms[i].innovation_chol.matrixL().solve(innovations[i]).squaredNorm();
                log_a[i] = log_w[i] + terms[i].log_normalizer - 0.5 * maha;
            }
            const double log_total = cardinality_math::log_sum_exp(log_a);
            if (!std::isfinite(log_total)) continue;  // zero-weight prior cannot explain z
            for (std::size_t i = 0; i < j_count; ++i) {
                const double w = p_d * std::exp(log_a[i] - log_total);
                updated.push_back(terms[i].posterior->relocated(
                    prior[i].mean() + terms[i].gain * innovations[i], w));
            }
        }
    }
    return FilterState{std::move(updated), std::move(posterior_card), predicted.time_index};
}

/// Prune, then merge, then cap.
inline FilterState reduce(FilterState state, const FilterConfig& config) {
    GaussianMixture mixture = prune(state.intensity, config.prune_threshold);
    mixture = merge(mixture, config.merge_threshold);
    mixture = cap_components(mixture, config.max_components);
    return FilterState{std::move(mixture), std::move(state.cardinality), state.time_index};
}

/// Full update step: correct() followed by reduce().
inline FilterState update(const FilterState& predicted, std::span<const Vector> measurements,
                          const MeasurementModel& model, const FilterConfig& config) {
    if (measurements.size() > config.max_cardinality) {
        throw DataError(std::to_string(measurements.size()) +
                        " measurements exceed the cardinality support; raise max_cardinality");
    }
    return reduce(correct(predicted, measurements, model), config);
}

/// MAP object count, reported as the means of that many heaviest components.
inline Extraction extract(const FilterState& state) {
    Extraction out;
    out.map_cardinality = state.cardinality.map_estimate();
    const auto order = detail::by_descending_weight(state.intensity);
    const std::size_t take = std::min(out.map_cardinality, order.size());
    out.shortfall = take < out.map_cardinality;
    out.estimates.reserve(take);
    for (std::size_t k = 0; k < take; ++k) {
        const auto& c = state.intensity[order[k]];
        out.estimates.push_back(Estimate{c.mean(), c.weight()});
    }
    return out;
}

/// Models and configuration bundled with a running state.
class CphdFilter {
public:
    CphdFilter(MotionModel motion, MeasurementModel measurement, BirthModel birth, FilterConfig config,
               std::optional<GaussianMixture> prior = std::nullopt)
        : motion_(std::move(motion)),
          measurement_(std::move(measurement)),
          birth_(std::move(birth)),
          config_(config),
          state_(init(config_, std::move(prior))) {}

    /// predict -> update -> extract for one frame.
    Extraction step(std::span<const Vector> measurements) {
        state_ = update(predict(state_, motion_, birth_), measurements, measurement_, config_);
        return extract(state_);
    }

    const FilterState& state() const { return state_; }
    const FilterConfig& config() const { return config_; }
    const MotionModel& motion() const { return motion_; }
    const MeasurementModel& measurement() const { return measurement_; }
    const BirthModel& birth() const { return birth_; }

private:
    MotionModel motion_;
    MeasurementModel measurement_;
    BirthModel birth_;
    FilterConfig config_;
    FilterState state_;
};

}  // namespace gmcphd
