#pragma once

#include <array>
#include <cmath>
#include <string>

#include "gmcphd/cardinality.hpp"
#include "gmcphd/gaussian.hpp"

namespace gmcphd {

namespace detail {
inline void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

inline void require_square(const Matrix& m, Eigen::Index n, const char* name) {
    if (m.rows() != n || m.cols() != n) {
        throw ConfigError(std::string(name) + " must be " + std::to_string(n) + "x" + std::to_string(n));
    }
}
}  // namespace detail

/// x_t = F x_{t-1} + w, w ~ N(0, Q), with state-independent survival p_S.
struct MotionModel {
    Matrix transition;       // F
    Matrix process_noise;    // Q
    double survival_probability;

    MotionModel(Matrix f, Matrix q, double p_s)
        : transition(std::move(f)), process_noise(symmetrized(q)), survival_probability(p_s) {
        detail::require_probability(p_s, "survival probability");
        detail::require_square(transition, transition.rows(), "transition matrix");
        detail::require_square(process_noise, transition.rows(), "process noise");
        Eigen::SelfAdjointEigenSolver<Matrix> eig(process_noise, Eigen::EigenvaluesOnly);
        const double scale = std::max(1.0, process_noise.cwiseAbs().maxCoeff());
        if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
            throw ConfigError("process noise covariance must be positive semidefinite");
        }
    }

    Eigen::Index state_dimension() const { return transition.rows(); }
};

/// z = H x + v, v ~ N(0, R), with state-independent detection p_D.
struct MeasurementModel {
    Matrix observation;        // H
    Matrix measurement_noise;  // R
    double detection_probability;

    MeasurementModel(Matrix h, Matrix r, double p_d)
        : observation(std::move(h)), measurement_noise(symmetrized(r)), detection_probability(p_d) {
        detail::require_probability(p_d, "detection probability");
        detail::require_square(measurement_noise, observation.rows(), "measurement noise");
        Eigen::LLT<Matrix> chol(measurement_noise);
        if (chol.info() != Eigen::Success) {
            throw ConfigError("measurement noise covariance must be positive definite");
        }
    }

    double missed_detection_probability() const { return 1.0 - detection_probability; }
    Eigen::Index measurement_dimension() const { return observation.rows(); }
    Eigen::Index state_dimension() const { return observation.cols(); }
};

/// Birth RFS: Gaussian-mixture intensity plus the birth count distribution.
struct BirthModel {
    GaussianMixture intensity;
    CardinalityDistribution cardinality;

    /// Poisson birth process: count pmf is Poisson with mean equal to the
    /// intensity mass, truncated at max_count.
    static BirthModel poisson(GaussianMixture intensity, std::size_t max_count) {
        const double rate = intensity.total_mass();
        return BirthModel{std::move(intensity), CardinalityDistribution::truncated_poisson(rate, max_count)};
    }

    static BirthModel none(Eigen::Index dimension, std::size_t max_count) {
        return BirthModel{GaussianMixture(dimension), CardinalityDistribution::point_mass(0, max_count)};
    }
};

/// Discretized constant-velocity parameters. Units: seconds, µm/s², µm.
struct CVModelParams {
    double sampling_interval = 1.0;  // Δ
    double sigma_x = 2.33;           // acceleration noise sd, x
    double sigma_y = 2.33;           // acceleration noise sd, y
    double sigma_obs = 0.2;          // measurement noise sd

    void validate() const {
        if (!(sampling_interval > 0.0) || !(sigma_x > 0.0) || !(sigma_y > 0.0) || !(sigma_obs > 0.0)) {
            throw ConfigError("sampling interval and noise standard deviations must be > 0");
        }
    }
};

/// Default hyperparameters of the organelle tracking setup.
namespace defaults {
inline constexpr double survival_probability = 0.99;
inline constexpr double detection_probability = 0.98;
inline constexpr double birth_weight = 0.25;
inline constexpr double birth_covariance_scale = 10.0;
}  // namespace defaults

/// Noise gain G mapping per-axis acceleration to the state [p_x, v_x, p_y, v_y].
inline Matrix cv_noise_gain(double dt) {
    Matrix g = Matrix::Zero(4, 2);
    g(0, 0) = 0.5 * dt * dt;
    g(1, 0) = dt;
    g(2, 1) = 0.5 * dt * dt;
    g(3, 1) = dt;
    return g;
}

inline Matrix cv_transition(double dt) {
    Matrix f = Matrix::Identity(4, 4);
    f(0, 1) = dt;
    f(2, 3) = dt;
    return f;
}

/// Constant-velocity motion with state ordering [p_x, v_x, p_y, v_y] and
/// Q = G diag(σx², σy²) Gᵀ.
inline MotionModel build_cv_motion(const CVModelParams& params, double survival_probability) {
    params.validate();
    const double dt = params.sampling_interval;
    const Matrix g = cv_noise_gain(dt);
    Eigen::Vector2d var(params.sigma_x * params.sigma_x, params.sigma_y * params.sigma_y);
    const Matrix q = g * var.asDiagonal() * g.transpose();
    return MotionModel(cv_transition(dt), q, survival_probability);
}

/// Position-only measurement: H picks (p_x, p_y), R = σ_o² I₂.
inline MeasurementModel build_position_measurement(const CVModelParams& params, double detection_probability) {
    params.validate();
    Matrix h = Matrix::Zero(2, 4);
    h(0, 0) = 1.0;
    h(1, 2) = 1.0;
    const Matrix r = params.sigma_obs * params.sigma_obs * Matrix::Identity(2, 2);
    return MeasurementModel(std::move(h), r, detection_probability);
}

/// Four equally weighted birth sites (one per quadrant), covariance 10·I₄,
/// Poisson count with rate Σ w_b = 1.
inline BirthModel build_quadrant_birth_model(std::size_t truncation) {
    if (truncation < 1) throw ConfigError("birth cardinality truncation must be >= 1");
    const Matrix cov = defaults::birth_covariance_scale * Matrix::Identity(4, 4);
    GaussianMixture intensity(4);
    constexpr std::array<std::array<double, 2>, 4> sites{{{3.0, 5.0}, {4.0, -6.0}, {-3.0, -2.0}, {-4.0, 8.0}}};
    for (const auto& [px, py] : sites) {
        Vector mean(4);
        mean << px, 0.0, py, 0.0;
        intensity.push_back(GaussianComponent(defaults::birth_weight, std::move(mean), cov));
    }
    return BirthModel::poisson(std::move(intensity), truncation);
}

}  // namespace gmcphd
