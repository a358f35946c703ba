#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "gmcphd/error.hpp"

namespace gmcphd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// Weighted Gaussian term w * N(x; mean, covariance).
///
/// The covariance is symmetrized on construction and must admit a Cholesky
/// factorization; the factor is kept so density evaluation and Mahalanobis
/// distances do not refactor.
class GaussianComponent {
public:
    GaussianComponent(double weight, Vector mean, Matrix covariance)
        : weight_(weight), mean_(std::move(mean)), cov_(symmetrized(covariance)) {
        if (!(weight_ >= 0.0) || !std::isfinite(weight_)) {
            throw DataError("gaussian component weight must be finite and >= 0, got " +
                            std::to_string(weight_));
        }
        if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
            throw DataError("covariance is " + std::to_string(cov_.rows()) + "x" +
                            std::to_string(cov_.cols()) + " but mean has dimension " +
                            std::to_string(mean_.size()));
        }
        if (mean_.size() == 0) throw DataError("gaussian component of dimension 0");
        if (!mean_.allFinite() || !cov_.allFinite()) {
            throw NumericalError("gaussian component has non-finite mean or covariance");
        }
        chol_.compute(cov_);
        if (chol_.info() != Eigen::Success || !(chol_.matrixLLT().diagonal().array() > 0.0).all()) {
            throw NumericalError("gaussian component covariance is not positive definite");
        }
        log_det_ = 2.0 * chol_.matrixLLT().diagonal().array().log().sum();
    }

    double weight() const { return weight_; }
    const Vector& mean() const { return mean_; }
    const Matrix& covariance() const { return cov_; }
    Eigen::Index dimension() const { return mean_.size(); }
    double log_det_covariance() const { return log_det_; }
    const Eigen::LLT<Matrix>& cholesky() const { return chol_; }

    /// Same Gaussian, different weight. Skips refactorization.
    GaussianComponent with_weight(double w) const {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw DataError("gaussian component weight must be finite and >= 0");
        }
        GaussianComponent out = *this;
        out.weight_ = w;
        return out;
    }

    /// Same covariance at a new mean and weight. Skips refactorization.
    GaussianComponent relocated(Vector mean, double w) const {
        if (mean.size() != mean_.size() || !mean.allFinite()) {
            throw NumericalError("relocated mean must be finite and keep the dimension");
        }
        GaussianComponent out = with_weight(w);
        out.mean_ = std::move(mean);
        return out;
    }

    /// (x - mean)^T P^{-1} (x - mean)
    double mahalanobis_squared(const Vector& x) const {
        check_dimension(x);
        const Vector white = chol_.matrixL().solve(x - mean_);
        return white.squaredNorm();
    }

    /// log N(x; mean, covariance), weight excluded.
    double log_normal_density(const Vector& x) const {
        const double d = static_cast<double>(dimension());
        return -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det_ + mahalanobis_squared(x));
    }

private:
    void check_dimension(const Vector& x) const {
        if (x.size() != mean_.size()) {
            throw DataError("point has dimension " + std::to_string(x.size()) +
                            ", component has dimension " + std::to_string(mean_.size()));
        }
    }

    double weight_;
    Vector mean_;
    Matrix cov_;
    Eigen::LLT<Matrix> chol_;
    double log_det_ = 0.0;
};

/// weight * N(point; mean, covariance)
inline double evaluate_density(const GaussianComponent& component, const Vector& point) {
    return component.weight() * std::exp(component.log_normal_density(point));
}

/// Ordered list of weighted Gaussians sharing one dimension. When used as a
/// PHD the total mass is the expected number of objects.
class GaussianMixture {
public:
    explicit GaussianMixture(Eigen::Index dimension) : dimension_(dimension) {
        if (dimension_ <= 0) throw DataError("mixture dimension must be positive");
    }

    GaussianMixture(Eigen::Index dimension, std::vector<GaussianComponent> components)
        : GaussianMixture(dimension) {
        components_.reserve(components.size());
        for (auto& c : components) push_back(std::move(c));
    }

    void push_back(GaussianComponent component) {
        if (component.dimension() != dimension_) {
            throw DataError("component of dimension " + std::to_string(component.dimension()) +
                            " added to mixture of dimension " + std::to_string(dimension_));
        }
        components_.push_back(std::move(component));
    }

    void append(const GaussianMixture& other) {
        components_.reserve(components_.size() + other.size());
        for (const auto& c : other.components()) push_back(c);
    }

    void reserve(std::size_t n) { components_.reserve(n); }

    Eigen::Index dimension() const { return dimension_; }
    std::size_t size() const { return components_.size(); }
    bool empty() const { return components_.empty(); }
    const std::vector<GaussianComponent>& components() const { return components_; }
    const GaussianComponent& operator[](std::size_t i) const { return components_[i]; }

    auto begin() const { return components_.begin(); }
    auto end() const { return components_.end(); }

    double total_mass() const {
        double s = 0.0;
        for (const auto& c : components_) s += c.weight();
        return s;
    }

    double density(const Vector& point) const {
        double s = 0.0;
        for (const auto& c : components_) s += evaluate_density(c, point);
        return s;
    }

private:
    Eigen::Index dimension_;
    std::vector<GaussianComponent> components_;
};

}  // namespace gmcphd
