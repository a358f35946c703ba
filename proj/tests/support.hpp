#pragma once

#include <random>

#include "gmcphd/gaussian.hpp"

namespace testing_support {

using gmcphd::Matrix;
using gmcphd::Vector;

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = nd(rng);
    return v;
}

/// Random SPD matrix with eigenvalues bounded away from zero.
inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = nd(rng);
    return scale * (a * a.transpose() / static_cast<double>(n) + 0.5 * Matrix::Identity(n, n));
}

inline gmcphd::GaussianMixture random_mixture(std::mt19937_64& rng, std::size_t count, Eigen::Index n = 4,
                                              double spread = 10.0) {
    std::uniform_real_distribution<double> w(0.0, 1.0);
    gmcphd::GaussianMixture mix(n);
    for (std::size_t k = 0; k < count; ++k) {
        const double weight = k % 7 == 0 ? 1e-6 * w(rng) : w(rng);
        mix.push_back(gmcphd::GaussianComponent(weight, random_vector(rng, n, spread), random_spd(rng, n)));
    }
    return mix;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testing_support
