#pragma once

// Test-only oracles and generators.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tula/potentials.hpp"

namespace tula::testing {

/// Centered finite differences of U with step h_i = 1e-5 * max(1, |x_i|).
inline Vector finite_difference_gradient(const TargetModel& model, const Vector& x) {
    Vector g(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
        probe[i] = x[i] + h;
        const double up = model.potential(probe);
        probe[i] = x[i] - h;
        const double down = model.potential(probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

inline double relative_gradient_error(const TargetModel& model, const Vector& x) {
    const Vector exact = model.gradient(x);
    const Vector fd = finite_difference_gradient(model, x);
    return (fd - exact).norm() / std::max(exact.norm(), 1e-12);
}

inline std::vector<Vector> random_points(std::size_t d, std::size_t count, double scale, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Vector> out;
    for (std::size_t n = 0; n < count; ++n) {
        Vector x(static_cast<Eigen::Index>(d));
        for (auto& v : x) v = scale * normal(rng);
        out.push_back(std::move(x));
    }
    return out;
}

/// Points with log-uniform norms between 1e-2 and 1e3.
inline std::vector<Vector> multiscale_points(std::size_t d, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> exponent(-2.0, 3.0);
    std::vector<Vector> out;
    for (std::size_t n = 0; n < count; ++n) {
        Vector x(static_cast<Eigen::Index>(d));
        for (auto& v : x) v = normal(rng);
        out.push_back(std::pow(10.0, exponent(rng)) * x / x.norm());
    }
    return out;
}

inline Vector axis(std::size_t d, double r) {
    Vector x = Vector::Zero(static_cast<Eigen::Index>(d));
    x[0] = r;
    return x;
}

}  // namespace tula::testing
