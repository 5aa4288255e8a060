#pragma once

// Target densities pi ~ exp(-U) with analytic gradients.
//
// All models are immutable after construction and may be shared across
// concurrently running chains. Coordinates are 0-based.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "tula/errors.hpp"
#include "tula/oracles.hpp"

namespace tula {

using Vector = Eigen::VectorXd;

struct ReferenceMoment {
    std::size_t coordinate = 0;
    int order = 1;
    double value = 0.0;
    double tolerance = 0.0;  ///< absolute accuracy of `value`; 0 for closed forms
};

/// Site (i, j, k) of a periodic p x p x p lattice, flattened row-major.
struct LatticeIndex {
    int i = 0;
    int j = 0;
    int k = 0;

    [[nodiscard]] std::size_t flat(int side) const {
        return (static_cast<std::size_t>(i) * side + j) * side + k;
    }

    static LatticeIndex from_flat(std::size_t index, int side) {
        const auto p = static_cast<std::size_t>(side);
        return {static_cast<int>(index / (p * p)), static_cast<int>((index / p) % p),
                static_cast<int>(index % p)};
    }

    /// Neighbor along `axis` (0, 1, 2) at offset `delta`, wrapping modulo the side.
    [[nodiscard]] LatticeIndex shifted(int axis, int delta, int side) const {
        auto wrap = [side](int v) { return ((v % side) + side) % side; };
        LatticeIndex out = *this;
        if (axis == 0) out.i = wrap(i + delta);
        if (axis == 1) out.j = wrap(j + delta);
        if (axis == 2) out.k = wrap(k + delta);
        return out;
    }
};

/// U(x) = 1/2 sum x_i^2 / sigma_i^2.
struct GaussianPotential {
    Vector variances;
    Vector precisions;

    [[nodiscard]] double value(const Vector& x) const {
        return 0.5 * x.cwiseProduct(x).dot(precisions);
    }
    void gradient(const Vector& x, Vector& out) const { out = x.cwiseProduct(precisions); }
};

/// U(x) = |x|^4 / 4 - |x|^2 / 2, grad U(x) = (|x|^2 - 1) x.
struct DoubleWellPotential {
    [[nodiscard]] double value(const Vector& x) const {
        const double r2 = x.squaredNorm();
        return 0.25 * r2 * r2 - 0.5 * r2;
    }
    void gradient(const Vector& x, Vector& out) const { out = (x.squaredNorm() - 1.0) * x; }
};

/// Lattice phi^4 (Ginzburg-Landau) model on a periodic cube of side p, d = p^3.
struct GinzburgLandauPotential {
    int side = 10;
    double tau = 2.0;
    double alpha = 0.1;
    double lambda = 0.5;
    // Per site: forward neighbors (+i, +j, +k) then backward neighbors (-i, -j, -k).
    std::vector<std::array<std::size_t, 6>> neighbors;

    GinzburgLandauPotential() = default;
    GinzburgLandauPotential(int p, double tau_, double alpha_, double lambda_)
        : side(p), tau(tau_), alpha(alpha_), lambda(lambda_) {
        const auto d = static_cast<std::size_t>(p) * p * p;
        neighbors.resize(d);
        for (std::size_t s = 0; s < d; ++s) {
            const auto site = LatticeIndex::from_flat(s, p);
            for (int axis = 0; axis < 3; ++axis) {
                neighbors[s][axis] = site.shifted(axis, +1, p).flat(p);
                neighbors[s][3 + axis] = site.shifted(axis, -1, p).flat(p);
            }
        }
    }

    [[nodiscard]] double value(const Vector& x) const {
        double total = 0.0;
        for (std::size_t s = 0; s < neighbors.size(); ++s) {
            const double v = x[s];
            double grad_sq = 0.0;
            for (int axis = 0; axis < 3; ++axis) {
                const double diff = x[neighbors[s][axis]] - v;
                grad_sq += diff * diff;
            }
            total += 0.5 * (1.0 - tau) * v * v + 0.5 * tau * alpha * grad_sq +
                     0.25 * tau * lambda * v * v * v * v;
        }
        return total;
    }

    void gradient(const Vector& x, Vector& out) const {
        out.resize(x.size());
        for (std::size_t s = 0; s < neighbors.size(); ++s) {
            const double v = x[s];
            double around = 0.0;
            for (std::size_t n : neighbors[s]) around += x[n];
            out[s] = tau * alpha * (6.0 * v - around) + (1.0 - tau) * v + tau * lambda * v * v * v;
        }
    }
};

enum class ModelFamily { gaussian, double_well, ginzburg_landau };

class TargetModel {
public:
    using Impl = std::variant<GaussianPotential, DoubleWellPotential, GinzburgLandauPotential>;

    TargetModel(std::string name, std::size_t dimension, Impl impl,
                std::vector<ReferenceMoment> references)
        : name_(std::move(name)),
          dimension_(dimension),
          impl_(std::move(impl)),
          references_(std::move(references)) {
        std::sort(references_.begin(), references_.end(), [](const auto& a, const auto& b) {
            return std::pair(a.coordinate, a.order) < std::pair(b.coordinate, b.order);
        });
    }

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] std::size_t dimension() const { return dimension_; }
    [[nodiscard]] const Impl& impl() const { return impl_; }

    [[nodiscard]] ModelFamily family() const {
        return std::visit(
            [](const auto& m) {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, GaussianPotential>) return ModelFamily::gaussian;
                else if constexpr (std::is_same_v<M, DoubleWellPotential>) return ModelFamily::double_well;
                else return ModelFamily::ginzburg_landau;
            },
            impl_);
    }

    [[nodiscard]] double potential(const Vector& x) const {
        require_dimension(x);
        return std::visit([&](const auto& m) { return m.value(x); }, impl_);
    }

    void gradient_into(const Vector& x, Vector& out) const {
        require_dimension(x);
        std::visit([&](const auto& m) { m.gradient(x, out); }, impl_);
    }

    [[nodiscard]] Vector gradient(const Vector& x) const {
        Vector out(x.size());
        gradient_into(x, out);
        return out;
    }

    [[nodiscard]] const std::vector<ReferenceMoment>& reference_moments() const {
        return references_;
    }

    [[nodiscard]] std::optional<ReferenceMoment> reference_moment(std::size_t coordinate,
                                                                  int order) const {
        auto it = std::lower_bound(references_.begin(), references_.end(),
                                   std::pair(coordinate, order), [](const auto& r, const auto& key) {
                                       return std::pair(r.coordinate, r.order) < key;
                                   });
        if (it == references_.end() || it->coordinate != coordinate || it->order != order) {
            return std::nullopt;
        }
        return *it;
    }

private:
    void require_dimension(const Vector& x) const {
        if (static_cast<std::size_t>(x.size()) != dimension_) {
            throw InvalidArgument("model '" + name_ + "' has dimension " +
                                  std::to_string(dimension_) + ", got a vector of length " +
                                  std::to_string(x.size()));
        }
    }

    std::string name_;
    std::size_t dimension_;
    Impl impl_;
    std::vector<ReferenceMoment> references_;
};

inline double eval_potential(const TargetModel& model, const Vector& x) {
    return model.potential(x);
}

inline Vector eval_gradient(const TargetModel& model, const Vector& x) {
    return model.gradient(x);
}

inline TargetModel make_gaussian(const std::vector<double>& variances,
                                 std::string name = "gaussian") {
    if (variances.empty()) throw InvalidParameter("gaussian needs at least one variance");
    const auto d = variances.size();
    GaussianPotential g;
    g.variances.resize(static_cast<Eigen::Index>(d));
    g.precisions.resize(static_cast<Eigen::Index>(d));
    std::vector<ReferenceMoment> refs;
    refs.reserve(2 * d);
    for (std::size_t i = 0; i < d; ++i) {
        const double s2 = variances[i];
        if (!(s2 > 0.0) || !std::isfinite(s2)) {
            throw InvalidParameter("gaussian variance at index " + std::to_string(i) +
                                   " must be positive, got " + std::to_string(s2));
        }
        g.variances[static_cast<Eigen::Index>(i)] = s2;
        g.precisions[static_cast<Eigen::Index>(i)] = 1.0 / s2;
        refs.push_back({i, 1, 0.0, 0.0});
        refs.push_back({i, 2, s2, 0.0});
    }
    return TargetModel(std::move(name), d, std::move(g), std::move(refs));
}

/// Covariance diag(1, 2, ..., d).
inline TargetModel make_linear_gaussian(std::size_t d) {
    std::vector<double> v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = static_cast<double>(i + 1);
    return make_gaussian(v, "gaussian");
}

/// Covariance diag(1e-5, 1, ..., 1).
inline TargetModel make_ill_conditioned_gaussian(std::size_t d) {
    std::vector<double> v(d, 1.0);
    if (!v.empty()) v[0] = 1e-5;
    return make_gaussian(v, "ill_conditioned_gaussian");
}

inline TargetModel make_double_well(int d) {
    if (d < 1) throw InvalidParameter("double well dimension must be >= 1");
    const double second = reference_moment_double_well(d);
    std::vector<ReferenceMoment> refs;
    refs.reserve(2 * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
        refs.push_back({i, 1, 0.0, 0.0});
        refs.push_back({i, 2, second, 1e-4});
    }
    return TargetModel("double_well", static_cast<std::size_t>(d), DoubleWellPotential{},
                       std::move(refs));
}

struct GinzburgLandauParams {
    int side = 10;
    double tau = 2.0;
    double alpha = 0.1;
    double lambda = 0.5;
};

/// Only first moments carry a reference (0, by the x -> -x symmetry of U).
inline TargetModel make_ginzburg_landau(const GinzburgLandauParams& params) {
    if (params.side < 2) throw InvalidParameter("ginzburg_landau lattice side must be >= 2");
    if (!(params.tau > 0.0) || !(params.alpha > 0.0) || !(params.lambda > 0.0)) {
        throw InvalidParameter("ginzburg_landau tau, alpha, lambda must be positive");
    }
    const auto d = static_cast<std::size_t>(params.side) * params.side * params.side;
    std::vector<ReferenceMoment> refs;
    refs.reserve(d);
    for (std::size_t i = 0; i < d; ++i) refs.push_back({i, 1, 0.0, 0.0});
    return TargetModel(
        "ginzburg_landau", d,
        GinzburgLandauPotential(params.side, params.tau, params.alpha, params.lambda),
        std::move(refs));
}

}  // namespace tula
