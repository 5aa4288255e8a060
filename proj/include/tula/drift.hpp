#pragma once

// Step-size indexed drift families G_gamma used in place of grad U by the
// Euler chain  X' = X - gamma G_gamma(X) + sqrt(2 gamma) Z,  and numerical
// checks of the two conditions the tamed chain relies on: closeness of
// G_gamma to grad U, and dissipativity at infinity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tula/errors.hpp"
#include "tula/potentials.hpp"

namespace tula {

enum class DriftKind { raw, tamed_global, tamed_coordinatewise, partial_double_well };

inline std::string_view to_string(DriftKind kind) {
    switch (kind) {
        case DriftKind::raw: return "raw";
        case DriftKind::tamed_global: return "tamed_global";
        case DriftKind::tamed_coordinatewise: return "tamed_coordinatewise";
        case DriftKind::partial_double_well: return "partial_double_well";
    }
    return "unknown";
}

inline DriftKind drift_kind_from_string(std::string_view name) {
    for (auto k : {DriftKind::raw, DriftKind::tamed_global, DriftKind::tamed_coordinatewise,
                   DriftKind::partial_double_well}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidConfiguration("unknown drift kind '" + std::string(name) + "'");
}

/// A drift family bound to a model. The model must outlive this object.
class DriftSpec {
public:
    DriftSpec(DriftKind kind, const TargetModel& model) : kind_(kind), model_(&model) {
        if (kind == DriftKind::partial_double_well && model.family() != ModelFamily::double_well) {
            throw InvalidConfiguration("partial_double_well drift requires the double well model, got '" +
                                       model.name() + "'");
        }
    }

    [[nodiscard]] DriftKind kind() const { return kind_; }
    [[nodiscard]] const TargetModel& model() const { return *model_; }

    /// Writes G_gamma(x) into `out`; `grad` is scratch space for grad U(x).
    void evaluate_into(const Vector& x, double gamma, Vector& grad, Vector& out) const {
        switch (kind_) {
            case DriftKind::raw:
                model_->gradient_into(x, out);
                return;
            case DriftKind::tamed_global:
                model_->gradient_into(x, grad);
                out = grad / (1.0 + gamma * grad.norm());
                return;
            case DriftKind::tamed_coordinatewise:
                model_->gradient_into(x, grad);
                out = grad.array() / (1.0 + gamma * grad.array().abs());
                return;
            case DriftKind::partial_double_well: {
                if (static_cast<std::size_t>(x.size()) != model_->dimension()) {
                    throw InvalidArgument("drift evaluated at a vector of the wrong dimension");
                }
                // Only the cubic part |x|^2 x is tamed; the linear part -x is kept as is.
                const double r2 = x.squaredNorm();
                out = (r2 / (1.0 + gamma * r2) - 1.0) * x;
                return;
            }
        }
    }

private:
    DriftKind kind_;
    const TargetModel* model_;
};

inline Vector drift_eval(const DriftSpec& spec, const Vector& x, double gamma) {
    if (!(gamma > 0.0)) throw InvalidArgument("step size must be positive");
    Vector grad(x.size());
    Vector out(x.size());
    spec.evaluate_into(x, gamma, grad, out);
    return out;
}

/// max over points of |G_gamma(x) - grad U(x)| / (gamma |grad U(x)|^2). Points
/// with grad U(x) = 0 carry no information and are skipped.
inline double check_closeness(const DriftSpec& spec, double gamma, const std::vector<Vector>& points) {
    if (points.empty()) throw InvalidArgument("check_closeness needs at least one point");
    if (!(gamma > 0.0)) throw InvalidArgument("step size must be positive");
    double worst = 0.0;
    std::size_t used = 0;
    for (const auto& x : points) {
        const Vector grad = spec.model().gradient(x);
        const double g2 = grad.squaredNorm();
        if (g2 == 0.0) continue;
        const Vector drift = drift_eval(spec, x, gamma);
        worst = std::max(worst, (drift - grad).norm() / (gamma * g2));
        ++used;
    }
    if (used == 0) throw InvalidArgument("check_closeness: every point is a critical point of U");
    return worst;
}

/// max over points of gamma |G_gamma(x)|.
inline double max_scaled_drift_norm(const DriftSpec& spec, double gamma,
                                    const std::vector<Vector>& points) {
    double worst = 0.0;
    for (const auto& x : points) worst = std::max(worst, gamma * drift_eval(spec, x, gamma).norm());
    return worst;
}

/// <x/|x|, G(x)> - gamma/(2|x|) |G(x)|^2, the quantity whose liminf must be positive.
inline double dissipativity_quantity(const DriftSpec& spec, double gamma, const Vector& x) {
    const double r = x.norm();
    const Vector g = drift_eval(spec, x, gamma);
    return x.dot(g) / r - gamma / (2.0 * r) * g.squaredNorm();
}

enum class Verdict { satisfied, violated, inconclusive };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::satisfied: return "satisfied";
        case Verdict::violated: return "violated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

/// Grid evaluation of the dissipativity quantity. The verdict is a statement
/// about the sampled grid only; a liminf condition cannot be decided numerically.
struct AssumptionReport {
    std::string quantity = "dissipativity";
    std::string drift;
    double gamma = 0.0;
    std::vector<double> radii;
    std::vector<double> minimum;  ///< per radius, over sampled directions
    double max_scaled_drift_norm = 0.0;  ///< max gamma |G(x)| over every sampled point
    Verdict verdict = Verdict::inconclusive;
};

inline const std::vector<double>& default_radius_grid() {
    static const std::vector<double> grid{1.0, 10.0, 100.0, 1000.0};
    return grid;
}

inline constexpr int kDefaultDirectionsPerRadius = 64;

inline Vector random_direction(std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vector u(static_cast<Eigen::Index>(d));
    do {
        for (auto& v : u) v = normal(rng);
    } while (u.squaredNorm() == 0.0);
    return u / u.norm();
}

inline AssumptionReport check_dissipativity(const DriftSpec& spec, double gamma,
                                            const std::vector<double>& radii,
                                            int directions_per_radius, std::uint64_t seed) {
    if (radii.empty()) throw InvalidArgument("check_dissipativity needs a non-empty radius grid");
    if (directions_per_radius < 1) throw InvalidArgument("directions_per_radius must be >= 1");
    if (!std::is_sorted(radii.begin(), radii.end()) || !(radii.front() > 0.0)) {
        throw InvalidArgument("radii must be positive and increasing");
    }
    AssumptionReport report;
    report.drift = std::string(to_string(spec.kind()));
    report.gamma = gamma;
    report.radii = radii;
    std::mt19937_64 rng(seed);
    const auto d = spec.model().dimension();
    for (double r : radii) {
        double lowest = std::numeric_limits<double>::infinity();
        for (int n = 0; n < directions_per_radius; ++n) {
            const Vector x = r * random_direction(d, rng);
            lowest = std::min(lowest, dissipativity_quantity(spec, gamma, x));
            report.max_scaled_drift_norm =
                std::max(report.max_scaled_drift_norm, gamma * drift_eval(spec, x, gamma).norm());
        }
        report.minimum.push_back(lowest);
    }
    const auto n = report.minimum.size();
    const bool tail_positive =
        report.minimum[n - 1] > 0.0 && (n < 2 || report.minimum[n - 2] > 0.0);
    if (tail_positive) {
        report.verdict = Verdict::satisfied;
    } else if (report.minimum[n - 1] <= 0.0) {
        report.verdict = Verdict::violated;
    } else {
        report.verdict = Verdict::inconclusive;
    }
    return report;
}

}  // namespace tula
