#pragma once

// One-step transition kernels and the chain runner.
//
// Unadjusted:  X' = X - gamma G(X) + sqrt(2 gamma) Z
// Langevin MH: the same move used as a proposal, corrected by Metropolis-Hastings
// Random walk: Y = X + sqrt(2 gamma) Z, corrected by Metropolis-Hastings
//
// All randomness for a chain comes from one generator, drawn in a fixed order per
// step: the d Gaussian components first, then (for MH kernels) one uniform.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tula/drift.hpp"
#include "tula/errors.hpp"
#include "tula/potentials.hpp"
#include "tula/stats.hpp"

namespace tula {

enum class Adjustment { none, metropolis_langevin, metropolis_rw };

inline std::string_view to_string(Adjustment a) {
    switch (a) {
        case Adjustment::none: return "none";
        case Adjustment::metropolis_langevin: return "metropolis_langevin";
        case Adjustment::metropolis_rw: return "metropolis_rw";
    }
    return "unknown";
}

inline constexpr double kDefaultDivergenceThreshold = 1e5;
inline constexpr double kDefaultAcceptanceFloor = 0.05;

struct KernelConfig {
    DriftSpec drift;
    double gamma = 0.0;
    Adjustment adjustment = Adjustment::none;
    double divergence_threshold = kDefaultDivergenceThreshold;
    double acceptance_floor = kDefaultAcceptanceFloor;

    void validate() const {
        if (!(gamma > 0.0) || !std::isfinite(gamma)) {
            throw InvalidConfiguration("step size must be positive and finite");
        }
        if (!(divergence_threshold > 0.0)) {
            throw InvalidConfiguration("divergence threshold must be positive");
        }
        if (!(acceptance_floor >= 0.0 && acceptance_floor <= 1.0)) {
            throw InvalidConfiguration("acceptance floor must lie in [0, 1]");
        }
    }

    [[nodiscard]] bool metropolis() const { return adjustment != Adjustment::none; }
};

/// The benchmarked samplers, in a fixed order; the numeric value enters seed derivation.
enum class Algorithm : int { ULA = 0, TULA, TULAc, MALA, RWM, TMALA, TMALAc, TULA_partial };

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::ULA,  Algorithm::TULA,  Algorithm::TULAc,  Algorithm::MALA,
    Algorithm::RWM,  Algorithm::TMALA, Algorithm::TMALAc, Algorithm::TULA_partial};

inline std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::ULA: return "ULA";
        case Algorithm::TULA: return "TULA";
        case Algorithm::TULAc: return "TULAc";
        case Algorithm::MALA: return "MALA";
        case Algorithm::RWM: return "RWM";
        case Algorithm::TMALA: return "TMALA";
        case Algorithm::TMALAc: return "TMALAc";
        case Algorithm::TULA_partial: return "TULA_partial";
    }
    return "unknown";
}

inline std::optional<Algorithm> algorithm_from_string(std::string_view name) {
    for (auto a : kAllAlgorithms) {
        if (to_string(a) == name) return a;
    }
    return std::nullopt;
}

inline DriftKind drift_kind_of(Algorithm a) {
    switch (a) {
        case Algorithm::TULA:
        case Algorithm::TMALA: return DriftKind::tamed_global;
        case Algorithm::TULAc:
        case Algorithm::TMALAc: return DriftKind::tamed_coordinatewise;
        case Algorithm::TULA_partial: return DriftKind::partial_double_well;
        default: return DriftKind::raw;
    }
}

inline Adjustment adjustment_of(Algorithm a) {
    switch (a) {
        case Algorithm::MALA:
        case Algorithm::TMALA:
        case Algorithm::TMALAc: return Adjustment::metropolis_langevin;
        case Algorithm::RWM: return Adjustment::metropolis_rw;
        default: return Adjustment::none;
    }
}

inline KernelConfig make_kernel_config(Algorithm a, const TargetModel& model, double gamma) {
    KernelConfig c{DriftSpec(drift_kind_of(a), model), gamma, adjustment_of(a)};
    c.validate();
    return c;
}

struct TrackedMoments {
    std::size_t coordinate = 0;
    MomentAccumulator moments;
    BatchMeans first_batches;   ///< of x_i
    BatchMeans second_batches;  ///< of x_i^2
};

struct ChainState {
    Vector position;
    std::uint64_t step = 0;
    std::mt19937_64 rng;
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform{0.0, 1.0};
    std::uint64_t accepted = 0;
    std::uint64_t proposed = 0;
    bool diverged = false;
    std::vector<TrackedMoments> tracked;

    // Scratch buffers and the MH cache of U and G at `position`.
    Vector noise;
    Vector drift;
    Vector grad;
    Vector proposal;
    Vector proposal_drift;
    double potential = 0.0;
    bool cache_valid = false;

    ChainState(Vector x0, std::uint64_t seed)
        : position(std::move(x0)),
          rng(seed),
          noise(position.size()),
          drift(position.size()),
          grad(position.size()),
          proposal(position.size()),
          proposal_drift(position.size()) {}

    void draw_noise() {
        for (auto& v : noise) v = normal(rng);
    }
};

namespace detail {

inline void apply_guard(ChainState& s, const KernelConfig& c) {
    const double n = s.position.norm();
    if (!(n <= c.divergence_threshold)) s.diverged = true;
}

}  // namespace detail

/// log q(to | from) up to a constant, for the Gaussian proposal with mean
/// from - gamma G(from) and covariance 2 gamma I.
inline double log_langevin_proposal_density(const Vector& to, const Vector& from,
                                            const Vector& drift_at_from, double gamma) {
    return -(to - from + gamma * drift_at_from).squaredNorm() / (4.0 * gamma);
}

/// log of the MH ratio for a Langevin-type proposal x -> y; the acceptance
/// probability is min(1, exp of this).
inline double log_acceptance_langevin(const Vector& x, const Vector& y, double potential_x,
                                      double potential_y, const Vector& drift_x,
                                      const Vector& drift_y, double gamma) {
    return potential_x - potential_y + log_langevin_proposal_density(x, y, drift_y, gamma) -
           log_langevin_proposal_density(y, x, drift_x, gamma);
}

inline double log_acceptance_rw(double potential_x, double potential_y) {
    return potential_x - potential_y;
}

inline double acceptance_probability(double log_ratio) {
    if (std::isnan(log_ratio)) return 0.0;
    return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

/// Accept when uniform < min(1, exp(log_ratio)), in the log domain. uniform = 0
/// accepts every proposal with a positive ratio.
inline bool mh_accept(double log_ratio, double uniform) {
    if (std::isnan(log_ratio)) return false;
    if (log_ratio >= 0.0) return true;
    return std::log(uniform) < log_ratio;
}

inline void step_unadjusted(ChainState& s, const KernelConfig& c, const Vector& noise) {
    if (s.diverged) return;
    c.drift.evaluate_into(s.position, c.gamma, s.grad, s.drift);
    s.position += -c.gamma * s.drift + std::sqrt(2.0 * c.gamma) * noise;
    s.cache_valid = false;
    ++s.step;
    detail::apply_guard(s, c);
}

inline void step_metropolis_langevin(ChainState& s, const KernelConfig& c, const Vector& noise,
                                     double uniform) {
    if (s.diverged) return;
    const TargetModel& model = c.drift.model();
    if (!s.cache_valid) {
        s.potential = model.potential(s.position);
        c.drift.evaluate_into(s.position, c.gamma, s.grad, s.drift);
        s.cache_valid = true;
    }
    s.proposal = s.position - c.gamma * s.drift + std::sqrt(2.0 * c.gamma) * noise;
    ++s.proposed;
    ++s.step;
    const double potential_y = model.potential(s.proposal);
    if (!std::isfinite(potential_y)) return;
    c.drift.evaluate_into(s.proposal, c.gamma, s.grad, s.proposal_drift);
    const double log_ratio = log_acceptance_langevin(s.position, s.proposal, s.potential,
                                                     potential_y, s.drift, s.proposal_drift, c.gamma);
    if (mh_accept(log_ratio, uniform)) {
        s.position.swap(s.proposal);
        s.drift.swap(s.proposal_drift);
        s.potential = potential_y;
        ++s.accepted;
        detail::apply_guard(s, c);
    }
}

inline void step_metropolis_rw(ChainState& s, const KernelConfig& c, const Vector& noise,
                               double uniform) {
    if (s.diverged) return;
    const TargetModel& model = c.drift.model();
    if (!s.cache_valid) {
        s.potential = model.potential(s.position);
        s.cache_valid = true;
    }
    s.proposal = s.position + std::sqrt(2.0 * c.gamma) * noise;
    ++s.proposed;
    ++s.step;
    const double potential_y = model.potential(s.proposal);
    if (!std::isfinite(potential_y)) return;
    if (mh_accept(log_acceptance_rw(s.potential, potential_y), uniform)) {
        s.position.swap(s.proposal);
        s.potential = potential_y;
        ++s.accepted;
        detail::apply_guard(s, c);
    }
}

/// Draws the step's randomness from the chain generator and applies the configured kernel.
inline void transition(ChainState& s, const KernelConfig& c) {
    if (s.diverged) return;
    s.draw_noise();
    switch (c.adjustment) {
        case Adjustment::none:
            step_unadjusted(s, c, s.noise);
            return;
        case Adjustment::metropolis_langevin: {
            const double u = s.uniform(s.rng);
            step_metropolis_langevin(s, c, s.noise, u);
            return;
        }
        case Adjustment::metropolis_rw: {
            const double u = s.uniform(s.rng);
            step_metropolis_rw(s, c, s.noise, u);
            return;
        }
    }
}

struct CoordinateEstimate {
    std::size_t coordinate = 0;
    MomentAccumulator moments;
    double first_standard_error = std::numeric_limits<double>::quiet_NaN();
    double second_standard_error = std::numeric_limits<double>::quiet_NaN();
};

struct ChainResult {
    std::vector<CoordinateEstimate> tracked;
    double acceptance_rate = std::numeric_limits<double>::quiet_NaN();  ///< MH kernels only
    bool diverged = false;
    bool excluded = false;
    std::uint64_t steps_completed = 0;
    double final_norm = 0.0;
    std::uint64_t seed = 0;
    double duration_seconds = 0.0;  ///< wall clock; the only non-deterministic field
};

struct RunOptions {
    std::uint64_t burn_in = 0;
    std::uint64_t batches = 50;  ///< batch count for the batch-means standard errors
};

/// Runs n_steps transitions from x0 and averages the tracked coordinates over the
/// iterates X_0, ..., X_{n_steps-1} after burn-in. Stops early at divergence.
inline ChainResult run_chain(const TargetModel& model, const KernelConfig& config,
                             std::uint64_t n_steps, const Vector& x0, std::uint64_t seed,
                             const std::vector<std::size_t>& tracked_coordinates,
                             const RunOptions& options = {}) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    if (&config.drift.model() != &model) {
        throw InvalidConfiguration("kernel drift is bound to a different model");
    }
    if (n_steps < 1) throw InvalidArgument("n_steps must be >= 1");
    if (static_cast<std::size_t>(x0.size()) != model.dimension()) {
        throw InvalidArgument("x0 has length " + std::to_string(x0.size()) + ", model dimension is " +
                              std::to_string(model.dimension()));
    }
    if (!x0.allFinite()) throw InvalidArgument("x0 must be finite");
    for (auto c : tracked_coordinates) {
        if (c >= model.dimension()) {
            throw InvalidArgument("tracked coordinate " + std::to_string(c) + " out of range");
        }
    }

    ChainState s(x0, seed);
    const std::uint64_t kept = n_steps > options.burn_in ? n_steps - options.burn_in : 0;
    const std::uint64_t batch = std::max<std::uint64_t>(1, kept / std::max<std::uint64_t>(1, options.batches));
    for (auto c : tracked_coordinates) s.tracked.push_back({c, {}, BatchMeans(batch), BatchMeans(batch)});

    for (std::uint64_t k = 0; k < n_steps; ++k) {
        if (k >= options.burn_in) {
            for (auto& t : s.tracked) {
                const double v = s.position[static_cast<Eigen::Index>(t.coordinate)];
                t.moments.push(v);
                t.first_batches.push(v);
                t.second_batches.push(v * v);
            }
        }
        transition(s, config);
        if (s.diverged) break;
    }

    ChainResult r;
    r.seed = seed;
    r.diverged = s.diverged;
    r.steps_completed = s.step;
    r.final_norm = s.position.norm();
    for (const auto& t : s.tracked) {
        r.tracked.push_back({t.coordinate, t.moments, t.first_batches.standard_error(),
                             t.second_batches.standard_error()});
    }
    if (config.metropolis()) {
        r.acceptance_rate = s.proposed > 0 ? static_cast<double>(s.accepted) / static_cast<double>(s.proposed) : 0.0;
    }
    r.excluded = r.diverged || (config.metropolis() && r.acceptance_rate < config.acceptance_floor);
    r.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace tula
