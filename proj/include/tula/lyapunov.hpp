#pragma once

// Monte Carlo estimate of the one-step drift ratio  R V_a(x) / V_a(x)  for
// V_a(x) = exp(a sqrt(1 + |x|^2)). A ratio below 1 means the kernel contracts
// V_a at x.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tula/errors.hpp"
#include "tula/kernels.hpp"

namespace tula {

inline double log_lyapunov(double a, const Vector& x) { return a * std::sqrt(1.0 + x.squaredNorm()); }

struct LyapunovPoint {
    Vector point;
    double log_ratio = 0.0;          ///< log of the estimated ratio; always finite
    double ratio = 0.0;              ///< exp(log_ratio); may be +inf when the ratio overflows a double
    double standard_error = 0.0;     ///< of `ratio`
    double log_standard_error = 0.0; ///< delta-method standard error of `log_ratio`
};

struct LyapunovDiagnostic {
    double a = 0.0;
    std::uint64_t mc_samples = 0;
    std::vector<LyapunovPoint> points;
};

inline LyapunovDiagnostic lyapunov_drift_estimate(const TargetModel& model, const KernelConfig& config,
                                                  double a, const std::vector<Vector>& points,
                                                  std::uint64_t mc_samples, std::uint64_t seed) {
    if (!(a > 0.0)) throw InvalidArgument("Lyapunov exponent a must be positive");
    if (mc_samples < 100) throw InvalidArgument("lyapunov_drift_estimate needs at least 100 samples");
    if (&config.drift.model() != &model) {
        throw InvalidConfiguration("kernel drift is bound to a different model");
    }
    config.validate();
    KernelConfig unguarded = config;
    unguarded.divergence_threshold = std::numeric_limits<double>::infinity();

    LyapunovDiagnostic out;
    out.a = a;
    out.mc_samples = mc_samples;
    std::seed_seq root{seed};
    std::vector<std::uint64_t> point_seeds(points.size());
    {
        std::vector<std::uint32_t> words(2 * points.size());
        root.generate(words.begin(), words.end());
        for (std::size_t i = 0; i < points.size(); ++i) {
            point_seeds[i] = (static_cast<std::uint64_t>(words[2 * i]) << 32) | words[2 * i + 1];
        }
    }

    std::vector<double> logs(mc_samples);
    for (std::size_t p = 0; p < points.size(); ++p) {
        const Vector& x = points[p];
        if (static_cast<std::size_t>(x.size()) != model.dimension()) {
            throw InvalidArgument("Lyapunov point has the wrong dimension");
        }
        const double log_vx = log_lyapunov(a, x);
        ChainState s(x, point_seeds[p]);
        for (auto& l : logs) {
            s.position = x;
            s.cache_valid = false;
            transition(s, unguarded);
            l = log_lyapunov(a, s.position);
        }
        const double top = *std::max_element(logs.begin(), logs.end());
        if (!std::isfinite(top) || !std::isfinite(log_vx)) {
            throw NumericalFailure("Lyapunov estimate overflowed: non-finite log V after one step");
        }
        double sum = 0.0;
        double sum_sq = 0.0;
        for (double l : logs) {
            const double w = std::exp(l - top);
            sum += w;
            sum_sq += w * w;
        }
        const double n = static_cast<double>(mc_samples);
        const double mean_w = sum / n;
        const double var_w = std::max(0.0, (sum_sq - n * mean_w * mean_w) / (n - 1.0));
        LyapunovPoint lp;
        lp.point = x;
        lp.log_ratio = top - log_vx + std::log(mean_w);
        lp.ratio = std::exp(lp.log_ratio);
        lp.log_standard_error = std::sqrt(var_w / n) / mean_w;
        lp.standard_error = lp.ratio * lp.log_standard_error;
        out.points.push_back(std::move(lp));
    }
    return out;
}

}  // namespace tula
