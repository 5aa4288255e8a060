#pragma once

// Streaming moment estimates, replicate error summaries and step-size rate fits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tula/errors.hpp"
#include "tula/oracles.hpp"

namespace tula {

/// Running mean and mean of squares of a scalar stream.
class MomentAccumulator {
public:
    void push(double v) {
        ++count_;
        const double n = static_cast<double>(count_);
        mean_ += (v - mean_) / n;
        mean_sq_ += (v * v - mean_sq_) / n;
    }

    void merge(const MomentAccumulator& other) {
        if (other.count_ == 0) return;
        const auto total = count_ + other.count_;
        const double w = static_cast<double>(other.count_) / static_cast<double>(total);
        mean_ += (other.mean_ - mean_) * w;
        mean_sq_ += (other.mean_sq_ - mean_sq_) * w;
        count_ = total;
    }

    [[nodiscard]] std::uint64_t count() const { return count_; }
    [[nodiscard]] double mean() const { return mean_; }
    [[nodiscard]] double mean_of_squares() const { return mean_sq_; }

    /// Moment of order 1 or 2.
    [[nodiscard]] double moment(int order) const { return order == 1 ? mean_ : mean_sq_; }

    static MomentAccumulator from_parts(std::uint64_t count, double mean, double mean_sq) {
        MomentAccumulator a;
        a.count_ = count;
        a.mean_ = mean;
        a.mean_sq_ = mean_sq;
        return a;
    }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double mean_sq_ = 0.0;
};

/// Non-overlapping batch means of a correlated stream; gives a Monte Carlo
/// standard error for the overall mean. An incomplete trailing batch is ignored.
class BatchMeans {
public:
    explicit BatchMeans(std::uint64_t batch_size = 1) : batch_size_(std::max<std::uint64_t>(1, batch_size)) {}

    void push(double v) {
        current_sum_ += v;
        if (++current_count_ == batch_size_) {
            const double m = current_sum_ / static_cast<double>(batch_size_);
            ++batches_;
            const double delta = m - batch_mean_;
            batch_mean_ += delta / static_cast<double>(batches_);
            batch_m2_ += delta * (m - batch_mean_);
            current_sum_ = 0.0;
            current_count_ = 0;
        }
    }

    [[nodiscard]] std::uint64_t batches() const { return batches_; }
    [[nodiscard]] std::uint64_t batch_size() const { return batch_size_; }

    /// NaN with fewer than two complete batches.
    [[nodiscard]] double standard_error() const {
        if (batches_ < 2) return std::numeric_limits<double>::quiet_NaN();
        const double var = batch_m2_ / static_cast<double>(batches_ - 1);
        return std::sqrt(var / static_cast<double>(batches_));
    }

private:
    std::uint64_t batch_size_;
    std::uint64_t current_count_ = 0;
    double current_sum_ = 0.0;
    std::uint64_t batches_ = 0;
    double batch_mean_ = 0.0;
    double batch_m2_ = 0.0;
};

/// Quantile of sorted data by linear interpolation between order statistics:
/// position h = (n - 1) p.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct BoxplotSummary {
    double min = std::numeric_limits<double>::quiet_NaN();
    double q1 = std::numeric_limits<double>::quiet_NaN();
    double median = std::numeric_limits<double>::quiet_NaN();
    double q3 = std::numeric_limits<double>::quiet_NaN();
    double max = std::numeric_limits<double>::quiet_NaN();
    double mean = std::numeric_limits<double>::quiet_NaN();
    std::size_t n_included = 0;
    std::size_t n_excluded = 0;

    /// Every replicate was excluded; the statistics are NaN.
    [[nodiscard]] bool empty() const { return n_included == 0; }
};

/// Five-number summary and mean of (value - reference) over included replicates.
inline BoxplotSummary error_summary(const std::vector<double>& values, double reference,
                                    std::size_t n_excluded = 0) {
    BoxplotSummary s;
    s.n_excluded = n_excluded;
    s.n_included = values.size();
    if (values.empty()) return s;
    std::vector<double> errors;
    errors.reserve(values.size());
    for (double v : values) errors.push_back(v - reference);
    std::sort(errors.begin(), errors.end());
    s.min = errors.front();
    s.max = errors.back();
    s.q1 = quantile_sorted(errors, 0.25);
    s.median = quantile_sorted(errors, 0.5);
    s.q3 = quantile_sorted(errors, 0.75);
    double sum = 0.0;
    for (double e : errors) sum += e;
    s.mean = sum / static_cast<double>(errors.size());
    return s;
}

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::string> warnings;  ///< one per dropped point
};

/// Least squares fit of log|bias| against log(gamma).
inline RateFit rate_regression(const std::vector<std::pair<double, double>>& points) {
    RateFit fit;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [gamma, bias] : points) {
        if (!(gamma > 0.0) || !(bias > 0.0) || !std::isfinite(gamma) || !std::isfinite(bias)) {
            fit.warnings.push_back("dropped point (gamma=" + std::to_string(gamma) +
                                   ", bias=" + std::to_string(bias) + "): not positive");
            continue;
        }
        xs.push_back(std::log(gamma));
        ys.push_back(std::log(bias));
    }
    if (xs.size() < 3) {
        throw InsufficientData("rate_regression needs at least 3 positive points, got " +
                               std::to_string(xs.size()));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InsufficientData("rate_regression needs at least two distinct step sizes");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

}  // namespace tula
