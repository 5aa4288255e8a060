#pragma once

// Closed-form and quadrature reference values used to score chain estimates.

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tula/errors.hpp"

namespace tula {

/// Log-density drop (nats) below the peak at which radial integrals are truncated.
inline constexpr double kRadialTailCutoff = 60.0;

namespace detail {

// Finds r in [inside, outside] where log_nu crosses `level`, given
// log_nu(inside) >= level > log_nu(outside). log_nu may be -inf at r = 0.
template <class LogDensity>
double bisect_level(const LogDensity& log_nu, double inside, double outside, double level) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;
        const double v = log_nu(mid);
        if (std::isfinite(v) && v >= level) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    return outside;
}

}  // namespace detail

struct RadialMoment {
    double value = 0.0;
    double lower = 0.0;  ///< truncated integration range
    double upper = 0.0;
    double error_estimate = 0.0;  ///< relative, combined numerator and denominator
};

/// Computes  int r^power nu(r) dr / int nu(r) dr  for an unnormalized radial density
/// given through its logarithm. `peak` must locate the maximum of log_nu. The
/// integrand is exp(log_nu - max), so any additive constant in log_nu cancels.
template <class LogDensity>
RadialMoment normalized_radial_moment(const LogDensity& log_nu, double peak, double power) {
    const double top = log_nu(peak);
    if (!std::isfinite(top) || !(peak > 0.0)) {
        throw NumericalFailure("radial quadrature: log density not finite at its peak r=" +
                               std::to_string(peak));
    }
    const double level = top - kRadialTailCutoff;

    double lower = 0.0;
    const double at_zero = log_nu(0.0);
    if (!(std::isfinite(at_zero) && at_zero >= level)) {
        lower = detail::bisect_level(log_nu, peak, 0.0, level);
    }
    double outside = 2.0 * peak;
    while (log_nu(outside) >= level) {
        outside *= 2.0;
        if (!std::isfinite(outside)) throw NumericalFailure("radial quadrature: unbounded tail");
    }
    const double upper = detail::bisect_level(log_nu, peak, outside, level);

    auto density = [&](double r) {
        const double v = log_nu(r);
        return std::isfinite(v) ? std::exp(v - top) : 0.0;
    };
    auto weighted = [&](double r) { return std::pow(r, power) * density(r); };

    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
    double err_den = 0.0;
    double err_num = 0.0;
    const double den = Quadrature::integrate(density, lower, upper, 20, 1e-13, &err_den);
    const double num = Quadrature::integrate(weighted, lower, upper, 20, 1e-13, &err_num);

    RadialMoment out;
    out.lower = lower;
    out.upper = upper;
    out.error_estimate = err_den / den + err_num / std::abs(num);
    if (!(den > 0.0) || !std::isfinite(num) || !(out.error_estimate < 1e-8)) {
        std::ostringstream msg;
        msg << "radial quadrature did not converge: range [" << lower << ", " << upper
            << "], denominator " << den << ", numerator " << num << ", relative error "
            << out.error_estimate;
        throw NumericalFailure(msg.str());
    }
    out.value = num / den;
    return out;
}

/// log of the radial density of the double well, r^(d-1) exp(r^2/2 - r^4/4).
inline double double_well_log_radial_density(int dimension, double r) {
    if (r == 0.0) return dimension == 1 ? 0.0 : -std::numeric_limits<double>::infinity();
    const double r2 = r * r;
    return (dimension - 1) * std::log(r) + 0.5 * r2 - 0.25 * r2 * r2;
}

/// Peak of the double-well radial density: r^4 - r^2 - (d-1) = 0.
inline double double_well_radial_peak(int dimension) {
    return std::sqrt(0.5 * (1.0 + std::sqrt(1.0 + 4.0 * (dimension - 1.0))));
}

/// E[x_i^2] under the double well pi ~ exp(-(|x|^4/4 - |x|^2/2)) in dimension d.
/// Only order 2 is non-trivial; odd moments vanish by symmetry.
inline double reference_moment_double_well(int dimension, int order = 2) {
    if (dimension < 1) throw InvalidParameter("double well dimension must be >= 1");
    if (order != 2) throw InvalidParameter("double well oracle supports order 2 only");
    auto log_nu = [dimension](double r) { return double_well_log_radial_density(dimension, r); };
    return normalized_radial_moment(log_nu, double_well_radial_peak(dimension), 2.0).value /
           dimension;
}

/// Stationary variance of ULA on a 1-d Gaussian with variance sigma2: the fixed
/// point of v <- (1 - gamma/sigma2)^2 v + 2 gamma.
inline double ula_gaussian_stationary_variance(double sigma2, double gamma) {
    if (!(sigma2 > 0.0) || !(gamma > 0.0)) {
        throw InvalidParameter("sigma2 and gamma must be positive");
    }
    if (gamma >= 2.0 * sigma2) {
        throw InstabilityError("ULA on a Gaussian with variance " + std::to_string(sigma2) +
                               " is unstable for step size " + std::to_string(gamma) +
                               " (requires gamma < 2 sigma2)");
    }
    return 2.0 * sigma2 * sigma2 / (2.0 * sigma2 - gamma);
}

}  // namespace tula
