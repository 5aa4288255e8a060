#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_support.hpp"
#include "tula/drift.hpp"

using namespace tula;
using tula::testing::axis;

namespace {

// A 2-d Gaussian with variance 1 has grad U(x) = x, so G can be probed at any gradient value.
const TargetModel& unit_gaussian_2d() {
    static const TargetModel m = make_gaussian({1.0, 1.0});
    return m;
}

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST(DriftEval, TamedGlobalDividesByOnePlusGammaNorm) {
    const DriftSpec spec(DriftKind::tamed_global, unit_gaussian_2d());
    const Vector g = drift_eval(spec, vec2(3.0, 4.0), 0.1);
    EXPECT_NEAR(g[0], 2.0, 1e-15);
    EXPECT_NEAR(g[1], 8.0 / 3.0, 1e-15);
}

TEST(DriftEval, TamedCoordinatewise) {
    const DriftSpec spec(DriftKind::tamed_coordinatewise, unit_gaussian_2d());
    const Vector g = drift_eval(spec, vec2(3.0, 4.0), 0.1);
    EXPECT_NEAR(g[0], 3.0 / 1.3, 1e-15);
    EXPECT_NEAR(g[1], 4.0 / 1.4, 1e-15);
    EXPECT_NEAR(g[0], 2.30769, 1e-5);
    EXPECT_NEAR(g[1], 2.85714, 1e-5);
}

TEST(DriftEval, RawEqualsGradientForAnyGamma) {
    const auto m = make_double_well(5);
    const DriftSpec spec(DriftKind::raw, m);
    for (const auto& x : tula::testing::random_points(5, 20, 2.0, 1)) {
        for (double gamma : {1e-3, 0.1, 10.0}) EXPECT_EQ(drift_eval(spec, x, gamma), m.gradient(x));
    }
}

TEST(DriftEval, CriticalPointsMapToZero) {
    const auto m = make_double_well(4);
    for (auto kind : {DriftKind::raw, DriftKind::tamed_global, DriftKind::tamed_coordinatewise,
                      DriftKind::partial_double_well}) {
        const DriftSpec spec(kind, m);
        EXPECT_EQ(drift_eval(spec, Vector::Zero(4), 0.3), Vector::Zero(4)) << to_string(kind);
    }
    for (auto kind : {DriftKind::raw, DriftKind::tamed_global, DriftKind::tamed_coordinatewise}) {
        EXPECT_EQ(drift_eval(DriftSpec(kind, m), axis(4, 1.0), 0.3), Vector::Zero(4)) << to_string(kind);
    }
}

TEST(DriftEval, PartialTamingOfDoubleWell) {
    const auto m = make_double_well(100);
    const DriftSpec spec(DriftKind::partial_double_well, m);
    const Vector g = drift_eval(spec, axis(100, 2.0), 0.1);
    EXPECT_NEAR(g[0], 8.0 / 1.4 - 2.0, 1e-14);
    EXPECT_NEAR(g[0], 3.71429, 1e-5);
    EXPECT_DOUBLE_EQ(g.tail(99).norm(), 0.0);
}

TEST(DriftEval, PartialTamingRequiresDoubleWell) {
    const auto gaussian = make_linear_gaussian(3);
    EXPECT_THROW(DriftSpec(DriftKind::partial_double_well, gaussian), InvalidConfiguration);
    const auto lattice = make_ginzburg_landau({2, 2.0, 0.1, 0.5});
    EXPECT_THROW(DriftSpec(DriftKind::partial_double_well, lattice), InvalidConfiguration);
}

TEST(DriftEval, RejectsNonPositiveGamma) {
    const DriftSpec spec(DriftKind::tamed_global, unit_gaussian_2d());
    EXPECT_THROW(drift_eval(spec, vec2(1, 1), 0.0), InvalidArgument);
    EXPECT_THROW(drift_eval(spec, vec2(1, 1), -1.0), InvalidArgument);
}

TEST(DriftEval, KindNamesRoundTrip) {
    for (auto k : {DriftKind::raw, DriftKind::tamed_global, DriftKind::tamed_coordinatewise,
                   DriftKind::partial_double_well}) {
        EXPECT_EQ(drift_kind_from_string(to_string(k)), k);
    }
    EXPECT_THROW(drift_kind_from_string("implicit"), InvalidConfiguration);
}

TEST(Closeness, RawDriftIsExact) {
    const auto m = make_double_well(10);
    const DriftSpec spec(DriftKind::raw, m);
    EXPECT_EQ(check_closeness(spec, 0.1, tula::testing::random_points(10, 50, 2.0, 2)), 0.0);
}

TEST(Closeness, CoordinatewiseScalarCase) {
    const auto m = make_gaussian({1.0});
    const DriftSpec spec(DriftKind::tamed_coordinatewise, m);
    // g = 2, gamma = 0.5: |2 - 2/2| = 1 = gamma g^2 / 2.
    EXPECT_DOUBLE_EQ(check_closeness(spec, 0.5, {Vector::Constant(1, 2.0)}), 0.5);
}

TEST(Closeness, EmptyPointListRejected) {
    const auto m = make_double_well(2);
    EXPECT_THROW(check_closeness(DriftSpec(DriftKind::tamed_global, m), 0.1, {}), InvalidArgument);
}

TEST(Closeness, TamedDriftsWithinGammaGradSquared) {
    std::vector<TargetModel> models{make_linear_gaussian(50), make_double_well(50),
                                    make_ginzburg_landau({4, 2.0, 0.1, 0.5})};
    for (const auto& m : models) {
        const auto points = tula::testing::multiscale_points(m.dimension(), 1000, 11);
        for (auto kind : {DriftKind::tamed_global, DriftKind::tamed_coordinatewise}) {
            for (double gamma : {1e-3, 1e-2, 1e-1, 1.0}) {
                EXPECT_LE(check_closeness(DriftSpec(kind, m), gamma, points), 1.0 + 1e-12)
                    << m.name() << " " << to_string(kind) << " gamma=" << gamma;
            }
        }
    }
}

TEST(Boundedness, TamedDriftNorms) {
    const auto m = make_double_well(100);
    const auto points = tula::testing::multiscale_points(100, 1000, 5);
    for (double gamma : {1e-3, 1e-2, 1e-1, 1.0}) {
        EXPECT_LT(max_scaled_drift_norm(DriftSpec(DriftKind::tamed_global, m), gamma, points), 1.0);
        EXPECT_LE(max_scaled_drift_norm(DriftSpec(DriftKind::tamed_coordinatewise, m), gamma, points),
                  std::sqrt(100.0) + 1e-12);
    }
}

TEST(Recovery, ErrorShrinksAsGammaHalves) {
    // |G_{gamma/2} - grad U| / |G_gamma - grad U| = (1 + a)/(2 + a) with a = gamma |grad U|
    // (per coordinate for the coordinate-wise kind): 0.6 at a = 1/2, below 0.56 once a <= 1/4.
    const auto m = make_double_well(20);
    for (auto kind : {DriftKind::tamed_global, DriftKind::tamed_coordinatewise}) {
        const DriftSpec spec(kind, m);
        for (const auto& x : tula::testing::random_points(20, 100, 1.0, 9)) {
            const Vector g = m.gradient(x);
            if (g.norm() == 0.0) continue;
            double previous = std::numeric_limits<double>::infinity();
            for (double gamma = 0.25 / g.norm(); gamma > 1e-6 / g.norm(); gamma /= 2) {
                const double e = (drift_eval(spec, x, gamma) - g).norm();
                const double e_half = (drift_eval(spec, x, gamma / 2) - g).norm();
                EXPECT_LE(e_half, 0.6 * e);
                EXPECT_LT(e, previous);
                previous = e;
            }
        }
    }
}

TEST(SignPreservation, CoordinatewiseKeepsSigns) {
    const auto m = make_ginzburg_landau({4, 2.0, 0.1, 0.5});
    const DriftSpec spec(DriftKind::tamed_coordinatewise, m);
    for (const auto& x : tula::testing::random_points(64, 50, 2.0, 4)) {
        const Vector g = m.gradient(x);
        const Vector h = drift_eval(spec, x, 0.3);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            EXPECT_EQ(std::signbit(h[i]), std::signbit(g[i]));
            EXPECT_EQ(h[i] == 0.0, g[i] == 0.0);
        }
    }
}

TEST(Dissipativity, PartialTamingClosedForm) {
    // <x/|x|, G> - gamma/(2|x|)|G|^2 along any direction at radius r.
    const auto m = make_double_well(3);
    const DriftSpec spec(DriftKind::partial_double_well, m);
    for (double gamma : {0.25, 0.5, 0.9, 1.0, 1.5}) {
        for (double r : {0.5, 3.0, 40.0}) {
            const double expected = r * r * r / (1 + gamma * r * r) *
                                        (1 + gamma - gamma / 2 * r * r / (1 + gamma * r * r)) -
                                    r * (1 + gamma / 2);
            EXPECT_NEAR(dissipativity_quantity(spec, gamma, axis(3, r)), expected, 1e-9 * std::max(1.0, r));
        }
    }
}

TEST(Dissipativity, PartialTamingThreshold) {
    const auto m = make_double_well(100);
    const DriftSpec spec(DriftKind::partial_double_well, m);
    const auto ok = check_dissipativity(spec, 0.5, default_radius_grid(), kDefaultDirectionsPerRadius, 1);
    EXPECT_EQ(ok.verdict, Verdict::satisfied);
    // The quantity grows like |x| (1/gamma - gamma)/2 = 0.75 |x|.
    EXPECT_NEAR(ok.minimum.back() / ok.radii.back(), 0.75, 0.01);

    const auto edge = check_dissipativity(spec, 1.0, default_radius_grid(), kDefaultDirectionsPerRadius, 1);
    EXPECT_NE(edge.verdict, Verdict::satisfied);
    EXPECT_EQ(edge.verdict, Verdict::violated);

    const auto beyond = check_dissipativity(spec, 1.5, default_radius_grid(), 8, 1);
    EXPECT_EQ(beyond.verdict, Verdict::violated);
}

TEST(Dissipativity, TamedDriftsSatisfiedOnBenchmarks) {
    std::vector<TargetModel> models{make_linear_gaussian(100), make_double_well(100)};
    for (const auto& m : models) {
        for (auto kind : {DriftKind::tamed_global, DriftKind::tamed_coordinatewise}) {
            for (double gamma : {1e-3, 1e-2, 1e-1}) {
                const auto rep = check_dissipativity(DriftSpec(kind, m), gamma, default_radius_grid(), 16, 3);
                EXPECT_EQ(rep.verdict, Verdict::satisfied) << m.name() << " " << to_string(kind);
            }
        }
    }
}

TEST(Dissipativity, CoordinatewiseBoundAtSampledPoints) {
    const auto m = make_double_well(100);
    for (double gamma : {1e-3, 1e-1, 1.0}) {
        const auto rep = check_dissipativity(DriftSpec(DriftKind::tamed_coordinatewise, m), gamma,
                                             default_radius_grid(), kDefaultDirectionsPerRadius, 2);
        EXPECT_LE(rep.max_scaled_drift_norm, std::sqrt(100.0) + 1e-12);
    }
}

TEST(Dissipativity, VerdictRules) {
    // Raw drift on a Gaussian: <x/|x|, x> - gamma/2 |x| = |x|(1 - gamma/2).
    const auto m = make_gaussian({1.0, 1.0});
    const DriftSpec raw(DriftKind::raw, m);
    EXPECT_EQ(check_dissipativity(raw, 1.0, {1.0, 10.0}, 4, 0).verdict, Verdict::satisfied);
    EXPECT_EQ(check_dissipativity(raw, 2.5, {1.0, 10.0}, 4, 0).verdict, Verdict::violated);
    EXPECT_EQ(check_dissipativity(raw, 3.0, {5.0}, 4, 0).verdict, Verdict::violated);
    // The partial drift at gamma = 0.5 is negative at r = 1 and positive beyond r = 10.
    const auto dw = make_double_well(2);
    const DriftSpec partial(DriftKind::partial_double_well, dw);
    EXPECT_EQ(check_dissipativity(partial, 0.5, {1.0, 100.0}, 4, 0).verdict, Verdict::inconclusive);
}

TEST(Dissipativity, InputValidation) {
    const auto m = make_double_well(2);
    const DriftSpec spec(DriftKind::tamed_global, m);
    EXPECT_THROW(check_dissipativity(spec, 0.1, {}, 4, 0), InvalidArgument);
    EXPECT_THROW(check_dissipativity(spec, 0.1, {1.0}, 0, 0), InvalidArgument);
    EXPECT_THROW(check_dissipativity(spec, 0.1, {10.0, 1.0}, 4, 0), InvalidArgument);
}
