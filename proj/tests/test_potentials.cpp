#include <gtest/gtest.h>

#include "test_support.hpp"
#include "tula/potentials.hpp"

using namespace tula;
using tula::testing::axis;

TEST(Gaussian, GradientIsPrecisionTimesX) {
    const auto m = make_gaussian({1.0, 2.0});
    const Vector g = m.gradient(Vector::Ones(2));
    EXPECT_DOUBLE_EQ(g[0], 1.0);
    EXPECT_DOUBLE_EQ(g[1], 0.5);
    EXPECT_LT(tula::testing::relative_gradient_error(m, Vector::Ones(2)), 1e-8);
}

TEST(Gaussian, PotentialAtTwoTwo) {
    const auto m = make_gaussian({1.0, 2.0});
    EXPECT_DOUBLE_EQ(eval_potential(m, Vector::Constant(2, 2.0)), 3.0);
}

TEST(Gaussian, MinimizerAtOrigin) {
    const auto m = make_gaussian({0.3, 7.0, 1e-5});
    EXPECT_EQ(m.gradient(Vector::Zero(3)), Vector::Zero(3));
}

TEST(Gaussian, LinearProfileReferenceMoments) {
    const auto m = make_linear_gaussian(100);
    EXPECT_EQ(m.dimension(), 100u);
    for (std::size_t i = 1; i <= 100; ++i) {
        const auto second = m.reference_moment(i - 1, 2);
        ASSERT_TRUE(second.has_value());
        EXPECT_DOUBLE_EQ(second->value, static_cast<double>(i));
        EXPECT_DOUBLE_EQ(m.reference_moment(i - 1, 1)->value, 0.0);
    }
    EXPECT_FALSE(m.reference_moment(100, 2).has_value());
}

TEST(Gaussian, IllConditionedProfile) {
    const auto m = make_ill_conditioned_gaussian(100);
    EXPECT_DOUBLE_EQ(m.reference_moment(0, 2)->value, 1e-5);
    EXPECT_DOUBLE_EQ(m.reference_moment(99, 2)->value, 1.0);
}

TEST(Gaussian, RejectsNonPositiveVariance) {
    EXPECT_THROW(make_gaussian({1.0, 0.0}), InvalidParameter);
    EXPECT_THROW(make_gaussian({-1.0}), InvalidParameter);
    EXPECT_THROW(make_gaussian({}), InvalidParameter);
}

TEST(Potentials, DimensionMismatchIsInvalidArgument) {
    const auto m = make_double_well(3);
    EXPECT_THROW(eval_potential(m, Vector::Zero(2)), InvalidArgument);
    EXPECT_THROW(eval_gradient(m, Vector::Zero(4)), InvalidArgument);
}

TEST(DoubleWell, StationarySphereAndOrigin) {
    const auto m = make_double_well(100);
    EXPECT_EQ(m.gradient(axis(100, 1.0)), Vector::Zero(100));
    EXPECT_EQ(m.gradient(Vector::Zero(100)), Vector::Zero(100));
    EXPECT_DOUBLE_EQ(m.potential(Vector::Zero(100)), 0.0);
}

TEST(DoubleWell, ValuesAtTwoE1) {
    const auto m = make_double_well(100);
    const Vector x = axis(100, 2.0);
    const Vector g = m.gradient(x);
    EXPECT_DOUBLE_EQ(g[0], 6.0);
    EXPECT_DOUBLE_EQ(g.tail(99).norm(), 0.0);
    EXPECT_DOUBLE_EQ(m.potential(x), 2.0);
    EXPECT_LT(tula::testing::relative_gradient_error(m, x), 1e-8);
}

TEST(DoubleWell, GradientAlignedOutsideUnitBall) {
    const auto m = make_double_well(10);
    for (const auto& x : tula::testing::multiscale_points(10, 200, 7)) {
        if (x.norm() < 1.0) continue;
        const Vector g = m.gradient(x);
        EXPECT_NEAR(x.dot(g), x.norm() * g.norm(), 1e-12 * x.norm() * g.norm());
    }
}

TEST(DoubleWell, CarriesQuadratureReference) {
    const auto m = make_double_well(100);
    const auto r = m.reference_moment(42, 2);
    ASSERT_TRUE(r.has_value());
    EXPECT_NEAR(r->value, 0.104, 0.001);
    EXPECT_DOUBLE_EQ(m.reference_moment(42, 1)->value, 0.0);
}

TEST(GinzburgLandau, LatticeIndexWrapsAndIsRowMajor) {
    const LatticeIndex a{0, 9, 3};
    EXPECT_EQ(a.flat(10), 93u);
    EXPECT_EQ(a.shifted(0, -1, 10).i, 9);
    EXPECT_EQ(a.shifted(1, +1, 10).j, 0);
    EXPECT_EQ(a.shifted(2, +1, 10).k, 4);
    for (std::size_t s = 0; s < 1000; ++s) EXPECT_EQ(LatticeIndex::from_flat(s, 10).flat(10), s);
}

TEST(GinzburgLandau, DimensionIsSideCubed) {
    EXPECT_EQ(make_ginzburg_landau({}).dimension(), 1000u);
    EXPECT_EQ(make_ginzburg_landau({3, 2.0, 0.1, 0.5}).dimension(), 27u);
}

TEST(GinzburgLandau, ZeroFieldIsCritical) {
    const auto m = make_ginzburg_landau({});
    EXPECT_EQ(m.gradient(Vector::Zero(1000)), Vector::Zero(1000));
    EXPECT_DOUBLE_EQ(m.potential(Vector::Zero(1000)), 0.0);
}

TEST(GinzburgLandau, ConstantFieldOnSmallLattice) {
    const GinzburgLandauParams p{2, 2.0, 0.1, 0.5};
    const auto m = make_ginzburg_landau(p);
    const double c = 1.3;
    const Vector x = Vector::Constant(8, c);
    const double entry = (1.0 - p.tau) * c + p.tau * p.lambda * c * c * c;
    const Vector g = m.gradient(x);
    for (Eigen::Index i = 0; i < 8; ++i) EXPECT_NEAR(g[i], entry, 1e-14);
    const double per_site = 0.5 * (1.0 - p.tau) * c * c + 0.25 * p.tau * p.lambda * c * c * c * c;
    EXPECT_NEAR(m.potential(x), 8.0 * per_site, 1e-12);
    EXPECT_LT(tula::testing::relative_gradient_error(m, x), 1e-8);
}

TEST(GinzburgLandau, TranslationEquivariance) {
    const int p = 4;
    const auto m = make_ginzburg_landau({p, 2.0, 0.1, 0.5});
    const auto points = tula::testing::random_points(64, 5, 1.0, 3);
    for (const auto& x : points) {
        for (int axis_id = 0; axis_id < 3; ++axis_id) {
            Vector shifted(64);
            for (std::size_t s = 0; s < 64; ++s) {
                const auto site = LatticeIndex::from_flat(s, p);
                shifted[static_cast<Eigen::Index>(site.shifted(axis_id, 1, p).flat(p))] = x[static_cast<Eigen::Index>(s)];
            }
            const Vector g = m.gradient(x);
            const Vector gs = m.gradient(shifted);
            for (std::size_t s = 0; s < 64; ++s) {
                const auto to = LatticeIndex::from_flat(s, p).shifted(axis_id, 1, p).flat(p);
                EXPECT_NEAR(gs[static_cast<Eigen::Index>(to)], g[static_cast<Eigen::Index>(s)], 1e-12);
            }
            EXPECT_NEAR(m.potential(shifted), m.potential(x), 1e-10);
        }
    }
}

TEST(GinzburgLandau, RejectsBadParameters) {
    EXPECT_THROW(make_ginzburg_landau({1, 2.0, 0.1, 0.5}), InvalidParameter);
    EXPECT_THROW(make_ginzburg_landau({10, 0.0, 0.1, 0.5}), InvalidParameter);
    EXPECT_THROW(make_ginzburg_landau({10, 2.0, -0.1, 0.5}), InvalidParameter);
    EXPECT_THROW(make_ginzburg_landau({10, 2.0, 0.1, 0.0}), InvalidParameter);
}

class FiniteDifferenceConsistency : public ::testing::TestWithParam<int> {};

TEST_P(FiniteDifferenceConsistency, HundredRandomPoints) {
    std::vector<TargetModel> models{make_linear_gaussian(20), make_ill_conditioned_gaussian(20), make_double_well(20),
                                    make_ginzburg_landau({5, 2.0, 0.1, 0.5})};
    const auto& m = models[static_cast<std::size_t>(GetParam())];
    double worst = 0.0;
    for (const auto& x : tula::testing::random_points(m.dimension(), 100, 1.5, 100 + GetParam())) {
        worst = std::max(worst, tula::testing::relative_gradient_error(m, x));
    }
    EXPECT_LE(worst, 1e-5) << m.name();
}

INSTANTIATE_TEST_SUITE_P(AllModels, FiniteDifferenceConsistency, ::testing::Values(0, 1, 2, 3));
