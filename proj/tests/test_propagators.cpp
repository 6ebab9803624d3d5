#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "besov_mhd/propagators.hpp"
#include "test_support.hpp"

using namespace besov_mhd;

namespace {

ScalarField mode_sin(const TorusGrid& g, int k1, int k2, double amp = 1.0) {
    return ScalarField::from_function(g, [=](double x1, double x2) { return amp * std::sin(k1 * x1 + k2 * x2); });
}

double rel_err(const ScalarField& a, const ScalarField& b) {
    return lp_norm(a - b, kInfinity) / std::max(lp_norm(b, kInfinity), 1e-300);
}

}  // namespace

TEST(HeatSemigroup, IdentityEigenfunctionAndSemigroupProperty) {
    const TorusGrid g(32);
    const auto f = testing_support::random_field(g, 3);
    EXPECT_EQ(rel_err(heat_semigroup(f, 0.0), f), 0.0);
    const int n = 5;
    const double t = 0.03;
    const auto s = ScalarField::from_function(g, [&](double, double x2) { return std::sin(n * x2); });
    EXPECT_LT(rel_err(heat_semigroup(s, t), s.scaled(std::exp(-n * n * t))), 1e-12);
    const auto two = heat_semigroup(heat_semigroup(f, 0.011), 0.023);
    EXPECT_LT(lp_norm(two - heat_semigroup(f, 0.034), kInfinity), 1e-12 * lp_norm(f, kInfinity));
    EXPECT_THROW(heat_semigroup(f, -1.0), std::invalid_argument);
}

TEST(SolveHeat, UnforcedMatchesSemigroup) {
    const TorusGrid g(32);
    const auto f0 = mode_sin(g, 3, 0);
    const auto run = solve_heat<ScalarField>(f0, {}, 0.1, 1e-3);
    ASSERT_EQ(run.snapshots.fields.size(), 101u);
    EXPECT_NEAR(run.snapshots.times.back(), 0.1, 1e-15);
    EXPECT_LT(rel_err(run.snapshots.fields.back(), f0.scaled(std::exp(-0.9))), 1e-8);
    EXPECT_THROW(solve_heat<ScalarField>(f0, {}, 0.1, 0.2), std::invalid_argument);
    EXPECT_THROW(solve_heat<ScalarField>(f0, {}, 0.1, -1.0), std::invalid_argument);
}

TEST(SolveHeat, ConstantForcingFillsZeroMode) {
    const TorusGrid g(16);
    const double c = 0.7;
    const auto run = solve_heat<ScalarField>(ScalarField::zero(g), [&](double) { return ScalarField::constant(g, c); },
                                             0.5, 0.01);
    for (std::size_t i = 0; i < run.snapshots.times.size(); ++i)
        EXPECT_NEAR(run.snapshots.fields[i].mean(), c * run.snapshots.times[i], 1e-14);
}

TEST(SolveHeat, ManufacturedSolutions) {
    const TorusGrid g(32);
    // u = e^{-t} sin x1 solves the unforced equation.
    {
        const auto run = solve_heat<ScalarField>(mode_sin(g, 1, 0), {}, 1.0, 1e-3);
        EXPECT_LT(rel_err(run.snapshots.fields.back(), mode_sin(g, 1, 0, std::exp(-1.0))), 1e-8);
    }
    // u = cos(3t) sin(2 x1 + x2): G = (-3 sin 3t + 5 cos 3t) sin(2 x1 + x2).
    const auto shape = mode_sin(g, 2, 1);
    const Forcing<ScalarField> G = [&](double t) { return shape.scaled(-3 * std::sin(3 * t) + 5 * std::cos(3 * t)); };
    const auto run = solve_heat(shape, G, 1.0, 1e-3);
    for (std::size_t i = 0; i < run.snapshots.times.size(); i += 100)
        EXPECT_LT(lp_norm(run.snapshots.fields[i] - shape.scaled(std::cos(3 * run.snapshots.times[i])), kInfinity), 1e-8);
}

TEST(SolveHeat, FourthOrderInTime) {
    const TorusGrid g(16);
    const auto shape = mode_sin(g, 2, 1);
    const Forcing<ScalarField> G = [&](double t) { return shape.scaled(-3 * std::sin(3 * t) + 5 * std::cos(3 * t)); };
    std::vector<double> errs;
    for (double dt : {0.1, 0.05, 0.025}) {
        const auto run = solve_heat(shape, G, 1.0, dt);
        errs.push_back(lp_norm(run.snapshots.fields.back() - shape.scaled(std::cos(3.0)), kInfinity));
    }
    EXPECT_GE(std::log2(errs[0] / errs[1]), 3.8);
    EXPECT_GE(std::log2(errs[1] / errs[2]), 3.8);
}

TEST(SolveHeat, VectorFields) {
    const TorusGrid g(16);
    const auto v = testing_support::random_solenoidal(g, 5, 4);
    const auto run = solve_heat<VectorField2>(v, {}, 0.2, 0.01);
    EXPECT_LT(lp_norm(run.snapshots.fields.back() - heat_semigroup(v, 0.2), kInfinity), 1e-12);
}

TEST(SolveTransport, NoDynamicsAndTranslation) {
    const TorusGrid g(32);
    const auto f0 = testing_support::random_field(g, 9, 6);
    const auto still = solve_transport<ScalarField>(f0, {}, {}, 0.3, 0.01);
    EXPECT_EQ(lp_norm(still.snapshots.fields.back() - f0, kInfinity), 0.0);

    const auto uniform = VectorField2(ScalarField::constant(g, 1.0), ScalarField::zero(g));
    const auto run = solve_transport<ScalarField>(mode_sin(g, 1, 0), [&](double) { return uniform; }, {}, 1.0, 1e-3);
    const auto expect = ScalarField::from_function(g, [](double x1, double) { return std::sin(x1 - 1.0); });
    EXPECT_LT(lp_norm(run.snapshots.fields.back() - expect, kInfinity), 1e-8);
}

TEST(SolveTransport, RejectsCompressibleVelocity) {
    const TorusGrid g(16);
    const auto grad = gradient(mode_sin(g, 1, 1));
    EXPECT_THROW(solve_transport<ScalarField>(mode_sin(g, 1, 0), [&](double) { return grad; }, {}, 0.1, 0.01),
                 std::invalid_argument);
}

TEST(SolveTransport, ForcingOnlyIsQuadrature) {
    const TorusGrid g(16);
    const auto shape = mode_sin(g, 1, 2);
    const auto run = solve_transport<ScalarField>(ScalarField::zero(g), {},
                                                  [&](double t) { return shape.scaled(std::cos(t)); }, 1.0, 0.01);
    EXPECT_LT(lp_norm(run.snapshots.fields.back() - shape.scaled(std::sin(1.0)), kInfinity), 1e-10);
}

TEST(SolveTransport, ConservesL2AndBoundsSup) {
    const TorusGrid g(128);
    const double amp = 0.5;
    const VectorField2 rot(ScalarField::from_function(g, [&](double, double x2) { return -amp * std::sin(x2); }),
                           ScalarField::from_function(g, [&](double x1, double) { return amp * std::sin(x1); }));
    const auto f0 = ScalarField::from_function(g, [](double x1, double x2) { return std::cos(2 * x1) * std::sin(x2); });
    const double T = 1.0;
    const auto run = solve_transport<ScalarField>(f0, [&](double) { return rot; }, {}, T, 1e-2);
    const double l2_0 = lp_norm(f0, 2.0), sup0 = lp_norm(f0, kInfinity);
    double worst_l2 = 0.0, worst_sup = 0.0;
    for (const auto& f : run.snapshots.fields) {
        worst_l2 = std::max(worst_l2, std::abs(lp_norm(f, 2.0) - l2_0) / l2_0);
        worst_sup = std::max(worst_sup, lp_norm(f, kInfinity) / sup0 - 1.0);
    }
    EXPECT_LT(worst_l2, 1e-6 * T);
    EXPECT_LT(worst_sup, 0.01);
}

TEST(SmoothingRatio, StableUnderRefinementAndForcingOnly) {
    const double T = 0.5, dt = 0.005;
    double r64 = 0.0, r128 = 0.0;
    for (int n : {64, 128}) {
        const TorusGrid g(n);
        const auto bank = build_filter_bank(g);
        const auto u0 = ScalarField::from_function(g, [](double x1, double) { return std::sin(4 * x1); });
        const auto rep = smoothing_ratio_report<ScalarField>(u0, {}, T, dt, 1.0, 1.0, BesovParams(0, 2, 1), bank);
        EXPECT_GT(rep.ratio, 0.0);
        (n == 64 ? r64 : r128) = rep.ratio;
    }
    EXPECT_NEAR(r128 / r64, 1.0, 0.1);

    const TorusGrid g(32);
    const auto bank = build_filter_bank(g);
    const auto shape = mode_sin(g, 3, 1);
    const auto rep = smoothing_ratio_report<ScalarField>(ScalarField::zero(g), [&](double) { return shape; }, T, dt, 2.0,
                                                         1.0, BesovParams(0, 2, 1), bank);
    EXPECT_EQ(rep.data_norm, 0.0);
    EXPECT_GT(rep.forcing_norm, 0.0);
    EXPECT_GT(rep.ratio, 0.0);
    EXPECT_THROW(smoothing_ratio_report<ScalarField>(ScalarField::zero(g), {}, T, dt, 1.0, 1.0, BesovParams(0, 2, 1), bank),
                 std::domain_error);
    EXPECT_THROW(smoothing_ratio_report<ScalarField>(shape, {}, T, dt, 1.0, 2.0, BesovParams(0, 2, 1), bank),
                 std::invalid_argument);
}

TEST(SmoothingRatio, MeanZeroDataBoundedInT) {
    const TorusGrid g(32);
    const auto bank = build_filter_bank(g);
    const auto u0 = testing_support::random_field(g, 17, 6);
    const auto mean_free = u0 - ScalarField::constant(g, u0.mean());
    std::vector<double> ratios;
    for (double T : {1.0, 4.0, 16.0})
        ratios.push_back(
            smoothing_ratio_report<ScalarField>(mean_free, {}, T, 0.01, 1.0, 1.0, BesovParams(0, 2, 1), bank).ratio);
    // Saturates once the slowest mode has decayed.
    EXPECT_LT(ratios[2] / ratios[1], 1.01);
    EXPECT_LT(ratios[1] / ratios[0], 1.1);
    // With a mean the time integral grows linearly in T.
    const auto with_mean = mean_free + ScalarField::constant(g, 1.0);
    const double r4 =
        smoothing_ratio_report<ScalarField>(with_mean, {}, 4.0, 0.01, 1.0, 1.0, BesovParams(0, 2, 1), bank).ratio;
    const double r16 =
        smoothing_ratio_report<ScalarField>(with_mean, {}, 16.0, 0.01, 1.0, 1.0, BesovParams(0, 2, 1), bank).ratio;
    EXPECT_GT(r16 / r4, 1.1);
}

TEST(TransportEstimate, NoVelocityAndRigidTranslation) {
    const TorusGrid g(32);
    const auto bank = build_filter_bank(g);
    const BesovParams bp(1.0, 2.0, 1.0);
    const auto shape = mode_sin(g, 2, 1);
    const Forcing<ScalarField> force = [&](double t) { return shape.scaled(std::cos(t)); };
    const auto f0 = testing_support::random_field(g, 4, 5);
    const auto run = solve_transport(f0, {}, force, 1.0, 0.01);
    const auto rep = transport_estimate_report(run, {}, force, bp, bank);
    EXPECT_LE(rep.max_ratio_linear, 1.0 + 1e-9);

    const auto uniform = VectorField2(ScalarField::constant(g, 1.0), ScalarField::zero(g));
    const VelocityField v = [&](double) { return uniform; };
    const auto shift = solve_transport<ScalarField>(f0, v, {}, 1.0, 0.01);
    const auto rs = transport_estimate_report<ScalarField>(shift, v, {}, bp, bank);
    for (std::size_t i = 0; i < rs.norm.size(); ++i) EXPECT_NEAR(rs.norm[i], rs.norm[0], 1e-6 * rs.norm[0]);
    EXPECT_NEAR(rs.ratio_linear.back(), 1.0, 1e-6);
}

TEST(TransportEstimate, ShearStableUnderDtHalving) {
    const TorusGrid g(32);
    const auto bank = build_filter_bank(g);
    const BesovParams bp(1.0, 2.0, 1.0);
    const VectorField2 shear(ScalarField::from_function(g, [](double, double x2) { return 0.4 * std::sin(x2); }),
                             ScalarField::zero(g));
    const VelocityField v = [&](double) { return shear; };
    const auto f0 = mode_sin(g, 1, 0);
    double prev = 0.0;
    for (double dt : {0.02, 0.01}) {
        const auto run = solve_transport<ScalarField>(f0, v, {}, 1.0, dt);
        const auto rep = transport_estimate_report<ScalarField>(run, v, {}, bp, bank);
        EXPECT_TRUE(std::isfinite(rep.max_ratio_linear));
        EXPECT_GT(rep.max_ratio_exp_endpoint, 0.0);
        if (prev > 0.0) {
            EXPECT_NEAR(rep.max_ratio_linear / prev, 1.0, 1e-4);
        }
        prev = rep.max_ratio_linear;
    }
}
