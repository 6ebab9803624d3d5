#include <gtest/gtest.h>

#include <cmath>

#include "besov_mhd/lifespan.hpp"
#include "besov_mhd/picard.hpp"
#include "test_support.hpp"

using namespace besov_mhd;

namespace {

// Crossed shear pair: u = (0, A sin 8 x1), b = (B sin 8 x2, 0).
std::pair<VectorField2, VectorField2> crossed(const TorusGrid& g, double A, double B) {
    return {VectorField2(ScalarField::zero(g), ScalarField::from_function(g, [=](double x, double) { return A * std::sin(8 * x); })),
            VectorField2(ScalarField::from_function(g, [=](double, double y) { return B * std::sin(8 * y); }), ScalarField::zero(g))};
}

}  // namespace

TEST(Picard, ZeroDataGivesZeroIterates) {
    const TorusGrid g(16);
    const DyadicFilterBank bank(g);
    const auto it = picard_iterate(VectorField2::zero(g), VectorField2::zero(g), 3, 0.1, 0.01);
    ASSERT_EQ(it.size(), 4u);
    for (std::size_t n = 0; n < it.size(); ++n)
        for (std::size_t k = 0; k < it.times.size(); ++k) EXPECT_EQ(spectral_l2(it.u[n][k]) + spectral_l2(it.b[n][k]), 0.0);
    for (double d : picard_convergence_report(it, 2.0, bank).d) EXPECT_EQ(d, 0.0);
}

TEST(Picard, BaseIterateIsHeatFlow) {
    const TorusGrid g(32);
    const auto u0 = testing_support::random_solenoidal(g, 3, 6), b0 = testing_support::random_solenoidal(g, 4, 6);
    const auto it = picard_iterate(u0, b0, 0, 0.2, 0.01, 5);
    ASSERT_EQ(it.size(), 1u);
    ASSERT_EQ(it.times.size(), 5u);
    EXPECT_EQ(it.truncation_levels[0], -1);
    for (std::size_t k = 0; k < it.times.size(); ++k) {
        EXPECT_LT(spectral_l2(it.u[0][k] - heat_semigroup(u0, it.times[k])), 1e-12 * spectral_l2(u0));
        EXPECT_LT(spectral_l2(it.b[0][k] - heat_semigroup(b0, it.times[k])), 1e-12 * spectral_l2(b0));
    }
}

TEST(Picard, IteratesStartFromTruncatedData) {
    const TorusGrid g(32);
    const DyadicFilterBank bank(g);
    const auto u0 = testing_support::random_solenoidal(g, 8, 10), b0 = testing_support::random_solenoidal(g, 9, 10);
    const auto it = picard_iterate(u0, b0, 3, 0.01, 0.01);
    EXPECT_EQ(it.truncation_levels, (std::vector<int>{-1, 1, 2, 3}));
    for (int m = 1; m <= 3; ++m) {
        EXPECT_LT(spectral_l2(it.u[m][0] - low_freq_cutoff(u0, m, bank)), 1e-14);
        EXPECT_LT(spectral_l2(it.b[m][0] - low_freq_cutoff(b0, m, bank)), 1e-14);
    }
}

TEST(Picard, ContractsTowardNonlinearSolution) {
    const TorusGrid g(32);
    const DyadicFilterBank bank(g);
    const double p = kInfinity;
    const auto [u0, b0] = crossed(g, 1e-3, 1e-3);
    const auto life = compute_lifespan(u0, b0, p, 10.0, bank);
    ASSERT_EQ(life.branch, LifespanBranch::small_data);
    const int steps = 30;
    const double dt = life.T / steps;
    const auto it = picard_iterate(u0, b0, 7, life.T, dt, 1, life.T);
    EXPECT_TRUE(it.warning.empty());
    const auto rep = picard_convergence_report(it, p, bank);
    ASSERT_EQ(rep.d.size(), 7u);
    for (int n = 2; n <= 5; ++n) EXPECT_LE(rep.d[n + 1], 0.9 * rep.d[n]) << "n = " << n;

    const auto ref = run({u0, b0, 0.0}, life.T, dt);
    EXPECT_LT(picard_relative_distance(it, 6, ref.trajectory, p, bank), 1e-4);

    const double e0 = compute_E0(u0, b0, p, bank);
    for (double h : rep.h1) EXPECT_LE(h, 6.0 * e0);
    for (double a : rep.b_AT) EXPECT_LE(a, 2.0 * life.a);
}

TEST(Picard, WarnsBeyondLifespanAndRejectsBadInput) {
    const TorusGrid g(16);
    const auto z = VectorField2::zero(g);
    EXPECT_FALSE(picard_iterate(z, z, 1, 0.1, 0.05, 1, 0.05).warning.empty());
    EXPECT_THROW(picard_iterate(z, z, -1, 0.1, 0.05), std::invalid_argument);
    EXPECT_THROW(picard_iterate(z, z, 1, 0.1, 0.03), std::invalid_argument);
    const auto it = picard_iterate(z, z, 0, 0.1, 0.05);
    EXPECT_THROW(picard_convergence_report(it, 2.0, DyadicFilterBank(g)), std::invalid_argument);
}
