#include <gtest/gtest.h>

#include <cmath>

#include "besov_mhd/diagnostics.hpp"
#include "besov_mhd/initial_data.hpp"
#include "test_support.hpp"

using namespace besov_mhd;

namespace {

MHDState small_remark(const TorusGrid& g, double target) {
    const DyadicFilterBank bank(g);
    const auto s = remark15_data(g, 4);
    return remark15_data(g, 4, target / critical_smallness(s.u, s.b, bank));
}

MHDState random_mhd(const TorusGrid& g, std::uint64_t seed, double scale, bool magnetic = true) {
    InitialDataSpec sp;
    sp.kind = InitialDataKind::random_solenoidal;
    sp.seed = seed;
    sp.scale = scale;
    sp.with_magnetic = magnetic;
    return make_initial_data(sp, g);
}

RunResult recorded_run(const MHDState& s, double T, double dt, int every, double p = 2.0) {
    RunOptions opt;
    opt.record_every = every;
    opt.p = p;
    opt.keep_trajectory = false;
    return run(s, T, dt, opt);
}

}  // namespace

TEST(EnergyIdentity, EulerLimitConservesEnergy) {
    const TorusGrid g(32);
    const auto r = recorded_run(random_mhd(g, 11, 0.5, false), 1.0, 0.01, 10);
    const auto rep = energy_identity_residual(r.diagnostics);
    EXPECT_FALSE(rep.absolute);
    EXPECT_LT(rep.max_abs_residual, 1e-6);
}

TEST(EnergyIdentity, FourthOrderUnderRefinement) {
    const TorusGrid g(32);
    const auto s = random_mhd(g, 12, 2.0);
    std::vector<double> res;
    for (double dt : {0.02, 0.01, 0.005}) res.push_back(std::abs(energy_identity_residual(recorded_run(s, 1.0, dt, 1).diagnostics).final_residual));
    EXPECT_LT(res.back(), 1e-6) << res[0] << ' ' << res[1];
    EXPECT_GE(std::log2(res[1] / res[2]), 3.5);
}

TEST(EnergyIdentity, ZeroEnergyIsAbsoluteAndShortRecordRejected) {
    const TorusGrid g(16);
    const auto r = recorded_run(MHDState::zero(g), 0.1, 0.05, 1);
    const auto rep = energy_identity_residual(r.diagnostics);
    EXPECT_TRUE(rep.absolute);
    EXPECT_EQ(rep.final_residual, 0.0);
    const auto single = recorded_run(MHDState::zero(g), 0.0, 0.05, 1);
    EXPECT_THROW(energy_identity_residual(single.diagnostics), std::invalid_argument);
}

TEST(FitDecayRate, SyntheticSeries) {
    std::vector<double> t, e, c;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(0.1 * i);
        e.push_back(std::exp(-3.0 * t.back()));
        c.push_back(2.5);
    }
    const auto f = fit_decay_rate(t, e, 1.0, 8.0);
    EXPECT_NEAR(f.rate, 3.0, 1e-10);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
    EXPECT_FALSE(f.truncated);
    const auto fc = fit_decay_rate(t, c, 1.0, 8.0);
    EXPECT_NEAR(fc.rate, 0.0, 1e-14);
    EXPECT_EQ(fc.r_squared, 1.0);
}

TEST(FitDecayRate, NonpositiveValuesTruncateWindow) {
    std::vector<double> t, v;
    for (int i = 0; i <= 20; ++i) {
        t.push_back(0.5 * i);
        v.push_back(i < 12 ? std::exp(-t.back()) : 0.0);
    }
    const auto f = fit_decay_rate(t, v, 1.0, 9.0);
    EXPECT_TRUE(f.truncated);
    EXPECT_EQ(f.window_end, 6.0);
    EXPECT_NEAR(f.rate, 1.0, 1e-12);
    EXPECT_THROW(fit_decay_rate(t, v, 7.0, 9.0), std::invalid_argument);
}

TEST(FitDecayRate, SmallDataRateIsPositiveAndStable) {
    const TorusGrid g(32);
    const auto r = recorded_run(small_remark(g, 0.05), 4.0, 0.01, 5, kInfinity);
    const auto t = r.diagnostics.column(&DiagnosticsRow::t), b = r.diagnostics.column(&DiagnosticsRow::b_l2);
    const auto early = fit_decay_rate(t, b, 1.0, 2.0), late = fit_decay_rate(t, b, 2.0, 4.0);
    EXPECT_GT(early.rate, 0.0);
    EXPECT_NEAR(late.rate / early.rate, 1.0, 0.1);
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] > 0.5) {
            EXPECT_LE(b[i], b[i - 1]);
        }
}

TEST(BootstrapMonitor, ZeroMagneticFieldNeverCrosses) {
    const TorusGrid g(16);
    const auto r = recorded_run(random_mhd(g, 3, 0.5, false), 0.5, 0.01, 5);
    const auto rep = bootstrap_monitor(r.diagnostics);
    EXPECT_FALSE(rep.crossed);
    EXPECT_EQ(rep.peak, 0.0);
    EXPECT_THROW(bootstrap_monitor(r.diagnostics, 0.0), std::invalid_argument);
}

TEST(BootstrapMonitor, LowThresholdReportsCrossing) {
    const TorusGrid g(32);
    const auto r = recorded_run(random_mhd(g, 4, 2.0), 1.0, 0.005, 10, kInfinity);
    const auto rep = bootstrap_monitor(r.diagnostics, 0.5);
    EXPECT_TRUE(rep.crossed);
    EXPECT_TRUE(std::isfinite(rep.crossing_time));
    EXPECT_LE(rep.sum_crossing_time, rep.crossing_time);
    // the monitor is rebuilt from the stored columns
    double sup = 0.0;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        sup = std::max(sup, r.diagnostics.rows[i].b_b0inf1);
        EXPECT_EQ(rep.sum_form[i], sup + r.diagnostics.rows[i].run_b_b2inf1);
    }
}

TEST(BootstrapMonitor, SmallDataStaysBelowFourTimesInitialSize) {
    const TorusGrid g(32);
    const auto r = recorded_run(small_remark(g, 0.05), 20.0, 0.01, 10, kInfinity);
    const auto start = bootstrap_monitor(r.diagnostics).max_form.front();
    EXPECT_FALSE(bootstrap_monitor(r.diagnostics, 4.0 * start).crossed);
}

TEST(VorticityMonitor, EulerVorticitySupIsConserved) {
    const TorusGrid g(128);
    const auto r = recorded_run(random_mhd(g, 3, 1.0, false), 1.0, 0.002, 25, kInfinity);
    EXPECT_LT(vorticity_bound_monitor(r.diagnostics, 0.0).w_linf_drift, 0.01);
}

TEST(VorticityMonitor, SmallDataEnvelopeAndRatio) {
    const TorusGrid g(32);
    const auto s = small_remark(g, 0.05);
    const DyadicFilterBank bank(g);
    const auto r = recorded_run(s, 5.0, 0.01, 10, kInfinity);
    const auto rep = vorticity_bound_monitor(r.diagnostics, besov_norm(s.u, BesovParams(1.0, kInfinity, 1.0), bank));
    EXPECT_LT(rep.envelope_c, 0.1);
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        EXPECT_LE(rep.w_b0inf1[i], rep.envelope_c * std::exp(rep.envelope_c * rep.times[i]) * (1.0 + 1e-12));
    EXPECT_TRUE(std::isfinite(rep.max_ratio));
    EXPECT_LT(rep.max_ratio, 10.0);
}

TEST(Poincare, MeanZeroFieldsSatisfyUnitConstant) {
    const TorusGrid g(32);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto b = testing_support::random_solenoidal(g, seed, 10);
        b = b - VectorField2(ScalarField::constant(g, b.x().mean()), ScalarField::constant(g, b.y().mean()));
        EXPECT_LE(spectral_l2(b), homogeneous_h1(b) * (1.0 + 1e-13));
    }
    const auto e = trig_mode(g, 1, 1, 1.0);
    EXPECT_NEAR(spectral_l2(e), homogeneous_h1(e), 1e-13);
}

TEST(StabilityExperiment, ZeroDeltaGivesZeroDifference) {
    const TorusGrid g(16);
    const auto s = random_mhd(g, 1, 0.5), d = random_mhd(g, 2, 0.5);
    const auto ex = stability_experiment(s.u, s.b, d.u, d.b, 0.0, 0.2, 0.01, 2.0, 5);
    EXPECT_EQ(ex.strong_norm, 0.0);
    EXPECT_EQ(ex.weak_norm, 0.0);
    EXPECT_GT(ex.A_T, 0.0);
    const auto z = VectorField2::zero(g);
    EXPECT_THROW(stability_experiment(s.u, s.b, z, z, 1e-3, 0.2, 0.01, 2.0), std::invalid_argument);
}

TEST(StabilityExperiment, DeltaHalvingSweep) {
    const TorusGrid g(32);
    const auto s = random_mhd(g, 5, 0.5), d = random_mhd(g, 6, 0.5);
    std::vector<double> deltas{1e-2, 5e-3, 2.5e-3}, weak, strong;
    for (double delta : deltas) {
        const auto ex = stability_experiment(s.u, s.b, d.u, d.b, delta, 1.0, 0.01, 2.0, 10);
        EXPECT_FALSE(ex.partial);
        EXPECT_NEAR(ex.weak_data, delta, 1e-12 * delta);
        weak.push_back(ex.weak_ratio);
        strong.push_back(ex.strong_ratio);
    }
    for (double w : weak) EXPECT_NEAR(w / weak.front(), 1.0, 0.2);
    EXPECT_LT(fitted_delta_exponent(deltas, strong), 0.2);
}
