#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "besov_mhd/mhd.hpp"
#include "test_support.hpp"

using namespace besov_mhd;

namespace {

using Mode = std::pair<int, int>;
using Modes = std::map<Mode, Complex>;

Modes modes_of(const ScalarField& f) {
    Modes m;
    const int h = f.grid().n() / 2;
    for (int a = -h + 1; a < h; ++a)
        for (int b = -h + 1; b < h; ++b) {
            const Complex c = f.coefficient(a, b);
            if (std::abs(c) > 1e-14) m[{a, b}] = c;
        }
    return m;
}

// (v . grad w)^(k) = sum_{p+q=k} sum_j v_j(p) i q_j w(q), summed directly.
std::array<Modes, 2> advective(const VectorField2& v, const VectorField2& w) {
    const Modes v1 = modes_of(v.x()), v2 = modes_of(v.y());
    std::array<Modes, 2> out;
    for (int comp = 0; comp < 2; ++comp) {
        const Modes wc = modes_of(w[comp]);
        for (const auto& [q, wq] : wc) {
            for (const auto& [p, vp] : v1) out[comp][{p.first + q.first, p.second + q.second}] += vp * Complex(0, q.first) * wq;
            for (const auto& [p, vp] : v2) out[comp][{p.first + q.first, p.second + q.second}] += vp * Complex(0, q.second) * wq;
        }
    }
    return out;
}

Complex at(const Modes& m, int a, int b) {
    const auto it = m.find({a, b});
    return it == m.end() ? Complex{} : it->second;
}

VectorField2 cos_mode(const TorusGrid& g, int k1, int k2, double amp) {
    // amplitude vector orthogonal to k
    return {ScalarField::from_function(g, [=](double x, double y) { return amp * k2 * std::cos(k1 * x + k2 * y); }),
            ScalarField::from_function(g, [=](double x, double y) { return -amp * k1 * std::cos(k1 * x + k2 * y); })};
}

double state_distance(const MHDState& a, const MHDState& b) {
    return spectral_l2(a.u - b.u) + spectral_l2(a.b - b.b);
}

MHDState random_state(const TorusGrid& g, std::uint64_t seed, int band, double scale) {
    const auto b = testing_support::random_solenoidal(g, seed + 7, band);
    const VectorField2 b0(b.x() - ScalarField::constant(g, b.x().mean()), b.y() - ScalarField::constant(g, b.y().mean()));
    return {testing_support::random_solenoidal(g, seed, band).scaled(scale), b0.scaled(scale), 0.0};
}

}  // namespace

TEST(MhdRhs, ElsasserDegenerateStateHasNoNonlinearity) {
    const TorusGrid g(32);
    const auto v = testing_support::random_solenoidal(g, 5, 6);
    const auto tend = rhs({v, v, 0.0});
    EXPECT_EQ(spectral_l2(tend.du), 0.0);
    EXPECT_EQ(spectral_l2(tend.db_nonlinear), 0.0);
    EXPECT_LT(spectral_l2(tend.db() - VectorField2(laplacian(v.x()), laplacian(v.y()))), 1e-12 * spectral_l2(tend.db()));
}

TEST(MhdRhs, ZeroMagneticFieldGivesEulerTendency) {
    const TorusGrid g(32);
    const auto u = testing_support::random_solenoidal(g, 8, 5);
    const auto tend = rhs({u, VectorField2::zero(g), 0.0});
    EXPECT_EQ(spectral_l2(tend.db()), 0.0);
    // -P(u . grad u) in advective form
    const auto adv = VectorField2(ScalarField::from_coefficients(g, detail::advect(g, u.x().values(), u.y().values(), u.x().coefficients())),
                                  ScalarField::from_coefficients(g, detail::advect(g, u.x().values(), u.y().values(), u.y().coefficients())));
    const auto expected = leray_project(adv).scaled(-1.0);
    EXPECT_LT(spectral_l2(tend.du - expected), 1e-11 * spectral_l2(expected));
}

TEST(MhdRhs, MatchesDirectConvolutionSums) {
    const TorusGrid g(16);
    for (int cutoff_active = 0; cutoff_active < 2; ++cutoff_active) {
        // The second case produces modes beyond n/3, which must be removed.
        const int s = cutoff_active ? 2 : 1;
        const VectorField2 u = cos_mode(g, 1, 2, 0.7) + cos_mode(g, s * 2, -1, 0.3);
        const VectorField2 b = cos_mode(g, 3, -1, 0.5) + cos_mode(g, 0, s, 0.9);
        const auto tend = rhs({u, b, 0.0});

        const auto bb = advective(b, b), uu = advective(u, u), bu = advective(b, u), ub = advective(u, b);
        const int h = g.n() / 2;
        double max_err = 0.0, max_val = 0.0;
        for (int a = -h + 1; a < h; ++a)
            for (int c = -h + 1; c < h; ++c) {
                Complex f1 = at(bb[0], a, c) - at(uu[0], a, c), f2 = at(bb[1], a, c) - at(uu[1], a, c);
                Complex g1 = at(bu[0], a, c) - at(ub[0], a, c), g2 = at(bu[1], a, c) - at(ub[1], a, c);
                if (3 * std::max(std::abs(a), std::abs(c)) > g.n()) f1 = f2 = g1 = g2 = 0.0;
                const double k2 = a * a + c * c;
                if (k2 > 0) {
                    const Complex dot = (double(a) * f1 + double(c) * f2) / k2;
                    f1 -= double(a) * dot;
                    f2 -= double(c) * dot;
                }
                const Complex got[] = {tend.du.x().coefficient(a, c), tend.du.y().coefficient(a, c),
                                       tend.db_nonlinear.x().coefficient(a, c), tend.db_nonlinear.y().coefficient(a, c)};
                const Complex want[] = {f1, f2, g1, g2};
                for (int i = 0; i < 4; ++i) {
                    max_err = std::max(max_err, std::abs(got[i] - want[i]));
                    max_val = std::max(max_val, std::abs(want[i]));
                }
            }
        EXPECT_GT(max_val, 0.1);
        EXPECT_LT(max_err, 1e-10) << "case " << cutoff_active;
    }
}

TEST(MhdRhs, TendencyOfBHasZeroMeanAndDivergence) {
    const TorusGrid g(32);
    const auto s = random_state(g, 21, 8, 1.0);
    const auto tend = rhs(s);
    EXPECT_EQ(tend.db_nonlinear.x().mean(), 0.0);
    EXPECT_EQ(tend.db_nonlinear.y().mean(), 0.0);
    EXPECT_LT(divergence_residual(tend.db_nonlinear), 1e-13);
    EXPECT_LT(divergence_residual(tend.du), 1e-13);
}

TEST(MhdStep, ZeroStateIsFixedPoint) {
    const TorusGrid g(16);
    const auto s = step(MHDState::zero(g), 0.1);
    EXPECT_EQ(spectral_l2(s.u) + spectral_l2(s.b), 0.0);
    EXPECT_DOUBLE_EQ(s.t, 0.1);
    EXPECT_THROW(step(MHDState::zero(g), 0.0), std::invalid_argument);
}

TEST(MhdStep, EulerEnergyConserved) {
    const TorusGrid g(64);
    const auto u = testing_support::random_solenoidal(g, 33, 4);
    const MHDState s0{u.scaled(1.0 / spectral_l2(u) * 3.0), VectorField2::zero(g), 0.0};
    RunOptions opt;
    opt.record_every = 100;
    const auto res = run(s0, 1.0, 1e-3, opt);
    ASSERT_FALSE(res.blew_up);
    const double e0 = res.diagnostics.rows.front().energy;
    for (const auto& r : res.diagnostics.rows) EXPECT_LT(std::abs(r.energy - e0), 1e-8 * e0);
}

TEST(MhdStep, FourthOrderInTime) {
    const TorusGrid g(32);
    const auto s0 = random_state(g, 41, 3, 0.25);
    const double T = 0.4;
    RunOptions opt;
    opt.record_every = 1000000;
    const auto ref = run(s0, T, 0.0003125, opt).trajectory.back();
    std::vector<double> err;
    for (double dt : {0.005, 0.0025, 0.00125}) err.push_back(state_distance(run(s0, T, dt, opt).trajectory.back(), ref));
    const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
    EXPECT_GE(o1, 3.8) << err[0] << " " << err[1];
    EXPECT_GE(o2, 3.8) << err[1] << " " << err[2];
}

TEST(MhdStep, NonFiniteStateRaisesBlowUp) {
    const TorusGrid g(16);
    auto u = cos_mode(g, 1, 1, 1.0);
    std::vector<double> v = u.x().values();
    v[3] = std::nan("");
    const MHDState s{VectorField2(ScalarField::from_values(g, v), u.y()), VectorField2::zero(g), 0.5};
    try {
        step(s, 0.01);
        FAIL() << "expected BlowUp";
    } catch (const BlowUp& e) {
        EXPECT_DOUBLE_EQ(e.last_state().t, 0.5);
    }
}

TEST(MhdRun, ZeroDurationGivesSingleRow) {
    const TorusGrid g(16);
    const auto s0 = random_state(g, 2, 3, 0.1);
    const auto res = run(s0, 0.0, 0.01);
    ASSERT_EQ(res.diagnostics.rows.size(), 1u);
    ASSERT_EQ(res.trajectory.size(), 1u);
    EXPECT_EQ(res.steps, 0);
    EXPECT_EQ(state_distance(res.trajectory[0], s0), 0.0);
    EXPECT_FALSE(res.blew_up);
}

TEST(MhdRun, RecordCadenceAndRunningIntegrals) {
    const TorusGrid g(32);
    const auto s0 = random_state(g, 12, 4, 0.2);
    RunOptions opt;
    opt.record_every = 7;
    const auto res = run(s0, 0.5, 0.01, opt);
    const auto& rows = res.diagnostics.rows;
    ASSERT_EQ(rows.size(), 1u + 50 / 7 + 1);
    EXPECT_NEAR(rows.back().t, 0.5, 1e-12);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_GE(rows[i].run_b_b2inf1, rows[i - 1].run_b_b2inf1);
        EXPECT_GE(rows[i].grad_b_l2_sq_int, rows[i - 1].grad_b_l2_sq_int);
    }
    EXPECT_LT(res.max_div_u, 1e-12);
    EXPECT_LT(res.max_div_b, 1e-12);
    EXPECT_LT(res.max_abs_mean_b, 1e-13);
    EXPECT_EQ(res.reprojections, 0);
}

TEST(MhdRun, HugeDataAtCoarseStepBlowsUp) {
    const TorusGrid g(32);
    const auto s0 = random_state(g, 77, 10, 1e3);
    const auto res = run(s0, 10.0, 0.1);
    ASSERT_TRUE(res.blew_up);
    EXPECT_TRUE(std::isfinite(res.termination_time));
    EXPECT_LT(res.termination_time, 10.0);
    EXPECT_FALSE(res.blowup_reason.empty());
    for (const auto& r : res.diagnostics.rows) EXPECT_TRUE(std::isfinite(r.energy));
}

TEST(DiagnosticsCsv, RoundTripsExactly) {
    const TorusGrid g(16);
    RunOptions opt;
    opt.record_every = 3;
    const auto res = run(random_state(g, 9, 3, 0.3), 0.3, 0.01, opt);
    std::stringstream ss;
    write_diagnostics_csv(ss, res.diagnostics);
    const std::string text = ss.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), kDiagnosticsHeader);
    const auto back = read_diagnostics_csv(ss);
    ASSERT_EQ(back.rows.size(), res.diagnostics.rows.size());
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        EXPECT_EQ(back.rows[i].t, res.diagnostics.rows[i].t);
        EXPECT_EQ(back.rows[i].besov_u, res.diagnostics.rows[i].besov_u);
        EXPECT_EQ(back.rows[i].run_b_b2inf1, res.diagnostics.rows[i].run_b_b2inf1);
        EXPECT_EQ(back.rows[i].cfl, res.diagnostics.rows[i].cfl);
    }
    std::stringstream bad("t,energy\n1,2\n");
    EXPECT_THROW(read_diagnostics_csv(bad), std::runtime_error);
}
