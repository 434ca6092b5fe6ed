#include "hexwave/analysis.hpp"
#include "hexwave/config.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace hexwave;

TEST(Sweep, TableLevelsExact) {
    const auto& v = sweep_variables();
    ASSERT_EQ(v.size(), 12u);
    std::map<std::string, std::pair<double, double>> ends{
        {"z_dr_p", {-16.0, -24.0}}, {"z_fr_p", {8.0, 12.0}},     {"l_s_p", {22.984, 34.476}}, {"w_xy_p", {1.60, 2.40}},
        {"w_z_p", {0.80, 1.20}},    {"d_c_p", {4.400, 6.600}},   {"l_f", {20.0, 30.0}},       {"h_f", {17.6, 26.4}},
        {"m_f_frac", {0.32, 0.48}}, {"l_t", {62.08, 93.12}},     {"b_b_t", {0.022, 0.032}},   {"b_t_t", {0.015, 0.023}},
    };
    for (const auto& var : v) {
        ASSERT_TRUE(ends.count(var.name)) << var.name;
        EXPECT_EQ(var.levels[0], ends[var.name].first) << var.name;
        EXPECT_EQ(var.levels[8], ends[var.name].second) << var.name;
    }
    EXPECT_EQ(v[2].levels[4], 28.730);
    EXPECT_EQ(v[9].levels[8], 93.12);
}

TEST(Sweep, MiddleLevelIsBaseline) {
    const auto base = DesignVectors::baseline();
    for (const auto& c : generate_sweep())
        if (c.level == 5) EXPECT_TRUE(same_design(c.dv, base)) << c.variable;
}

TEST(Sweep, OneFactorAtATime) {
    const auto base = DesignVectors::baseline();
    const auto cases = generate_sweep();
    ASSERT_EQ(cases.size(), 108u);
    std::set<std::pair<std::string, int>> seen;
    for (const auto& c : cases) {
        EXPECT_TRUE(seen.insert({c.variable, c.level}).second);
        std::set<std::string> changed;
        for (const auto& k : design_keys())
            if (c.dv.*(k.field) != base.*(k.field)) changed.insert(k.name);
        if (c.variable == "m_f_frac") {
            for (const auto& n : changed) EXPECT_TRUE(n == "m_f_frac" || n == "m_p_frac");
        } else {
            EXPECT_LE(changed.size(), 1u) << c.variable << " L" << c.level;
            if (!changed.empty()) EXPECT_EQ(*changed.begin(), c.variable);
        }
    }
    EXPECT_EQ(cases[0].dv.z_dr_p, 16.0);
}

TEST(Sweep, DeterministicAcrossJobCounts) {
    const auto all = generate_sweep();
    std::vector<SensitivityCase> cases{all[6 * 9 + 0], all[6 * 9 + 4], all[9 * 9 + 8]};
    SweepSettings s;
    s.sim.duration = 200.0;
    s.sim.transient_skip = 50.0;
    s.gm_samples = 50;
    const auto a = run_sweep(cases, s, 1);
    const auto b = run_sweep(cases, s, 3);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        EXPECT_EQ(a[i].min_gm, b[i].min_gm);
        EXPECT_EQ(a[i].wec_power_mw, b[i].wec_power_mw);
        EXPECT_EQ(a[i].stress_max_mpa, b[i].stress_max_mpa);
        EXPECT_TRUE(a[i].simulated) << a[i].error;
    }
}

TEST(Sweep, UnstableDesignSkipsSimulation) {
    auto dv = DesignVectors::baseline();
    dv.h_f = 17.6;
    SweepSettings s;
    s.gm_samples = 200;
    const auto m = evaluate_case(dv, s);
    EXPECT_FALSE(m.stable);
    EXPECT_FALSE(m.simulated);
    EXPECT_TRUE(m.error.empty());
}

TEST(Aep, Arithmetic) {
    const auto r = aep(1.92e6, 0.417e6);
    EXPECT_NEAR(r.wind_aep_wh / 1e9, 16.83, 0.01);
    EXPECT_NEAR(r.wave_aep_wh / 1e9, 3.655, 0.001);
    EXPECT_NEAR(r.wave_share, 0.417 / (1.92 + 0.417), 1e-12);
    EXPECT_EQ(aep(0.0, 0.0).wave_share, 0.0);
    EXPECT_THROW(aep(-1.0, 0.0), DomainError);
}

TEST(Aep, ProbabilityWeighting) {
    SeaStatePower a, b;
    a.state.probability = 0.25;
    a.mean_power = 4e5;
    b.state.probability = 0.75;
    b.mean_power = 0.0;
    const auto r = aep(0.0, {a, b}, 100.0);
    EXPECT_NEAR(r.wave_mean_power, 1e5, 1e-9);
    EXPECT_NEAR(r.wave_aep_wh, 1e7, 1e-6);
    EXPECT_EQ(r.wave_share, 1.0);
    b.state.probability = 0.5;
    EXPECT_THROW(aep(0.0, {a, b}), DomainError);
}

TEST(Aep, WindHistogram) {
    const auto c = default_power_curve();
    EXPECT_NEAR(wind_mean_power(c, {12.0, 2.0}, {0.5, 0.5}), 2.5e6, 1e-6);
    EXPECT_THROW(wind_mean_power(c, {12.0}, {0.5}), DomainError);
}

TEST(CaptureWidth, Ratio) {
    EXPECT_NEAR(capture_width_ratio(4e5, 40e3, 25.0), 0.4, 1e-12);
    EXPECT_THROW(capture_width_ratio(1.0, 0.0, 25.0), UndefinedCwrError);
    EXPECT_THROW(capture_width_ratio(1.0, 1.0, 0.0), UndefinedCwrError);
}

namespace {

// y-mirror: sway, roll and yaw change sign, flaps 2 and 3 swap
MatX mirror() {
    MatX P = MatX::Zero(n_dof, n_dof);
    const int perm[n_dof] = {0, 1, 2, 3, 4, 5, 6, 8, 7};
    const double sign[n_dof] = {1, -1, 1, -1, 1, -1, 1, 1, 1};
    for (int i = 0; i < n_dof; ++i) P(i, perm[i]) = sign[i];
    return P;
}

}  // namespace

TEST(Directional, FallbackAsymmetryIsQuadratureError) {
    const MatX P = mirror();
    const double w = 2.0 * pi / 10.04;
    std::vector<double> ex, bx;
    for (int lv : {1, 2, 3}) {
        FallbackOptions o;
        o.quadrature_levels = lv;
        const FallbackHydro h(DesignVectors::baseline(), o);
        const VecXc x = h.excitation(w, 30.0);
        ex.push_back((P.cast<cplx>() * x - h.excitation(w, 330.0)).norm() / x.norm());
        const MatX B = h.damping(w);
        bx.push_back((P * B * P.transpose() - B).norm() / B.norm());
    }
    // midpoint rule: error quarters per subdivision
    for (std::size_t i = 1; i < ex.size(); ++i) {
        EXPECT_NEAR(ex[i - 1] / ex[i], 4.0, 0.2);
        EXPECT_NEAR(bx[i - 1] / bx[i], 4.0, 0.2);
    }
    EXPECT_LT(ex[1], 1e-4);
    const auto sys = PlatformSystem::build(DesignVectors::baseline());
    EXPECT_LT((P * sys.M * P.transpose() - sys.M).norm(), 1e-12 * sys.M.norm());
    EXPECT_LT((P * sys.stiffness() * P.transpose() - sys.stiffness()).norm(), 1e-8 * sys.stiffness().norm());
}

TEST(Directional, MirrorHeadingsGiveMirroredPower) {
    const auto sys = PlatformSystem::build(DesignVectors::baseline());
    SeaStateRun base;
    base.sea = {2.85, 10.04, 3.3, 0.0, 1.0, ""};
    base.wind_speed = 11.35;
    base.seed = 42;
    base.sim.duration = 200.0;
    base.sim.transient_skip = 50.0;
    const auto rows = directional_sweep(sys, {0.0, 30.0, 330.0, 120.0, 240.0}, base, 1);
    for (const auto& r : rows) ASSERT_TRUE(r.error.empty()) << r.error;
    // exact in the model, up to the ~1e-4 quadrature asymmetry of the coefficients
    const double tol = 5e-4;
    const auto& h0 = rows[0];
    EXPECT_NEAR(h0.flap_power[1], h0.flap_power[2], tol * h0.flap_power[1]);
    // flap 1 on the symmetry axis, flaps 2 and 3 swap
    EXPECT_NEAR(rows[1].flap_power[0], rows[2].flap_power[0], tol * rows[1].flap_power[0]);
    EXPECT_NEAR(rows[1].flap_power[1], rows[2].flap_power[2], tol * rows[1].flap_power[1]);
    EXPECT_NEAR(rows[1].total, rows[2].total, tol * rows[1].total);
    EXPECT_NEAR(rows[3].total, rows[4].total, tol * rows[3].total);
    EXPECT_GT(rows[3].flap_power[1], rows[3].flap_power[0]);
    EXPECT_GT(rows[4].flap_power[2], rows[4].flap_power[0]);
}

TEST(Directional, DefaultHeadings) {
    const auto h = default_headings();
    ASSERT_EQ(h.size(), 72u);
    EXPECT_EQ(h.front(), 0.0);
    EXPECT_EQ(h.back(), 355.0);
}

TEST(Parallel, EachIndexOnceAndErrorsPropagate) {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw DomainError("x"); }), DomainError);
    EXPECT_EQ(case_seed(42, 0), 42u);
    EXPECT_EQ(case_seed(42, 3), 41u);
}
