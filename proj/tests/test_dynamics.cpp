#include "hexwave/system.hpp"
#include "sdof.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace hexwave;
using hexwave::testing::Sdof;

namespace {

SimOptions sdof_options(double duration, double dt = 0.05) {
    SimOptions o;
    o.duration = duration;
    o.dt = dt;
    o.transient_skip = duration / 2.0;
    o.ramp = 0.0;
    return o;
}

const PlatformSystem& baseline_system() {
    static const PlatformSystem sys = PlatformSystem::build(DesignVectors::baseline());
    return sys;
}

SeaStateRun baseline_run(double dt = 0.05) {
    SeaStateRun r;
    r.sea = {2.85, 10.04, 3.3, 0.0, 1.0, ""};
    r.wind_speed = 11.35;
    r.seed = 42;
    r.sim.dt = dt;
    return r;
}

}  // namespace

TEST(Turbine, PowerCurveAnchors) {
    const auto c = default_power_curve();
    EXPECT_NEAR(turbine_lookup(c, 12.0).power, 5.0e6, 1e-6);
    const double p = turbine_lookup(c, 11.35).power;
    EXPECT_GE(p, 2.8e6);
    EXPECT_LE(p, 3.3e6);
    EXPECT_EQ(turbine_lookup(c, 2.0).power, 0.0);
    EXPECT_EQ(turbine_lookup(c, 26.0).power, 0.0);
    for (double u = 3.0; u <= 25.0; u += 0.37) EXPECT_LE(turbine_lookup(c, u).power, 5.0e6 + 1e-6);
    EXPECT_GT(turbine_lookup(c, 12.0).thrust, turbine_lookup(c, 20.0).thrust);
}

TEST(Turbine, CurveCsvRoundTrip) {
    const auto c = default_power_curve();
    std::stringstream ss;
    write_power_curve(ss, c);
    const auto r = read_power_curve(ss);
    ASSERT_EQ(r.u.size(), c.u.size());
    EXPECT_NEAR(turbine_lookup(r, 11.35).power, turbine_lookup(c, 11.35).power, 1e-3);
    std::istringstream bad("u,p\n");
    EXPECT_THROW(read_power_curve(bad), ParseError);
}

TEST(TowerStress, AxialOnly) {
    const auto s = make_tower_section(10.0, 6.0, 0.027);
    EXPECT_NEAR(tower_base_stress(0.0, s, 3e6, 2e6, 77.6, 0.0), 5e6 / s.area, 1e-6);
}

TEST(TowerStress, ThrustBending) {
    const auto s = make_tower_section(10.0, 6.0, 0.027);
    const double sigma = tower_base_stress(800e3, s, 0.0, 0.0, 77.6, 0.0);
    const double thin = 800e3 * 77.6 * 3.0 / (pi * 27.0 * 0.027);
    EXPECT_NEAR(thin, 81e6, 0.5e6);
    EXPECT_NEAR(sigma, thin, 0.02 * thin);
    const auto thick = make_tower_section(10.0, 6.0, 0.032);
    EXPECT_LT(tower_base_stress(800e3, thick, 3e6, 2e6, 77.6, 0.05), tower_base_stress(800e3, s, 3e6, 2e6, 77.6, 0.05));
}

TEST(Sdof, NaturalFrequency) {
    Sdof s;
    s.a = 3e5;
    EXPECT_NEAR(highest_natural_frequency(s.model()), std::sqrt(s.k / (s.m + s.a)), 1e-12);
}

TEST(Sdof, ForcedResponseMatchesFrf) {
    for (double w : {0.6, 1.2, 1.9, 2.6}) {
        Sdof s;
        s.b = 2e5;
        s.kp = 3e5;
        const auto r = simulate(s.model(), hexwave::testing::monochromatic(1e6, w, 300.0, 0.05), {}, sdof_options(300.0));
        const double amp = hexwave::testing::fitted_amplitude(r, w, 150.0);
        EXPECT_NEAR(amp, s.amplitude(1e6, w), 0.005 * s.amplitude(1e6, w)) << "omega " << w;
        EXPECT_NEAR(r.summary.flap_power_mean[0], s.mean_power(1e6, w), 0.01 * s.mean_power(1e6, w));
    }
}

TEST(Sdof, UndampedEnergyConserved) {
    Sdof s;
    const double T = 2.0 * pi / std::sqrt(s.k / s.m);
    const VecX f = VecX::Constant(1, 1e6);
    const auto r = simulate(s.model(), constant_excitation(f, 100.5 * T, 0.05), {}, sdof_options(100.5 * T));
    EXPECT_LT(r.summary.energy_residual, 1e-3);
    // E = ½kq² + ½mv² − Fq stays at zero
    double worst = 0.0;
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        const double q = r.q(0, k), v = r.qd(0, k);
        worst = std::max(worst, std::abs(0.5 * s.k * q * q + 0.5 * s.m * v * v - 1e6 * q));
    }
    const double scale = 0.5 * 1e12 / s.k;
    EXPECT_LT(worst, 1e-3 * scale);
}

TEST(Sdof, OptimalDampingPeaksOnLogGrid) {
    Sdof s;
    s.a = 4e5;
    s.b = 1.5e5;
    const double w = 1.3;
    const double kp_opt = optimal_passive_damping(w, s.b, s.a, s.m, s.k);
    std::vector<double> grid;
    for (int i = 0; i < 41; ++i) grid.push_back(std::pow(10.0, 4.0 + 0.1 * i));
    std::size_t nearest = 0, best = 0;
    double best_p = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(std::log(grid[i] / kp_opt)) < std::abs(std::log(grid[nearest] / kp_opt))) nearest = i;
        Sdof c = s;
        c.kp = grid[i];
        const double dt = 400.0 / std::ceil(400.0 / std::min(0.05, 0.5 * max_stable_dt(c.model())));
        const auto r = simulate(c.model(), hexwave::testing::monochromatic(1e5, w, 400.0, dt), {}, sdof_options(400.0, dt));
        EXPECT_GE(r.summary.pto_energy, 0.0);
        if (r.summary.flap_power_mean[0] > best_p) {
            best_p = r.summary.flap_power_mean[0];
            best = i;
        }
    }
    EXPECT_EQ(best, nearest);
}

TEST(Simulation, RestStaysAtRest) {
    const auto& sys = baseline_system();
    const auto model = sys.linear_model(2.0 * pi / 10.04);
    SimOptions o;
    o.duration = 100.0;
    o.transient_skip = 10.0;
    const auto r = simulate(model, constant_excitation(VecX::Zero(n_dof), o.duration, o.dt), sys.wind(0.0), o);
    EXPECT_LT(r.q.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Simulation, BaselineModelIsStable) {
    const auto model = baseline_system().linear_model(2.0 * pi / 10.04);
    const auto ev = model_eigenvalues(model);
    EXPECT_EQ(ev.size(), 2 * n_dof);
    for (Eigen::Index i = 0; i < ev.size(); ++i) EXPECT_LE(ev[i].real(), 1e-9);
}

TEST(Simulation, EnergyBalanceAndPassivity) {
    const auto r = run_sea_state(baseline_system(), baseline_run());
    EXPECT_LT(r.summary.energy_residual, 0.01);
    EXPECT_GE(r.summary.pto_energy, 0.0);
    EXPECT_GE(r.flap_power.minCoeff(), 0.0);
    EXPECT_GT(r.summary.flap_power_mean[0], 3.0 * r.summary.flap_power_mean[1]);
    EXPECT_NEAR(r.summary.flap_power_mean[1], r.summary.flap_power_mean[2], 0.05 * r.summary.flap_power_mean[1]);
    EXPECT_LT(r.summary.roll_max_deg, r.summary.pitch_max_deg);
    // summary recomputable from the series
    double p = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < r.t.size(); ++k)
        if (r.t[k] > baseline_run().sim.transient_skip + 1e-9) {
            p += r.flap_power(0, k);
            ++n;
        }
    EXPECT_NEAR(p / n, r.summary.flap_power_mean[0], 1e-9 * r.summary.flap_power_mean[0]);
}

TEST(Simulation, TimestepHalvingConverged) {
    const auto a = run_sea_state(baseline_system(), baseline_run(0.05)).summary;
    const auto b = run_sea_state(baseline_system(), baseline_run(0.025)).summary;
    auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(x), 1e-12); };
    EXPECT_LT(rel(a.flap_power_total, b.flap_power_total), 0.002);
    EXPECT_LT(rel(a.turbine_power_mean, b.turbine_power_mean), 0.002);
    EXPECT_LT(rel(a.thrust_mean, b.thrust_mean), 0.002);
    EXPECT_LT(rel(a.stress_mean, b.stress_mean), 0.002);
}

TEST(Sdof, HeavyDampingOutsideRk4RegionRejected) {
    Sdof s;
    s.kp = 1e8;
    EXPECT_NEAR(max_stable_dt(s.model()), 2.5 * s.m / s.kp, 0.01 * 2.5 * s.m / s.kp);
    EXPECT_THROW(simulate(s.model(), hexwave::testing::monochromatic(1e5, 1.0, 10.0, 0.05), {}, sdof_options(10.0)), DomainError);
}

TEST(Simulation, RejectsCoarseTimestep) {
    SeaStateRun r = baseline_run(2.0);
    r.sim.duration = 100.0;
    r.sim.transient_skip = 10.0;
    EXPECT_THROW(run_sea_state(baseline_system(), r), DomainError);
}

TEST(Excitation, HeadOnFlapDominatesAndSymmetry) {
    const auto& h = *baseline_system().hydro;
    const double w = 2.0 * pi / 10.04;
    const auto X = h.excitation(w, 0.0);
    EXPECT_GT(std::abs(X[6]), std::abs(X[7]));
    EXPECT_GT(std::abs(X[6]), std::abs(X[8]));
    EXPECT_NEAR(std::abs(X[7]), std::abs(X[8]), 1e-9 * std::abs(X[7]));
    const auto spectrum = jonswap(0.0, 10.04, 3.3, default_omega_grid());
    const auto ex = wave_excitation(h, spectrum, 0.0, 1, 10.0, 0.05);
    EXPECT_EQ(ex.F.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW(wave_excitation(h, spectrum, 360.0, 1, 10.0, 0.05), DomainError);
}

TEST(Hydro, RadiationDampingNonNegative) {
    const auto& h = *baseline_system().hydro;
    for (double w : {0.3, 0.6, 1.0, 2.0}) {
        const MatX B = h.damping(w);
        for (int i = 0; i < n_dof; ++i) EXPECT_GE(B(i, i), 0.0);
    }
}

TEST(FlapTorque, SignsAndAsymmetry) {
    const auto& ctx = baseline_system().ctx;
    auto at = [&](double deg) {
        AssemblyPose p;
        p.flap_angles[0] = deg2rad(deg);
        return flap_torque_decomposition(ctx, p, 0);
    };
    const auto m55 = at(-55.0), z = at(0.0), p55 = at(55.0);
    EXPECT_GT(std::abs(m55.sum_inc), std::abs(p55.sum_inc));
    EXPECT_GT(m55.submerged_volume, z.submerged_volume);
    EXPECT_GT(std::abs(m55.tau_b), std::abs(z.tau_b));
    for (double a : {-40.0, -20.0, 20.0, 40.0}) EXPECT_GT(std::abs(at(a).sum_inc), std::abs(z.sum_inc));
}

TEST(FlapSweep, ZeroAngleGivesZeroPitch) {
    FlapSweepOptions o;
    o.wind_speed = 0.0;
    o.duration = 300.0;
    const auto c = steady_flap_sweep(baseline_system(), {0.0}, o);
    EXPECT_NEAR(c[0].pitch_deg, 0.0, 1e-6);
}
