#pragma once

#include "hexwave/dynamics.hpp"

#include <memory>

namespace hexwave {

struct SystemOptions {
    MassModelOptions mass = slurry_ballast();
    FallbackOptions hydro;
    MooringLayout mooring;
    double viscous_zeta = 0.0;  // optional linearized drag, fraction of critical on platform DOFs
    int resolution = 1;
};

// Everything needed to build linear models for one design.
struct PlatformSystem {
    HydroContext ctx;
    std::shared_ptr<const HydroModel> hydro;
    MooringModel mooring;
    Mat6 K_moor = Mat6::Zero();
    MatX M, K_hs;
    TowerLoad tower;
    double viscous_zeta = 0.0;
    PowerThrustCurve curve = default_power_curve();

    const DesignVectors& dv() const { return ctx.dv; }
    double hub_z() const { return ctx.dv.hub_height(); }

    static PlatformSystem build(const DesignVectors& dv, const SystemOptions& opt = {},
                                std::shared_ptr<const HydroModel> hydro = nullptr,
                                const MooringModel* base_table = nullptr) {
        PlatformSystem s;
        s.ctx = HydroContext::make(dv, opt.mass, opt.resolution);
        s.hydro = hydro ? std::move(hydro) : std::make_shared<FallbackHydro>(dv, opt.hydro, opt.mass.fluid);
        s.mooring = base_table ? *base_table : synthetic_mooring_table(opt.mooring);
        s.mooring.scale = calibrate_mooring_scale(s.mooring, s.ctx.mass.mooring_force);
        s.K_moor = mooring_stiffness(s.mooring);
        s.M = generalized_mass(s.ctx.mass, s.ctx.mounts);
        s.K_hs = hydrostatic_stiffness(s.ctx);
        s.tower.base = make_tower_section(dv.z_fr_p, dv.d_b_t, dv.b_b_t);
        s.tower.rna_mass = s.ctx.mass.rna.mass;
        s.tower.tower_mass = s.ctx.mass.tower.mass;
        s.tower.rna_lever = dv.l_t;
        s.tower.tower_lever = s.ctx.mass.tower.cog.z() - dv.z_fr_p;
        s.tower.g = s.ctx.fluid.g;
        s.viscous_zeta = opt.viscous_zeta;
        return s;
    }

    MatX stiffness() const {
        MatX K = K_hs;
        K.topLeftCorner<6, 6>() += K_moor;
        return K;
    }

    std::array<double, 3> optimal_kp(double omega) const {
        const MatX A = hydro->added_mass(omega);
        const MatX B = hydro->damping(omega);
        const MatX K = stiffness();
        std::array<double, 3> kp{};
        for (int i = 0; i < 3; ++i) {
            const int d = 6 + i;
            kp[i] = optimal_passive_damping(omega, B(d, d), A(d, d), M(d, d), K(d, d));
        }
        return kp;
    }

    // Constant-coefficient model with hydrodynamics frozen at `omega`.
    LinearModel linear_model(double omega, const PTOSettings& pto = {}) const {
        LinearModel m;
        m.M = M + hydro->added_mass(omega);
        m.M = 0.5 * (m.M + m.M.transpose());
        check_positive_definite(m.M);
        m.B = hydro->damping(omega);
        m.K = stiffness();
        m.B_visc = MatX::Zero(n_dof, n_dof);
        for (int d = 0; d < 6; ++d)
            if (m.K(d, d) > 0.0) m.B_visc(d, d) = 2.0 * viscous_zeta * std::sqrt(m.K(d, d) * m.M(d, d));
        const auto kp = pto.mode == PtoMode::OptimalPerSeaState ? optimal_kp(omega) : pto.kp;
        for (int i = 0; i < 3; ++i) {
            if (kp[i] < 0.0) throw DomainError("passive PTO requires kp >= 0");
            m.pto_dofs.push_back(6 + i);
            m.kp.push_back(kp[i]);
        }
        return m;
    }

    WindInput wind(double hub_speed) const {
        WindInput w;
        w.enabled = hub_speed > 0.0;
        w.speed = hub_speed;
        w.curve = curve;
        w.hub_z = hub_z();
        return w;
    }
};

struct SeaStateRun {
    SeaState sea;
    double wind_speed = 0.0;  // hub height
    std::uint64_t seed = 1;
    SimOptions sim;
    PTOSettings pto;
};

inline SimulationResult run_sea_state(const PlatformSystem& sys, const SeaStateRun& run) {
    const auto spectrum = jonswap(run.sea.hm0, run.sea.te, run.sea.gamma, default_omega_grid());
    const LinearModel model = sys.linear_model(2.0 * pi / run.sea.te, run.pto);
    const auto exc = wave_excitation(*sys.hydro, spectrum, run.sea.heading, run.seed, run.sim.duration, run.sim.dt);
    return simulate(model, exc, sys.wind(run.wind_speed), run.sim, sys.tower);
}

// ---- steady flap sweep ---------------------------------------------------------

struct FlapSweepCell {
    double flap_deg = 0.0;
    double pitch_deg = 0.0;
    double pitch_std_deg = 0.0;
    bool converged = false;
};

struct FlapSweepOptions {
    double wind_speed = 3.0;
    double duration = 600.0;
    double window = 100.0;
    double dt = 0.05;
    double ramp = 100.0;
    double tolerance_deg = 0.05;
    double omega = 2.0 * pi / 10.04;  // frequency for the frozen coefficients
    int flap = 0;
};

// Holds one flap at each prescribed angle and integrates the remaining
// 8-DOF model under the resulting hydrostatic load plus steady thrust.
inline std::vector<FlapSweepCell> steady_flap_sweep(const PlatformSystem& sys, const std::vector<double>& angles_deg,
                                                    const FlapSweepOptions& opt = {}) {
    if (opt.flap < 0 || opt.flap > 2) throw DomainError("flap index must be 0, 1 or 2");
    const int locked = 6 + opt.flap;
    const LinearModel full = sys.linear_model(opt.omega);
    const LinearModel model = full.without(locked);
    const int pitch_dof = 4;
    const VecX f0 = hydrostatic_load(sys.ctx, AssemblyPose{});
    std::vector<FlapSweepCell> out;
    for (double a : angles_deg) {
        if (std::abs(a) > sys.dv().flap_limit_deg) throw DomainError("flap angle beyond the mechanical limit");
        AssemblyPose pose;
        pose.flap_angles[opt.flap] = deg2rad(a);
        const VecX f9 = hydrostatic_load(sys.ctx, pose) - f0;
        VecX f(n_dof - 1);
        for (int j = 0, k = 0; j < n_dof; ++j)
            if (j != locked) f[k++] = f9[j];
        SimOptions so;
        so.duration = opt.duration;
        so.dt = opt.dt;
        so.transient_skip = opt.duration - opt.window;
        so.ramp = opt.ramp;
        so.pitch_dof = pitch_dof;
        so.roll_dof = 3;
        const auto res = simulate(model, constant_excitation(f, so.duration, so.dt), sys.wind(opt.wind_speed), so);
        FlapSweepCell c;
        c.flap_deg = a;
        c.pitch_deg = res.summary.pitch_mean_deg;
        c.pitch_std_deg = res.summary.pitch_std_deg;
        c.converged = c.pitch_std_deg <= opt.tolerance_deg;
        out.push_back(c);
    }
    return out;
}

}  // namespace hexwave
