#pragma once

#include "hexwave/common.hpp"
#include "hexwave/environment.hpp"
#include "hexwave/errors.hpp"
#include "hexwave/geometry.hpp"
#include "hexwave/hydro_coeffs.hpp"
#include "hexwave/hydrostatics.hpp"
#include "hexwave/mass_budget.hpp"
#include "hexwave/pto_mooring.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hexwave {

// ---- turbine -----------------------------------------------------------------

struct PowerThrustCurve {
    std::vector<double> u, power, thrust, rpm, pitch;
};

struct RotorSpec {
    double diameter = 126.0;
    double rho_air = 1.225;
    double rated_power = 5.0e6;
    double rated_speed = 12.0;
    double knee_speed = 11.5;
    double cut_in = 3.0;
    double cut_out = 25.0;
    double cp_eta = 0.26;
    double ct_below_rated = 0.8;
    double thrust_decay = 0.85;
    double tip_speed_ratio = 7.55;
    double max_rpm = 12.1;
};

// Cubic aerodynamic power up to the knee, linear transition to rated power,
// thrust from a constant Ct below rated and a power-law decay above.
inline PowerThrustCurve default_power_curve(const RotorSpec& r = {}) {
    PowerThrustCurve c;
    const double area = pi * r.diameter * r.diameter / 4.0;
    const double q = 0.5 * r.rho_air * area;
    const double t_rated = q * r.ct_below_rated * r.rated_speed * r.rated_speed;
    const double p_knee = q * r.cp_eta * std::pow(r.knee_speed, 3.0);
    if (p_knee >= r.rated_power) throw DomainError("rotor reaches rated power before the knee speed");
    for (double u = r.cut_in; u <= r.cut_out + 1e-9; u += 0.05) {
        double p = r.rated_power;
        if (u <= r.knee_speed)
            p = q * r.cp_eta * u * u * u;
        else if (u < r.rated_speed)
            p = p_knee + (r.rated_power - p_knee) * (u - r.knee_speed) / (r.rated_speed - r.knee_speed);
        const double t = u <= r.rated_speed ? q * r.ct_below_rated * u * u : t_rated * std::pow(r.rated_speed / u, r.thrust_decay);
        const double rpm = std::min(r.max_rpm, r.tip_speed_ratio * u / (r.diameter / 2.0) * 60.0 / (2.0 * pi));
        const double pitch = u <= r.rated_speed ? 0.0 : 1.8 * (u - r.rated_speed);
        c.u.push_back(std::round(u * 100.0) / 100.0);
        c.power.push_back(p);
        c.thrust.push_back(t);
        c.rpm.push_back(rpm);
        c.pitch.push_back(pitch);
    }
    return c;
}

struct TurbineOutput {
    double power = 0.0;
    double thrust = 0.0;
};

inline TurbineOutput turbine_lookup(const PowerThrustCurve& c, double u_eff) {
    if (c.u.empty() || u_eff < c.u.front() || u_eff > c.u.back()) return {};
    const std::size_t j = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(c.u.begin(), c.u.end(), u_eff) - c.u.begin()), c.u.size() - 1);
    if (j == 0) return {c.power[0], c.thrust[0]};
    const double s = (u_eff - c.u[j - 1]) / (c.u[j] - c.u[j - 1]);
    return {(1.0 - s) * c.power[j - 1] + s * c.power[j], (1.0 - s) * c.thrust[j - 1] + s * c.thrust[j]};
}

inline void write_power_curve(std::ostream& os, const PowerThrustCurve& c) {
    os << "u_m_s,power_W,thrust_N,rotor_rpm,pitch_deg\n";
    char buf[160];
    for (std::size_t i = 0; i < c.u.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g,%.10g,%.10g,%.6g,%.6g\n", c.u[i], c.power[i], c.thrust[i], c.rpm[i], c.pitch[i]);
        os << buf;
    }
}

inline PowerThrustCurve read_power_curve(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line).size() != 5) throw ParseError("power curve header must have 5 columns");
    PowerThrustCurve c;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        double v[5];
        if (cells.size() != 5) throw ParseError("power curve row needs 5 values");
        for (int k = 0; k < 5; ++k)
            if (!parse_double(cells[k], v[k])) throw ParseError("power curve value is not a number: " + cells[k]);
        if (!c.u.empty() && v[0] <= c.u.back()) throw ParseError("power curve wind speeds must increase");
        c.u.push_back(v[0]);
        c.power.push_back(v[1]);
        c.thrust.push_back(v[2]);
        c.rpm.push_back(v[3]);
        c.pitch.push_back(v[4]);
    }
    if (c.u.size() < 2) throw ParseError("power curve needs at least two rows");
    return c;
}

inline PowerThrustCurve read_power_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open power curve " + path);
    return read_power_curve(in);
}

// ---- tower base stress -------------------------------------------------------

struct TowerLoad {
    TowerSection base;
    double rna_mass = 0.0;
    double tower_mass = 0.0;
    double rna_lever = 0.0;    // above the tower base
    double tower_lever = 0.0;  // tower COG above the base
    double g = 9.81;
};

// σ = |M|·c/I + N/A at the tower base.
inline double tower_base_stress(double thrust, const TowerSection& base, double rna_weight, double tower_weight,
                                double hub_height, double platform_pitch, double tower_cog_lever = -1.0) {
    const double lever_t = tower_cog_lever >= 0.0 ? tower_cog_lever : hub_height / 2.0;
    const double M = thrust * hub_height + (rna_weight * hub_height + tower_weight * lever_t) * std::sin(platform_pitch);
    const double N = (rna_weight + tower_weight) * std::cos(platform_pitch);
    return std::abs(M) * base.outer_diameter / 2.0 / base.bending_inertia + N / base.area;
}

inline double tower_base_stress(const TowerLoad& L, double thrust, double pitch) {
    return tower_base_stress(thrust, L.base, L.rna_mass * L.g, L.tower_mass * L.g, L.rna_lever, pitch, L.tower_lever);
}

// ---- generalized mass and hydrostatic stiffness ------------------------------

inline Mat6 body_mass_matrix(const RigidBodyProperties& b) {
    Mat6 M = Mat6::Zero();
    const Mat3 S = skew(b.cog);
    M.topLeftCorner<3, 3>() = b.mass * Mat3::Identity();
    M.topRightCorner<3, 3>() = -b.mass * S;
    M.bottomLeftCorner<3, 3>() = b.mass * S;
    M.bottomRightCorner<3, 3>() = b.inertia_about(Vec3::Zero());
    return M;
}

// 9×9 mass matrix; flap DOFs are relative hinge angles.
inline MatX generalized_mass(const MassModel& mm, const std::array<FlapMount, 3>& mounts) {
    MatX M = MatX::Zero(n_dof, n_dof);
    M.topLeftCorner<6, 6>() = body_mass_matrix(mm.platform);
    for (int i = 0; i < 3; ++i) {
        const auto fb = flap_system_in_platform(mm, mounts, i, 0.0);
        Eigen::Matrix<double, 6, n_dof> J = Eigen::Matrix<double, 6, n_dof>::Zero();
        J.leftCols<6>().setIdentity();
        J.block<3, 1>(0, 6 + i) = -mounts[i].axis.cross(mounts[i].hinge_point);
        J.block<3, 1>(3, 6 + i) = mounts[i].axis;
        M += J.transpose() * body_mass_matrix(fb) * J;
    }
    return 0.5 * (M + M.transpose());
}

// Hydrostatic-gravity potential plus the work of a constant mooring pull.
// Coordinates: [heave, roll, pitch, β1, β2, β3] about `base`.
inline double hydrostatic_potential(const HydroContext& ctx, const AssemblyPose& base, const Eigen::Matrix<double, 6, 1>& dq) {
    AssemblyPose p = base;
    p.heave_offset += dq[0];
    p.platform_roll += dq[1];
    p.platform_pitch += dq[2];
    for (int i = 0; i < 3; ++i) p.flap_angles[i] += dq[3 + i];
    const auto sys = ctx.system(p);
    const PanelMesh sub = clip_below_waterline(ctx.posed(p).combined(), 0.0);
    const double zfirst = volume_integrals(sub).first.z();
    return sys.mass * ctx.fluid.g * sys.cog.z() - ctx.fluid.rho * ctx.fluid.g * zfirst + ctx.mass.mooring_force * p.heave_offset;
}

inline constexpr std::array<int, 6> hydrostatic_dofs{2, 3, 4, 6, 7, 8};

// 9×9 stiffness as the central-difference Hessian of the potential.
inline MatX hydrostatic_stiffness(const HydroContext& ctx, const AssemblyPose& base = {}, double h = 1e-3) {
    using V6 = Eigen::Matrix<double, 6, 1>;
    auto U = [&](const V6& d) { return hydrostatic_potential(ctx, base, d); };
    Eigen::Matrix<double, 6, 6> H;
    const double u0 = U(V6::Zero());
    for (int a = 0; a < 6; ++a) {
        V6 e = V6::Zero();
        e[a] = h;
        H(a, a) = (U(e) - 2.0 * u0 + U(-e)) / (h * h);
        for (int b = a + 1; b < 6; ++b) {
            V6 f = V6::Zero();
            f[b] = h;
            H(a, b) = H(b, a) = (U(e + f) - U(e - f) - U(f - e) + U(-e - f)) / (4.0 * h * h);
        }
    }
    MatX K = MatX::Zero(n_dof, n_dof);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) K(hydrostatic_dofs[a], hydrostatic_dofs[b]) = H(a, b);
    return K;
}

// Generalized hydrostatic load −∂U/∂q (9-vector; surge, sway, yaw are zero).
inline VecX hydrostatic_load(const HydroContext& ctx, const AssemblyPose& pose, double h = 1e-3) {
    using V6 = Eigen::Matrix<double, 6, 1>;
    VecX f = VecX::Zero(n_dof);
    for (int a = 0; a < 6; ++a) {
        V6 e = V6::Zero();
        e[a] = h;
        f[hydrostatic_dofs[a]] = -(hydrostatic_potential(ctx, pose, e) - hydrostatic_potential(ctx, pose, -e)) / (2.0 * h);
    }
    return f;
}

// ---- linear model --------------------------------------------------------------

// M q̈ + (B + B_visc + B_pto) q̇ + K q = F(t)
struct LinearModel {
    MatX M, B, K;
    MatX B_visc;
    std::vector<int> pto_dofs;
    std::vector<double> kp;

    int size() const { return static_cast<int>(M.rows()); }

    MatX total_damping() const {
        MatX D = B;
        if (B_visc.size()) D += B_visc;
        for (std::size_t i = 0; i < pto_dofs.size(); ++i) D(pto_dofs[i], pto_dofs[i]) += kp[i];
        return D;
    }

    // Removes one DOF (held fixed at zero).
    LinearModel without(int dof) const {
        const int n = size();
        std::vector<int> keep;
        for (int i = 0; i < n; ++i)
            if (i != dof) keep.push_back(i);
        auto sub = [&](const MatX& A) {
            if (!A.size()) return A;
            MatX S(keep.size(), keep.size());
            for (std::size_t a = 0; a < keep.size(); ++a)
                for (std::size_t b = 0; b < keep.size(); ++b) S(a, b) = A(keep[a], keep[b]);
            return S;
        };
        LinearModel out{sub(M), sub(B), sub(K), sub(B_visc), {}, {}};
        for (std::size_t i = 0; i < pto_dofs.size(); ++i) {
            if (pto_dofs[i] == dof) continue;
            out.pto_dofs.push_back(pto_dofs[i] > dof ? pto_dofs[i] - 1 : pto_dofs[i]);
            out.kp.push_back(kp[i]);
        }
        return out;
    }
};

inline void check_positive_definite(const MatX& M) {
    Eigen::LLT<MatX> llt(M);
    if (llt.info() != Eigen::Success) throw ModelAssemblyError("effective mass matrix is not positive definite");
}

// Eigenvalues of the first-order system.
inline Eigen::VectorXcd model_eigenvalues(const LinearModel& m) {
    const int n = m.size();
    MatX A = MatX::Zero(2 * n, 2 * n);
    const MatX Minv = m.M.inverse();
    A.topRightCorner(n, n).setIdentity();
    A.bottomLeftCorner(n, n) = -Minv * m.K;
    A.bottomRightCorner(n, n) = -Minv * m.total_damping();
    return Eigen::EigenSolver<MatX>(A).eigenvalues();
}

// Largest RK4 step inside the stability region, from the spectral radius.
inline double max_stable_dt(const LinearModel& m) {
    const auto ev = model_eigenvalues(m);
    double rho = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) rho = std::max(rho, std::abs(ev[i]));
    return rho > 0.0 ? 2.5 / rho : std::numeric_limits<double>::infinity();
}

inline double highest_natural_frequency(const LinearModel& m) {
    Eigen::GeneralizedSelfAdjointEigenSolver<MatX> es(0.5 * (m.K + m.K.transpose()), m.M);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// ---- excitation ----------------------------------------------------------------

// Generalized force samples at spacing dt/2 (RK4 half steps).
struct ExcitationSeries {
    double half_dt = 0.025;
    MatX F;  // n × samples

    int size() const { return static_cast<int>(F.rows()); }
    std::size_t samples() const { return static_cast<std::size_t>(F.cols()); }
};

inline std::size_t step_count(double duration, double dt) {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

// Σ_i Re(X_i a_i e^{i(ω_i t + φ_i)}) on the half-step grid.
inline ExcitationSeries harmonic_excitation(const std::vector<VecXc>& X, const std::vector<double>& omega,
                                            const std::vector<double>& amplitude, const std::vector<double>& phase,
                                            double duration, double dt, int n = n_dof) {
    ExcitationSeries ex;
    ex.half_dt = dt / 2.0;
    const std::size_t ns = 2 * step_count(duration, dt) + 1;
    ex.F = MatX::Zero(n, static_cast<Eigen::Index>(ns));
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const VecXc c = X[i] * amplitude[i];
        const cplx rot = std::exp(cplx(0.0, omega[i] * ex.half_dt));
        cplx z = std::exp(cplx(0.0, phase[i]));
        for (std::size_t k = 0; k < ns; ++k) {
            if (k % 256 == 0) z = std::exp(cplx(0.0, omega[i] * ex.half_dt * static_cast<double>(k) + phase[i]));
            for (int j = 0; j < n; ++j) ex.F(j, static_cast<Eigen::Index>(k)) += (c[j] * z).real();
            z *= rot;
        }
    }
    return ex;
}

inline ExcitationSeries wave_excitation(const HydroModel& hydro, const WaveSpectrum& spectrum, double heading_deg,
                                        std::uint64_t seed, double duration, double dt) {
    if (!(heading_deg >= 0.0 && heading_deg < 360.0)) throw DomainError("heading must lie in [0, 360)");
    const auto comps = wave_components(spectrum, seed);
    std::vector<VecXc> X;
    X.reserve(comps.omega.size());
    for (double w : comps.omega) X.push_back(hydro.excitation(w, heading_deg));
    return harmonic_excitation(X, comps.omega, comps.amplitude, comps.phase, duration, dt);
}

inline ExcitationSeries constant_excitation(const VecX& f, double duration, double dt) {
    ExcitationSeries ex;
    ex.half_dt = dt / 2.0;
    const std::size_t ns = 2 * step_count(duration, dt) + 1;
    ex.F = f.replicate(1, static_cast<Eigen::Index>(ns));
    return ex;
}

// ---- simulation ----------------------------------------------------------------

struct WindInput {
    bool enabled = false;
    double speed = 0.0;             // constant hub-height speed, m/s
    std::vector<double> series;     // optional, sampled at `series_dt`
    double series_dt = 1.0;
    PowerThrustCurve curve;
    int surge_dof = 0;
    int pitch_dof = 4;
    double hub_z = 87.6;            // above the rotation origin

    double speed_at(double t) const {
        if (series.empty()) return speed;
        const double x = t / series_dt;
        const std::size_t j = static_cast<std::size_t>(std::floor(x));
        if (j + 1 >= series.size()) return series.back();
        const double s = x - static_cast<double>(j);
        return (1.0 - s) * series[j] + s * series[j + 1];
    }
};

struct SimOptions {
    double duration = 600.0;
    double dt = 0.05;
    double transient_skip = 120.0;
    double ramp = 20.0;
    double divergence_bound = 1e3;
    bool check_timestep = true;
    int pitch_dof = 4;
    int roll_dof = 3;
};

struct SimulationSummary {
    std::vector<double> flap_power_mean;  // W
    double flap_power_total = 0.0;
    double turbine_power_mean = 0.0;
    double thrust_mean = 0.0;
    double stress_mean = 0.0, stress_max = 0.0;  // Pa
    double pitch_max_deg = 0.0, roll_max_deg = 0.0;
    double pitch_mean_deg = 0.0, pitch_std_deg = 0.0;
    double pto_energy = 0.0, radiation_energy = 0.0, viscous_energy = 0.0;
    double excitation_work = 0.0, wind_work = 0.0, mechanical_energy_change = 0.0;
    double energy_residual = 0.0;  // relative to the input work
};

struct SimulationResult {
    std::vector<double> t;
    MatX q, qd;                 // n × steps
    MatX flap_power;            // pto dofs × steps
    std::vector<double> turbine_power, thrust, stress;
    SimulationSummary summary;
};

inline double ramp_factor(double t, double ramp) {
    if (ramp <= 0.0 || t >= ramp) return 1.0;
    return 0.5 * (1.0 - std::cos(pi * t / ramp));
}

inline SimulationSummary summarize(const SimulationResult& r, const SimOptions& opt, int pitch_dof, int roll_dof) {
    SimulationSummary s = r.summary;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < r.t.size(); ++k)
        if (r.t[k] > opt.transient_skip + 1e-9) idx.push_back(k);
    if (idx.empty()) throw DomainError("transient skip leaves no samples");
    const double n = static_cast<double>(idx.size());
    s.flap_power_mean.assign(static_cast<std::size_t>(r.flap_power.rows()), 0.0);
    s.flap_power_total = s.turbine_power_mean = s.thrust_mean = s.stress_mean = s.stress_max = 0.0;
    s.pitch_max_deg = s.roll_max_deg = 0.0;
    double pm = 0.0, pm2 = 0.0;
    for (std::size_t k : idx) {
        for (Eigen::Index i = 0; i < r.flap_power.rows(); ++i) s.flap_power_mean[i] += r.flap_power(i, k) / n;
        if (!r.turbine_power.empty()) {
            s.turbine_power_mean += r.turbine_power[k] / n;
            s.thrust_mean += r.thrust[k] / n;
        }
        if (!r.stress.empty()) {
            s.stress_mean += r.stress[k] / n;
            s.stress_max = std::max(s.stress_max, r.stress[k]);
        }
        if (pitch_dof >= 0 && pitch_dof < r.q.rows()) {
            const double p = rad2deg(r.q(pitch_dof, k));
            s.pitch_max_deg = std::max(s.pitch_max_deg, std::abs(p));
            pm += p / n;
            pm2 += p * p / n;
        }
        if (roll_dof >= 0 && roll_dof < r.q.rows()) s.roll_max_deg = std::max(s.roll_max_deg, std::abs(rad2deg(r.q(roll_dof, k))));
    }
    for (double p : s.flap_power_mean) s.flap_power_total += p;
    s.pitch_mean_deg = pm;
    s.pitch_std_deg = std::sqrt(std::max(0.0, pm2 - pm * pm));
    return s;
}

// Fixed-step RK4 on [q, q̇] with energy accumulators integrated alongside.
inline SimulationResult simulate(const LinearModel& model, const ExcitationSeries& exc, const WindInput& wind,
                                 const SimOptions& opt, const std::optional<TowerLoad>& tower = std::nullopt) {
    const int n = model.size();
    if (exc.size() != n) throw DomainError("excitation size does not match the model");
    if (!(opt.dt > 0.0)) throw DomainError("dt must be positive");
    if (std::abs(exc.half_dt - opt.dt / 2.0) > 1e-12) throw DomainError("excitation sampled with a different dt");
    const std::size_t steps = step_count(opt.duration, opt.dt);
    if (exc.samples() < 2 * steps + 1) throw DomainError("excitation series shorter than the run");
    if (opt.check_timestep) {
        const double wmax = highest_natural_frequency(model);
        if (wmax > 0.0 && opt.dt > 2.0 * pi / wmax / 20.0)
            throw DomainError("dt exceeds 1/20 of the shortest natural period");
        if (opt.dt > max_stable_dt(model)) throw DomainError("dt outside the RK4 stability region for this damping");
    }
    check_positive_definite(model.M);
    const Eigen::LLT<MatX> Mllt(model.M);
    const MatX D = model.total_damping();
    MatX Bpto = MatX::Zero(n, n);
    for (std::size_t i = 0; i < model.pto_dofs.size(); ++i) Bpto(model.pto_dofs[i], model.pto_dofs[i]) = model.kp[i];
    const MatX Bvisc = model.B_visc.size() ? model.B_visc : MatX::Zero(n, n);

    auto wind_force = [&](double t, const VecX& v, TurbineOutput* out) {
        VecX f = VecX::Zero(n);
        if (!wind.enabled) return f;
        const double hub_v = (wind.surge_dof >= 0 ? v[wind.surge_dof] : 0.0) + (wind.pitch_dof >= 0 ? wind.hub_z * v[wind.pitch_dof] : 0.0);
        const TurbineOutput o = turbine_lookup(wind.curve, wind.speed_at(t) - hub_v);
        const double T = o.thrust * ramp_factor(t, opt.ramp);
        if (wind.surge_dof >= 0) f[wind.surge_dof] += T;
        if (wind.pitch_dof >= 0) f[wind.pitch_dof] += wind.hub_z * T;
        if (out) *out = {o.power, T};
        return f;
    };

    // state: q, v, then W_exc, W_wind, D_rad, D_visc, D_pto
    const int ns = 2 * n + 5;
    auto rhs = [&](double t, std::size_t half_index, const VecX& s) {
        const VecX q = s.head(n), v = s.segment(n, n);
        const VecX fe = exc.F.col(static_cast<Eigen::Index>(half_index)) * ramp_factor(t, opt.ramp);
        const VecX fw = wind_force(t, v, nullptr);
        VecX ds(ns);
        ds.head(n) = v;
        ds.segment(n, n) = Mllt.solve(fe + fw - D * v - model.K * q);
        ds[2 * n] = v.dot(fe);
        ds[2 * n + 1] = v.dot(fw);
        ds[2 * n + 2] = v.dot(model.B * v);
        ds[2 * n + 3] = v.dot(Bvisc * v);
        ds[2 * n + 4] = v.dot(Bpto * v);
        return ds;
    };

    SimulationResult r;
    r.t.resize(steps + 1);
    r.q = MatX::Zero(n, static_cast<Eigen::Index>(steps + 1));
    r.qd = MatX::Zero(n, static_cast<Eigen::Index>(steps + 1));
    r.flap_power = MatX::Zero(static_cast<Eigen::Index>(model.pto_dofs.size()), static_cast<Eigen::Index>(steps + 1));
    if (wind.enabled) {
        r.turbine_power.resize(steps + 1);
        r.thrust.resize(steps + 1);
    }
    if (tower) r.stress.resize(steps + 1);

    VecX s = VecX::Zero(ns);
    auto record = [&](std::size_t k, double t) {
        r.t[k] = t;
        r.q.col(static_cast<Eigen::Index>(k)) = s.head(n);
        r.qd.col(static_cast<Eigen::Index>(k)) = s.segment(n, n);
        for (std::size_t i = 0; i < model.pto_dofs.size(); ++i)
            r.flap_power(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = pto_power(model.kp[i], s[n + model.pto_dofs[i]]);
        TurbineOutput o;
        if (wind.enabled) {
            wind_force(t, s.segment(n, n), &o);
            r.turbine_power[k] = o.power;
            r.thrust[k] = o.thrust;
        }
        if (tower) r.stress[k] = tower_base_stress(*tower, o.thrust, opt.pitch_dof < n ? s[opt.pitch_dof] : 0.0);
    };
    record(0, 0.0);
    const double dt = opt.dt;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = k * dt;
        const VecX k1 = rhs(t, 2 * k, s);
        const VecX k2 = rhs(t + dt / 2, 2 * k + 1, s + dt / 2 * k1);
        const VecX k3 = rhs(t + dt / 2, 2 * k + 1, s + dt / 2 * k2);
        const VecX k4 = rhs(t + dt, 2 * k + 2, s + dt * k3);
        s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        for (int j = 0; j < n; ++j)
            if (!std::isfinite(s[j]) || std::abs(s[j]) > opt.divergence_bound)
                throw InstabilityError("state diverged in dof " + std::to_string(j) + " at t = " + std::to_string(t + dt) + " s");
        record(k + 1, t + dt);
    }
    auto energy = [&](const VecX& q, const VecX& v) { return 0.5 * v.dot(model.M * v) + 0.5 * q.dot(model.K * q); };
    SimulationSummary& e = r.summary;
    e.excitation_work = s[2 * n];
    e.wind_work = s[2 * n + 1];
    e.radiation_energy = s[2 * n + 2];
    e.viscous_energy = s[2 * n + 3];
    e.pto_energy = s[2 * n + 4];
    e.mechanical_energy_change = energy(s.head(n), s.segment(n, n));
    const double input = std::abs(e.excitation_work) + std::abs(e.wind_work);
    const double balance = e.excitation_work + e.wind_work - e.radiation_energy - e.viscous_energy - e.pto_energy - e.mechanical_energy_change;
    e.energy_residual = input > 0.0 ? std::abs(balance) / input : std::abs(balance);
    r.summary = summarize(r, opt, opt.pitch_dof < n ? opt.pitch_dof : -1, opt.roll_dof < n ? opt.roll_dof : -1);
    return r;
}

// ---- flap torque decomposition ---------------------------------------------------

struct FlapTorque {
    double tau_b = 0.0, tau_mg = 0.0, sum = 0.0;                       // about the platform COG
    double tau_b_inc = 0.0, tau_mg_inc = 0.0, sum_inc = 0.0;           // relative to the upright flap
    double submerged_volume = 0.0;
};

// Pitch-axis torques of flap `i` (buoyancy of its submerged part and its
// weight) about the platform body COG, earth frame at the given pose.
inline FlapTorque flap_torque_decomposition(const HydroContext& ctx, const AssemblyPose& pose, int i) {
    auto raw = [&](const AssemblyPose& p, double& vol) {
        const Rigid T = flap_transform(ctx.mounts[i], p, i);
        const PanelMesh flap = ctx.flap.transformed(T);
        const auto vi = volume_integrals(clip_below_waterline(flap, 0.0));
        vol = vi.volume;
        const Vec3 g0 = platform_transform(p).apply(ctx.mass.platform.cog);
        const Vec3 fb(0, 0, ctx.fluid.rho * ctx.fluid.g * vi.volume);
        const Vec3 w(0, 0, -ctx.mass.flaps[i].mass * ctx.fluid.g);
        const double tb = vi.volume > 0.0 ? (vi.centroid() - g0).cross(fb).y() : 0.0;
        const double tw = (T.apply(ctx.mass.flaps[i].cog) - g0).cross(w).y();
        return std::pair<double, double>{tb, tw};
    };
    FlapTorque out;
    const auto [tb, tw] = raw(pose, out.submerged_volume);
    AssemblyPose up = pose;
    up.flap_angles[i] = 0.0;
    double v0 = 0.0;
    const auto [tb0, tw0] = raw(up, v0);
    out.tau_b = tb;
    out.tau_mg = tw;
    out.sum = tb + tw;
    out.tau_b_inc = tb - tb0;
    out.tau_mg_inc = tw - tw0;
    out.sum_inc = out.tau_b_inc + out.tau_mg_inc;
    return out;
}

}  // namespace hexwave
