#pragma once

#include "hexwave/parallel.hpp"
#include "hexwave/system.hpp"

#include <array>
#include <cstring>
#include <map>
#include <string>
#include <vector>

namespace hexwave {

// ---- sensitivity sweep ---------------------------------------------------------

struct SweepVariable {
    const char* name;
    std::array<double, 9> levels;  // design units
    void (*apply)(DesignVectors&, double);
};

inline const std::array<SweepVariable, 12>& sweep_variables() {
    static const std::array<SweepVariable, 12> vars{{
        {"z_dr_p", {-16.0, -17.0, -18.0, -19.0, -20.0, -21.0, -22.0, -23.0, -24.0}, [](DesignVectors& d, double v) { d.z_dr_p = -v; }},
        {"z_fr_p", {8.0, 8.5, 9.0, 9.5, 10.0, 10.5, 11.0, 11.5, 12.0}, [](DesignVectors& d, double v) { d.z_fr_p = v; }},
        {"l_s_p", {22.984, 24.420, 25.857, 27.294, 28.730, 30.166, 31.603, 33.040, 34.476}, [](DesignVectors& d, double v) { d.l_s_p = v; }},
        {"w_xy_p", {1.60, 1.70, 1.80, 1.90, 2.00, 2.10, 2.20, 2.30, 2.40}, [](DesignVectors& d, double v) { d.w_xy_p = v; }},
        {"w_z_p", {0.80, 0.85, 0.90, 0.95, 1.00, 1.05, 1.10, 1.15, 1.20}, [](DesignVectors& d, double v) { d.w_z_p = v; }},
        {"d_c_p", {4.400, 4.675, 4.950, 5.225, 5.500, 5.775, 6.050, 6.325, 6.600}, [](DesignVectors& d, double v) { d.d_c_p = v; }},
        {"l_f", {20.0, 21.3, 22.5, 23.8, 25.0, 26.3, 27.5, 28.8, 30.0}, [](DesignVectors& d, double v) { d.l_f = v; }},
        {"h_f", {17.6, 18.7, 19.8, 20.9, 22.0, 23.1, 24.2, 25.3, 26.4}, [](DesignVectors& d, double v) { d.h_f = v; }},
        {"m_f_frac", {0.32, 0.34, 0.36, 0.38, 0.40, 0.42, 0.44, 0.46, 0.48},
         [](DesignVectors& d, double v) {
             d.m_f_frac = v;
             d.m_p_frac = 1.0 - v;
         }},
        {"l_t", {62.08, 65.96, 69.84, 73.72, 77.60, 81.48, 85.36, 89.24, 93.12}, [](DesignVectors& d, double v) { d.l_t = v; }},
        {"b_b_t", {0.022, 0.023, 0.024, 0.026, 0.027, 0.028, 0.030, 0.031, 0.032}, [](DesignVectors& d, double v) { d.b_b_t = v; }},
        {"b_t_t", {0.015, 0.016, 0.017, 0.018, 0.019, 0.020, 0.021, 0.022, 0.023}, [](DesignVectors& d, double v) { d.b_t_t = v; }},
    }};
    return vars;
}

struct SensitivityCase {
    std::string variable;
    int level = 5;  // 1..9
    double value = 0.0;
    DesignVectors dv;
};

inline std::vector<SensitivityCase> generate_sweep(const DesignVectors& baseline = DesignVectors::baseline()) {
    baseline.validate();
    std::vector<SensitivityCase> out;
    out.reserve(108);
    for (const auto& var : sweep_variables())
        for (int l = 0; l < 9; ++l) {
            SensitivityCase c;
            c.variable = var.name;
            c.level = l + 1;
            c.value = var.levels[l];
            c.dv = baseline;
            var.apply(c.dv, c.value);
            out.push_back(c);
        }
    return out;
}

struct SweepMetrics {
    double min_gm = 0.0;
    bool stable = false;
    bool simulated = false;
    double pitch_max_deg = 0.0;
    double turbine_power_mw = 0.0;
    double wec_power_mw = 0.0;
    double stress_max_mpa = 0.0;
    std::string error;
};

struct SweepSettings {
    SeaState sea{2.85, 10.04, 3.3, 0.0, 1.0, ""};
    double wind_speed = 11.35;        // at the reference height
    double wind_ref_height = 87.6;
    double shear_alpha = 0.14;
    std::uint64_t seed = 42;
    int gm_samples = 1000;
    double gm_range_deg = 45.0;
    SimOptions sim;
    SystemOptions system;
};

inline bool same_design(const DesignVectors& a, const DesignVectors& b) { return std::memcmp(&a, &b, sizeof a) == 0; }

inline SweepMetrics evaluate_case(const DesignVectors& dv, const SweepSettings& s) {
    SweepMetrics m;
    try {
        const PlatformSystem sys = PlatformSystem::build(dv, s.system);
        m.min_gm = min_gm_random_flaps(sys.ctx, s.gm_samples, s.gm_range_deg, s.seed);
        m.stable = m.min_gm > 0.0;
        if (!m.stable) return m;
        SeaStateRun run;
        run.sea = s.sea;
        run.wind_speed = wind_at_height(s.wind_speed, s.wind_ref_height, dv.hub_height(), s.shear_alpha);
        run.seed = s.seed;
        run.sim = s.sim;
        const auto res = run_sea_state(sys, run);
        m.simulated = true;
        m.pitch_max_deg = res.summary.pitch_max_deg;
        m.turbine_power_mw = res.summary.turbine_power_mean / 1e6;
        m.wec_power_mw = res.summary.flap_power_total / 1e6;
        m.stress_max_mpa = res.summary.stress_max / 1e6;
    } catch (const std::exception& e) {
        m.error = e.what();
    }
    return m;
}

// All cases share the settings seed (common random numbers), so identical
// designs give identical metrics and are evaluated once.
inline std::vector<SweepMetrics> run_sweep(const std::vector<SensitivityCase>& cases, const SweepSettings& s,
                                           unsigned jobs = default_jobs()) {
    std::vector<std::size_t> rep(cases.size());
    std::vector<std::size_t> unique;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        rep[i] = i;
        for (std::size_t u : unique)
            if (same_design(cases[u].dv, cases[i].dv)) {
                rep[i] = u;
                break;
            }
        if (rep[i] == i) unique.push_back(i);
    }
    std::vector<SweepMetrics> out(cases.size());
    parallel_for(unique.size(), jobs, [&](std::size_t k) { out[unique[k]] = evaluate_case(cases[unique[k]].dv, s); });
    for (std::size_t i = 0; i < cases.size(); ++i) out[i] = out[rep[i]];
    return out;
}

// ---- directional study ----------------------------------------------------------

struct PolarRow {
    double heading_deg = 0.0;
    std::array<double, 3> flap_power{};  // W
    double total = 0.0;
    std::string error;
};

inline std::vector<double> default_headings() {
    std::vector<double> h;
    for (int k = 0; k < 72; ++k) h.push_back(5.0 * k);
    return h;
}

// Same phase set at every heading, so mirrored headings are exact mirrors.
inline std::vector<PolarRow> directional_sweep(const PlatformSystem& sys, const std::vector<double>& headings,
                                               const SeaStateRun& base, unsigned jobs = default_jobs()) {
    std::vector<PolarRow> rows(headings.size());
    const LinearModel model = sys.linear_model(2.0 * pi / base.sea.te, base.pto);
    const auto spectrum = jonswap(base.sea.hm0, base.sea.te, base.sea.gamma, default_omega_grid());
    parallel_for(headings.size(), jobs, [&](std::size_t i) {
        PolarRow& r = rows[i];
        r.heading_deg = headings[i];
        try {
            const auto exc = wave_excitation(*sys.hydro, spectrum, headings[i], base.seed, base.sim.duration, base.sim.dt);
            const auto res = simulate(model, exc, sys.wind(base.wind_speed), base.sim, sys.tower);
            for (int f = 0; f < 3; ++f) r.flap_power[f] = res.summary.flap_power_mean[f];
            r.total = res.summary.flap_power_total;
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    });
    return rows;
}

// ---- capture width and annual energy --------------------------------------------

inline double capture_width_ratio(double mean_power, double p_wave, double width) {
    if (!(p_wave > 0.0) || !(width > 0.0)) throw UndefinedCwrError("capture width ratio needs positive wave power and width");
    return mean_power / (p_wave * width);
}

inline constexpr double hours_per_year = 8766.0;

struct SeaStatePower {
    SeaState state;
    double mean_power = 0.0;  // W, all flaps
    double p_wave = 0.0;      // W/m
    double cwr = 0.0;
};

struct AEPReport {
    double wind_mean_power = 0.0, wind_aep_wh = 0.0;
    double wave_mean_power = 0.0, wave_aep_wh = 0.0;
    double wave_share = 0.0;
    std::vector<SeaStatePower> states;
};

inline AEPReport aep(double wind_mean_power, const std::vector<SeaStatePower>& wave_states, double hours = hours_per_year) {
    if (wind_mean_power < 0.0) throw DomainError("wind mean power must be non-negative");
    AEPReport r;
    double psum = 0.0;
    for (const auto& s : wave_states) {
        psum += s.state.probability;
        r.wave_mean_power += s.state.probability * s.mean_power;
    }
    if (!wave_states.empty() && std::abs(psum - 1.0) > 1e-9) throw DomainError("sea-state probabilities must sum to 1");
    r.states = wave_states;
    r.wind_mean_power = wind_mean_power;
    r.wind_aep_wh = wind_mean_power * hours;
    r.wave_aep_wh = r.wave_mean_power * hours;
    const double total = r.wind_aep_wh + r.wave_aep_wh;
    r.wave_share = total > 0.0 ? r.wave_aep_wh / total : 0.0;
    return r;
}

// Direct-mean form for both sources.
inline AEPReport aep(double wind_mean_power, double wave_mean_power, double hours = hours_per_year) {
    SeaStatePower s;
    s.state.probability = 1.0;
    s.mean_power = wave_mean_power;
    AEPReport r = aep(wind_mean_power, std::vector<SeaStatePower>{s}, hours);
    r.states.clear();
    return r;
}

// Wind mean power from an occurrence histogram over hub-height speeds.
inline double wind_mean_power(const PowerThrustCurve& curve, const std::vector<double>& speeds, const std::vector<double>& probability) {
    if (speeds.size() != probability.size()) throw DomainError("wind histogram columns differ in length");
    double p = 0.0, s = 0.0;
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        if (speeds[i] < 0.0 || probability[i] < 0.0) throw DomainError("wind histogram entries must be non-negative");
        p += probability[i] * turbine_lookup(curve, speeds[i]).power;
        s += probability[i];
    }
    if (std::abs(s - 1.0) > 1e-9) throw DomainError("wind probabilities must sum to 1");
    return p;
}

// Simulated WEC power per sea state (heading from each state), with CWR over `width`.
inline std::vector<SeaStatePower> wave_power_by_state(const PlatformSystem& sys, const std::vector<SeaState>& states,
                                                      double wind_speed, std::uint64_t seed, const SimOptions& sim,
                                                      double width, unsigned jobs = default_jobs()) {
    std::vector<SeaStatePower> out(states.size());
    parallel_for(states.size(), jobs, [&](std::size_t i) {
        SeaStateRun run;
        run.sea = states[i];
        run.wind_speed = wind_speed;
        run.seed = case_seed(seed, i);
        run.sim = sim;
        SeaStatePower& p = out[i];
        p.state = states[i];
        if (states[i].hm0 > 0.0) p.mean_power = run_sea_state(sys, run).summary.flap_power_total;
        p.p_wave = wave_power_density(states[i].hm0, states[i].te, sys.ctx.fluid.rho, sys.ctx.fluid.g);
        p.cwr = p.p_wave > 0.0 ? capture_width_ratio(p.mean_power, p.p_wave, width) : 0.0;
    });
    return out;
}

}  // namespace hexwave
