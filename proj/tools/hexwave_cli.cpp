#include "hexwave/config.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace hexwave;

namespace {

struct Session {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    unsigned jobs = default_jobs();
    std::string out = "out";
    RunConfig cfg;
    std::vector<std::string> files;

    void load() {
        if (!config_path.empty()) {
            cfg = load_config(config_path);
        } else {
            cfg.history = resolve_data_path(cfg.history);
        }
        if (seed) cfg.seed = *seed;
        if (jobs == 0) jobs = 1;
    }

    void write(const std::string& name, const std::string& content) {
        write_atomic(fs::path(out) / name, content);
        files.push_back(name);
    }

    void manifest(const std::string& command, int failures) {
        nlohmann::ordered_json j;
        j["command"] = command;
        j["version"] = artifact_version;
        char hash[32];
        std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(format_config(cfg))));
        j["config_hash"] = hash;
        j["seed"] = cfg.seed;
        j["failures"] = failures;
        j["files"] = files;
        write_atomic(fs::path(out) / "manifest.json", j.dump(2) + "\n");
    }
};

std::string csv_escape(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') r += '"';
        r += c == '\n' ? ' ' : c;
    }
    return r + "\"";
}

PlatformSystem make_system(const RunConfig& c) {
    std::shared_ptr<const HydroModel> hydro;
    if (c.hydro_radiation != "fallback") hydro = std::make_shared<TableHydro>(read_hydro_tables(c.hydro_radiation, c.hydro_excitation));
    std::optional<MooringModel> table;
    if (c.mooring_table != "synthetic") table = read_mooring_table(c.mooring_table);
    PlatformSystem sys = PlatformSystem::build(c.design, c.system(), hydro, table ? &*table : nullptr);
    if (c.power_curve != "builtin") sys.curve = read_power_curve(c.power_curve);
    return sys;
}

double hub_wind(const RunConfig& c) { return wind_at_height(c.wind_speed, c.wind_ref_height, c.design.hub_height(), c.shear_alpha); }

SeaStateRun base_run(const RunConfig& c) {
    SeaStateRun r;
    r.sea = c.sea;
    r.wind_speed = hub_wind(c);
    r.seed = c.seed;
    r.sim = c.sim();
    return r;
}

// 0 all good, 2 some failed, 1 all failed
int status(std::size_t failed, std::size_t total) {
    if (failed == 0) return 0;
    return failed >= total ? 1 : 2;
}

std::string failures_csv(const std::vector<std::pair<std::string, std::string>>& f) {
    std::string s = "case,error\n";
    for (const auto& [k, e] : f) s += k + "," + csv_escape(e) + "\n";
    return s;
}

int cmd_geometry(Session& s, int resolution) {
    const auto& dv = s.cfg.design;
    SystemOptions so = s.cfg.system();
    so.mass.resolution = resolution;
    const HydroContext ctx = HydroContext::make(dv, so.mass, resolution);
    const auto platform = build_platform_mesh(dv, resolution);
    const auto flap = build_flap_mesh(dv, resolution);
    const auto posed = pose_assembly(platform, {flap, flap, flap}, ctx.mounts, AssemblyPose{});
    auto stl = [](const PanelMesh& m, const std::string& name) {
        std::ostringstream os;
        write_ascii_stl(os, m, name);
        return os.str();
    };
    s.write("platform.stl", stl(platform, "platform"));
    s.write("flap.stl", stl(flap, "flap"));
    s.write("assembly.stl", stl(posed.combined(), "assembly"));

    const MassModel& mm = ctx.mass;
    std::ostringstream mr;
    mr << "component,mass_kg,cog_x_m,cog_y_m,cog_z_m\n";
    auto row = [&](const std::string& n, const RigidBodyProperties& p) {
        mr << n << ',' << fmt(p.mass) << ',' << fmt(p.cog.x()) << ',' << fmt(p.cog.y()) << ',' << fmt(p.cog.z()) << '\n';
    };
    row("platform_shell", mm.platform_shell);
    row("tower", mm.tower);
    row("rna", mm.rna);
    row("platform_ballast", mm.platform_ballast);
    for (int i = 0; i < 3; ++i) {
        row("flap" + std::to_string(i + 1) + "_shell", mm.flap_shell[i]);
        row("flap" + std::to_string(i + 1) + "_ballast", mm.flap_ballast[i]);
    }
    row("system", ctx.system(AssemblyPose{}));
    s.write("mass_report.csv", mr.str());

    std::ostringstream br;
    br << "body,slurry_volume_m3,water_volume_m3,air_volume_m3,internal_volume_m3,ballast_mass_kg\n";
    const char* names[] = {"platform", "flap1", "flap2", "flap3"};
    for (std::size_t i = 0; i < mm.ballast.bodies.size() && i < 4; ++i) {
        const auto& b = mm.ballast.bodies[i];
        br << names[i] << ',' << fmt(b.slurry_volume) << ',' << fmt(b.water_volume) << ',' << fmt(b.air_volume) << ','
           << fmt(b.internal_volume) << ',' << fmt(b.mass) << '\n';
    }
    s.write("ballast_report.csv", br.str());

    const auto rep = evaluate_pose(ctx, AssemblyPose{});
    const double g = ctx.fluid.g;
    std::ostringstream hs;
    hs << "quantity,value\n";
    auto kv = [&](const char* k, double v) { hs << k << ',' << fmt(v) << '\n'; };
    kv("resolution", resolution);
    kv("mesh_faces", static_cast<double>(posed.combined().faces.size()));
    kv("displaced_volume_m3", mm.displaced_volume);
    kv("buoyancy_N", mm.buoyancy_force);
    kv("mooring_pretension_N", mm.mooring_force);
    kv("required_mass_kg", mm.required_mass);
    kv("total_mass_kg", mm.total_mass());
    kv("closure_residual", (mm.buoyancy_force - mm.total_mass() * g - mm.mooring_force) / mm.buoyancy_force);
    kv("z_cob_m", rep.cob.z());
    kv("z_cog_m", rep.cog.z());
    kv("cog_above_cob", rep.cog.z() > rep.cob.z() ? 1.0 : 0.0);
    kv("gm_long_m", rep.gm_long);
    kv("gm_trans_m", rep.gm_trans);
    kv("waterplane_area_m2", rep.waterplane.area);
    kv("hub_height_m", dv.hub_height());
    s.write("hydrostatics.csv", hs.str());
    std::printf("COG z %.3f m, COB z %.3f m (%s), GM %.3f m\n", rep.cog.z(), rep.cob.z(),
                rep.cog.z() > rep.cob.z() ? "COG above COB" : "COG below COB", rep.gm_long);
    s.manifest("geometry", 0);
    return 0;
}

int cmd_stability(Session& s) {
    const auto& c = s.cfg;
    const HydroContext ctx = HydroContext::make(c.design, c.system().mass, c.resolution);
    const auto env = stability_envelope(ctx, angle_grid(c.platform_lo, c.platform_hi, c.platform_step),
                                        angle_grid(c.flap_lo, c.flap_hi, c.flap_step), s.jobs);
    std::ostringstream os;
    os << "platform_deg,flap1_deg,flap2_deg,flap3_deg,gm_m,gm_trans_m,aw_m2,defined\n";
    for (const auto& cell : env.cells)
        os << fmt(cell.platform_deg) << ',' << fmt(cell.flap_deg[0]) << ',' << fmt(cell.flap_deg[1]) << ','
           << fmt(cell.flap_deg[2]) << ',' << fmt(cell.gm) << ',' << fmt(cell.gm_trans) << ',' << fmt(cell.aw) << ','
           << (cell.defined ? 1 : 0) << '\n';
    s.write("stability_envelope.csv", os.str());

    std::ostringstream sm;
    sm << "platform_deg,gm_mean_m,gm_std_m,gm_min_m,aw_mean_m2,aw_std_m2\n";
    for (const auto& r : env.summary)
        sm << fmt(r.platform_deg) << ',' << fmt(r.gm_mean) << ',' << fmt(r.gm_std) << ',' << fmt(r.gm_min) << ','
           << fmt(r.aw_mean) << ',' << fmt(r.aw_std) << '\n';
    s.write("stability_summary.csv", sm.str());

    const double gm_rand = min_gm_random_flaps(ctx, c.gm_samples, c.gm_range_deg, c.seed);
    std::ostringstream rp;
    rp << "quantity,value\n"
       << "stable_lo_deg," << fmt(env.stable_lo_deg) << "\nstable_hi_deg," << fmt(env.stable_hi_deg)
       << "\nmin_gm_random_m," << fmt(gm_rand) << "\ngm_samples," << c.gm_samples << "\n";
    s.write("stability_report.csv", rp.str());
    std::printf("stable platform range [%g, %g] deg, random-flap min GM %.3f m\n", env.stable_lo_deg, env.stable_hi_deg, gm_rand);
    s.manifest("stability", 0);
    return 0;
}

int cmd_sweep(Session& s) {
    const auto& c = s.cfg;
    SweepSettings st;
    st.sea = c.sea;
    st.wind_speed = c.wind_speed;
    st.wind_ref_height = c.wind_ref_height;
    st.shear_alpha = c.shear_alpha;
    st.seed = c.seed;
    st.gm_samples = c.gm_samples;
    st.gm_range_deg = c.gm_range_deg;
    st.sim = c.sim();
    st.system = c.system();
    const auto cases = generate_sweep(c.design);
    const auto res = run_sweep(cases, st, s.jobs);

    std::ostringstream os;
    os << "variable,level,value,metric,result,status\n";
    std::vector<std::pair<std::string, std::string>> fails;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& m = res[i];
        const std::string status = !m.error.empty() ? "error" : (!m.stable ? "unstable" : "ok");
        if (!m.error.empty()) fails.push_back({cases[i].variable + "_L" + std::to_string(cases[i].level), m.error});
        const std::string head = cases[i].variable + "," + std::to_string(cases[i].level) + "," + fmt(cases[i].value) + ",";
        const bool gm_ok = m.error.empty() || m.min_gm != 0.0;
        os << head << "min_gm_m," << (gm_ok ? fmt(m.min_gm) : "") << ',' << status << '\n';
        const std::pair<const char*, double> sim[] = {{"pitch_max_deg", m.pitch_max_deg},
                                                      {"turbine_power_mw", m.turbine_power_mw},
                                                      {"wec_power_mw", m.wec_power_mw},
                                                      {"stress_max_mpa", m.stress_max_mpa}};
        for (const auto& [k, v] : sim) os << head << k << ',' << (m.simulated ? fmt(v) : "") << ',' << status << '\n';
    }
    s.write("sweep.csv", os.str());
    s.write("failures.csv", failures_csv(fails));
    std::printf("%zu cases, %zu failed\n", cases.size(), fails.size());
    s.manifest("sweep", static_cast<int>(fails.size()));
    return status(fails.size(), cases.size());
}

int cmd_simulate(Session& s, int every) {
    const PlatformSystem sys = make_system(s.cfg);
    const SeaStateRun run = base_run(s.cfg);
    const auto r = run_sea_state(sys, run);
    std::ostringstream ts;
    ts << "t_s,surge_m,sway_m,heave_m,roll_deg,pitch_deg,yaw_deg,flap1_deg,flap2_deg,flap3_deg,"
          "p_f1_W,p_f2_W,p_f3_W,p_turbine_W,thrust_N,stress_Pa\n";
    for (std::size_t k = 0; k < r.t.size(); k += static_cast<std::size_t>(every)) {
        ts << fmt(r.t[k]);
        for (int d = 0; d < n_dof; ++d) ts << ',' << fmt(d >= 3 ? rad2deg(r.q(d, k)) : r.q(d, k));
        for (int f = 0; f < r.flap_power.rows(); ++f) ts << ',' << fmt(r.flap_power(f, k));
        ts << ',' << fmt(r.turbine_power[k]) << ',' << fmt(r.thrust[k]) << ',' << fmt(r.stress[k]) << '\n';
    }
    s.write("timeseries.csv", ts.str());
    const auto& m = r.summary;
    std::ostringstream sm;
    sm << "metric,value\n";
    auto kv = [&](const char* k, double v) { sm << k << ',' << fmt(v) << '\n'; };
    kv("hub_wind_m_s", run.wind_speed);
    kv("P_f1_MW", m.flap_power_mean[0] / 1e6);
    kv("P_f2_MW", m.flap_power_mean[1] / 1e6);
    kv("P_f3_MW", m.flap_power_mean[2] / 1e6);
    kv("P_wec_MW", m.flap_power_total / 1e6);
    kv("P_t_MW", m.turbine_power_mean / 1e6);
    kv("thrust_mean_kN", m.thrust_mean / 1e3);
    kv("pitch_max_deg", m.pitch_max_deg);
    kv("roll_max_deg", m.roll_max_deg);
    kv("sigma_bot_mean_MPa", m.stress_mean / 1e6);
    kv("sigma_bot_max_MPa", m.stress_max / 1e6);
    kv("pto_energy_J", m.pto_energy);
    kv("energy_residual", m.energy_residual);
    s.write("summary.csv", sm.str());
    std::printf("WEC %.3f MW (%.3f / %.3f / %.3f), turbine %.3f MW, pitch max %.2f deg\n", m.flap_power_total / 1e6,
                m.flap_power_mean[0] / 1e6, m.flap_power_mean[1] / 1e6, m.flap_power_mean[2] / 1e6,
                m.turbine_power_mean / 1e6, m.pitch_max_deg);
    s.manifest("simulate", 0);
    return 0;
}

int cmd_direction(Session& s, double step) {
    const PlatformSystem sys = make_system(s.cfg);
    std::vector<double> headings;
    if (!(step > 0.0)) throw ValidationError("--step must be positive");
    for (double h = 0.0; h < 360.0 - 1e-9; h += step) headings.push_back(h);
    const auto rows = directional_sweep(sys, headings, base_run(s.cfg), s.jobs);
    std::ostringstream os;
    os << "heading_deg,P_f1_kW,P_f2_kW,P_f3_kW,P_tot_kW\n";
    std::vector<std::pair<std::string, std::string>> fails;
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            fails.push_back({fmt(r.heading_deg), r.error});
            continue;
        }
        os << fmt(r.heading_deg) << ',' << fmt(r.flap_power[0] / 1e3) << ',' << fmt(r.flap_power[1] / 1e3) << ','
           << fmt(r.flap_power[2] / 1e3) << ',' << fmt(r.total / 1e3) << '\n';
    }
    s.write("polar.csv", os.str());
    s.write("failures.csv", failures_csv(fails));
    s.manifest("direction", static_cast<int>(fails.size()));
    return status(fails.size(), rows.size());
}

int cmd_flap_sweep(Session& s, double lo, double hi, double step, int flap) {
    const PlatformSystem sys = make_system(s.cfg);
    FlapSweepOptions o;
    o.flap = flap - 1;
    o.dt = s.cfg.dt;
    o.omega = 2.0 * pi / s.cfg.sea.te;
    const auto angles = angle_grid(lo, hi, step);
    const auto cells = steady_flap_sweep(sys, angles, o);
    std::ostringstream os;
    os << "flap_deg,pitch_deg,pitch_std_deg,converged,tau_buoyancy_Nm,tau_weight_Nm,tau_buoyancy_inc_Nm,tau_weight_inc_Nm,"
          "submerged_volume_m3\n";
    for (const auto& c : cells) {
        AssemblyPose pose;
        pose.flap_angles[o.flap] = deg2rad(c.flap_deg);
        const auto tq = flap_torque_decomposition(sys.ctx, pose, o.flap);
        os << fmt(c.flap_deg) << ',' << fmt(c.pitch_deg) << ',' << fmt(c.pitch_std_deg) << ',' << (c.converged ? 1 : 0) << ','
           << fmt(tq.tau_b) << ',' << fmt(tq.tau_mg) << ',' << fmt(tq.tau_b_inc) << ',' << fmt(tq.tau_mg_inc) << ','
           << fmt(tq.submerged_volume) << '\n';
    }
    s.write("flap_sweep.csv", os.str());
    s.manifest("flap-sweep", 0);
    return 0;
}

ClusterResult cluster(const RunConfig& c, int k) {
    const auto hist = read_wave_history(c.history);
    if (hist.skipped > 0) std::fprintf(stderr, "skipped %zu invalid history rows\n", static_cast<std::size_t>(hist.skipped));
    return cluster_sea_states(hist, k, c.seed, c.sea.gamma);
}

int cmd_cluster(Session& s, int k) {
    const auto cr = cluster(s.cfg, k);
    std::ostringstream os;
    os << "label,hm0_m,te_s,probability,p_wave_kW_m\n";
    for (const auto& st : cr.states)
        os << st.label << ',' << fmt(st.hm0) << ',' << fmt(st.te) << ',' << fmt(st.probability) << ','
           << fmt(wave_power_density(st.hm0, st.te) / 1e3) << '\n';
    s.write("sea_states.csv", os.str());
    std::ostringstream w;
    w << "iteration,wcss\n";
    for (std::size_t i = 0; i < cr.wcss.size(); ++i) w << i + 1 << ',' << fmt(cr.wcss[i]) << '\n';
    s.write("wcss.csv", w.str());
    s.manifest("cluster", 0);
    return 0;
}

int cmd_aep(Session& s) {
    const auto& c = s.cfg;
    const PlatformSystem sys = make_system(c);
    auto states = cluster(c, c.clusters).states;
    for (auto& st : states) st.heading = c.sea.heading;
    const double u = hub_wind(c);
    const double width = c.cwr_width > 0.0 ? c.cwr_width : c.design.l_f;
    const auto wave = wave_power_by_state(sys, states, u, c.seed, c.sim(), width, s.jobs);
    const double wind = c.wind_mean_power > 0.0 ? c.wind_mean_power : turbine_lookup(sys.curve, u).power;
    const auto r = aep(wind, wave, c.hours);
    std::ostringstream os;
    os << "label,hm0_m,te_s,probability,P_wec_kW,P_wave_kW_m,cwr\n";
    for (const auto& w : r.states)
        os << w.state.label << ',' << fmt(w.state.hm0) << ',' << fmt(w.state.te) << ',' << fmt(w.state.probability) << ','
           << fmt(w.mean_power / 1e3) << ',' << fmt(w.p_wave / 1e3) << ',' << fmt(w.cwr) << '\n';
    s.write("aep.csv", os.str());
    std::ostringstream sm;
    sm << "quantity,value\n"
       << "hours," << fmt(c.hours) << "\nwind_mean_MW," << fmt(r.wind_mean_power / 1e6) << "\nwind_aep_GWh,"
       << fmt(r.wind_aep_wh / 1e9) << "\nwave_mean_MW," << fmt(r.wave_mean_power / 1e6) << "\nwave_aep_GWh,"
       << fmt(r.wave_aep_wh / 1e9) << "\nwave_share," << fmt(r.wave_share) << "\n";
    s.write("aep_summary.csv", sm.str());
    std::printf("wind %.3f GWh, wave %.3f GWh, wave share %.1f%%\n", r.wind_aep_wh / 1e9, r.wave_aep_wh / 1e9, 100.0 * r.wave_share);
    s.manifest("aep", 0);
    return 0;
}

int cmd_export(Session& s) {
    const auto& c = s.cfg;
    const PlatformSystem sys = make_system(c);
    std::ostringstream m;
    write_mooring_table(m, synthetic_mooring_table());
    s.write("mooring_synthetic.csv", m.str());
    std::ostringstream p;
    write_power_curve(p, sys.curve);
    s.write("power_curve.csv", p.str());
    const auto t = TableHydro::tabulate(*sys.hydro, linspace(0.1, 3.5, 35), angle_grid(0.0, 355.0, 5.0));
    std::ostringstream ra, ex;
    write_hydro_tables(ra, ex, t);
    s.write("hydro_radiation.csv", ra.str());
    s.write("hydro_excitation.csv", ex.str());
    s.manifest("export", 0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hexwave: hybrid hexagonal wind-wave platform toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Session s;
    app.add_option("--config", s.config_path, "INI run configuration");
    app.add_option("--seed", s.seed, "random seed (overrides the config)");
    app.add_option("--jobs", s.jobs, "worker threads");
    app.add_option("--out", s.out, "output directory");

    int resolution = 1;
    auto* geo = app.add_subcommand("geometry", "meshes, mass and ballast report, hydrostatic summary");
    geo->add_option("--resolution", resolution, "mesh refinement level")->check(CLI::Range(1, 64));
    auto* stab = app.add_subcommand("stability", "GM envelope over platform and flap angles");
    auto* sweep = app.add_subcommand("sweep", "108-case sensitivity sweep");
    int every = 1;
    auto* sim = app.add_subcommand("simulate", "one sea state in the time domain");
    sim->add_option("--every", every, "write every n-th step")->check(CLI::PositiveNumber);
    double step = 5.0;
    auto* dir = app.add_subcommand("direction", "mean flap power against wave heading");
    dir->add_option("--step", step, "heading step in degrees");
    double lo = -55.0, hi = 55.0, fstep = 5.0;
    int flap = 1;
    auto* fs = app.add_subcommand("flap-sweep", "steady platform pitch against a locked flap angle");
    fs->add_option("--from", lo);
    fs->add_option("--to", hi);
    fs->add_option("--step", fstep);
    fs->add_option("--flap", flap)->check(CLI::Range(1, 3));
    int k = 10;
    auto* cl = app.add_subcommand("cluster", "k-means sea states from the wave history");
    cl->add_option("--k", k)->check(CLI::Range(1, 26));
    auto* ae = app.add_subcommand("aep", "annual energy for wind and wave");
    auto* ex = app.add_subcommand("export", "mooring, hydrodynamic and power-curve tables");

    CLI11_PARSE(app, argc, argv);
    try {
        s.load();
        if (*geo) return cmd_geometry(s, resolution);
        if (*stab) return cmd_stability(s);
        if (*sweep) return cmd_sweep(s);
        if (*sim) return cmd_simulate(s, every);
        if (*dir) return cmd_direction(s, step);
        if (*fs) return cmd_flap_sweep(s, lo, hi, fstep, flap);
        if (*cl) return cmd_cluster(s, k);
        if (*ae) return cmd_aep(s);
        if (*ex) return cmd_export(s);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
    return 1;
}
