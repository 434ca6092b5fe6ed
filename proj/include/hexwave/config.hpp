#pragma once

#include "hexwave/analysis.hpp"
#include "hexwave/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hexwave {

inline constexpr const char* artifact_version = "1.0.0";

struct DesignKey {
    const char* name;
    double DesignVectors::*field;
};

inline const std::vector<DesignKey>& design_keys() {
    static const std::vector<DesignKey> keys{
        {"z_dr_p", &DesignVectors::z_dr_p},
        {"z_fr_p", &DesignVectors::z_fr_p},
        {"l_s_p", &DesignVectors::l_s_p},
        {"w_xy_p", &DesignVectors::w_xy_p},
        {"w_z_p", &DesignVectors::w_z_p},
        {"d_c_p", &DesignVectors::d_c_p},
        {"l_f", &DesignVectors::l_f},
        {"h_f", &DesignVectors::h_f},
        {"w_f", &DesignVectors::w_f},
        {"l_t", &DesignVectors::l_t},
        {"d_b_t", &DesignVectors::d_b_t},
        {"d_t_t", &DesignVectors::d_t_t},
        {"b_b_t", &DesignVectors::b_b_t},
        {"b_t_t", &DesignVectors::b_t_t},
        {"b_wall_pf", &DesignVectors::b_wall_pf},
        {"m_p_frac", &DesignVectors::m_p_frac},
        {"m_f_frac", &DesignVectors::m_f_frac},
        {"steel_density", &DesignVectors::steel_density},
        {"tower_steel_density", &DesignVectors::tower_steel_density},
        {"slurry_density", &DesignVectors::slurry_density},
        {"water_density", &DesignVectors::water_density},
        {"rna_mass", &DesignVectors::rna_mass},
        {"flap_limit_deg", &DesignVectors::flap_limit_deg},
    };
    return keys;
}

struct RunConfig {
    DesignVectors design;
    bool slurry = true;

    SeaState sea{2.85, 10.04, 3.3, 0.0, 1.0, ""};
    double wind_speed = 11.35;
    double wind_ref_height = 87.6;
    double shear_alpha = 0.14;
    std::string history = "cdip139_sample.csv";

    std::string hydro_radiation = "fallback";
    std::string hydro_excitation;
    FallbackOptions fallback;

    std::string mooring_table = "synthetic";
    std::string power_curve = "builtin";

    double dt = 0.05, duration = 600.0, transient_skip = 120.0, ramp = 20.0;
    double viscous_zeta = 0.0;
    std::uint64_t seed = 42;
    int resolution = 1;

    double platform_lo = -60.0, platform_hi = 60.0, platform_step = 2.0;
    double flap_lo = -40.0, flap_hi = 40.0, flap_step = 20.0;
    int gm_samples = 1000;
    double gm_range_deg = 45.0;

    int clusters = 10;
    double wind_mean_power = 0.0;  // W; 0 → from the power curve at the configured wind speed
    double hours = hours_per_year;
    double cwr_width = 0.0;        // 0 → flap length

    SimOptions sim() const {
        SimOptions s;
        s.dt = dt;
        s.duration = duration;
        s.transient_skip = transient_skip;
        s.ramp = ramp;
        return s;
    }

    SystemOptions system() const {
        SystemOptions s;
        s.mass = slurry ? slurry_ballast() : water_ballast();
        s.hydro = fallback;
        s.viscous_zeta = viscous_zeta;
        s.resolution = resolution;
        return s;
    }
};

// Resolves bundled data names against HEXWAVE_DATA, then the config directory.
inline std::string resolve_data_path(const std::string& name, const std::string& base_dir = "") {
    namespace fs = std::filesystem;
    if (name.empty()) return name;
    const fs::path p(name);
    if (p.is_absolute() && fs::exists(p)) return name;
    if (!base_dir.empty() && fs::exists(fs::path(base_dir) / p)) return (fs::path(base_dir) / p).string();
    if (fs::exists(p)) return name;
    if (const char* env = std::getenv("HEXWAVE_DATA"))
        if (fs::exists(fs::path(env) / p)) return (fs::path(env) / p).string();
    return name;
}

namespace detail {

inline double get_number(const boost::property_tree::ptree& t, const std::string& key, double fallback) {
    const auto v = t.get_optional<std::string>(key);
    if (!v) return fallback;
    double x = 0.0;
    if (!parse_double(*v, x)) throw ValidationError("config key " + key + " is not a number: " + *v);
    return x;
}

inline bool get_bool(const boost::property_tree::ptree& t, const std::string& key, bool fallback) {
    const auto v = t.get_optional<std::string>(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ValidationError("config key " + key + " is not a boolean: " + *v);
}

inline const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = [] {
        std::map<std::string, std::set<std::string>> k;
        for (const auto& d : design_keys()) k["design"].insert(d.name);
        k["ballast"] = {"medium"};
        k["environment"] = {"hm0", "te", "gamma", "heading_deg", "wind_speed", "wind_ref_height", "shear_alpha", "history"};
        k["hydro"] = {"radiation", "excitation", "lobe_exponent", "back_face", "shadow_factor", "shadow_window_deg", "shadowing"};
        k["mooring"] = {"table"};
        k["turbine"] = {"power_curve"};
        k["simulation"] = {"dt", "duration", "transient_skip", "ramp", "viscous_zeta", "seed", "resolution"};
        k["stability"] = {"platform_lo", "platform_hi", "platform_step", "flap_lo", "flap_hi", "flap_step", "gm_samples", "gm_range_deg"};
        k["aep"] = {"clusters", "wind_mean_power", "hours", "cwr_width"};
        return k;
    }();
    return keys;
}

}  // namespace detail

// Flat INI with sections. Every [design] key is required; other keys default.
inline RunConfig parse_config(std::istream& in, const std::string& base_dir = "") {
    namespace pt = boost::property_tree;
    pt::ptree t;
    try {
        pt::read_ini(in, t);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    for (const auto& [section, body] : t) {
        const auto it = detail::known_keys().find(section);
        if (it == detail::known_keys().end()) throw ValidationError("unknown config section [" + section + "]");
        for (const auto& kv : body)
            if (!it->second.count(kv.first)) throw ValidationError("unknown config key " + section + "." + kv.first);
    }
    RunConfig c;
    std::vector<std::string> missing;
    for (const auto& d : design_keys()) {
        const std::string key = std::string("design.") + d.name;
        if (!t.get_optional<std::string>(key)) {
            missing.push_back(key);
            continue;
        }
        c.design.*(d.field) = detail::get_number(t, key, 0.0);
    }
    if (!missing.empty()) {
        std::string msg = "missing config keys:";
        for (const auto& m : missing) msg += " " + m;
        throw ValidationError(msg);
    }
    const std::string medium = t.get<std::string>("ballast.medium", "slurry");
    if (medium != "slurry" && medium != "water") throw ValidationError("ballast.medium must be slurry or water");
    c.slurry = medium == "slurry";

    c.sea.hm0 = detail::get_number(t, "environment.hm0", c.sea.hm0);
    c.sea.te = detail::get_number(t, "environment.te", c.sea.te);
    c.sea.gamma = detail::get_number(t, "environment.gamma", c.sea.gamma);
    c.sea.heading = detail::get_number(t, "environment.heading_deg", c.sea.heading);
    c.wind_speed = detail::get_number(t, "environment.wind_speed", c.wind_speed);
    c.wind_ref_height = detail::get_number(t, "environment.wind_ref_height", c.wind_ref_height);
    c.shear_alpha = detail::get_number(t, "environment.shear_alpha", c.shear_alpha);
    c.history = t.get<std::string>("environment.history", c.history);

    c.hydro_radiation = t.get<std::string>("hydro.radiation", c.hydro_radiation);
    c.hydro_excitation = t.get<std::string>("hydro.excitation", c.hydro_excitation);
    c.fallback.lobe_exponent = detail::get_number(t, "hydro.lobe_exponent", c.fallback.lobe_exponent);
    c.fallback.back_face = detail::get_number(t, "hydro.back_face", c.fallback.back_face);
    c.fallback.shadow_factor = detail::get_number(t, "hydro.shadow_factor", c.fallback.shadow_factor);
    c.fallback.shadow_window_deg = detail::get_number(t, "hydro.shadow_window_deg", c.fallback.shadow_window_deg);
    c.fallback.shadowing = detail::get_bool(t, "hydro.shadowing", c.fallback.shadowing);

    c.mooring_table = t.get<std::string>("mooring.table", c.mooring_table);
    c.power_curve = t.get<std::string>("turbine.power_curve", c.power_curve);

    c.dt = detail::get_number(t, "simulation.dt", c.dt);
    c.duration = detail::get_number(t, "simulation.duration", c.duration);
    c.transient_skip = detail::get_number(t, "simulation.transient_skip", c.transient_skip);
    c.ramp = detail::get_number(t, "simulation.ramp", c.ramp);
    c.viscous_zeta = detail::get_number(t, "simulation.viscous_zeta", c.viscous_zeta);
    c.seed = static_cast<std::uint64_t>(detail::get_number(t, "simulation.seed", static_cast<double>(c.seed)));
    c.resolution = static_cast<int>(detail::get_number(t, "simulation.resolution", c.resolution));

    c.platform_lo = detail::get_number(t, "stability.platform_lo", c.platform_lo);
    c.platform_hi = detail::get_number(t, "stability.platform_hi", c.platform_hi);
    c.platform_step = detail::get_number(t, "stability.platform_step", c.platform_step);
    c.flap_lo = detail::get_number(t, "stability.flap_lo", c.flap_lo);
    c.flap_hi = detail::get_number(t, "stability.flap_hi", c.flap_hi);
    c.flap_step = detail::get_number(t, "stability.flap_step", c.flap_step);
    c.gm_samples = static_cast<int>(detail::get_number(t, "stability.gm_samples", c.gm_samples));
    c.gm_range_deg = detail::get_number(t, "stability.gm_range_deg", c.gm_range_deg);

    c.clusters = static_cast<int>(detail::get_number(t, "aep.clusters", c.clusters));
    c.wind_mean_power = detail::get_number(t, "aep.wind_mean_power", c.wind_mean_power);
    c.hours = detail::get_number(t, "aep.hours", c.hours);
    c.cwr_width = detail::get_number(t, "aep.cwr_width", c.cwr_width);

    c.design.validate();
    if (!(c.dt > 0.0) || !(c.duration > 0.0) || c.transient_skip < 0.0 || c.transient_skip >= c.duration)
        throw ValidationError("simulation timing must satisfy dt > 0 and 0 <= transient_skip < duration");
    if (c.resolution < 1) throw ValidationError("simulation.resolution must be >= 1");

    // fail fast on referenced files
    auto check_file = [&](std::string& path, const char* key) {
        path = resolve_data_path(path, base_dir);
        if (!std::filesystem::exists(path)) throw ValidationError(std::string(key) + " file not found: " + path);
    };
    if (c.hydro_radiation != "fallback") {
        check_file(c.hydro_radiation, "hydro.radiation");
        check_file(c.hydro_excitation, "hydro.excitation");
        read_hydro_tables(c.hydro_radiation, c.hydro_excitation);
    }
    if (c.mooring_table != "synthetic") {
        check_file(c.mooring_table, "mooring.table");
        read_mooring_table(c.mooring_table);
    }
    if (c.power_curve != "builtin") {
        check_file(c.power_curve, "turbine.power_curve");
        read_power_curve(c.power_curve);
    }
    c.history = resolve_data_path(c.history, base_dir);
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path);
    return parse_config(in, std::filesystem::path(path).parent_path().string());
}

inline std::string format_config(const RunConfig& c) {
    std::ostringstream os;
    char buf[128];
    os << "[design]\n";
    for (const auto& d : design_keys()) {
        std::snprintf(buf, sizeof buf, "%s = %.17g\n", d.name, c.design.*(d.field));
        os << buf;
    }
    os << "\n[ballast]\nmedium = " << (c.slurry ? "slurry" : "water") << "\n";
    auto num = [&](const char* k, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.17g\n", k, v);
        os << buf;
    };
    os << "\n[environment]\n";
    num("hm0", c.sea.hm0);
    num("te", c.sea.te);
    num("gamma", c.sea.gamma);
    num("heading_deg", c.sea.heading);
    num("wind_speed", c.wind_speed);
    num("wind_ref_height", c.wind_ref_height);
    num("shear_alpha", c.shear_alpha);
    os << "history = " << c.history << "\n";
    os << "\n[simulation]\n";
    num("dt", c.dt);
    num("duration", c.duration);
    num("transient_skip", c.transient_skip);
    num("ramp", c.ramp);
    num("viscous_zeta", c.viscous_zeta);
    num("seed", static_cast<double>(c.seed));
    num("resolution", c.resolution);
    os << "\n[hydro]\nradiation = " << c.hydro_radiation << "\nexcitation = " << c.hydro_excitation << "\n";
    num("lobe_exponent", c.fallback.lobe_exponent);
    num("back_face", c.fallback.back_face);
    num("shadow_factor", c.fallback.shadow_factor);
    num("shadow_window_deg", c.fallback.shadow_window_deg);
    os << "shadowing = " << (c.fallback.shadowing ? "true" : "false") << "\n";
    os << "\n[mooring]\ntable = " << c.mooring_table << "\n";
    os << "\n[turbine]\npower_curve = " << c.power_curve << "\n";
    os << "\n[stability]\n";
    num("platform_lo", c.platform_lo);
    num("platform_hi", c.platform_hi);
    num("platform_step", c.platform_step);
    num("flap_lo", c.flap_lo);
    num("flap_hi", c.flap_hi);
    num("flap_step", c.flap_step);
    num("gm_samples", c.gm_samples);
    num("gm_range_deg", c.gm_range_deg);
    os << "\n[aep]\n";
    num("clusters", c.clusters);
    num("wind_mean_power", c.wind_mean_power);
    num("hours", c.hours);
    num("cwr_width", c.cwr_width);
    return os.str();
}

// ---- reproducible outputs ----------------------------------------------------------

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

// Writes to a temporary sibling and renames on success.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline std::string fmt(double v, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace hexwave
