#pragma once

#include "hexwave/clip.hpp"
#include "hexwave/common.hpp"
#include "hexwave/errors.hpp"
#include "hexwave/geometry.hpp"
#include "hexwave/mesh.hpp"
#include "hexwave/pto_mooring.hpp"

#include <boost/math/tools/roots.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hexwave {

// Mass, centre of gravity, and inertia tensor about the COG.
struct RigidBodyProperties {
    double mass = 0.0;
    Vec3 cog = Vec3::Zero();
    Mat3 inertia = Mat3::Zero();

    RigidBodyProperties transformed(const Rigid& T) const { return {mass, T.apply(cog), T.R * inertia * T.R.transpose()}; }

    // Inertia about an arbitrary point.
    Mat3 inertia_about(const Vec3& p) const {
        const Vec3 d = cog - p;
        return inertia + mass * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
    }
};

inline RigidBodyProperties point_mass(double m, const Vec3& p) { return {m, p, Mat3::Zero()}; }

inline RigidBodyProperties system_mass_properties(const std::vector<RigidBodyProperties>& bodies) {
    if (bodies.empty()) throw DomainError("no bodies to combine");
    RigidBodyProperties out;
    Vec3 moment = Vec3::Zero();
    for (const auto& b : bodies) {
        out.mass += b.mass;
        moment += b.mass * b.cog;
    }
    if (!(out.mass > 0.0)) throw DomainError("combined mass must be positive");
    out.cog = moment / out.mass;
    for (const auto& b : bodies) out.inertia += b.inertia_about(out.cog);
    return out;
}

inline double required_mass(double buoyancy_force, double mooring_force, double g = 9.81) {
    if (mooring_force < 0.0 || buoyancy_force < 0.0) throw DomainError("forces must be non-negative");
    if (mooring_force > buoyancy_force) throw InfeasibleEquilibriumError("mooring force exceeds buoyancy");
    return (buoyancy_force - mooring_force) / g;
}

// Tapered thin-walled tower from z_fr_p to z_fr_p + l_t, integrated in slices.
inline RigidBodyProperties tower_properties(const DesignVectors& dv, double steel_density, int slices = 4000) {
    RigidBodyProperties out;
    out.cog = Vec3(0, 0, dv.z_fr_p);
    if (dv.l_t <= 0.0) return out;
    const double dz = dv.l_t / slices;
    std::vector<RigidBodyProperties> parts;
    parts.reserve(slices);
    for (int i = 0; i < slices; ++i) {
        const double s = (i + 0.5) / slices;
        const double d = dv.d_b_t + s * (dv.d_t_t - dv.d_b_t);
        const double t = dv.b_b_t + s * (dv.b_t_t - dv.b_b_t);
        const double m = steel_density * pi * (d * t - t * t) * dz;
        const double ro2 = d * d / 4.0, ri2 = (d / 2.0 - t) * (d / 2.0 - t);
        Mat3 I = Mat3::Zero();
        I(0, 0) = I(1, 1) = m * ((ro2 + ri2) / 4.0 + dz * dz / 12.0);
        I(2, 2) = m * (ro2 + ri2) / 2.0;
        parts.push_back({m, Vec3(0, 0, dv.z_fr_p + s * dv.l_t), I});
    }
    return system_mass_properties(parts);
}

inline RigidBodyProperties rna_properties(const DesignVectors& dv) {
    return point_mass(dv.rna_mass, Vec3(0, 0, dv.hub_height()));
}

inline RigidBodyProperties tower_rna_properties(const DesignVectors& dv, double steel_density) {
    const auto tower = tower_properties(dv, steel_density);
    if (tower.mass <= 0.0) return rna_properties(dv);
    return system_mass_properties({tower, rna_properties(dv)});
}

// Smallest characteristic size of a mesh: the thinnest bounding-box extent of
// any connected component.
inline double min_feature_size(const PanelMesh& mesh) {
    double f = std::numeric_limits<double>::infinity();
    for (const auto& c : connected_components(mesh)) f = std::min(f, bounding_box(c).extent().minCoeff());
    return f;
}

// Thin-shell steel mass: area × thickness × density, lumped on the mid-surface.
inline RigidBodyProperties shell_mass(const PanelMesh& mesh, double thickness, double steel_density) {
    require_closed(mesh);
    if (!(thickness > 0.0)) throw DomainError("shell thickness must be positive");
    if (thickness > 0.5 * min_feature_size(mesh)) throw ThinWallViolationError("shell thickness exceeds half the minimum feature size");
    const auto si = surface_integrals(mesh);
    const double areal = thickness * steel_density;
    RigidBodyProperties out;
    out.mass = si.area * areal;
    out.cog = si.centroid();
    const Mat3 second_about_cog = si.second - si.area * out.cog * out.cog.transpose();
    out.inertia = areal * inertia_from_second_moment(second_about_cog);
    return out;
}

struct BallastMedia {
    double slurry_density = 5000.0;
    double water_density = 1025.0;
    bool use_slurry = true;
    bool use_water = true;
};

struct BodyBallast {
    double slurry_volume = 0.0;
    double water_volume = 0.0;
    double air_volume = 0.0;
    double internal_volume = 0.0;
    double mass = 0.0;
};

struct BallastPlan {
    std::vector<BodyBallast> bodies;
    BallastMedia media;
};

// Fill one body: slurry first (when enabled), then water, the rest air.
inline BodyBallast fill_body(double mass, double internal_volume, const BallastMedia& media, const std::string& name) {
    if (mass < 0.0) throw OverMassedError(name + ": negative ballast mass");
    BodyBallast b;
    b.internal_volume = internal_volume;
    b.mass = mass;
    double rest = mass;
    double free_volume = internal_volume;
    if (media.use_slurry) {
        b.slurry_volume = std::min(rest / media.slurry_density, free_volume);
        rest -= b.slurry_volume * media.slurry_density;
        free_volume -= b.slurry_volume;
    }
    if (rest > 1e-9 * std::max(1.0, mass) && media.use_water) {
        b.water_volume = rest / media.water_density;
        rest = 0.0;
        free_volume -= b.water_volume;
    }
    if (rest > 1e-9 * std::max(1.0, mass) || free_volume < -1e-9 * std::max(1.0, internal_volume))
        throw BallastInfeasibleError(name + ": ballast mass " + std::to_string(mass) + " kg exceeds capacity of " +
                                     std::to_string(internal_volume) + " m^3");
    b.air_volume = std::max(0.0, free_volume);
    return b;
}

// Body 0 receives fractions[0]·mass, the remaining share is split evenly over
// the other bodies.
inline BallastPlan allocate_ballast(double remaining_mass, std::array<double, 2> fractions,
                                    const std::vector<double>& internal_volumes, const BallastMedia& media = {}) {
    if (remaining_mass < 0.0) throw OverMassedError("structure already exceeds the required mass");
    if (std::abs(fractions[0] + fractions[1] - 1.0) > 1e-12) throw DomainError("ballast fractions must sum to 1");
    if (internal_volumes.empty()) throw DomainError("no bodies to ballast");
    BallastPlan plan;
    plan.media = media;
    const std::size_t others = internal_volumes.size() - 1;
    for (std::size_t i = 0; i < internal_volumes.size(); ++i) {
        double share = 0.0;
        if (i == 0) share = others == 0 ? 1.0 : fractions[0];
        else share = fractions[1] / static_cast<double>(others);
        const std::string name = i == 0 ? "platform" : "flap " + std::to_string(i);
        plan.bodies.push_back(fill_body(share * remaining_mass, internal_volumes[i], media, name));
    }
    return plan;
}

// Volume integrals of the part of `mesh` below z, scaled by `scale`.
inline VolumeIntegrals volume_below(const PanelMesh& mesh, double z, double scale = 1.0) {
    auto vi = volume_integrals(clip_below_waterline(mesh, z));
    vi.volume *= scale;
    vi.first *= scale;
    vi.second *= scale;
    return vi;
}

// Level at which the scaled volume below reaches `target`.
inline double fill_level(const PanelMesh& mesh, double target, double scale) {
    const auto bb = bounding_box(mesh);
    if (target <= 0.0) return bb.lo.z();
    const double total = volume_integrals(mesh).volume * scale;
    if (target >= total) return bb.hi.z();
    auto f = [&](double z) { return volume_below(mesh, z, scale).volume - target; };
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, bb.lo.z(), bb.hi.z(), f(bb.lo.z()), f(bb.hi.z()),
                                               boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
}

// Mass properties of a stratified fill in the body frame: the densest layer
// at the bottom. The tank is the body mesh shrunk in volume by the shell.
inline RigidBodyProperties stratified_fill(const PanelMesh& mesh, const BodyBallast& b, const BallastMedia& media) {
    const double ext = volume_integrals(mesh).volume;
    const double scale = ext > 0.0 ? b.internal_volume / ext : 0.0;
    const double z_s = fill_level(mesh, b.slurry_volume, scale);
    const double z_w = fill_level(mesh, b.slurry_volume + b.water_volume, scale);
    const auto lo = volume_below(mesh, z_s, scale);
    const auto hi = volume_below(mesh, z_w, scale);
    const double ms = media.slurry_density * lo.volume;
    const double mw = media.water_density * (hi.volume - lo.volume);
    RigidBodyProperties out;
    out.mass = ms + mw;
    if (out.mass <= 0.0) {
        out.mass = 0.0;
        return out;
    }
    const Vec3 first = media.slurry_density * lo.first + media.water_density * (hi.first - lo.first);
    const Mat3 second = media.slurry_density * lo.second + media.water_density * (hi.second - lo.second);
    out.cog = first / out.mass;
    out.inertia = inertia_from_second_moment(second - out.mass * out.cog * out.cog.transpose());
    // Rescale so the mass matches the allocation exactly.
    const double k = b.mass / out.mass;
    out.mass *= k;
    out.inertia *= k;
    return out;
}

struct MassModelOptions {
    Fluid fluid;
    BallastMedia media;
    double fb_ref = 1.4e8;
    double fmoor_ref = 1.84e6;
    // Lower the platform share to its capacity and push the excess to the flaps.
    bool clamp_platform_share = false;
    int resolution = 1;
};

// Full allocation: platform body (shell, ballast, tower, RNA) in the platform
// frame, flap bodies in their hinge frames.
struct MassModel {
    DesignVectors dv;
    double displaced_volume = 0.0;
    double buoyancy_force = 0.0;
    double mooring_force = 0.0;
    double required_mass = 0.0;
    double platform_share = 0.0;
    RigidBodyProperties platform_shell, tower, rna, platform_ballast;
    std::array<RigidBodyProperties, 3> flap_shell, flap_ballast;
    RigidBodyProperties platform;           // everything rigidly attached to the platform
    std::array<RigidBodyProperties, 3> flaps;  // hinge frames
    BallastPlan ballast;

    double total_mass() const { return platform.mass + flaps[0].mass + flaps[1].mass + flaps[2].mass; }
};

inline RigidBodyProperties flap_system_in_platform(const MassModel& mm, const std::array<FlapMount, 3>& mounts, int i, double angle) {
    return mm.flaps[i].transformed(flap_in_platform(mounts[i], angle));
}

// System properties in the platform frame for given relative flap angles.
inline RigidBodyProperties system_in_platform(const MassModel& mm, const std::array<FlapMount, 3>& mounts,
                                              const std::array<double, 3>& flap_angles) {
    std::vector<RigidBodyProperties> bodies{mm.platform};
    for (int i = 0; i < 3; ++i)
        if (mm.flaps[i].mass > 0.0) bodies.push_back(flap_system_in_platform(mm, mounts, i, flap_angles[i]));
    return system_mass_properties(bodies);
}

inline MassModel build_mass_model(const DesignVectors& dv, const MassModelOptions& opt = {}) {
    dv.validate();
    MassModel mm;
    mm.dv = dv;
    const PanelMesh platform = build_platform_mesh(dv, opt.resolution);
    const PanelMesh flap = build_flap_mesh(dv, opt.resolution);
    const auto mounts = flap_mounts(dv);

    const auto posed = pose_assembly(platform, {flap, flap, flap}, mounts, AssemblyPose{});
    mm.displaced_volume = volume_integrals(clip_below_waterline(posed.combined(), 0.0)).volume;
    mm.buoyancy_force = opt.fluid.rho * opt.fluid.g * mm.displaced_volume;
    mm.mooring_force = mooring_target(mm.buoyancy_force, opt.fb_ref, opt.fmoor_ref);
    mm.required_mass = required_mass(mm.buoyancy_force, mm.mooring_force, opt.fluid.g);

    mm.tower = tower_properties(dv, dv.tower_steel_density);
    mm.rna = rna_properties(dv);
    mm.platform_shell = shell_mass(platform, dv.b_wall_pf, dv.steel_density);
    const auto fshell = shell_mass(flap, dv.b_wall_pf, dv.steel_density);
    double structure = mm.tower.mass + mm.rna.mass + mm.platform_shell.mass;
    for (int i = 0; i < 3; ++i) {
        mm.flap_shell[i] = fshell;
        structure += fshell.mass;
    }
    const double remaining = mm.required_mass - structure;
    if (remaining < 0.0)
        throw OverMassedError("structure mass " + std::to_string(structure) + " kg exceeds required mass " +
                              std::to_string(mm.required_mass) + " kg");

    const double v_plat = volume_integrals(platform).volume - mm.platform_shell.mass / dv.steel_density;
    const double v_flap = volume_integrals(flap).volume - fshell.mass / dv.steel_density;
    double share = dv.m_p_frac;
    if (opt.clamp_platform_share && remaining > 0.0) {
        const double dens = opt.media.use_slurry ? opt.media.slurry_density : opt.media.water_density;
        share = std::min(share, v_plat * dens / remaining * (1.0 - 1e-12));
    }
    mm.platform_share = share;
    mm.ballast = allocate_ballast(remaining, {share, 1.0 - share}, {v_plat, v_flap, v_flap, v_flap}, opt.media);

    mm.platform_ballast = stratified_fill(platform, mm.ballast.bodies[0], opt.media);
    std::vector<RigidBodyProperties> plat_parts{mm.platform_shell, mm.rna};
    if (mm.tower.mass > 0.0) plat_parts.push_back(mm.tower);
    if (mm.platform_ballast.mass > 0.0) plat_parts.push_back(mm.platform_ballast);
    mm.platform = system_mass_properties(plat_parts);
    for (int i = 0; i < 3; ++i) {
        mm.flap_ballast[i] = stratified_fill(flap, mm.ballast.bodies[i + 1], opt.media);
        mm.flaps[i] = mm.flap_ballast[i].mass > 0.0 ? system_mass_properties({mm.flap_shell[i], mm.flap_ballast[i]})
                                                    : mm.flap_shell[i];
    }
    return mm;
}

inline MassModelOptions slurry_ballast() { return {}; }

inline MassModelOptions water_ballast() {
    MassModelOptions o;
    o.media.use_slurry = false;
    o.clamp_platform_share = true;
    return o;
}

}  // namespace hexwave
