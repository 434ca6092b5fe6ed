#pragma once

#include "hexwave/clip.hpp"
#include "hexwave/common.hpp"
#include "hexwave/errors.hpp"
#include "hexwave/geometry.hpp"
#include "hexwave/mass_budget.hpp"
#include "hexwave/parallel.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace hexwave {

struct HydrostaticReport {
    double displaced_volume = 0.0;
    double buoyancy_force = 0.0;
    Vec3 cob = Vec3::Zero();
    WaterplaneProps waterplane;
    double gm_long = 0.0;
    double gm_trans = 0.0;
    double heave = 0.0;
    Vec3 cog = Vec3::Zero();
};

// GM = z_B + I/V − z_G with heights measured from water_z.
inline std::pair<double, double> metacentric_height(const PanelMesh& posed, double z_g, double water_z = 0.0,
                                                    HydrostaticReport* report = nullptr, const Fluid& fluid = {}) {
    const PanelMesh sub = clip_below_waterline(posed, water_z);
    const auto vi = volume_integrals(sub);
    if (!(vi.volume > 1e-12)) throw StabilityUndefinedError("no displaced volume");
    const auto wp = waterplane_from_clipped(sub, water_z);
    const double zb = vi.centroid().z() - water_z;
    const double zg = z_g - water_z;
    const double gm_long = zb + wp.i_yy / vi.volume - zg;
    const double gm_trans = zb + wp.i_xx / vi.volume - zg;
    if (report) {
        report->displaced_volume = vi.volume;
        report->buoyancy_force = fluid.rho * fluid.g * vi.volume;
        report->cob = vi.centroid();
        report->waterplane = wp;
        report->gm_long = gm_long;
        report->gm_trans = gm_trans;
    }
    return {gm_long, gm_trans};
}

// Meshes and allocated masses needed to evaluate any pose.
struct HydroContext {
    DesignVectors dv;
    PanelMesh platform;
    PanelMesh flap;
    std::array<FlapMount, 3> mounts;
    MassModel mass;
    Fluid fluid;

    static HydroContext make(const DesignVectors& dv, const MassModelOptions& opt = {}, int resolution = 1) {
        HydroContext c;
        c.dv = dv;
        c.platform = build_platform_mesh(dv, resolution);
        c.flap = build_flap_mesh(dv, resolution);
        c.mounts = flap_mounts(dv);
        c.mass = build_mass_model(dv, opt);
        c.fluid = opt.fluid;
        return c;
    }

    double target_volume() const {
        return (mass.total_mass() * fluid.g + mass.mooring_force) / (fluid.rho * fluid.g);
    }

    PosedAssembly posed(const AssemblyPose& pose) const { return pose_assembly(platform, {flap, flap, flap}, mounts, pose); }

    RigidBodyProperties system(const AssemblyPose& pose) const {
        return system_in_platform(mass, mounts, pose.flap_angles).transformed(platform_transform(pose));
    }
};

// Water level (relative to an un-heaved pose) at which the displaced volume
// equals `target_volume`.
inline double equilibrium_water_level(const PanelMesh& posed, double target_volume) {
    const auto bb = bounding_box(posed);
    const double total = volume_integrals(posed).volume;
    if (!(target_volume > 0.0) || target_volume >= total)
        throw InfeasibleEquilibriumError("required displacement is outside the hull volume");
    auto f = [&](double w) { return volume_integrals(clip_below_waterline(posed, w)).volume - target_volume; };
    std::uintmax_t iters = 100;
    auto r = boost::math::tools::toms748_solve(f, bb.lo.z(), bb.hi.z(), -target_volume, total - target_volume,
                                               boost::math::tools::eps_tolerance<double>(40), iters);
    return 0.5 * (r.first + r.second);
}

// Hydrostatics of a pose with heave re-equilibrated so buoyancy balances
// weight plus mooring pretension. pose.heave_offset is ignored.
inline HydrostaticReport evaluate_pose(const HydroContext& ctx, AssemblyPose pose) {
    check_flap_limits(pose, ctx.dv.flap_limit_deg);
    pose.heave_offset = 0.0;
    const PanelMesh mesh = ctx.posed(pose).combined();
    const double w = equilibrium_water_level(mesh, ctx.target_volume());
    const auto sys = ctx.system(pose);
    HydrostaticReport rep;
    metacentric_height(mesh, sys.cog.z(), w, &rep, ctx.fluid);
    rep.heave = -w;
    rep.cob.z() -= w;
    rep.cog = sys.cog + Vec3(0, 0, -w);
    return rep;
}

struct EnvelopeCell {
    double platform_deg = 0.0;
    std::array<double, 3> flap_deg{};
    double gm = std::numeric_limits<double>::quiet_NaN();
    double gm_trans = std::numeric_limits<double>::quiet_NaN();
    double aw = std::numeric_limits<double>::quiet_NaN();
    bool defined = false;
};

struct EnvelopeSummary {
    double platform_deg = 0.0;
    double gm_mean = 0.0, gm_std = 0.0, gm_min = 0.0;
    double aw_mean = 0.0, aw_std = 0.0;
};

struct StabilityEnvelope {
    std::vector<EnvelopeCell> cells;
    std::vector<EnvelopeSummary> summary;
    double stable_lo_deg = std::numeric_limits<double>::quiet_NaN();
    double stable_hi_deg = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<double> angle_grid(double lo, double hi, double step) {
    std::vector<double> g;
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int i = 0; i <= n; ++i) g.push_back(lo + i * step);
    return g;
}

namespace detail {

// Mean and population std by pairwise summation of the defined values.
inline double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    return pairwise_sum(x, n / 2) + pairwise_sum(x + n / 2, n - n / 2);
}

inline std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    const double m = pairwise_sum(v.data(), v.size()) / v.size();
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = (v[i] - m) * (v[i] - m);
    return {m, std::sqrt(pairwise_sum(d.data(), d.size()) / v.size())};
}

}  // namespace detail

// Pitch axis sweep. Cells that fail (emerged hull, infeasible heave) stay undefined
// and count as unstable.
inline StabilityEnvelope stability_envelope(const HydroContext& ctx, const std::vector<double>& platform_deg,
                                            const std::vector<double>& flap_deg, unsigned jobs = 1) {
    if (platform_deg.empty() || flap_deg.empty()) throw DomainError("stability grids must be non-empty");
    StabilityEnvelope env;
    const std::size_t nf = flap_deg.size();
    const std::size_t per = nf * nf * nf;
    env.cells.resize(platform_deg.size() * per);
    parallel_for(env.cells.size(), jobs, [&](std::size_t idx) {
        EnvelopeCell& c = env.cells[idx];
        const std::size_t p = idx / per, r = idx % per;
        c.platform_deg = platform_deg[p];
        c.flap_deg = {flap_deg[r / (nf * nf)], flap_deg[(r / nf) % nf], flap_deg[r % nf]};
        AssemblyPose pose;
        pose.platform_pitch = deg2rad(c.platform_deg);
        for (int i = 0; i < 3; ++i) pose.flap_angles[i] = deg2rad(c.flap_deg[i]);
        try {
            const auto rep = evaluate_pose(ctx, pose);
            c.gm = rep.gm_long;
            c.gm_trans = rep.gm_trans;
            c.aw = rep.waterplane.area;
            c.defined = true;
        } catch (const Error&) {
        }
    });
    std::vector<double> min_gm(platform_deg.size());
    for (std::size_t p = 0; p < platform_deg.size(); ++p) {
        std::vector<double> gm, aw;
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < per; ++r) {
            const auto& c = env.cells[p * per + r];
            if (!c.defined) {
                lo = -std::numeric_limits<double>::infinity();
                continue;
            }
            gm.push_back(c.gm);
            aw.push_back(c.aw);
            lo = std::min(lo, c.gm);
        }
        EnvelopeSummary s;
        s.platform_deg = platform_deg[p];
        std::tie(s.gm_mean, s.gm_std) = detail::mean_std(gm);
        std::tie(s.aw_mean, s.aw_std) = detail::mean_std(aw);
        s.gm_min = lo;
        min_gm[p] = lo;
        env.summary.push_back(s);
    }
    // Stable range: contiguous block of positive min-GM around the angle nearest 0.
    std::size_t centre = 0;
    for (std::size_t p = 1; p < platform_deg.size(); ++p)
        if (std::abs(platform_deg[p]) < std::abs(platform_deg[centre])) centre = p;
    if (min_gm[centre] > 0.0) {
        std::size_t lo = centre, hi = centre;
        while (lo > 0 && min_gm[lo - 1] > 0.0) --lo;
        while (hi + 1 < platform_deg.size() && min_gm[hi + 1] > 0.0) ++hi;
        env.stable_lo_deg = platform_deg[lo];
        env.stable_hi_deg = platform_deg[hi];
    }
    return env;
}

// Largest symmetric flap range L on `step` (from `grid_lo` upward) such that
// every flap triple in [−L, L]³ gives GM > 0 at the rest platform attitude.
// Returns −1 when even the upright flaps are unstable.
inline double stable_flap_range(const HydroContext& ctx, double max_deg, double step, bool transverse_too = false) {
    const auto grid = angle_grid(-max_deg, max_deg, step);
    const int n = static_cast<int>(grid.size());
    // worst GM of all triples whose largest |angle| equals each level
    std::vector<double> worst(n / 2 + 1, std::numeric_limits<double>::infinity());
    const int mid = n / 2;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const int lvl = std::max({std::abs(a - mid), std::abs(b - mid), std::abs(c - mid)});
                AssemblyPose pose;
                pose.flap_angles = {deg2rad(grid[a]), deg2rad(grid[b]), deg2rad(grid[c])};
                double gm = -std::numeric_limits<double>::infinity();
                try {
                    const auto rep = evaluate_pose(ctx, pose);
                    gm = transverse_too ? std::min(rep.gm_long, rep.gm_trans) : rep.gm_long;
                } catch (const Error&) {
                }
                worst[lvl] = std::min(worst[lvl], gm);
            }
    double range = -1.0;
    for (int l = 0; l <= mid; ++l) {
        if (!(worst[l] > 0.0)) break;
        range = l * step;
    }
    return range;
}

inline double min_gm_random_flaps(const HydroContext& ctx, int n_samples, double flap_range_deg, std::uint64_t seed) {
    if (n_samples < 1) throw DomainError("n_samples must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_samples; ++k) {
        AssemblyPose pose;
        for (auto& a : pose.flap_angles) a = deg2rad(flap_range_deg * u(rng));
        double gm = -std::numeric_limits<double>::infinity();
        try {
            gm = evaluate_pose(ctx, pose).gm_long;
        } catch (const Error&) {
        }
        worst = std::min(worst, gm);
    }
    return worst;
}

}  // namespace hexwave
