#pragma once

#include "hexwave/common.hpp"
#include "hexwave/errors.hpp"
#include "hexwave/mesh.hpp"

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace hexwave {

// Root design input. Lengths in metres; z_dr_p is stored as a positive depth.
struct DesignVectors {
    double z_dr_p = 20.0;
    double z_fr_p = 10.0;
    double l_s_p = 28.73;
    double w_xy_p = 2.0;
    double w_z_p = 1.0;
    double d_c_p = 5.5;
    double l_f = 25.0;
    double h_f = 22.0;
    double w_f = 5.5;
    double l_t = 77.6;
    double d_b_t = 6.5;
    double d_t_t = 3.87;
    double b_b_t = 0.027;
    double b_t_t = 0.019;
    double b_wall_pf = 0.03;
    double m_p_frac = 0.6;
    double m_f_frac = 0.4;

    double steel_density = 7850.0;
    double tower_steel_density = 8500.0;
    double slurry_density = 5000.0;
    double water_density = 1025.0;
    double rna_mass = 350.0e3;
    double flap_limit_deg = 60.0;

    static DesignVectors baseline() { return {}; }

    void validate() const {
        const std::array<std::pair<const char*, double>, 15> positive{{{"z_dr_p", z_dr_p},
                                                                       {"z_fr_p", z_fr_p},
                                                                       {"l_s_p", l_s_p},
                                                                       {"w_xy_p", w_xy_p},
                                                                       {"w_z_p", w_z_p},
                                                                       {"d_c_p", d_c_p},
                                                                       {"l_f", l_f},
                                                                       {"h_f", h_f},
                                                                       {"w_f", w_f},
                                                                       {"d_b_t", d_b_t},
                                                                       {"d_t_t", d_t_t},
                                                                       {"b_b_t", b_b_t},
                                                                       {"b_t_t", b_t_t},
                                                                       {"b_wall_pf", b_wall_pf},
                                                                       {"steel_density", steel_density}}};
        for (const auto& [name, v] : positive)
            if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive and finite");
        if (!(l_t >= 0.0)) throw DomainError("l_t must be non-negative");
        if (!(m_p_frac >= 0.0 && m_p_frac <= 1.0)) throw DomainError("m_p_frac must lie in [0,1]");
        if (std::abs(m_p_frac + m_f_frac - 1.0) > 1e-12) throw DomainError("m_p_frac + m_f_frac must equal 1");
        if (d_t_t > d_b_t) throw DomainError("d_t_t must not exceed d_b_t");
        if (!(b_b_t < d_b_t / 2.0)) throw DomainError("b_b_t must be below d_b_t/2");
        if (!(b_t_t < d_t_t / 2.0)) throw DomainError("b_t_t must be below d_t_t/2");
        if (!(flap_limit_deg > 0.0 && flap_limit_deg <= 90.0)) throw DomainError("flap_limit_deg must lie in (0,90]");
    }

    // Ring centreline distance from the platform axis (hexagon apothem).
    double apothem() const { return l_s_p * std::sqrt(3.0) / 2.0; }
    double ring_bottom() const { return -z_dr_p; }
    double ring_top() const { return -z_dr_p + w_z_p; }
    double hinge_clearance() const { return 0.5 * w_f * std::sin(pi / 3.0); }
    double hinge_z() const { return ring_top() + hinge_clearance(); }
    double hub_height() const { return z_fr_p + l_t; }
};

inline double hexagon_area(double side) { return 1.5 * std::sqrt(3.0) * side * side; }

inline double hexagon_side_for_area(double area) {
    if (!(area > 0.0)) throw DomainError("hexagon area must be positive");
    return std::sqrt(2.0 * area / (3.0 * std::sqrt(3.0)));
}

namespace detail {

// Quads on an (nu × nv) lattice; du × dv points outward.
template <class Index>
void add_lattice_patch(PanelMesh& m, int nu, int nv, Index idx) {
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) m.add_quad(idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
}

inline int divisions(double len, double ref, int res) {
    return std::max(1, static_cast<int>(std::lround(res * len / ref)));
}

}  // namespace detail

// Axis-aligned box with welded lattice vertices; `res` panels along the shortest edge.
inline PanelMesh make_box(const Vec3& lo, const Vec3& hi, int res = 1) {
    if (res < 1) throw DomainError("resolution must be >= 1");
    const Vec3 ext = hi - lo;
    if (!(ext.minCoeff() > 0.0)) throw GeometryError("box extents must be positive");
    const double ref = ext.minCoeff();
    const std::array<int, 3> n{detail::divisions(ext.x(), ref, res), detail::divisions(ext.y(), ref, res),
                               detail::divisions(ext.z(), ref, res)};
    PanelMesh m;
    std::map<std::array<int, 3>, int> ids;
    auto vid = [&](int i, int j, int k) {
        auto [it, fresh] = ids.try_emplace({i, j, k}, 0);
        if (fresh)
            it->second = m.add_vertex(Vec3(lo.x() + ext.x() * i / n[0], lo.y() + ext.y() * j / n[1],
                                           lo.z() + ext.z() * k / n[2]));
        return it->second;
    };
    const int X = n[0], Y = n[1], Z = n[2];
    detail::add_lattice_patch(m, Z, Y, [&](int a, int b) { return vid(0, b, a); });
    detail::add_lattice_patch(m, Y, Z, [&](int a, int b) { return vid(X, a, b); });
    detail::add_lattice_patch(m, X, Z, [&](int a, int b) { return vid(a, 0, b); });
    detail::add_lattice_patch(m, Z, X, [&](int a, int b) { return vid(b, Y, a); });
    detail::add_lattice_patch(m, Y, X, [&](int a, int b) { return vid(b, a, 0); });
    detail::add_lattice_patch(m, X, Y, [&](int a, int b) { return vid(a, b, Z); });
    return m;
}

// Polygonal cylinder about the z axis. The polygon radius is inflated so the
// cross-section area equals π r².
inline PanelMesh make_cylinder(double radius, double z0, double z1, int segments, int vertical = 1) {
    if (!(radius > 0.0) || !(z1 > z0)) throw GeometryError("cylinder dimensions must be positive");
    if (segments < 3 || vertical < 1) throw DomainError("cylinder discretisation too coarse");
    const double dphi = 2.0 * pi / segments;
    const double r = radius * std::sqrt(2.0 * pi / (segments * std::sin(dphi)));
    PanelMesh m;
    std::vector<std::vector<int>> ring(vertical + 1);
    for (int h = 0; h <= vertical; ++h) {
        const double z = z0 + (z1 - z0) * h / vertical;
        for (int j = 0; j < segments; ++j)
            ring[h].push_back(m.add_vertex(Vec3(r * std::cos(j * dphi), r * std::sin(j * dphi), z)));
    }
    for (int h = 0; h < vertical; ++h)
        for (int j = 0; j < segments; ++j) {
            const int jn = (j + 1) % segments;
            m.add_quad(ring[h][j], ring[h][jn], ring[h + 1][jn], ring[h + 1][j]);
        }
    const int top = m.add_vertex(Vec3(0, 0, z1));
    const int bot = m.add_vertex(Vec3(0, 0, z0));
    for (int j = 0; j < segments; ++j) {
        const int jn = (j + 1) % segments;
        m.add_face(top, ring[vertical][j], ring[vertical][jn]);
        m.add_face(bot, ring[0][jn], ring[0][j]);
    }
    return m;
}

// Hexagonal annular prism: the six pontoons merged into one closed ring.
// Side k has outward normal at 60°·k; `apothem` is the ring centreline.
inline PanelMesh make_hex_ring(double apothem, double width, double z0, double z1, int res = 1) {
    if (!(width > 0.0) || !(apothem > width / 2.0) || !(z1 > z0)) throw GeometryError("degenerate pontoon ring");
    const double c30 = std::cos(pi / 6.0);
    const double Ro = (apothem + width / 2.0) / c30;
    const double Ri = (apothem - width / 2.0) / c30;
    auto corner = [](double R, int k) {
        const double a = pi / 6.0 + (k - 1) * pi / 3.0;
        return Vec2(R * std::cos(a), R * std::sin(a));
    };
    const int n = res;
    PanelMesh m;
    std::map<std::array<int, 4>, int> ids;
    auto vid = [&](int k, int t, int r, int h) {
        if (t == n) {
            k = (k + 1) % 6;
            t = 0;
        }
        auto [it, fresh] = ids.try_emplace({k, t, r, h}, 0);
        if (fresh) {
            const double s = static_cast<double>(t) / n;
            const Vec2 o = corner(Ro, k) + s * (corner(Ro, k + 1) - corner(Ro, k));
            const Vec2 i = corner(Ri, k) + s * (corner(Ri, k + 1) - corner(Ri, k));
            const Vec2 p = o + (i - o) * (static_cast<double>(r) / n);
            it->second = m.add_vertex(Vec3(p.x(), p.y(), z0 + (z1 - z0) * h / n));
        }
        return it->second;
    };
    for (int k = 0; k < 6; ++k) {
        detail::add_lattice_patch(m, n, n, [&](int t, int r) { return vid(k, t, r, n); });
        detail::add_lattice_patch(m, n, n, [&](int r, int t) { return vid(k, t, r, 0); });
        detail::add_lattice_patch(m, n, n, [&](int t, int h) { return vid(k, t, 0, h); });
        detail::add_lattice_patch(m, n, n, [&](int h, int t) { return vid(k, t, n, h); });
    }
    return m;
}

inline int cylinder_segments(int resolution) { return std::max(24, 8 * resolution); }

inline double analytic_platform_volume(const DesignVectors& dv) {
    return 6.0 * dv.l_s_p * dv.w_xy_p * dv.w_z_p + pi * dv.d_c_p * dv.d_c_p / 4.0 * (dv.z_dr_p + dv.z_fr_p);
}

// Pontoon ring (plate of height w_z_p at the keel) plus the full-height
// central column. The two solids touch at the keel but share no vertices.
inline PanelMesh build_platform_mesh(const DesignVectors& dv, int resolution = 4) {
    dv.validate();
    if (resolution < 1) throw DomainError("resolution must be >= 1");
    if (dv.w_xy_p >= dv.l_s_p) throw GeometryError("pontoon width must be smaller than the hexagon side");
    if (dv.apothem() - dv.w_xy_p / 2.0 <= dv.d_c_p / 2.0)
        throw GeometryError("pontoon ring intersects the central cylinder");
    PanelMesh m = make_hex_ring(dv.apothem(), dv.w_xy_p, dv.ring_bottom(), dv.ring_top(), resolution);
    m.append(make_cylinder(dv.d_c_p / 2.0, -dv.z_dr_p, dv.z_fr_p, cylinder_segments(resolution), resolution));
    return m;
}

// Flap box in its hinge frame: u across the thickness (outward), v along the
// hinge, w up. The hinge axis is the local v axis at the origin.
inline PanelMesh build_flap_mesh(const DesignVectors& dv, int resolution = 1) {
    dv.validate();
    return make_box(Vec3(-dv.w_f / 2.0, -dv.l_f / 2.0, 0.0), Vec3(dv.w_f / 2.0, dv.l_f / 2.0, dv.h_f), resolution);
}

struct FlapMount {
    double bearing = 0.0;  // outward normal angle, rad
    Vec3 outward = Vec3::UnitX();
    Vec3 hinge_point = Vec3::Zero();
    Vec3 axis = Vec3::UnitY();  // positive rotation tilts the flap top inward
    Rigid local_to_platform;
};

// Outward normals of flaps 1..3 at 180°, 300°, 60°; flap i faces waves heading
// 0°, 120°, 240° head-on.
inline std::array<double, 3> flap_bearings_deg() { return {180.0, 300.0, 60.0}; }

inline std::array<FlapMount, 3> flap_mounts(const DesignVectors& dv) {
    std::array<FlapMount, 3> out;
    const auto bearings = flap_bearings_deg();
    for (int i = 0; i < 3; ++i) {
        FlapMount& fm = out[i];
        fm.bearing = deg2rad(bearings[i]);
        fm.outward = Vec3(std::cos(fm.bearing), std::sin(fm.bearing), 0.0);
        const Vec3 along = Vec3::UnitZ().cross(fm.outward);
        fm.hinge_point = dv.apothem() * fm.outward + dv.hinge_z() * Vec3::UnitZ();
        fm.axis = -along;
        fm.local_to_platform.R.col(0) = fm.outward;
        fm.local_to_platform.R.col(1) = along;
        fm.local_to_platform.R.col(2) = Vec3::UnitZ();
        fm.local_to_platform.t = fm.hinge_point;
    }
    return out;
}

struct AssemblyPose {
    double platform_pitch = 0.0;
    double platform_roll = 0.0;
    double heave_offset = 0.0;
    std::array<double, 3> flap_angles{0.0, 0.0, 0.0};
};

inline void check_flap_limits(const AssemblyPose& pose, double limit_deg) {
    for (double a : pose.flap_angles)
        if (std::abs(a) > deg2rad(limit_deg) + 1e-12)
            throw DomainError("flap angle outside mechanical limit of " + std::to_string(limit_deg) + " deg");
}

// Platform frame -> earth frame: roll, then pitch, about the SWL origin, then heave.
inline Rigid platform_transform(const AssemblyPose& pose) {
    return {rot_y(pose.platform_pitch) * rot_x(pose.platform_roll), Vec3(0, 0, pose.heave_offset)};
}

// Flap hinge frame -> platform frame for a relative flap angle.
inline Rigid flap_in_platform(const FlapMount& mount, double angle) {
    return mount.local_to_platform * Rigid{rot_y(-angle), Vec3::Zero()};
}

inline Rigid flap_transform(const FlapMount& mount, const AssemblyPose& pose, int i) {
    return platform_transform(pose) * flap_in_platform(mount, pose.flap_angles[i]);
}

struct PosedAssembly {
    PanelMesh platform;
    std::array<PanelMesh, 3> flaps;

    PanelMesh combined() const {
        PanelMesh m = platform;
        for (const auto& f : flaps) m.append(f);
        return m;
    }
};

// `flaps` are given in their hinge frames (as from build_flap_mesh).
inline PosedAssembly pose_assembly(const PanelMesh& platform, const std::array<PanelMesh, 3>& flaps,
                                   const std::array<FlapMount, 3>& mounts, const AssemblyPose& pose) {
    PosedAssembly out;
    out.platform = platform.transformed(platform_transform(pose));
    for (int i = 0; i < 3; ++i) out.flaps[i] = flaps[i].transformed(flap_transform(mounts[i], pose, i));
    return out;
}

struct TowerSection {
    double height_above_swl = 0.0;
    double outer_diameter = 0.0;
    double wall_thickness = 0.0;
    double area = 0.0;
    double bending_inertia = 0.0;
};

inline TowerSection make_tower_section(double z, double d, double t) {
    TowerSection s;
    s.height_above_swl = z;
    s.outer_diameter = d;
    s.wall_thickness = t;
    s.area = pi * (d * t - t * t);
    const double di = d - 2.0 * t;
    s.bending_inertia = pi / 64.0 * (std::pow(d, 4) - std::pow(di, 4));
    return s;
}

inline std::vector<TowerSection> tower_sections(const DesignVectors& dv, int n) {
    if (n < 2) throw DomainError("tower needs at least two sections");
    std::vector<TowerSection> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double s = (i == n - 1) ? 1.0 : static_cast<double>(i) / (n - 1);
        const double d = (i == n - 1) ? dv.d_t_t : dv.d_b_t + s * (dv.d_t_t - dv.d_b_t);
        const double t = (i == n - 1) ? dv.b_t_t : dv.b_b_t + s * (dv.b_t_t - dv.b_b_t);
        out.push_back(make_tower_section(dv.z_fr_p + s * dv.l_t, d, t));
    }
    return out;
}

}  // namespace hexwave
