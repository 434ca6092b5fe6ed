#pragma once

#include "hexwave/common.hpp"
#include "hexwave/errors.hpp"
#include "hexwave/mesh.hpp"

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hexwave {

inline constexpr double clip_snap_tol = 1e-9;

// Closed solid below the plane z = water_z, with cap faces on the plane.
// Vertices within clip_snap_tol of the plane are snapped onto it. Cap loops
// are fanned from their own centroids, so caps of non-convex or multiply
// connected sections are exact in the signed (algebraic) sense.
inline PanelMesh clip_below_waterline(const PanelMesh& mesh, double water_z) {
    PanelMesh out;
    const std::size_t nv = mesh.vertices.size();
    std::vector<double> d(nv);
    std::vector<int> remap(nv, -1);
    for (std::size_t i = 0; i < nv; ++i) {
        d[i] = mesh.vertices[i].z() - water_z;
        if (std::abs(d[i]) <= clip_snap_tol) d[i] = 0.0;
    }
    std::vector<char> on_plane;
    auto keep = [&](int i) {
        if (remap[i] < 0) {
            Vec3 p = mesh.vertices[i];
            if (d[i] == 0.0) p.z() = water_z;
            remap[i] = out.add_vertex(p);
            on_plane.push_back(d[i] == 0.0);
        }
        return remap[i];
    };
    std::unordered_map<std::uint64_t, int> cut;
    auto cut_vertex = [&](int a, int b) {
        const std::uint64_t key = a < b ? (std::uint64_t(a) << 32 | std::uint32_t(b)) : (std::uint64_t(b) << 32 | std::uint32_t(a));
        auto it = cut.find(key);
        if (it != cut.end()) return it->second;
        const double s = d[a] / (d[a] - d[b]);
        Vec3 p = mesh.vertices[a] + s * (mesh.vertices[b] - mesh.vertices[a]);
        p.z() = water_z;
        const int id = out.add_vertex(p);
        on_plane.push_back(1);
        cut.emplace(key, id);
        return id;
    };

    for (const auto& f : mesh.faces) {
        const double d0 = d[f[0]], d1 = d[f[1]], d2 = d[f[2]];
        if (d0 <= 0.0 && d1 <= 0.0 && d2 <= 0.0) {
            out.add_face(keep(f[0]), keep(f[1]), keep(f[2]));
            continue;
        }
        if (d0 >= 0.0 && d1 >= 0.0 && d2 >= 0.0) continue;
        int poly[4];
        int n = 0;
        for (int k = 0; k < 3; ++k) {
            const int p = f[k], q = f[(k + 1) % 3];
            if (d[p] <= 0.0) poly[n++] = keep(p);
            if ((d[p] < 0.0 && d[q] > 0.0) || (d[p] > 0.0 && d[q] < 0.0)) poly[n++] = cut_vertex(p, q);
        }
        for (int k = 1; k + 1 < n; ++k) out.add_face(poly[0], poly[k], poly[k + 1]);
    }

    // Boundary edges of the kept surface, all lying on the plane.
    auto key_of = [](int a, int b) { return std::uint64_t(std::uint32_t(a)) << 32 | std::uint32_t(b); };
    std::unordered_set<std::uint64_t> directed;
    directed.reserve(out.faces.size() * 3);
    for (const auto& f : out.faces)
        for (int k = 0; k < 3; ++k) directed.insert(key_of(f[k], f[(k + 1) % 3]));
    std::unordered_multimap<int, int> boundary;
    for (const auto& f : out.faces)
        for (int k = 0; k < 3; ++k) {
            const int a = f[k], b = f[(k + 1) % 3];
            if (!directed.count(key_of(b, a)) && on_plane[a] && on_plane[b]) boundary.emplace(a, b);
        }

    while (!boundary.empty()) {
        auto it = boundary.begin();
        const int start = it->first;
        std::vector<int> loop{start};
        int cur = it->second;
        boundary.erase(it);
        while (cur != start) {
            loop.push_back(cur);
            auto nx = boundary.find(cur);
            if (nx == boundary.end()) break;
            const int next = nx->second;
            boundary.erase(nx);
            cur = next;
        }
        if (loop.size() < 3) continue;
        Vec3 c = Vec3::Zero();
        for (int v : loop) c += out.vertices[v];
        c /= static_cast<double>(loop.size());
        c.z() = water_z;
        const int ci = out.add_vertex(c);
        on_plane.push_back(1);
        const std::size_t m = loop.size();
        for (std::size_t k = 0; k < m; ++k) out.add_face(ci, loop[(k + 1) % m], loop[k]);
    }
    return out;
}

// Cut section of a closed solid by the plane z = water_z. Second moments are
// about the section centroid axes; I_xx = ∫(y−y_c)² dA, I_yy = ∫(x−x_c)² dA.
struct WaterplaneProps {
    double area = 0.0;
    Vec2 centroid = Vec2::Zero();
    double i_xx = 0.0;
    double i_yy = 0.0;
    double i_xy = 0.0;
};

// Signed integrals over faces lying in the plane, from a clipped mesh.
inline WaterplaneProps waterplane_from_clipped(const PanelMesh& clipped, double water_z) {
    double A = 0.0, Sx = 0.0, Sy = 0.0, Sxx = 0.0, Syy = 0.0, Sxy = 0.0;
    for (const auto& f : clipped.faces) {
        const Vec3& a = clipped.vertices[f[0]];
        const Vec3& b = clipped.vertices[f[1]];
        const Vec3& c = clipped.vertices[f[2]];
        if (std::abs(a.z() - water_z) > clip_snap_tol || std::abs(b.z() - water_z) > clip_snap_tol ||
            std::abs(c.z() - water_z) > clip_snap_tol)
            continue;
        const double sa = 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
        const double sx = a.x() + b.x() + c.x(), sy = a.y() + b.y() + c.y();
        A += sa;
        Sx += sa * sx / 3.0;
        Sy += sa * sy / 3.0;
        Sxx += sa / 12.0 * (a.x() * a.x() + b.x() * b.x() + c.x() * c.x() + sx * sx);
        Syy += sa / 12.0 * (a.y() * a.y() + b.y() * b.y() + c.y() * c.y() + sy * sy);
        Sxy += sa / 12.0 * (a.x() * a.y() + b.x() * b.y() + c.x() * c.y() + sx * sy);
    }
    WaterplaneProps w;
    if (A <= 1e-12) return w;
    w.area = A;
    w.centroid = Vec2(Sx / A, Sy / A);
    w.i_yy = std::max(0.0, Sxx - A * w.centroid.x() * w.centroid.x());
    w.i_xx = std::max(0.0, Syy - A * w.centroid.y() * w.centroid.y());
    w.i_xy = Sxy - A * w.centroid.x() * w.centroid.y();
    return w;
}

inline WaterplaneProps waterplane_properties(const PanelMesh& mesh, double water_z) {
    return waterplane_from_clipped(clip_below_waterline(mesh, water_z), water_z);
}

inline void require_closed(const PanelMesh& mesh) {
    if (!is_closed(mesh)) throw TopologyError("mesh is not closed");
}

// Volume and centroid of a closed mesh.
inline std::pair<double, Vec3> volume_and_cob(const PanelMesh& mesh) {
    require_closed(mesh);
    const auto vi = volume_integrals(mesh);
    return {vi.volume, vi.centroid()};
}

}  // namespace hexwave
