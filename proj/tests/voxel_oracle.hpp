#pragma once

#include "hexwave/mesh.hpp"

#include <algorithm>
#include <vector>

namespace hexwave::testing {

// Counts cell centres of an n×n×n lattice that lie inside the mesh
// (vertical-ray parity). The lattice spans the bounding box cut at water_z.
inline double voxel_volume_below(const PanelMesh& m, double water_z, int n = 100) {
    auto bb = bounding_box(m);
    if (bb.lo.z() >= water_z) return 0.0;
    bb.hi.z() = std::min(bb.hi.z(), water_z);
    const Vec3 ext = bb.hi - bb.lo;
    const double dx = ext.x() / n, dy = ext.y() / n, dz = ext.z() / n;
    // offsets keep rays off mesh edges
    const double ox = 0.5 + 1.3e-4, oy = 0.5 - 2.7e-4;
    std::size_t inside = 0;
    std::vector<double> hits;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = bb.lo.x() + (i + ox) * dx, y = bb.lo.y() + (j + oy) * dy;
            hits.clear();
            for (const auto& f : m.faces) {
                const Vec3& a = m.vertices[f[0]];
                const Vec3& b = m.vertices[f[1]];
                const Vec3& c = m.vertices[f[2]];
                const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
                if (std::abs(det) < 1e-14) continue;
                const double u = ((x - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (y - a.y())) / det;
                const double v = ((b.x() - a.x()) * (y - a.y()) - (x - a.x()) * (b.y() - a.y())) / det;
                if (u < 0.0 || v < 0.0 || u + v > 1.0) continue;
                hits.push_back(a.z() + u * (b.z() - a.z()) + v * (c.z() - a.z()));
            }
            std::sort(hits.begin(), hits.end());
            for (int k = 0; k < n; ++k) {
                const double z = bb.lo.z() + (k + 0.5) * dz;
                const auto above = hits.end() - std::upper_bound(hits.begin(), hits.end(), z);
                if (above % 2 == 1) ++inside;
            }
        }
    return static_cast<double>(inside) * dx * dy * dz;
}

}  // namespace hexwave::testing
