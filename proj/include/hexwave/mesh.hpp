#pragma once

#include "hexwave/common.hpp"
#include "hexwave/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace hexwave {

using Face = std::array<int, 3>;

// Closed triangulated surface. Faces are counter-clockwise seen from outside,
// so solids have positive signed volume.
struct PanelMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    Vec3 body_frame_origin = Vec3::Zero();

    bool empty() const { return faces.empty(); }

    int add_vertex(const Vec3& p) {
        vertices.push_back(p);
        return static_cast<int>(vertices.size()) - 1;
    }

    void add_face(int a, int b, int c) { faces.push_back({a, b, c}); }

    // Quad a-b-c-d (counter-clockwise) as two triangles.
    void add_quad(int a, int b, int c, int d) {
        add_face(a, b, c);
        add_face(a, c, d);
    }

    void append(const PanelMesh& other) {
        const int offset = static_cast<int>(vertices.size());
        vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
        for (const auto& f : other.faces) faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
    }

    PanelMesh transformed(const Rigid& T) const {
        PanelMesh out;
        out.vertices.reserve(vertices.size());
        for (const auto& v : vertices) out.vertices.push_back(T.apply(v));
        out.faces = faces;
        out.body_frame_origin = T.apply(body_frame_origin);
        return out;
    }
};

inline Vec3 face_normal_area(const PanelMesh& m, const Face& f) {
    const Vec3& a = m.vertices[f[0]];
    const Vec3& b = m.vertices[f[1]];
    const Vec3& c = m.vertices[f[2]];
    return 0.5 * (b - a).cross(c - a);
}

inline double face_area(const PanelMesh& m, const Face& f) { return face_normal_area(m, f).norm(); }

// Every directed edge must be matched by exactly one reversed edge.
inline bool is_closed(const PanelMesh& m) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& f : m.faces)
        for (int k = 0; k < 3; ++k) ++count[{f[k], f[(k + 1) % 3]}];
    for (const auto& [edge, n] : count) {
        if (n != 1) return false;
        auto it = count.find({edge.second, edge.first});
        if (it == count.end() || it->second != 1) return false;
    }
    return true;
}

inline double min_face_area(const PanelMesh& m) {
    double a = std::numeric_limits<double>::infinity();
    for (const auto& f : m.faces) a = std::min(a, face_area(m, f));
    return a;
}

// Volume integrals over the enclosed solid (divergence theorem, tetrahedra
// fanned from the origin). Valid for any algebraically closed surface.
struct VolumeIntegrals {
    double volume = 0.0;
    Vec3 first = Vec3::Zero();   // ∫ x dV
    Mat3 second = Mat3::Zero();  // ∫ x xᵀ dV

    Vec3 centroid() const { return volume != 0.0 ? Vec3(first / volume) : Vec3::Zero(); }
};

inline VolumeIntegrals volume_integrals(const PanelMesh& m) {
    VolumeIntegrals out;
    for (const auto& f : m.faces) {
        const Vec3& a = m.vertices[f[0]];
        const Vec3& b = m.vertices[f[1]];
        const Vec3& c = m.vertices[f[2]];
        const double det = a.dot(b.cross(c));
        const Vec3 s = a + b + c;
        out.volume += det / 6.0;
        out.first += det / 24.0 * s;
        out.second += det / 120.0 * (a * a.transpose() + b * b.transpose() + c * c.transpose() + s * s.transpose());
    }
    return out;
}

// Face-sum form (1/3)·Σ centroid·n·area; independent of the tetrahedral
// decomposition above and used as a watertightness self-check.
inline double flux_volume(const PanelMesh& m) {
    double v = 0.0;
    for (const auto& f : m.faces) {
        const Vec3 c = (m.vertices[f[0]] + m.vertices[f[1]] + m.vertices[f[2]]) / 3.0;
        v += c.dot(face_normal_area(m, f)) / 3.0;
    }
    return v;
}

// Surface integrals treating every face as a lamina of unit areal density.
struct SurfaceIntegrals {
    double area = 0.0;
    Vec3 first = Vec3::Zero();
    Mat3 second = Mat3::Zero();

    Vec3 centroid() const { return area > 0.0 ? Vec3(first / area) : Vec3::Zero(); }
};

inline SurfaceIntegrals surface_integrals(const PanelMesh& m) {
    SurfaceIntegrals out;
    for (const auto& f : m.faces) {
        const Vec3& a = m.vertices[f[0]];
        const Vec3& b = m.vertices[f[1]];
        const Vec3& c = m.vertices[f[2]];
        const double A = face_area(m, f);
        const Vec3 s = a + b + c;
        out.area += A;
        out.first += A / 3.0 * s;
        out.second += A / 12.0 * (a * a.transpose() + b * b.transpose() + c * c.transpose() + s * s.transpose());
    }
    return out;
}

// Inertia tensor about the origin from a second-moment matrix ∫ρ x xᵀ.
inline Mat3 inertia_from_second_moment(const Mat3& S) { return S.trace() * Mat3::Identity() - S; }

struct BoundingBox {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

    Vec3 extent() const { return hi - lo; }
};

inline BoundingBox bounding_box(const PanelMesh& m) {
    BoundingBox b;
    for (const auto& v : m.vertices) {
        b.lo = b.lo.cwiseMin(v);
        b.hi = b.hi.cwiseMax(v);
    }
    return b;
}

// Splits a mesh into face-connected components (shared vertex indices).
inline std::vector<PanelMesh> connected_components(const PanelMesh& m) {
    std::vector<int> parent(m.vertices.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& f : m.faces) {
        parent[find(f[1])] = find(f[0]);
        parent[find(f[2])] = find(f[0]);
    }
    std::map<int, std::size_t> root_to_component;
    std::vector<PanelMesh> comps;
    std::vector<std::map<int, int>> remap;
    for (const auto& f : m.faces) {
        const int r = find(f[0]);
        auto [it, inserted] = root_to_component.try_emplace(r, comps.size());
        if (inserted) {
            comps.emplace_back();
            remap.emplace_back();
        }
        auto& comp = comps[it->second];
        auto& map = remap[it->second];
        Face nf{};
        for (int k = 0; k < 3; ++k) {
            auto [mit, fresh] = map.try_emplace(f[k], static_cast<int>(comp.vertices.size()));
            if (fresh) comp.vertices.push_back(m.vertices[f[k]]);
            nf[k] = mit->second;
        }
        comp.faces.push_back(nf);
    }
    return comps;
}

inline void write_ascii_stl(std::ostream& os, const PanelMesh& m, const std::string& name = "hexwave") {
    os << "solid " << name << '\n';
    char buf[160];
    for (const auto& f : m.faces) {
        Vec3 n = face_normal_area(m, f);
        const double len = n.norm();
        if (len > 0.0) n /= len;
        std::snprintf(buf, sizeof buf, "  facet normal %.9e %.9e %.9e\n", n.x(), n.y(), n.z());
        os << buf << "    outer loop\n";
        for (int k = 0; k < 3; ++k) {
            const Vec3& v = m.vertices[f[k]];
            std::snprintf(buf, sizeof buf, "      vertex %.9e %.9e %.9e\n", v.x(), v.y(), v.z());
            os << buf;
        }
        os << "    endloop\n  endfacet\n";
    }
    os << "endsolid " << name << '\n';
}

inline void write_vertex_csv(std::ostream& os, const PanelMesh& m) {
    os << "index,x_m,y_m,z_m\n";
    char buf[128];
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        const Vec3& v = m.vertices[i];
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g\n", i, v.x(), v.y(), v.z());
        os << buf;
    }
}

inline void write_face_csv(std::ostream& os, const PanelMesh& m) {
    os << "index,v0,v1,v2\n";
    for (std::size_t i = 0; i < m.faces.size(); ++i)
        os << i << ',' << m.faces[i][0] << ',' << m.faces[i][1] << ',' << m.faces[i][2] << '\n';
}

}  // namespace hexwave
