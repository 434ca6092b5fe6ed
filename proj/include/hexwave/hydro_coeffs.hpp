#pragma once

#include "hexwave/clip.hpp"
#include "hexwave/common.hpp"
#include "hexwave/environment.hpp"
#include "hexwave/errors.hpp"
#include "hexwave/geometry.hpp"
#include "hexwave/mesh.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace hexwave {

using cplx = std::complex<double>;
using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;

inline constexpr int n_dof = 9;
inline const char* dof_name(int i) {
    static const char* names[] = {"surge", "sway", "heave", "roll", "pitch", "yaw", "flap1", "flap2", "flap3"};
    return names[i];
}

inline double deep_wavenumber(double omega, double g = 9.81) { return omega * omega / g; }
inline double deep_group_velocity(double omega, double g = 9.81) { return g / (2.0 * omega); }

// Frequency-domain coefficients: added mass A(ω), radiation damping B(ω),
// excitation X(ω, heading) per unit wave amplitude (phase referenced to the
// origin, e^{iωt} convention).
class HydroModel {
public:
    virtual ~HydroModel() = default;
    virtual MatX added_mass(double omega) const = 0;
    virtual MatX damping(double omega) const = 0;
    virtual VecXc excitation(double omega, double heading_deg) const = 0;
};

// Haskind relation for deep water: B = k/(8πρg c_g) ∫ Re(X X^H) dβ.
inline MatX haskind_damping(const HydroModel& h, double omega, const Fluid& fluid, int headings = 72) {
    const double k = deep_wavenumber(omega, fluid.g);
    const double cg = deep_group_velocity(omega, fluid.g);
    MatX B = MatX::Zero(n_dof, n_dof);
    const double db = 2.0 * pi / headings;
    for (int j = 0; j < headings; ++j) {
        const VecXc X = h.excitation(omega, rad2deg(j * db));
        B += (X * X.adjoint()).real() * db;
    }
    return k / (8.0 * pi * fluid.rho * fluid.g * cg) * B;
}

struct FallbackOptions {
    double lobe_exponent = 2.0;
    double back_face = 0.1;
    double shadow_factor = 0.3;
    double shadow_window_deg = 30.0;
    bool shadowing = true;
    int platform_resolution = 2;
    int quadrature_levels = 2;
};

// Flat-plate flaps plus Froude–Krylov platform forcing; damping by Haskind.
class FallbackHydro : public HydroModel {
public:
    FallbackHydro(const DesignVectors& dv, const FallbackOptions& opt = {}, const Fluid& fluid = {})
        : dv_(dv), opt_(opt), fluid_(fluid), mounts_(flap_mounts(dv)) {
        depth_ = std::clamp(-dv.hinge_z(), 0.0, dv.h_f);
        for (int i = 0; i < 3; ++i) {
            const FlapMount& m = mounts_[i];
            Eigen::Matrix<double, 2, n_dof> T = Eigen::Matrix<double, 2, n_dof>::Zero();
            T.block<1, 3>(0, 0) = m.outward.transpose();
            T.block<1, 3>(0, 3) = m.hinge_point.cross(m.outward).transpose();
            T.block<1, 3>(1, 3) = Vec3::UnitZ().cross(m.outward).transpose();
            T(1, 6 + i) = -1.0;
            T_[i] = T;
            peak_[i] = std::fmod(rad2deg(m.bearing) + 180.0, 360.0);
        }
        build_platform_quadrature();
        build_platform_added_mass();
    }

    const std::array<double, 3>& peak_headings() const { return peak_; }
    double submerged_depth() const { return depth_; }

    // Directional lobe with optional shadowing for flap i.
    double directional_factor(int i, double heading_deg) const {
        const double c = std::cos(deg2rad(heading_deg - peak_[i]));
        const double p = opt_.lobe_exponent;
        double d = c >= 0.0 ? std::pow(c, p) : -opt_.back_face * std::pow(-c, p);
        if (opt_.shadowing && shadowed(i, heading_deg)) d *= opt_.shadow_factor;
        return d;
    }

    // True when a blocker lies up-wave within the shadow window of its angular extent.
    bool shadowed(int i, double heading_deg) const {
        const double b = deg2rad(heading_deg);
        const Vec2 up(-std::cos(b), -std::sin(b));
        const Vec2 hi = mounts_[i].hinge_point.head<2>();
        auto blocks = [&](const Vec2& c, double half) {
            const Vec2 v = c - hi;
            const double dist = v.norm();
            if (dist <= half) return true;
            if (v.dot(up) <= 0.0) return false;
            const double ang = std::acos(std::clamp(v.dot(up) / dist, -1.0, 1.0));
            return rad2deg(ang - std::asin(half / dist)) < opt_.shadow_window_deg;
        };
        if (blocks(Vec2::Zero(), dv_.d_c_p / 2.0)) return true;
        for (int j = 0; j < 3; ++j)
            if (j != i && blocks(mounts_[j].hinge_point.head<2>(), dv_.l_f / 2.0)) return true;
        return false;
    }

    MatX added_mass(double) const override {
        MatX A = MatX::Zero(n_dof, n_dof);
        A.topLeftCorner<6, 6>() = platform_added_mass_;
        const double a = depth_ / 2.0, rho = fluid_.rho, l = dv_.l_f;
        Eigen::Matrix2d A2;
        A2 << rho * pi * a * a * l, rho * pi * a * a * a * l, rho * pi * a * a * a * l, 9.0 / 8.0 * rho * pi * a * a * a * a * l;
        for (int i = 0; i < 3; ++i) A += T_[i].transpose() * A2 * T_[i];
        return A;
    }

    MatX damping(double omega) const override { return haskind_damping(*this, omega, fluid_); }

    VecXc excitation(double omega, double heading_deg) const override {
        VecXc X = VecXc::Zero(n_dof);
        const double k = deep_wavenumber(omega, fluid_.g);
        const double b = deg2rad(heading_deg);
        const Vec3 kh(std::cos(b), std::sin(b), 0.0);
        for (const auto& qp : quad_) {
            const cplx p = fluid_.rho * fluid_.g * std::exp(k * qp.r.z()) * std::exp(cplx(0.0, -k * kh.dot(qp.r)));
            for (int j = 0; j < 3; ++j) X[j] -= p * qp.nda[j];
            const Vec3 m = qp.r.cross(qp.nda);
            for (int j = 0; j < 3; ++j) X[3 + j] -= p * m[j];
        }
        const double d = depth_;
        if (d > 0.0) {
            const double e = std::exp(-k * d);
            const double f0 = 2.0 * fluid_.rho * fluid_.g * dv_.l_f * (1.0 - e) / k;
            const double m0 = 2.0 * fluid_.rho * fluid_.g * dv_.l_f * (d / k - 1.0 / (k * k) + e / (k * k));
            for (int i = 0; i < 3; ++i) {
                const double D = directional_factor(i, heading_deg);
                if (D == 0.0) continue;
                const Vec3& h = mounts_[i].hinge_point;
                const cplx phase = std::exp(cplx(0.0, -k * kh.dot(Vec3(h.x(), h.y(), 0.0))));
                Eigen::Vector2cd f2;
                f2 << -f0 * D * phase, -m0 * D * phase;
                X += T_[i].transpose().cast<cplx>() * f2;
            }
        }
        return X;
    }

private:
    struct QuadPoint {
        Vec3 r;
        Vec3 nda;
    };

    void build_platform_quadrature() {
        const PanelMesh sub = clip_below_waterline(build_platform_mesh(dv_, opt_.platform_resolution), 0.0);
        for (const auto& f : sub.faces) {
            std::vector<std::array<Vec3, 3>> tris{{sub.vertices[f[0]], sub.vertices[f[1]], sub.vertices[f[2]]}};
            bool cap = true;
            for (const auto& v : tris[0]) cap = cap && std::abs(v.z()) <= clip_snap_tol;
            if (cap) continue;
            for (int l = 0; l < opt_.quadrature_levels; ++l) {
                std::vector<std::array<Vec3, 3>> next;
                for (const auto& t : tris) {
                    const Vec3 a = 0.5 * (t[0] + t[1]), b = 0.5 * (t[1] + t[2]), c = 0.5 * (t[2] + t[0]);
                    next.push_back({t[0], a, c});
                    next.push_back({a, t[1], b});
                    next.push_back({c, b, t[2]});
                    next.push_back({a, b, c});
                }
                tris.swap(next);
            }
            for (const auto& t : tris) quad_.push_back({(t[0] + t[1] + t[2]) / 3.0, 0.5 * (t[1] - t[0]).cross(t[2] - t[0])});
        }
    }

    // Strip elements with translational added-mass tensors, lifted to 6 DOF.
    void add_strip(const Vec3& r, const Mat3& Ma) {
        const Mat3 S = skew(r);
        platform_added_mass_.topLeftCorner<3, 3>() += Ma;
        platform_added_mass_.topRightCorner<3, 3>() += -Ma * S;
        platform_added_mass_.bottomLeftCorner<3, 3>() += S * Ma;
        platform_added_mass_.bottomRightCorner<3, 3>() += -S * Ma * S;
    }

    void build_platform_added_mass() {
        platform_added_mass_ = MatX::Zero(6, 6);
        const double rho = fluid_.rho;
        const double rc = dv_.d_c_p / 2.0;
        const int nz = 40;
        const double dz = dv_.z_dr_p / nz;
        for (int j = 0; j < nz; ++j) {
            Mat3 Ma = Mat3::Zero();
            Ma(0, 0) = Ma(1, 1) = rho * pi * rc * rc * dz;
            add_strip(Vec3(0, 0, -dv_.z_dr_p + (j + 0.5) * dz), Ma);
        }
        Mat3 disc = Mat3::Zero();
        disc(2, 2) = 4.0 / 3.0 * rho * rc * rc * rc;
        add_strip(Vec3(0, 0, -dv_.z_dr_p), disc);
        const int per_side = 12;
        const double ds = dv_.l_s_p / per_side;
        const double zc = -dv_.z_dr_p + dv_.w_z_p / 2.0;
        for (int s = 0; s < 6; ++s) {
            const double a = s * pi / 3.0;
            const Vec3 n(std::cos(a), std::sin(a), 0.0), t(-std::sin(a), std::cos(a), 0.0);
            for (int j = 0; j < per_side; ++j) {
                const Vec3 r = dv_.apothem() * n + (-dv_.l_s_p / 2.0 + (j + 0.5) * ds) * t + Vec3(0, 0, zc);
                const Mat3 Ma = rho * pi / 4.0 * ds *
                                (dv_.w_xy_p * dv_.w_xy_p * Vec3::UnitZ() * Vec3::UnitZ().transpose() +
                                 dv_.w_z_p * dv_.w_z_p * n * n.transpose());
                add_strip(r, Ma);
            }
        }
    }

    DesignVectors dv_;
    FallbackOptions opt_;
    Fluid fluid_;
    std::array<FlapMount, 3> mounts_;
    std::array<Eigen::Matrix<double, 2, n_dof>, 3> T_;
    std::array<double, 3> peak_{};
    double depth_ = 0.0;
    std::vector<QuadPoint> quad_;
    MatX platform_added_mass_;
};

// Tabulated coefficients, linear in ω and (periodic) heading. Headings
// outside the tabulated span go to `fallback` or raise a coverage error.
class TableHydro : public HydroModel {
public:
    std::vector<double> omegas;
    std::vector<MatX> A, B;
    std::vector<double> headings;          // sorted, deg in [0, 360)
    std::vector<std::vector<VecXc>> X;     // [heading][omega]
    std::shared_ptr<const HydroModel> fallback;

    static TableHydro tabulate(const HydroModel& src, const std::vector<double>& omegas, const std::vector<double>& headings) {
        TableHydro t;
        t.omegas = omegas;
        t.headings = headings;
        for (double w : omegas) {
            t.A.push_back(src.added_mass(w));
            t.B.push_back(src.damping(w));
        }
        for (double h : headings) {
            std::vector<VecXc> row;
            for (double w : omegas) row.push_back(src.excitation(w, h));
            t.X.push_back(row);
        }
        return t;
    }

    MatX added_mass(double omega) const override { return interp_matrix(A, omega); }
    MatX damping(double omega) const override { return interp_matrix(B, omega); }

    VecXc excitation(double omega, double heading_deg) const override {
        double h = std::fmod(heading_deg, 360.0);
        if (h < 0.0) h += 360.0;
        if (headings.empty()) return missing(omega, heading_deg);
        const bool full = headings.front() <= 1e-9 && headings.back() < 360.0 &&
                          360.0 - headings.back() <= max_heading_step() + 1e-9;
        std::size_t j0 = 0, j1 = 0;
        double s = 0.0;
        if (h >= headings.front() && h <= headings.back()) {
            j1 = static_cast<std::size_t>(std::lower_bound(headings.begin(), headings.end(), h) - headings.begin());
            if (headings[j1] == h) return excitation_at(j1, omega);
            j0 = j1 - 1;
            s = (h - headings[j0]) / (headings[j1] - headings[j0]);
        } else if (full) {
            j0 = headings.size() - 1;
            j1 = 0;
            const double span = headings.front() + 360.0 - headings.back();
            s = (h >= headings.back() ? h - headings.back() : h + 360.0 - headings.back()) / span;
        } else {
            return missing(omega, heading_deg);
        }
        return (1.0 - s) * excitation_at(j0, omega) + s * excitation_at(j1, omega);
    }

private:
    double max_heading_step() const {
        double m = 0.0;
        for (std::size_t i = 1; i < headings.size(); ++i) m = std::max(m, headings[i] - headings[i - 1]);
        return m;
    }

    VecXc missing(double omega, double heading_deg) const {
        if (fallback) return fallback->excitation(omega, heading_deg);
        throw CoverageError("heading " + std::to_string(heading_deg) + " deg outside the coefficient table");
    }

    std::pair<std::size_t, double> bracket(double omega) const {
        if (omegas.empty()) throw CoverageError("empty coefficient table");
        if (omegas.size() == 1 || omega <= omegas.front()) return {0, 0.0};
        if (omega >= omegas.back()) return {omegas.size() - 2, 1.0};
        const std::size_t j = static_cast<std::size_t>(std::upper_bound(omegas.begin(), omegas.end(), omega) - omegas.begin()) - 1;
        return {j, (omega - omegas[j]) / (omegas[j + 1] - omegas[j])};
    }

    MatX interp_matrix(const std::vector<MatX>& v, double omega) const {
        const auto [j, s] = bracket(omega);
        if (omegas.size() == 1) return v[0];
        return (1.0 - s) * v[j] + s * v[j + 1];
    }

    VecXc excitation_at(std::size_t hj, double omega) const {
        const auto [j, s] = bracket(omega);
        if (omegas.size() == 1) return X[hj][0];
        return (1.0 - s) * X[hj][j] + s * X[hj][j + 1];
    }
};

inline void write_hydro_tables(std::ostream& radiation, std::ostream& exc, const TableHydro& t) {
    radiation << "dof_i,dof_j,omega_rad_s,A,B\n";
    char buf[160];
    for (std::size_t w = 0; w < t.omegas.size(); ++w)
        for (int i = 0; i < n_dof; ++i)
            for (int j = 0; j < n_dof; ++j) {
                std::snprintf(buf, sizeof buf, "%d,%d,%.10g,%.10e,%.10e\n", i, j, t.omegas[w], t.A[w](i, j), t.B[w](i, j));
                radiation << buf;
            }
    exc << "dof,omega_rad_s,heading_deg,exc_amp,exc_phase_rad\n";
    for (std::size_t h = 0; h < t.headings.size(); ++h)
        for (std::size_t w = 0; w < t.omegas.size(); ++w)
            for (int i = 0; i < n_dof; ++i) {
                const cplx x = t.X[h][w][i];
                std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10e,%.10e\n", i, t.omegas[w], t.headings[h], std::abs(x), std::arg(x));
                exc << buf;
            }
}

inline TableHydro read_hydro_tables(std::istream& radiation, std::istream& exc) {
    TableHydro t;
    std::string line;
    std::getline(radiation, line);
    std::map<double, MatX> A, B;
    while (std::getline(radiation, line)) {
        if (line.empty() || line == "\r") continue;
        const auto c = split_csv_line(line);
        double v[5];
        if (c.size() != 5) throw ParseError("radiation table row needs 5 values");
        for (int k = 0; k < 5; ++k)
            if (!parse_double(c[k], v[k])) throw ParseError("radiation table value is not a number: " + c[k]);
        const int i = static_cast<int>(v[0]), j = static_cast<int>(v[1]);
        if (i < 0 || j < 0 || i >= n_dof || j >= n_dof) throw ParseError("dof index out of range");
        auto& a = A.try_emplace(v[2], MatX::Zero(n_dof, n_dof)).first->second;
        auto& b = B.try_emplace(v[2], MatX::Zero(n_dof, n_dof)).first->second;
        a(i, j) = v[3];
        b(i, j) = v[4];
    }
    for (const auto& [w, a] : A) {
        t.omegas.push_back(w);
        t.A.push_back(a);
        t.B.push_back(B[w]);
    }
    std::getline(exc, line);
    std::map<double, std::map<double, VecXc>> X;
    while (std::getline(exc, line)) {
        if (line.empty() || line == "\r") continue;
        const auto c = split_csv_line(line);
        double v[5];
        if (c.size() != 5) throw ParseError("excitation table row needs 5 values");
        for (int k = 0; k < 5; ++k)
            if (!parse_double(c[k], v[k])) throw ParseError("excitation table value is not a number: " + c[k]);
        const int i = static_cast<int>(v[0]);
        if (i < 0 || i >= n_dof) throw ParseError("dof index out of range");
        auto& x = X[v[2]].try_emplace(v[1], VecXc::Zero(n_dof)).first->second;
        x[i] = std::polar(v[3], v[4]);
    }
    for (const auto& [h, row] : X) {
        if (row.size() != t.omegas.size()) throw ParseError("excitation table frequencies differ from radiation table");
        t.headings.push_back(h);
        std::vector<VecXc> r;
        for (const auto& [w, x] : row) r.push_back(x);
        t.X.push_back(r);
    }
    return t;
}

inline TableHydro read_hydro_tables(const std::string& radiation_path, const std::string& excitation_path) {
    std::ifstream r(radiation_path), e(excitation_path);
    if (!r) throw ParseError("cannot open " + radiation_path);
    if (!e) throw ParseError("cannot open " + excitation_path);
    return read_hydro_tables(r, e);
}

}  // namespace hexwave
