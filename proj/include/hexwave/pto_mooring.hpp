#pragma once

#include "hexwave/common.hpp"
#include "hexwave/environment.hpp"
#include "hexwave/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

namespace hexwave {

// ---- passive PTO -----------------------------------------------------------

inline double optimal_passive_damping(double omega, double b_rad, double a_add, double inertia, double k_hs) {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    const double reactive = k_hs / omega - omega * (inertia + a_add);
    return std::sqrt(b_rad * b_rad + reactive * reactive);
}

inline double pto_torque(double kp, double relative_velocity) {
    if (kp < 0.0) throw DomainError("passive PTO requires kp >= 0");
    return -kp * relative_velocity;
}

inline double pto_power(double kp, double relative_velocity) { return kp * relative_velocity * relative_velocity; }

enum class PtoMode { Fixed, OptimalPerSeaState };

struct PTOSettings {
    std::array<double, 3> kp{0.0, 0.0, 0.0};
    PtoMode mode = PtoMode::OptimalPerSeaState;
};

// ---- mooring ---------------------------------------------------------------

inline double mooring_target(double fb_hex, double fb_ref, double fmoor_ref) {
    if (!(fb_ref > 0.0)) throw DomainError("reference buoyancy must be positive");
    if (fb_hex < 0.0 || fmoor_ref < 0.0) throw DomainError("forces must be non-negative");
    return fb_hex / fb_ref * fmoor_ref;
}

struct CatenaryLine {
    double length = 835.5;      // unstretched, m
    double weight = 1065.6;     // submerged, N/m
    double ea = 753.6e6;        // N
};

struct CatenaryResult {
    double h = 0.0;  // horizontal tension at the fairlead
    double v = 0.0;  // vertical tension at the fairlead
};

namespace detail {

// Residuals of the elastic catenary with seabed contact (no friction).
inline Eigen::Vector2d catenary_residual(const CatenaryLine& L, double x, double z, double H, double V) {
    const double w = L.weight, l = L.length, ea = L.ea;
    Eigen::Vector2d r;
    if (V < w * l) {
        const double lb = l - V / w;
        r[0] = lb + H / w * std::asinh(V / H) + H * l / ea - x;
        r[1] = H / w * (std::sqrt(1.0 + (V / H) * (V / H)) - 1.0) + V * V / (2.0 * ea * w) - z;
    } else {
        const double va = V - w * l;
        r[0] = H / w * (std::asinh(V / H) - std::asinh(va / H)) + H * l / ea - x;
        r[1] = H / w * (std::sqrt(1.0 + (V / H) * (V / H)) - std::sqrt(1.0 + (va / H) * (va / H))) +
               (V * l - w * l * l / 2.0) / ea - z;
    }
    return r;
}

}  // namespace detail

// Fairlead tensions for horizontal span x and vertical rise z (anchor to fairlead).
inline CatenaryResult solve_catenary(const CatenaryLine& L, double x, double z) {
    if (!(x > 0.0) || !(z > 0.0)) throw DomainError("catenary span and rise must be positive");
    const double l = L.length;
    double lambda = (l * l > x * x + z * z) ? std::sqrt(3.0 * ((l * l - z * z) / (x * x) - 1.0)) : 0.2;
    lambda = std::max(lambda, 1e-3);
    double H = std::max(std::abs(L.weight * x / (2.0 * lambda)), 1.0);
    double V = L.weight / 2.0 * (z / std::tanh(lambda) + l);
    for (int it = 0; it < 200; ++it) {
        const auto r = detail::catenary_residual(L, x, z, H, V);
        if (r.norm() < 1e-9 * (x + z)) return {H, V};
        Eigen::Matrix2d J;
        const double dh = 1e-6 * std::max(1.0, H), dv = 1e-6 * std::max(1.0, V);
        J.col(0) = (detail::catenary_residual(L, x, z, H + dh, V) - r) / dh;
        J.col(1) = (detail::catenary_residual(L, x, z, H, V + dv) - r) / dv;
        Eigen::Vector2d step = J.colPivHouseholderQr().solve(-r);
        double a = 1.0;
        for (int k = 0; k < 30; ++k) {
            const double Hn = H + a * step[0], Vn = V + a * step[1];
            if (Hn > 0.0 && Vn > 0.0 && detail::catenary_residual(L, x, z, Hn, Vn).norm() < r.norm()) break;
            a *= 0.5;
        }
        H = std::max(H + a * step[0], 1e-6 * L.weight);
        V = std::max(V + a * step[1], 1e-6 * L.weight);
    }
    throw DomainError("catenary solution did not converge");
}

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct MooringLayout {
    double depth = 200.0;
    double fairlead_radius = 25.88;
    double fairlead_z = -19.0;
    double anchor_radius = 25.88 + 796.73;
    std::array<double, 3> bearings_deg{180.0, 60.0, 300.0};
    CatenaryLine line;
};

// Quasi-static line loads on the platform about its (displaced) reference point.
inline Vec6 catenary_restoring(const MooringLayout& lay, const Vec6& q) {
    const Mat3 R = rot_z(q[5]) * rot_y(q[4]) * rot_x(q[3]);
    const Vec3 o(q[0], q[1], q[2]);
    Vec6 f = Vec6::Zero();
    for (double b : lay.bearings_deg) {
        const double a = deg2rad(b);
        const Vec3 u(std::cos(a), std::sin(a), 0.0);
        const Vec3 fair = o + R * (lay.fairlead_radius * u + Vec3(0, 0, lay.fairlead_z));
        const Vec3 anchor = lay.anchor_radius * u + Vec3(0, 0, -lay.depth);
        Vec3 hvec = anchor - fair;
        hvec.z() = 0.0;
        const double x = hvec.norm();
        const auto t = solve_catenary(lay.line, x, fair.z() + lay.depth);
        const Vec3 F = t.h * hvec / x + Vec3(0, 0, -t.v);
        f.head<3>() += F;
        f.tail<3>() += (fair - o).cross(F);
    }
    return f;
}

// 6-D displacement → restoring load lookup, multilinear, scaled by s².
struct MooringModel {
    std::array<std::vector<double>, 6> axes;
    std::vector<Vec6> values;  // row-major, last axis fastest
    double scale = 1.0;

    std::size_t index(const std::array<std::size_t, 6>& i) const {
        std::size_t k = 0;
        for (int d = 0; d < 6; ++d) k = k * axes[d].size() + i[d];
        return k;
    }

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.size();
        return n;
    }

    double base_pretension() const {
        std::array<std::size_t, 6> zero{};
        for (int d = 0; d < 6; ++d) {
            const auto it = std::find(axes[d].begin(), axes[d].end(), 0.0);
            if (it == axes[d].end()) throw DomainError("mooring table must contain the zero displacement");
            zero[d] = static_cast<std::size_t>(it - axes[d].begin());
        }
        return -values[index(zero)][2];
    }

    double pretension() const { return scale * scale * base_pretension(); }
};

struct MooringLoad {
    Vec6 force = Vec6::Zero();
    bool clamped = false;
};

inline MooringLoad mooring_restoring(const MooringModel& m, const Vec6& q) {
    MooringLoad out;
    std::array<std::size_t, 6> lo{};
    std::array<double, 6> frac{};
    for (int d = 0; d < 6; ++d) {
        const auto& a = m.axes[d];
        double x = q[d];
        if (a.size() == 1) {
            lo[d] = 0;
            frac[d] = 0.0;
            if (x != a[0]) out.clamped = true;
            continue;
        }
        if (x < a.front()) {
            x = a.front();
            out.clamped = true;
        }
        if (x > a.back()) {
            x = a.back();
            out.clamped = true;
        }
        std::size_t j = static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), x) - a.begin());
        j = std::clamp<std::size_t>(j, 1, a.size() - 1) - 1;
        lo[d] = j;
        frac[d] = (x - a[j]) / (a[j + 1] - a[j]);
    }
    for (int corner = 0; corner < 64; ++corner) {
        double wgt = 1.0;
        std::array<std::size_t, 6> idx{};
        bool skip = false;
        for (int d = 0; d < 6; ++d) {
            const int bit = (corner >> d) & 1;
            if (m.axes[d].size() == 1 && bit) {
                skip = true;
                break;
            }
            idx[d] = lo[d] + bit;
            wgt *= bit ? frac[d] : 1.0 - frac[d];
        }
        if (skip || wgt == 0.0) continue;
        out.force += wgt * m.values[m.index(idx)];
    }
    out.force *= m.scale * m.scale;
    return out;
}

inline MooringModel synthetic_mooring_table(const MooringLayout& lay = {}) {
    MooringModel m;
    m.axes = {std::vector<double>{-20, -10, 0, 10, 20}, std::vector<double>{-20, -10, 0, 10, 20},
              std::vector<double>{-3, 0, 3},           std::vector<double>{-0.1, 0, 0.1},
              std::vector<double>{-0.1, 0, 0.1},       std::vector<double>{-0.1, 0, 0.1}};
    m.values.resize(m.size());
    std::array<std::size_t, 6> i{};
    for (i[0] = 0; i[0] < m.axes[0].size(); ++i[0])
        for (i[1] = 0; i[1] < m.axes[1].size(); ++i[1])
            for (i[2] = 0; i[2] < m.axes[2].size(); ++i[2])
                for (i[3] = 0; i[3] < m.axes[3].size(); ++i[3])
                    for (i[4] = 0; i[4] < m.axes[4].size(); ++i[4])
                        for (i[5] = 0; i[5] < m.axes[5].size(); ++i[5]) {
                            Vec6 q;
                            for (int d = 0; d < 6; ++d) q[d] = m.axes[d][i[d]];
                            m.values[m.index(i)] = catenary_restoring(lay, q);
                        }
    return m;
}

inline const char* mooring_csv_header() { return "surge_m,sway_m,heave_m,roll_rad,pitch_rad,yaw_rad,fx_N,fy_N,fz_N,mx_Nm,my_Nm,mz_Nm"; }

inline void write_mooring_table(std::ostream& os, const MooringModel& m) {
    os << mooring_csv_header() << '\n';
    char buf[64];
    std::array<std::size_t, 6> i{};
    for (std::size_t k = 0; k < m.size(); ++k) {
        std::size_t r = k;
        for (int d = 5; d >= 0; --d) {
            i[d] = r % m.axes[d].size();
            r /= m.axes[d].size();
        }
        for (int d = 0; d < 6; ++d) {
            std::snprintf(buf, sizeof buf, "%.10g,", m.axes[d][i[d]]);
            os << buf;
        }
        for (int d = 0; d < 6; ++d) {
            std::snprintf(buf, sizeof buf, d < 5 ? "%.10e," : "%.10e\n", m.values[k][d]);
            os << buf;
        }
    }
}

inline MooringModel read_mooring_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line).size() != 12) throw ParseError("mooring table header must have 12 columns");
    std::vector<std::array<double, 12>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 12) throw ParseError("mooring table row needs 12 values");
        std::array<double, 12> r{};
        for (int j = 0; j < 12; ++j)
            if (!parse_double(cells[j], r[j])) throw ParseError("mooring table value is not a number: " + cells[j]);
        rows.push_back(r);
    }
    MooringModel m;
    for (int d = 0; d < 6; ++d) {
        std::vector<double> a;
        for (const auto& r : rows) a.push_back(r[d]);
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        m.axes[d] = a;
    }
    if (rows.size() != m.size()) throw ParseError("mooring table is not a full grid");
    m.values.assign(m.size(), Vec6::Zero());
    std::vector<char> seen(m.size(), 0);
    for (const auto& r : rows) {
        std::array<std::size_t, 6> i{};
        for (int d = 0; d < 6; ++d)
            i[d] = static_cast<std::size_t>(std::lower_bound(m.axes[d].begin(), m.axes[d].end(), r[d]) - m.axes[d].begin());
        const std::size_t k = m.index(i);
        if (seen[k]) throw ParseError("duplicate mooring table node");
        seen[k] = 1;
        for (int j = 0; j < 6; ++j) m.values[k][j] = r[6 + j];
    }
    return m;
}

inline MooringModel read_mooring_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mooring table " + path);
    return read_mooring_table(in);
}

// Scale s minimising (s²·P0 − target)² on [0.25, 4].
inline double calibrate_mooring_scale(const MooringModel& base, double target_pretension, double s_lo = 0.25, double s_hi = 4.0) {
    const double p0 = base.base_pretension();
    if (!(p0 > 0.0) || !(target_pretension > 0.0)) throw CalibrationInfeasibleError("pretension must be positive");
    if (target_pretension < s_lo * s_lo * p0 * (1.0 - 1e-3) || target_pretension > s_hi * s_hi * p0 * (1.0 + 1e-3))
        throw CalibrationInfeasibleError("target pretension unreachable within the scale bounds");
    auto obj = [&](double s) {
        const double e = (s * s * p0 - target_pretension) / target_pretension;
        return e * e;
    };
    const auto r = boost::math::tools::brent_find_minima(obj, s_lo, s_hi, 50);
    const double s = r.first;
    if (std::abs(s * s * p0 - target_pretension) > 1e-3 * target_pretension)
        throw CalibrationInfeasibleError("calibration did not reach 0.1% accuracy");
    return s;
}

// K = −∂F/∂q by central differences of the scaled table, symmetrised.
inline Mat6 mooring_stiffness(const MooringModel& m, const Vec6& q0 = Vec6::Zero(), double h_lin = 0.5, double h_ang = 5e-3) {
    Mat6 K;
    for (int j = 0; j < 6; ++j) {
        const double h = j < 3 ? h_lin : h_ang;
        Vec6 a = q0, b = q0;
        a[j] += h;
        b[j] -= h;
        K.col(j) = -(mooring_restoring(m, a).force - mooring_restoring(m, b).force) / (2.0 * h);
    }
    return 0.5 * (K + K.transpose());
}

}  // namespace hexwave
