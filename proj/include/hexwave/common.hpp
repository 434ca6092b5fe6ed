#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>

namespace hexwave {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr double pi = std::numbers::pi;

inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }

// Seawater and gravity defaults used throughout; every entry point that
// depends on them also accepts an override.
struct Fluid {
    double rho = 1025.0;  // kg/m^3
    double g = 9.81;      // m/s^2
};

// Rigid transform x -> R x + t.
struct Rigid {
    Mat3 R = Mat3::Identity();
    Vec3 t = Vec3::Zero();

    Vec3 apply(const Vec3& x) const { return R * x + t; }
    Vec3 rotate(const Vec3& v) const { return R * v; }

    // (this ∘ other)(x) = this(other(x))
    Rigid operator*(const Rigid& other) const { return {R * other.R, R * other.t + t}; }

    Rigid inverse() const { return {R.transpose(), -(R.transpose() * t)}; }
};

inline Mat3 rot_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 m;
    m << 1, 0, 0, 0, c, -s, 0, s, c;
    return m;
}

inline Mat3 rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 m;
    m << c, 0, s, 0, 1, 0, -s, 0, c;
    return m;
}

inline Mat3 rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 m;
    m << c, -s, 0, s, c, 0, 0, 0, 1;
    return m;
}

// Right-handed rotation by `angle` about unit `axis` passing through `point`.
inline Rigid rotation_about_axis(const Vec3& point, const Vec3& axis, double angle) {
    const Mat3 R = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
    return {R, point - R * point};
}

inline Mat3 skew(const Vec3& v) {
    Mat3 m;
    m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return m;
}

}  // namespace hexwave
