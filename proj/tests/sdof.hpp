#pragma once

#include "hexwave/dynamics.hpp"

namespace hexwave::testing {

struct Sdof {
    double m = 1e6, a = 0.0, b = 0.0, k = 4e6, kp = 0.0;

    LinearModel model() const {
        LinearModel lm;
        lm.M = MatX::Constant(1, 1, m + a);
        lm.B = MatX::Constant(1, 1, b);
        lm.K = MatX::Constant(1, 1, k);
        lm.pto_dofs = {0};
        lm.kp = {kp};
        return lm;
    }

    // Steady amplitude under F·cos(ωt).
    double amplitude(double force, double omega) const {
        const cplx z(k - omega * omega * (m + a), omega * (b + kp));
        return force / std::abs(z);
    }

    double mean_power(double force, double omega) const {
        const double v = omega * amplitude(force, omega);
        return 0.5 * kp * v * v;
    }
};

inline ExcitationSeries monochromatic(double force, double omega, double duration, double dt) {
    VecXc x(1);
    x[0] = force;
    return harmonic_excitation({x}, {omega}, {1.0}, {0.0}, duration, dt, 1);
}

// Least-squares amplitude of a·cos ωt + b·sin ωt over samples with t ≥ t0.
inline double fitted_amplitude(const SimulationResult& r, double omega, double t0) {
    Eigen::Matrix2d N = Eigen::Matrix2d::Zero();
    Eigen::Vector2d y = Eigen::Vector2d::Zero();
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        if (r.t[k] < t0) continue;
        const Eigen::Vector2d phi(std::cos(omega * r.t[k]), std::sin(omega * r.t[k]));
        N += phi * phi.transpose();
        y += phi * r.q(0, static_cast<Eigen::Index>(k));
    }
    return N.ldlt().solve(y).norm();
}

}  // namespace hexwave::testing
