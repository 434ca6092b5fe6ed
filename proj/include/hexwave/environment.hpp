#pragma once

#include "hexwave/common.hpp"
#include "hexwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace hexwave {

struct SeaState {
    double hm0 = 0.0;      // m
    double te = 1.0;       // s
    double gamma = 3.3;
    double heading = 0.0;  // deg, propagation direction
    double probability = 1.0;
    std::string label;
};

struct WaveSpectrum {
    std::vector<double> omega;  // rad/s
    std::vector<double> S;      // m^2 s/rad
};

struct WaveRecord {
    std::string timestamp;
    double hm0 = 0.0;
    double te = 0.0;
};

struct WaveRecordHistory {
    std::vector<WaveRecord> records;
    std::size_t skipped = 0;
};

inline double wave_power_density(double hm0, double te, double rho = 1025.0, double g = 9.81) {
    if (hm0 < 0.0 || !(te > 0.0)) throw DomainError("wave power density needs hm0 >= 0 and te > 0");
    return rho * g * g / (64.0 * pi) * hm0 * hm0 * te;
}

inline double weighted_power(const std::vector<SeaState>& states, double rho = 1025.0, double g = 9.81) {
    double psum = 0.0, p = 0.0;
    for (const auto& s : states) {
        psum += s.probability;
        p += s.probability * wave_power_density(s.hm0, s.te, rho, g);
    }
    if (std::abs(psum - 1.0) > 1e-9) throw DomainError("sea-state probabilities must sum to 1");
    return p;
}

// Trapezoid weights for a sorted grid.
inline std::vector<double> trapezoid_weights(const std::vector<double>& x) {
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = 0.5 * (x[i + 1] - x[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    return w;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return g;
}

inline std::vector<double> default_omega_grid() { return linspace(0.1, 3.5, 681); }

// Unscaled JONSWAP shape with ω_p = 1 (Goda form, σ = 0.07/0.09).
inline double jonswap_shape(double x, double gamma) {
    if (x <= 0.0) return 0.0;
    const double sigma = x <= 1.0 ? 0.07 : 0.09;
    const double r = std::exp(-(x - 1.0) * (x - 1.0) / (2.0 * sigma * sigma));
    return std::pow(x, -5.0) * std::exp(-1.25 * std::pow(x, -4.0)) * std::pow(gamma, r);
}

// T_e / T_p = m_{-1}/m_0 of the normalised shape, by fine quadrature.
inline double te_over_tp(double gamma) {
    const auto x = linspace(0.2, 12.0, 40001);
    const auto w = trapezoid_weights(x);
    double m0 = 0.0, mm1 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = jonswap_shape(x[i], gamma);
        m0 += w[i] * s;
        mm1 += w[i] * s / x[i];
    }
    return mm1 / m0;
}

inline double spectral_moment(const WaveSpectrum& s, int n) {
    const auto w = trapezoid_weights(s.omega);
    double m = 0.0;
    for (std::size_t i = 0; i < s.omega.size(); ++i) m += w[i] * s.S[i] * std::pow(s.omega[i], n);
    return m;
}

inline WaveSpectrum jonswap(double hm0, double te, double gamma, const std::vector<double>& grid) {
    if (hm0 < 0.0 || !(te > 0.0) || !(gamma >= 1.0)) throw DomainError("invalid JONSWAP parameters");
    if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end()) || grid.front() > 0.2 || grid.back() < 3.0)
        throw DomainError("frequency grid must be sorted and cover [0.2, 3.0] rad/s");
    WaveSpectrum out;
    out.omega = grid;
    out.S.assign(grid.size(), 0.0);
    if (hm0 == 0.0) return out;
    const double wp = 2.0 * pi * te_over_tp(gamma) / te;
    for (std::size_t i = 0; i < grid.size(); ++i) out.S[i] = jonswap_shape(grid[i] / wp, gamma);
    const double m0 = spectral_moment(out, 0);
    const auto fine = linspace(grid.front(), grid.back(), 20 * grid.size() + 1);
    const auto fw = trapezoid_weights(fine);
    double ref = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) ref += fw[i] * jonswap_shape(fine[i] / wp, gamma);
    if (!(ref > 0.0) || std::abs(m0 - ref) > 0.01 * ref)
        throw ResolutionError("frequency grid too coarse: zeroth-moment error above 1%");
    const double k = hm0 * hm0 / 16.0 / m0;
    for (double& s : out.S) s *= k;
    return out;
}

inline double spectrum_hm0(const WaveSpectrum& s) { return 4.0 * std::sqrt(std::max(0.0, spectral_moment(s, 0))); }

// Harmonic components: amplitude, frequency, phase. Amplitudes follow the
// trapezoid weights so Σa²/2 equals the discrete m0.
struct WaveComponents {
    std::vector<double> omega, amplitude, phase;
};

inline WaveComponents wave_components(const WaveSpectrum& s, std::uint64_t seed) {
    WaveComponents c;
    const auto w = trapezoid_weights(s.omega);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    for (std::size_t i = 0; i < s.omega.size(); ++i) {
        const double ph = u(rng);
        const double a = std::sqrt(2.0 * std::max(0.0, s.S[i]) * w[i]);
        if (a == 0.0) continue;
        c.omega.push_back(s.omega[i]);
        c.amplitude.push_back(a);
        c.phase.push_back(ph);
    }
    return c;
}

inline std::vector<double> synthesize_elevation(const WaveSpectrum& s, double duration, double dt, std::uint64_t seed) {
    if (!(dt > 0.0) || !(duration >= 0.0)) throw DomainError("invalid synthesis time grid");
    if (!s.omega.empty() && dt > pi / s.omega.back()) throw DomainError("dt exceeds the Nyquist limit of the spectrum");
    const auto c = wave_components(s, seed);
    const std::size_t n = static_cast<std::size_t>(std::floor(duration / dt + 1e-9)) + 1;
    std::vector<double> eta(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = k * dt;
        double v = 0.0;
        for (std::size_t i = 0; i < c.omega.size(); ++i) v += c.amplitude[i] * std::cos(c.omega[i] * t + c.phase[i]);
        eta[k] = v;
    }
    return eta;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

inline bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end && *end == '\0' && std::isfinite(v);
}

// CSV with header timestamp,hm0_m,te_s; invalid rows are skipped and counted.
inline WaveRecordHistory read_wave_history(std::istream& in) {
    WaveRecordHistory h;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("wave history is empty");
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "timestamp" || header[1] != "hm0_m" || header[2] != "te_s")
        throw ParseError("wave history header must be timestamp,hm0_m,te_s");
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        WaveRecord r;
        if (cells.size() < 3 || !parse_double(cells[1], r.hm0) || !parse_double(cells[2], r.te) || r.hm0 < 0.0 ||
            !(r.te > 0.0)) {
            ++h.skipped;
            continue;
        }
        r.timestamp = cells[0];
        h.records.push_back(r);
    }
    return h;
}

inline WaveRecordHistory read_wave_history(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open wave history " + path);
    return read_wave_history(in);
}

struct ClusterResult {
    std::vector<SeaState> states;
    std::vector<int> assignment;  // index into states
    std::vector<double> wcss;     // standardized units, one entry per Lloyd iteration
    int attempts = 1;
};

namespace detail {

struct KMeansRun {
    std::vector<Vec2> centroids;
    std::vector<int> assign;
    std::vector<double> wcss;
    bool empty_cluster = false;
};

inline KMeansRun lloyd(const std::vector<Vec2>& x, int k, std::uint64_t seed, int max_iter) {
    std::mt19937_64 rng(seed);
    const std::size_t n = x.size();
    KMeansRun r;
    // k-means++ seeding
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    r.centroids.push_back(x[first(rng)]);
    std::vector<double> d2(n);
    while (static_cast<int>(r.centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : r.centroids) best = std::min(best, (x[i] - c).squaredNorm());
            d2[i] = best;
            total += best;
        }
        if (!(total > 0.0)) {
            r.centroids.push_back(x[first(rng)]);
            continue;
        }
        std::uniform_real_distribution<double> u(0.0, total);
        double pick = u(rng), acc = 0.0;
        std::size_t chosen = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= pick) {
                chosen = i;
                break;
            }
        }
        r.centroids.push_back(x[chosen]);
    }
    r.assign.assign(n, -1);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (x[i] - r.centroids[c]).squaredNorm();
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            if (best != r.assign[i]) {
                r.assign[i] = best;
                changed = true;
            }
        }
        std::vector<Vec2> sum(k, Vec2::Zero());
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[r.assign[i]] += x[i];
            ++count[r.assign[i]];
        }
        for (int c = 0; c < k; ++c)
            if (count[c] > 0) r.centroids[c] = sum[c] / static_cast<double>(count[c]);
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) w += (x[i] - r.centroids[r.assign[i]]).squaredNorm();
        r.wcss.push_back(w);
        if (!changed) break;
    }
    std::vector<std::size_t> count(k, 0);
    for (int a : r.assign) ++count[a];
    r.empty_cluster = std::any_of(count.begin(), count.end(), [](std::size_t c) { return c == 0; });
    return r;
}

}  // namespace detail

// k-means on z-scored (hm0, te). Labels A, B, ... by descending probability.
inline ClusterResult cluster_sea_states(const WaveRecordHistory& history, int k, std::uint64_t seed,
                                        double gamma = 3.3, int max_iter = 300, int retries = 5) {
    const std::size_t n = history.records.size();
    if (k < 1 || k > 26) throw DomainError("k must lie in [1, 26]");
    if (n < static_cast<std::size_t>(k)) throw DomainError("history shorter than k");
    Vec2 mean = Vec2::Zero();
    for (const auto& r : history.records) mean += Vec2(r.hm0, r.te);
    mean /= static_cast<double>(n);
    Vec2 var = Vec2::Zero();
    for (const auto& r : history.records) var += (Vec2(r.hm0, r.te) - mean).cwiseAbs2();
    Vec2 sd = (var / static_cast<double>(n)).cwiseSqrt();
    for (int j = 0; j < 2; ++j)
        if (!(sd[j] > 0.0)) sd[j] = 1.0;
    std::vector<Vec2> x;
    x.reserve(n);
    for (const auto& r : history.records) x.push_back((Vec2(r.hm0, r.te) - mean).cwiseQuotient(sd));

    detail::KMeansRun run;
    int attempt = 0;
    for (; attempt <= retries; ++attempt) {
        run = detail::lloyd(x, k, seed + static_cast<std::uint64_t>(attempt), max_iter);
        if (!run.empty_cluster) break;
    }
    if (run.empty_cluster) throw ClusteringDegenerateError("empty cluster persists after re-seeding");

    std::vector<std::size_t> count(k, 0);
    std::vector<Vec2> raw(k, Vec2::Zero());
    for (std::size_t i = 0; i < n; ++i) {
        ++count[run.assign[i]];
        raw[run.assign[i]] += Vec2(history.records[i].hm0, history.records[i].te);
    }
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::vector<Vec2> cen(k);
    for (int c = 0; c < k; ++c) cen[c] = raw[c] / static_cast<double>(count[c]);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (count[a] != count[b]) return count[a] > count[b];
        if (cen[a].x() != cen[b].x()) return cen[a].x() < cen[b].x();
        return cen[a].y() < cen[b].y();
    });
    ClusterResult out;
    std::vector<int> rank(k);
    for (int r = 0; r < k; ++r) {
        const int c = order[r];
        rank[c] = r;
        SeaState s;
        s.hm0 = cen[c].x();
        s.te = cen[c].y();
        s.gamma = gamma;
        s.probability = static_cast<double>(count[c]) / static_cast<double>(n);
        s.label = std::string(1, static_cast<char>('A' + r));
        out.states.push_back(s);
    }
    out.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.assignment[i] = rank[run.assign[i]];
    out.wcss = run.wcss;
    out.attempts = attempt + 1;
    return out;
}

// Steady wind at height z from a power-law profile.
inline double wind_at_height(double u_ref, double z_ref, double z, double alpha = 0.14) {
    if (!(z > 0.0) || !(z_ref > 0.0)) throw DomainError("heights must be positive");
    return u_ref * std::pow(z / z_ref, alpha);
}

}  // namespace hexwave
