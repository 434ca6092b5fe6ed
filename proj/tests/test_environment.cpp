#include "hexwave/environment.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace hexwave;

TEST(WavePower, DensityFormula) {
    EXPECT_NEAR(wave_power_density(2.85, 10.04), 40.0e3, 0.01 * 40.0e3);
    EXPECT_EQ(wave_power_density(0.0, 7.0), 0.0);
    EXPECT_NEAR(wave_power_density(2.0, 8.0), 15.70e3, 0.01e3);
    EXPECT_THROW(wave_power_density(1.0, 0.0), DomainError);
}

TEST(WavePower, WeightedStates) {
    SeaState s{2.85, 10.04, 3.3, 0.0, 1.0, "A"};
    EXPECT_NEAR(weighted_power({s}), wave_power_density(2.85, 10.04), 1e-9);
    SeaState a{1.0, 6.0, 3.3, 0.0, 0.5, "A"}, b{3.0, 11.0, 3.3, 0.0, 0.5, "B"};
    EXPECT_NEAR(weighted_power({a, b}), 0.5 * (wave_power_density(1.0, 6.0) + wave_power_density(3.0, 11.0)), 1e-9);
    SeaState z{0.0, 8.0, 3.3, 0.0, 1.0, "Z"};
    EXPECT_EQ(weighted_power({z}), 0.0);
    a.probability = 0.7;
    EXPECT_THROW(weighted_power({a, b}), DomainError);
}

TEST(Spectrum, RecoversHm0) {
    const auto s = jonswap(2.85, 10.04, 3.3, default_omega_grid());
    EXPECT_NEAR(spectrum_hm0(s), 2.85, 0.005 * 2.85);
    // energy period of the generated spectrum
    EXPECT_NEAR(2.0 * pi * spectral_moment(s, -1) / spectral_moment(s, 0), 10.04, 0.01 * 10.04);
}

TEST(Spectrum, ZeroHeight) {
    const auto s = jonswap(0.0, 8.0, 3.3, default_omega_grid());
    for (double v : s.S) EXPECT_EQ(v, 0.0);
    const auto eta = synthesize_elevation(s, 60.0, 0.5, 3);
    for (double v : eta) EXPECT_EQ(v, 0.0);
}

TEST(Spectrum, PiersonMoskowitzPeak) {
    const auto grid = default_omega_grid();
    const double te = 9.0;
    const auto s = jonswap(2.0, te, 1.0, grid);
    const std::size_t k = static_cast<std::size_t>(std::max_element(s.S.begin(), s.S.end()) - s.S.begin());
    const double wp = 2.0 * pi * te_over_tp(1.0) / te;
    EXPECT_LE(std::abs(grid[k] - wp), grid[1] - grid[0]);
    // PM closed form: T_e/T_p = 0.8572 for the Bretschneider shape
    EXPECT_NEAR(te_over_tp(1.0), 0.8572, 1e-3);
}

TEST(Spectrum, RejectsCoarseGrid) {
    EXPECT_THROW(jonswap(2.0, 8.0, 3.3, linspace(0.1, 3.5, 6)), ResolutionError);
    EXPECT_THROW(jonswap(2.0, 8.0, 0.5, default_omega_grid()), DomainError);
}

TEST(Synthesis, SignificantHeightFromRecord) {
    const auto grid = default_omega_grid();
    const auto s = jonswap(2.85, 10.04, 3.3, grid);
    // components are harmonics of the grid step: over one repeat period the
    // cross terms cancel and the record variance is exactly m0
    const double period = 2.0 * pi / (grid[1] - grid[0]);
    const std::size_t n = 4000;
    const auto eta = synthesize_elevation(s, period, period / n, 42);
    ASSERT_GE(eta.size(), n);
    double m = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        m += eta[k] / n;
        m2 += eta[k] * eta[k] / n;
    }
    EXPECT_NEAR(m, 0.0, 1e-9);
    EXPECT_NEAR(4.0 * std::sqrt(m2), spectrum_hm0(s), 1e-9 * spectrum_hm0(s));
    EXPECT_NEAR(4.0 * std::sqrt(m2), 2.85, 0.005 * 2.85);
    for (double v : eta) EXPECT_TRUE(std::isfinite(v));
}

TEST(Synthesis, SeedReproducible) {
    const auto s = jonswap(2.0, 9.0, 3.3, default_omega_grid());
    EXPECT_EQ(synthesize_elevation(s, 30.0, 0.5, 9), synthesize_elevation(s, 30.0, 0.5, 9));
    EXPECT_NE(synthesize_elevation(s, 30.0, 0.5, 9), synthesize_elevation(s, 30.0, 0.5, 10));
}

TEST(History, ParsesAndSkipsInvalidRows) {
    std::istringstream in("timestamp,hm0_m,te_s\n2020-01-01T00:00Z,1.5,8.0\nbad,,\n2020-01-01T01:00Z,-1,8\n2020-01-01T02:00Z,2.0,9.5\n");
    const auto h = read_wave_history(in);
    EXPECT_EQ(h.records.size(), 2u);
    EXPECT_EQ(h.skipped, 2u);
    std::istringstream bad("time,h,t\n");
    EXPECT_THROW(read_wave_history(bad), ParseError);
}

namespace {

WaveRecordHistory blobs(std::array<double, 2>& m1, std::array<double, 2>& m2) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 0.05);
    WaveRecordHistory h;
    m1 = m2 = {0.0, 0.0};
    for (int i = 0; i < 400; ++i) {
        const bool first = i % 2 == 0;
        WaveRecord r;
        r.hm0 = (first ? 1.0 : 4.0) + n(rng);
        r.te = (first ? 6.0 : 12.0) + 2.0 * n(rng);
        auto& m = first ? m1 : m2;
        m[0] += r.hm0 / 200.0;
        m[1] += r.te / 200.0;
        h.records.push_back(r);
    }
    return h;
}

}  // namespace

TEST(Clustering, TwoBlobs) {
    std::array<double, 2> m1{}, m2{};
    const auto h = blobs(m1, m2);
    const auto r = cluster_sea_states(h, 2, 11);
    ASSERT_EQ(r.states.size(), 2u);
    auto lo = r.states[0], hi = r.states[1];
    if (lo.hm0 > hi.hm0) std::swap(lo, hi);
    EXPECT_NEAR(lo.hm0, m1[0], 0.01 * m1[0]);
    EXPECT_NEAR(lo.te, m1[1], 0.01 * m1[1]);
    EXPECT_NEAR(hi.hm0, m2[0], 0.01 * m2[0]);
    EXPECT_NEAR(hi.te, m2[1], 0.01 * m2[1]);
    EXPECT_NEAR(lo.probability + hi.probability, 1.0, 1e-12);
}

TEST(Clustering, SingleCluster) {
    std::array<double, 2> m1{}, m2{};
    const auto h = blobs(m1, m2);
    const auto r = cluster_sea_states(h, 1, 1);
    EXPECT_NEAR(r.states[0].hm0, 0.5 * (m1[0] + m2[0]), 1e-9);
    EXPECT_NEAR(r.states[0].te, 0.5 * (m1[1] + m2[1]), 1e-9);
    EXPECT_EQ(r.states[0].probability, 1.0);
}

TEST(Clustering, BundledSampleTenStates) {
    const auto h = read_wave_history(std::string(HEXWAVE_SOURCE_DIR) + "/data/cdip139_sample.csv");
    const auto r = cluster_sea_states(h, 10, 42);
    ASSERT_EQ(r.states.size(), 10u);
    double p = 0.0;
    for (std::size_t i = 0; i < r.states.size(); ++i) {
        p += r.states[i].probability;
        EXPECT_EQ(r.states[i].label, std::string(1, static_cast<char>('A' + i)));
        if (i > 0) EXPECT_LE(r.states[i].probability, r.states[i - 1].probability);
    }
    EXPECT_NEAR(p, 1.0, 1e-9);
    for (std::size_t i = 1; i < r.wcss.size(); ++i) EXPECT_LE(r.wcss[i], r.wcss[i - 1] * (1.0 + 1e-12));
    EXPECT_EQ(r.assignment.size(), h.records.size());
}

TEST(Clustering, DegenerateInputs) {
    WaveRecordHistory h;
    h.records.push_back({"a", 1.0, 5.0});
    EXPECT_THROW(cluster_sea_states(h, 2, 1), DomainError);
    EXPECT_THROW(cluster_sea_states(h, 0, 1), DomainError);
}

TEST(Wind, PowerLawShear) {
    EXPECT_NEAR(wind_at_height(10.0, 10.0, 10.0), 10.0, 1e-12);
    EXPECT_NEAR(wind_at_height(10.0, 10.0, 80.0, 0.14), 10.0 * std::pow(8.0, 0.14), 1e-12);
    EXPECT_THROW(wind_at_height(10.0, 0.0, 10.0), DomainError);
}
