#include "hexwave/hydrostatics.hpp"
#include "voxel_oracle.hpp"

#include <gtest/gtest.h>

using namespace hexwave;

namespace {

PanelMesh unit_cube() { return make_box(Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5)); }

}  // namespace

TEST(Clip, HalfCube) {
    const auto sub = clip_below_waterline(unit_cube(), 0.0);
    EXPECT_TRUE(is_closed(sub));
    const auto [v, cob] = volume_and_cob(sub);
    EXPECT_NEAR(v, 0.5, 1e-12);
    EXPECT_NEAR(cob.z(), -0.25, 1e-12);
}

TEST(Clip, FullySubmergedAndEmerged) {
    const auto c = unit_cube();
    EXPECT_NEAR(volume_integrals(clip_below_waterline(c, 2.0)).volume, 1.0, 1e-12);
    EXPECT_NEAR(volume_integrals(clip_below_waterline(c, -2.0)).volume, 0.0, 1e-12);
    EXPECT_NEAR(waterplane_properties(c, -2.0).area, 0.0, 1e-12);
    const auto [v, cob] = volume_and_cob(c);
    EXPECT_NEAR(v, 1.0, 1e-12);
    EXPECT_LT(cob.norm(), 1e-12);
}

TEST(Clip, Idempotent) {
    AssemblyPose p;
    p.platform_pitch = deg2rad(12.0);
    const auto m = unit_cube().transformed(platform_transform(p));
    const auto once = clip_below_waterline(m, 0.1);
    const auto twice = clip_below_waterline(once, 0.1);
    EXPECT_NEAR(volume_integrals(once).volume, volume_integrals(twice).volume, 1e-12);
}

TEST(Clip, TiltedBoxMatchesVoxelOracle) {
    const auto box = make_box(Vec3(-1, -1, -1), Vec3(1, 1, 1));
    AssemblyPose p;
    p.platform_pitch = deg2rad(30.0);
    const auto tilted = box.transformed(platform_transform(p));
    const double v = volume_integrals(clip_below_waterline(tilted, 0.0)).volume;
    EXPECT_NEAR(v, hexwave::testing::voxel_volume_below(tilted, 0.0), 0.005 * v);
}

TEST(Clip, BaselineAssemblyMatchesVoxelOracle) {
    const auto ctx = HydroContext::make(DesignVectors::baseline());
    AssemblyPose p;
    p.platform_pitch = deg2rad(8.0);
    p.flap_angles = {deg2rad(20.0), deg2rad(-30.0), deg2rad(10.0)};
    const auto mesh = ctx.posed(p).combined();
    const double v = volume_integrals(clip_below_waterline(mesh, 0.0)).volume;
    EXPECT_NEAR(v, hexwave::testing::voxel_volume_below(mesh, 0.0), 0.005 * v);
}

TEST(Waterplane, BoxBarge) {
    const auto barge = make_box(Vec3(-5, -5, -5), Vec3(5, 5, 5));
    const auto wp = waterplane_properties(barge, 0.0);
    EXPECT_NEAR(wp.area, 100.0, 1e-9);
    EXPECT_NEAR(wp.i_xx, 1000.0 / 12.0 * 10.0, 1e-9);
    EXPECT_NEAR(wp.i_yy, 1000.0 / 12.0 * 10.0, 1e-9);
}

TEST(Metacentre, BoxBargeClassical) {
    const auto barge = make_box(Vec3(-5, -5, -5), Vec3(5, 5, 5));
    const double kg = 4.0;
    const double expected = 2.5 + (10.0 * 1000.0 / 12.0) / 500.0 - kg;
    const auto [gm, gm_t] = metacentric_height(barge, -5.0 + kg, 0.0);
    EXPECT_NEAR(gm, 0.1667, 1e-4);
    EXPECT_NEAR(gm, expected, 1e-4 * expected);
    EXPECT_NEAR(gm_t, expected, 1e-4 * expected);
}

TEST(Metacentre, ZeroWhenGAtBAndNoWaterplane) {
    const auto cube = unit_cube();
    // fully submerged: no waterplane, G placed at B
    const auto [gm, gm_t] = metacentric_height(cube, 0.0, 2.0);
    EXPECT_NEAR(gm, 0.0, 1e-12);
    EXPECT_NEAR(gm_t, 0.0, 1e-12);
}

TEST(Metacentre, NoVolumeRaises) { EXPECT_THROW(metacentric_height(unit_cube(), 0.0, -3.0), StabilityUndefinedError); }

TEST(Evaluate, RestPoseBalancesBuoyancy) {
    const auto ctx = HydroContext::make(DesignVectors::baseline());
    const auto rep = evaluate_pose(ctx, AssemblyPose{});
    EXPECT_NEAR(rep.buoyancy_force, ctx.fluid.rho * ctx.fluid.g * rep.displaced_volume, 1e-9 * rep.buoyancy_force);
    EXPECT_NEAR(rep.displaced_volume, ctx.target_volume(), 1e-6 * ctx.target_volume());
    EXPECT_GT(rep.gm_long, 0.0);
    EXPECT_GT(rep.cog.z(), rep.cob.z());
    EXPECT_GE(rep.waterplane.area, 0.0);
}

TEST(Evaluate, WaterplaneMatchesSectionSum) {
    const auto dv = DesignVectors::baseline();
    const auto ctx = HydroContext::make(dv);
    const auto rep = evaluate_pose(ctx, AssemblyPose{});
    // cylinder plus three flap cuts; the ring sits deep below the surface
    const double expected = pi * dv.d_c_p * dv.d_c_p / 4.0 + 3.0 * dv.l_f * dv.w_f;
    EXPECT_NEAR(rep.waterplane.area, expected, 0.01 * expected);
}

TEST(Envelope, GridAndSingleCellConsistency) {
    const auto ctx = HydroContext::make(DesignVectors::baseline());
    const auto env = stability_envelope(ctx, {0.0}, {0.0});
    ASSERT_EQ(env.cells.size(), 1u);
    EXPECT_NEAR(env.cells[0].gm, evaluate_pose(ctx, AssemblyPose{}).gm_long, 1e-12);
    EXPECT_EQ(angle_grid(-60, 60, 2).size(), 61u);
    EXPECT_EQ(angle_grid(-40, 40, 20).size(), 5u);
}

TEST(Envelope, SummaryMatchesDirectEvaluation) {
    const auto ctx = HydroContext::make(DesignVectors::baseline());
    const auto pitch = angle_grid(-30, 30, 10), flaps = angle_grid(-40, 40, 40);
    const auto env = stability_envelope(ctx, pitch, flaps, 1);
    ASSERT_EQ(env.cells.size(), 7u * 27u);
    std::vector<double> direct;
    for (double p : pitch) {
        double lo = std::numeric_limits<double>::infinity();
        for (double a : flaps)
            for (double b : flaps)
                for (double c : flaps) {
                    AssemblyPose pose;
                    pose.platform_pitch = deg2rad(p);
                    pose.flap_angles = {deg2rad(a), deg2rad(b), deg2rad(c)};
                    lo = std::min(lo, evaluate_pose(ctx, pose).gm_long);
                }
        direct.push_back(lo);
    }
    for (std::size_t i = 0; i < pitch.size(); ++i) EXPECT_EQ(env.summary[i].gm_min, direct[i]) << pitch[i];
    // stable range: the positive block around 0
    ASSERT_GT(direct[3], 0.0);
    std::size_t lo = 3, hi = 3;
    while (lo > 0 && direct[lo - 1] > 0.0) --lo;
    while (hi + 1 < direct.size() && direct[hi + 1] > 0.0) ++hi;
    EXPECT_EQ(env.stable_lo_deg, pitch[lo]);
    EXPECT_EQ(env.stable_hi_deg, pitch[hi]);
}

TEST(RandomFlaps, ZeroRangeEqualsRest) {
    const auto ctx = HydroContext::make(DesignVectors::baseline());
    EXPECT_NEAR(min_gm_random_flaps(ctx, 1, 0.0, 7), evaluate_pose(ctx, AssemblyPose{}).gm_long, 1e-12);
}

TEST(RandomFlaps, BaselineBracketedByRestGm) {
    const auto ctx = HydroContext::make(DesignVectors::baseline());
    const double m = min_gm_random_flaps(ctx, 1000, 45.0, 42);
    EXPECT_GT(m, 0.0);
    EXPECT_LT(m, evaluate_pose(ctx, AssemblyPose{}).gm_long);
}

TEST(RandomFlaps, SmallFlapsUnstable) {
    auto dv = DesignVectors::baseline();
    dv.h_f = 17.6;
    const auto ctx = HydroContext::make(dv);
    EXPECT_LT(min_gm_random_flaps(ctx, 1000, 45.0, 42), 0.0);
}
