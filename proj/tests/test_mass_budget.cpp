#include "hexwave/hydrostatics.hpp"
#include "hexwave/pto_mooring.hpp"

#include <gtest/gtest.h>

using namespace hexwave;

TEST(RequiredMass, BalanceArithmetic) {
    EXPECT_NEAR(required_mass(0.8e8, 1.05e6, 9.81), 8.048e6, 0.001 * 8.048e6);
    EXPECT_NEAR(required_mass(1234.5, 0.0, 9.81), 1234.5 / 9.81, 1e-12);
    EXPECT_THROW(required_mass(1.0, 2.0), InfeasibleEquilibriumError);
}

TEST(Tower, BaselineMassAndCog) {
    const auto dv = DesignVectors::baseline();
    const auto t = tower_properties(dv, dv.tower_steel_density);
    EXPECT_NEAR(t.mass, 249e3, 0.02 * 249e3);
    EXPECT_NEAR(t.cog.z(), 43.34, 0.02 * 43.34);
    const auto rna = rna_properties(dv);
    EXPECT_EQ(rna.mass, 350e3);
    EXPECT_NEAR(rna.cog.z(), 87.6, 1e-12);
}

TEST(Tower, ZeroLength) {
    auto dv = DesignVectors::baseline();
    dv.l_t = 0.0;
    const auto t = tower_properties(dv, dv.tower_steel_density);
    EXPECT_EQ(t.mass, 0.0);
    EXPECT_NEAR(t.cog.z(), dv.z_fr_p, 1e-12);
}

TEST(Shell, UnitCube) {
    const auto cube = make_box(Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5));
    const auto s = shell_mass(cube, 0.01, 7850.0);
    EXPECT_NEAR(s.mass, 471.0, 0.005 * 471.0);
    EXPECT_NEAR(shell_mass(cube, 0.02, 7850.0).mass, 2.0 * s.mass, 1e-9);
    EXPECT_THROW(shell_mass(cube, 0.6, 7850.0), ThinWallViolationError);
}

TEST(Shell, BaselinePlatformMatchesFaceSum) {
    const auto dv = DesignVectors::baseline();
    const auto mesh = build_platform_mesh(dv, 1);
    double area = 0.0;
    for (const auto& f : mesh.faces) area += face_area(mesh, f);
    const auto s = shell_mass(mesh, dv.b_wall_pf, dv.steel_density);
    EXPECT_NEAR(s.mass, area * dv.b_wall_pf * dv.steel_density, 1e-9 * s.mass);
}

TEST(Ballast, FillOrder) {
    const BallastMedia media;
    const auto b = fill_body(300e3, 100.0, media, "tank");
    EXPECT_NEAR(b.slurry_volume, 60.0, 1e-9);
    EXPECT_NEAR(b.water_volume, 0.0, 1e-12);
    EXPECT_NEAR(b.air_volume, 40.0, 1e-9);
    EXPECT_NEAR(b.slurry_volume + b.water_volume + b.air_volume, b.internal_volume, 1e-9 * b.internal_volume);
    const auto empty = fill_body(0.0, 100.0, media, "tank");
    EXPECT_EQ(empty.slurry_volume + empty.water_volume, 0.0);
    EXPECT_NEAR(empty.air_volume, 100.0, 1e-12);
    EXPECT_THROW(fill_body(600e3, 100.0, media, "tank"), BallastInfeasibleError);
    try {
        fill_body(600e3, 100.0, media, "tank");
    } catch (const BallastInfeasibleError& e) {
        EXPECT_NE(std::string(e.what()).find("capacity"), std::string::npos);
    }
}

TEST(Ballast, WaterOnlyFill) {
    BallastMedia media;
    media.use_slurry = false;
    const auto b = fill_body(51.25e3, 100.0, media, "tank");
    EXPECT_NEAR(b.water_volume, 50.0, 1e-9);
    EXPECT_NEAR(b.air_volume, 50.0, 1e-9);
}

TEST(SystemMass, Composition) {
    const auto one = point_mass(5.0, Vec3(1, 2, 3));
    const auto same = system_mass_properties({one});
    EXPECT_EQ(same.mass, 5.0);
    EXPECT_LT((same.cog - one.cog).norm(), 1e-15);
    const double m = 2.0, a = 3.0;
    const auto pair = system_mass_properties({point_mass(m, Vec3(a, 0, 0)), point_mass(m, Vec3(-a, 0, 0))});
    EXPECT_LT(pair.cog.norm(), 1e-15);
    EXPECT_NEAR(pair.inertia(1, 1), 2.0 * m * a * a, 1e-12);
    EXPECT_NEAR(pair.inertia(2, 2), 2.0 * m * a * a, 1e-12);
}

TEST(MassModel, BaselineClosure) {
    const auto mm = build_mass_model(DesignVectors::baseline());
    const double g = 9.81;
    EXPECT_NEAR(mm.buoyancy_force, mm.total_mass() * g + mm.mooring_force, 1e-6 * mm.buoyancy_force);
    EXPECT_NEAR(mm.mooring_force, mooring_target(mm.buoyancy_force, 1.4e8, 1.84e6), 1e-9 * mm.mooring_force);
    for (const auto& b : mm.ballast.bodies) {
        EXPECT_GE(b.slurry_volume, 0.0);
        EXPECT_GE(b.water_volume, 0.0);
        EXPECT_GE(b.air_volume, 0.0);
        EXPECT_NEAR(b.slurry_volume + b.water_volume + b.air_volume, b.internal_volume, 1e-9 * b.internal_volume);
    }
    const Eigen::SelfAdjointEigenSolver<Mat3> es(mm.platform.inertia);
    EXPECT_GE(es.eigenvalues().minCoeff(), 0.0);
    EXPECT_LT((mm.platform.inertia - mm.platform.inertia.transpose()).norm(), 1e-6 * mm.platform.inertia.norm());
}

TEST(MassModel, BallastSplitFollowsFractions) {
    const auto dv = DesignVectors::baseline();
    const auto mm = build_mass_model(dv);
    double total = 0.0;
    for (const auto& b : mm.ballast.bodies) total += b.mass;
    EXPECT_NEAR(mm.ballast.bodies[0].mass, dv.m_p_frac * total, 1e-9 * total);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(mm.ballast.bodies[i].mass, dv.m_f_frac * total / 3.0, 1e-9 * total);
}

TEST(MassModel, CogAboveCob) {
    const auto ctx = HydroContext::make(DesignVectors::baseline());
    const auto rep = evaluate_pose(ctx, AssemblyPose{});
    EXPECT_GT(rep.cog.z(), rep.cob.z());
}

TEST(MassModel, WaterBallastClampsPlatformShare) {
    const auto dv = DesignVectors::baseline();
    const auto mm = build_mass_model(dv, water_ballast());
    EXPECT_LE(mm.platform_share, dv.m_p_frac);
    EXPECT_NEAR(mm.buoyancy_force, mm.total_mass() * 9.81 + mm.mooring_force, 1e-6 * mm.buoyancy_force);
    for (const auto& b : mm.ballast.bodies) EXPECT_EQ(b.slurry_volume, 0.0);
}

TEST(MassModel, OverMassed) {
    auto dv = DesignVectors::baseline();
    dv.steel_density = 7850.0 * 30.0;
    EXPECT_THROW(build_mass_model(dv), OverMassedError);
}
