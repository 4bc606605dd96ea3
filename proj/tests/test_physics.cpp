#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qstrip/errors.hpp"
#include "qstrip/physics.hpp"

using namespace qstrip;

namespace {
const PacketParams kExampleAPacket{30.0 * std::sqrt(2.0), 1.0 / 120.0, 1.0, 2.1};
}

TEST_CASE("gaussian packet values") {
    const GridSpec g = build_grid(4, 4.2, 0.05, 400, 64, 1000);
    const WaveField f = gaussian_packet(kExampleAPacket, g, false);

    // exact 1 at the center node (1, 2.1) = node (100, 32)
    CHECK(f.at(100, 32) == Complex(1.0, 0.0));

    // the packet tail on the domain boundary stays below 9.4e-14
    double boundary_max = 0.0;
    for (int k = 0; k <= g.K; ++k) {
        boundary_max = std::max(boundary_max, std::abs(f.at(0, k)));
        boundary_max = std::max(boundary_max, std::abs(f.at(g.J, k)));
    }
    for (int j = 0; j <= g.J; ++j) {
        boundary_max = std::max(boundary_max, std::abs(f.at(j, 0)));
        boundary_max = std::max(boundary_max, std::abs(f.at(j, g.K)));
    }
    CHECK(boundary_max < 9.4e-14);
}

TEST_CASE("gaussian packet modulus is mirror symmetric about a node center") {
    // dyadic steps make the mirrored distances exact in floating point
    const GridSpec g = build_grid(4, 4, 1, 16, 16, 1);
    PacketParams packet{12.0, 0.25, 2.0, 2.0};
    const WaveField f = gaussian_packet(packet, g, false);
    for (int d = 1; d <= 7; ++d)
        for (int k = 1; k <= g.K - 1; ++k)
            CHECK(std::abs(f.at(8 - d, k)) == std::abs(f.at(8 + d, k)));

    const GridSpec ga = build_grid(4, 4.2, 0.05, 400, 64, 1000);
    const WaveField fa = gaussian_packet(kExampleAPacket, ga, false);
    for (int d : {10, 40, 90})
        CHECK(std::abs(fa.at(100 - d, 32)) ==
              doctest::Approx(std::abs(fa.at(100 + d, 32))).epsilon(1e-13));
}

TEST_CASE("gaussian packet zeroes the requested boundaries") {
    const GridSpec g = build_grid(4, 4.2, 0.05, 40, 8, 1);
    const WaveField f = gaussian_packet(kExampleAPacket, g, true);
    for (int k = 0; k <= g.K; ++k)
        CHECK(f.at(0, k) == Complex(0.0, 0.0));
    for (int j = 0; j <= g.J; ++j) {
        CHECK(f.at(j, 0) == Complex(0.0, 0.0));
        CHECK(f.at(j, g.K) == Complex(0.0, 0.0));
    }
    CHECK_THROWS_AS(gaussian_packet(PacketParams{1, 0.1, -2, 0.5}, g, false), ConfigError);
    CHECK_THROWS_AS(gaussian_packet(PacketParams{1, -0.1, 1, 0.5}, g, false), ConfigError);
}

TEST_CASE("poschl-teller barrier values") {
    const PotentialSpec pt = PoschlTellerBarrier{6.0, 47.0, 2.0};
    CHECK(eval_potential(pt, 2.0, 0.3) == doctest::Approx(1692.0).epsilon(1e-14));
    // decays below 2.6e-7 outside [0,4]
    CHECK(eval_potential(pt, 0.0, 0.0) < 2.6e-7);
    CHECK(eval_potential(pt, 4.0, 1.0) < 2.6e-7);
    CHECK(eval_potential(pt, -1.0, 0.0) < 2.6e-7);
    CHECK(eval_potential(pt, 5.5, 0.0) < 2.6e-7);
}

TEST_CASE("poschl-teller is positive and peaks at x_star") {
    const PoschlTellerBarrier pt{6.0, 47.0, 2.0};
    const GridSpec g = build_grid(4, 4.2, 0.05, 400, 64, 1000);
    const double peak = eval_potential(PotentialSpec{pt}, pt.x_star, 0.0);
    for (int j = 0; j <= g.J; ++j) {
        const double v = eval_potential(PotentialSpec{pt}, g.x(j), 0.0);
        CHECK(v > 0.0);
        if (g.x(j) != pt.x_star)
            CHECK(v < peak);
    }
}

TEST_CASE("rectangular barrier values") {
    const PotentialSpec rect = RectangularBarrier{1.6, 1.7, 0.7, 2.1, 1500.0};
    CHECK(eval_potential(rect, 0.0, 0.0) == 0.0);
    CHECK(eval_potential(rect, 1.65, 1.0) == 1500.0);
    CHECK(eval_potential(rect, 1.6, 1.0) == 0.0); // open rectangle
    CHECK(eval_potential(PotentialSpec{ZeroPotential{}}, 1.0, 1.0) == 0.0);
}

TEST_CASE("averaged mesh potential puts Q, Q/2, Q/4 on interior, faces, corners") {
    const RectangularBarrier bar{1.6, 1.7, 0.7, 2.1, 1500.0};
    const GridSpec g = build_grid(3, 2.8, 0.027, 300, 64, 600);
    const TabulatedMesh mesh = averaged_mesh_potential(bar, g);
    const int ja = 160, jb = 170, kc = 16, kd = 48;

    CHECK(mesh.values(kc + 5, ja + 3) == 1500.0);
    CHECK(mesh.values(kc + 5, ja) == 750.0);
    CHECK(mesh.values(kc + 5, jb) == 750.0);
    CHECK(mesh.values(kc, ja + 3) == 750.0);
    CHECK(mesh.values(kd, ja + 3) == 750.0);
    CHECK(mesh.values(kc, ja) == 375.0);
    CHECK(mesh.values(kd, jb) == 375.0);
    // the barrier lines continued beyond the rectangle carry plain V = 0
    CHECK(mesh.values(kc - 2, ja) == 0.0);
    CHECK(mesh.values(kd + 2, jb) == 0.0);
}

TEST_CASE("averaged potential equals the pointwise one away from barrier edges") {
    const RectangularBarrier bar{1.6, 1.7, 0.7, 2.1, 1500.0};
    const GridSpec g = build_grid(3, 2.8, 0.027, 300, 64, 600);
    const TabulatedMesh avg = averaged_mesh_potential(bar, g);
    const int ja = 160, jb = 170, kc = 16, kd = 48;
    for (int j = 0; j <= g.J; ++j) {
        for (int k = 0; k <= g.K; ++k) {
            const bool on_edge = ((j == ja || j == jb) && kc <= k && k <= kd) ||
                                 ((k == kc || k == kd) && ja <= j && j <= jb);
            if (on_edge)
                continue;
            const bool inside = ja < j && j < jb && kc < k && k < kd;
            CHECK(avg.values(k, j) == (inside ? bar.Q : 0.0));
        }
    }
}

TEST_CASE("averaged potential demands on-mesh edges") {
    const RectangularBarrier bar{1.6, 1.7, 0.7, 2.1, 1500.0};
    const GridSpec off = build_grid(3, 2.8, 0.027, 301, 64, 600); // a not on the x-mesh
    CHECK_THROWS_AS(averaged_mesh_potential(bar, off), ConfigError);
    const GridSpec off_y = build_grid(3, 2.8, 0.027, 300, 50, 600); // c*K/Y = 12.5
    CHECK_THROWS_AS(averaged_mesh_potential(bar, off_y), ConfigError);
}

TEST_CASE("uniqueness condition check") {
    CHECK(uniqueness_condition_ok(0.0, 1.0, 1e-4, 1e-2, 1.0));
    CHECK(uniqueness_condition_ok(100.0, 1.0, 1e-4, 1e-2, 1.0));
    CHECK(!uniqueness_condition_ok(1e9, 0.0, 1e-2, 1e-2, 1.0));
}
