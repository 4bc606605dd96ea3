#pragma once

#include <variant>

#include "qstrip/grid.hpp"
#include "qstrip/types.hpp"

namespace qstrip {

struct PhysicsParams {
    double hbar = 1.0;   // action constant, > 0
    double c_hbar = 1.0; // hbar^2 / (2 m0), > 0
    double V_inf = 0.0;  // asymptotic potential value

    bool operator==(const PhysicsParams&) const = default;
};

/// Gaussian wave packet exp{ i k (x-x0) - ((x-x0)^2 + (y-y0)^2) / (4 alpha) }.
struct PacketParams {
    double k = 0.0;
    double alpha = 1.0; // width parameter, > 0
    double x0 = 0.0;
    double y0 = 0.0;

    bool operator==(const PacketParams&) const = default;
};

struct ZeroPotential {};

/// alpha0^2 c1 / cosh^2(alpha0 (x - x_star)), a smooth barrier in x only.
struct PoschlTellerBarrier {
    double alpha0 = 1.0;
    double c1 = 1.0;
    double x_star = 0.0;

    bool operator==(const PoschlTellerBarrier&) const = default;
};

/// Height Q on the open rectangle (a,b) x (c,d), zero outside.
struct RectangularBarrier {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double Q = 0.0;

    bool operator==(const RectangularBarrier&) const = default;
};

/// Node-sampled potential: (K+1) x (J+1) real values on a grid.
struct TabulatedMesh {
    GridSpec grid;
    RField values;
};

using PotentialSpec =
    std::variant<ZeroPotential, PoschlTellerBarrier, RectangularBarrier, TabulatedMesh>;

double eval_potential(const PotentialSpec& spec, double x, double y);

/// Samples the potential at the mesh nodes. For a rectangular barrier whose
/// edges lie on the mesh, edge and corner nodes are classified by index so
/// they land on the topological boundary (value 0) regardless of rounding
/// in j*h_x.
TabulatedMesh tabulate_potential(const PotentialSpec& spec, const GridSpec& grid);

/// Mesh average of the discontinuous rectangular barrier: Q strictly inside,
/// Q/2 on the face nodes, Q/4 at the four corners, pointwise V elsewhere.
/// Requires a, b on the x-mesh and c, d on the y-mesh.
TabulatedMesh averaged_mesh_potential(const RectangularBarrier& bar, const GridSpec& grid);

/// The packet sampled on the grid with the k=0 and k=K rows zeroed;
/// zero_left_column additionally clears j=0 (semi-infinite strip).
WaveField gaussian_packet(const PacketParams& packet, const GridSpec& grid,
                          bool zero_left_column);

/// Uniqueness hypothesis for an x-dependent auxiliary potential with
/// modulus-of-continuity constants (L, alpha): L tau h_x^alpha < 8 hbar.
bool uniqueness_condition_ok(double L, double alpha, double tau, double h_x, double hbar);

/// Index of the mesh node coinciding with coordinate c (step h), or -1.
int mesh_node_index(double c, double h, int n_max);

} // namespace qstrip
