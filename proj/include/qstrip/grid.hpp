#pragma once

#include "qstrip/types.hpp"

namespace qstrip {

/// Uniform space-time mesh on [0,X] x [0,Y] x [0,T] with J, K space
/// intervals and M time levels.
struct GridSpec {
    double X = 0.0;
    double Y = 0.0;
    double T = 0.0;
    int J = 0;
    int K = 0;
    int M = 0;

    double h_x = 0.0;
    double h_y = 0.0;
    double tau = 0.0;
    bool k_pow2 = false;

    double x(int j) const { return j * h_x; }
    double y(int k) const { return k * h_y; }
    double t(int m) const { return m * tau; }

    bool same_mesh(const GridSpec& o) const {
        return X == o.X && Y == o.Y && T == o.T && J == o.J && K == o.K && M == o.M;
    }
};

GridSpec build_grid(double X, double Y, double T, int J, int K, int M);

/// Complex-valued mesh function on the (J+1)x(K+1) node lattice at one time
/// level. values is (K+1) rows x (J+1) cols; column j is the y-line at x_j.
struct WaveField {
    GridSpec grid;
    CField values;

    Complex& at(int j, int k) { return values(k, j); }
    const Complex& at(int j, int k) const { return values(k, j); }
};

WaveField zero_field(const GridSpec& grid);

/// One Fourier mode of the solution: a complex line over j = 0..J.
struct ModeLine {
    int q = 0;
    CVector values; // length J+1
};

/// Discrete L2 norm over interior nodes j=1..J-1, k=1..K-1 scaled by
/// h_x*h_y. With include_right_half, the j=J column enters with half
/// weight h_x/2.
double norm_l2(const WaveField& field, bool include_right_half = false);

/// Maximum node modulus over the whole lattice.
double norm_c(const WaveField& field);

/// Samples the fine field at every (factor_x, factor_y)-th node. Pure
/// injection: nested meshes share nodes, so no interpolation happens.
WaveField restrict_field(const WaveField& fine, int factor_x, int factor_y);

} // namespace qstrip
