#include "qstrip/grid.hpp"

#include <cmath>
#include <string>

#include "qstrip/errors.hpp"

namespace qstrip {

GridSpec build_grid(double X, double Y, double T, int J, int K, int M) {
    if (!(X > 0.0) || !(Y > 0.0) || !(T > 0.0))
        throw ConfigError("build_grid: extents X, Y, T must be strictly positive");
    if (J < 2 || K < 2)
        throw ConfigError("build_grid: need J >= 2 and K >= 2, got J=" + std::to_string(J) +
                          " K=" + std::to_string(K));
    if (M < 0)
        throw ConfigError("build_grid: need M >= 0, got M=" + std::to_string(M));

    GridSpec g;
    g.X = X;
    g.Y = Y;
    g.T = T;
    g.J = J;
    g.K = K;
    g.M = M;
    g.h_x = X / J;
    g.h_y = Y / K;
    g.tau = M > 0 ? T / M : 0.0; // M = 0 carries the initial state only
    g.k_pow2 = (K & (K - 1)) == 0;
    return g;
}

WaveField zero_field(const GridSpec& grid) {
    WaveField f;
    f.grid = grid;
    f.values = CField::Zero(grid.K + 1, grid.J + 1);
    return f;
}

double norm_l2(const WaveField& field, bool include_right_half) {
    const GridSpec& g = field.grid;
    double sum = 0.0;
    for (int j = 1; j <= g.J - 1; ++j)
        for (int k = 1; k <= g.K - 1; ++k)
            sum += std::norm(field.values(k, j));
    if (include_right_half) {
        double edge = 0.0;
        for (int k = 1; k <= g.K - 1; ++k)
            edge += std::norm(field.values(k, g.J));
        sum += 0.5 * edge;
    }
    return std::sqrt(sum * g.h_x * g.h_y);
}

double norm_c(const WaveField& field) {
    double mx = 0.0;
    for (Eigen::Index j = 0; j < field.values.cols(); ++j)
        for (Eigen::Index k = 0; k < field.values.rows(); ++k)
            mx = std::max(mx, std::abs(field.values(k, j)));
    return mx;
}

WaveField restrict_field(const WaveField& fine, int factor_x, int factor_y) {
    if (factor_x < 1 || factor_y < 1)
        throw ConfigError("restrict_field: factors must be >= 1");
    const GridSpec& g = fine.grid;
    if (g.J % factor_x != 0)
        throw ConfigError("restrict_field: J=" + std::to_string(g.J) +
                          " not divisible by factor " + std::to_string(factor_x));
    if (g.K % factor_y != 0)
        throw ConfigError("restrict_field: K=" + std::to_string(g.K) +
                          " not divisible by factor " + std::to_string(factor_y));

    WaveField coarse;
    coarse.grid = build_grid(g.X, g.Y, g.T, g.J / factor_x, g.K / factor_y, g.M);
    coarse.values.resize(coarse.grid.K + 1, coarse.grid.J + 1);
    for (int j = 0; j <= coarse.grid.J; ++j)
        for (int k = 0; k <= coarse.grid.K; ++k)
            coarse.values(k, j) = fine.values(k * factor_y, j * factor_x);
    return coarse;
}

} // namespace qstrip
