#include "qstrip/physics.hpp"

#include <cmath>
#include <string>

#include "qstrip/errors.hpp"

namespace qstrip {

namespace {

double eval_poschl_teller(const PoschlTellerBarrier& p, double x) {
    const double ch = std::cosh(p.alpha0 * (x - p.x_star));
    return p.alpha0 * p.alpha0 * p.c1 / (ch * ch);
}

} // namespace

double eval_potential(const PotentialSpec& spec, double x, double y) {
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ZeroPotential>) {
                return 0.0;
            } else if constexpr (std::is_same_v<P, PoschlTellerBarrier>) {
                return eval_poschl_teller(p, x);
            } else if constexpr (std::is_same_v<P, RectangularBarrier>) {
                return (p.a < x && x < p.b && p.c < y && y < p.d) ? p.Q : 0.0;
            } else {
                const P& tab = p;
                const int j = static_cast<int>(std::lround(x / tab.grid.h_x));
                const int k = static_cast<int>(std::lround(y / tab.grid.h_y));
                if (j < 0 || j > tab.grid.J || k < 0 || k > tab.grid.K)
                    throw ConfigError("eval_potential: point outside tabulated mesh");
                return tab.values(k, j);
            }
        },
        spec);
}

int mesh_node_index(double c, double h, int n_max) {
    const long idx = std::lround(c / h);
    if (idx < 0 || idx > n_max)
        return -1;
    const double tol = 1e-9 * std::max(1.0, std::abs(c));
    if (std::abs(static_cast<double>(idx) * h - c) > tol)
        return -1;
    return static_cast<int>(idx);
}

TabulatedMesh tabulate_potential(const PotentialSpec& spec, const GridSpec& grid) {
    TabulatedMesh mesh;
    mesh.grid = grid;
    mesh.values.resize(grid.K + 1, grid.J + 1);

    if (const auto* bar = std::get_if<RectangularBarrier>(&spec)) {
        const int ja = mesh_node_index(bar->a, grid.h_x, grid.J);
        const int jb = mesh_node_index(bar->b, grid.h_x, grid.J);
        const int kc = mesh_node_index(bar->c, grid.h_y, grid.K);
        const int kd = mesh_node_index(bar->d, grid.h_y, grid.K);
        if (ja >= 0 && jb >= 0 && kc >= 0 && kd >= 0) {
            // Edges on the mesh: classify nodes by index so the edge nodes
            // sit on the topological boundary (outside the open rectangle).
            for (int j = 0; j <= grid.J; ++j)
                for (int k = 0; k <= grid.K; ++k)
                    mesh.values(k, j) =
                        (ja < j && j < jb && kc < k && k < kd) ? bar->Q : 0.0;
            return mesh;
        }
    }
    for (int j = 0; j <= grid.J; ++j)
        for (int k = 0; k <= grid.K; ++k)
            mesh.values(k, j) = eval_potential(spec, grid.x(j), grid.y(k));
    return mesh;
}

TabulatedMesh averaged_mesh_potential(const RectangularBarrier& bar, const GridSpec& grid) {
    const int ja = mesh_node_index(bar.a, grid.h_x, grid.J);
    const int jb = mesh_node_index(bar.b, grid.h_x, grid.J);
    const int kc = mesh_node_index(bar.c, grid.h_y, grid.K);
    const int kd = mesh_node_index(bar.d, grid.h_y, grid.K);
    if (ja < 0 || jb < 0)
        throw ConfigError("averaged_mesh_potential: barrier edges a, b must be x-mesh nodes; "
                          "choose J so that a/h_x and b/h_x are integers");
    if (kc < 0 || kd < 0)
        throw ConfigError("averaged_mesh_potential: barrier edges c, d must be y-mesh nodes; "
                          "choose K so that c/h_y and d/h_y are integers");

    TabulatedMesh mesh;
    mesh.grid = grid;
    mesh.values.resize(grid.K + 1, grid.J + 1);
    for (int j = 0; j <= grid.J; ++j) {
        const bool on_x_edge = (j == ja || j == jb);
        const bool in_x = (ja < j && j < jb);
        for (int k = 0; k <= grid.K; ++k) {
            const bool on_y_edge = (k == kc || k == kd);
            const bool in_y = (kc < k && k < kd);
            double v = 0.0;
            if (in_x && in_y)
                v = bar.Q;
            else if ((on_x_edge && in_y) || (on_y_edge && in_x))
                v = bar.Q / 2.0;
            else if (on_x_edge && on_y_edge)
                v = bar.Q / 4.0;
            mesh.values(k, j) = v;
        }
    }
    return mesh;
}

WaveField gaussian_packet(const PacketParams& packet, const GridSpec& grid,
                          bool zero_left_column) {
    if (!(packet.alpha > 0.0))
        throw ConfigError("gaussian_packet: alpha must be > 0");
    if (packet.x0 < 0.0 || packet.x0 > grid.X || packet.y0 < 0.0 || packet.y0 > grid.Y)
        throw ConfigError("gaussian_packet: packet center outside the computational rectangle");

    WaveField f = zero_field(grid);
    for (int j = zero_left_column ? 1 : 0; j <= grid.J; ++j) {
        const double dx = grid.x(j) - packet.x0;
        for (int k = 1; k <= grid.K - 1; ++k) {
            const double dy = grid.y(k) - packet.y0;
            const double env = -(dx * dx + dy * dy) / (4.0 * packet.alpha);
            f.values(k, j) = std::exp(Complex(env, packet.k * dx));
        }
    }
    return f;
}

bool uniqueness_condition_ok(double L, double alpha, double tau, double h_x, double hbar) {
    return L * tau * std::pow(h_x, alpha) < 8.0 * hbar;
}

} // namespace qstrip
