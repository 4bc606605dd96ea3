#pragma once

#include <optional>
#include <vector>

#include "qstrip/runner.hpp"

namespace qstrip {

/// Difference of two nested-mesh solutions at one common time level.
struct LevelDiff {
    int level = 0; // coarse-run level
    double t = 0.0;
    double e_c = 0.0;
    double e_l2 = 0.0;
    // relative values divide by the restricted reference norm at the same
    // level; absent when that norm is below 1e-12 (wave has left the domain)
    std::optional<double> rel_c;
    std::optional<double> rel_l2;
};

struct DiffSeries {
    std::vector<LevelDiff> levels;
    double max_e_c = 0.0;
    double max_e_l2 = 0.0;
};

/// C and L2 norms of fine restricted to coarse minus coarse, plus the
/// restricted reference norms used for the relative forms.
struct FieldDiff {
    double e_c = 0.0, e_l2 = 0.0;
    double ref_c = 0.0, ref_l2 = 0.0;
};
FieldDiff field_difference(const WaveField& fine, const WaveField& coarse);

LevelDiff level_diff_from_fields(int level, double t, const WaveField& fine,
                                 const WaveField& coarse);

/// Pairwise comparison of two finished runs on nested meshes over their
/// common snapshot levels. Either argument may be the finer one.
DiffSeries difference_norms(const RunReport& a, const RunReport& b);

/// r_{alpha,ell} = (2^{(ell+1) alpha} - 1) / (2^{ell alpha} - 1), the
/// expected refinement ratio of an order-alpha main error term.
double reference_ratio(double order, int ell);

struct RatioRow {
    char direction = 'x';
    int ell = 0; // refinement exponent of this row's coarse run
    int J = 0, K = 0, M = 0;
    double e_c = 0.0, e_l2 = 0.0; // rho_ell in both norms
    std::optional<double> r_c, r_l2; // rho_{ell+1} / rho_ell
    std::optional<int> nearest_order_c; // candidate in 1..4 closest to r_c
};

struct RatioTable {
    char direction = 'x';
    std::vector<RatioRow> rows; // ordered coarsest (ell_max) to finest (1)
};

/// Runs the reference config and its 2^ell coarsenings (ell = 1..ell_max)
/// in the given direction, co-advancing all simulations level by level and
/// accumulating difference norms over every common time level. pair_series,
/// when non-null, receives the per-level series per ell (index ell-1).
RatioTable refinement_study(const RunConfig& reference, char direction, int ell_max,
                            std::vector<DiffSeries>* pair_series = nullptr);

/// Table assembly from precomputed difference series (the cache path);
/// byte-identical to the table built in a fresh session.
RatioTable ratio_table_from_series(const RunConfig& reference, char direction,
                                   const std::vector<DiffSeries>& series);

} // namespace qstrip
