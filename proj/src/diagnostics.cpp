#include "qstrip/diagnostics.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "qstrip/errors.hpp"

namespace qstrip {

namespace {

constexpr double kRelFloor = 1e-12;

struct NestingFactors {
    int fx = 1, fy = 1;
};

NestingFactors nesting_factors(const GridSpec& fine, const GridSpec& coarse) {
    if (fine.X != coarse.X || fine.Y != coarse.Y)
        throw ConfigError("field_difference: domains differ");
    if (fine.J % coarse.J != 0 || fine.K % coarse.K != 0)
        throw ConfigError("field_difference: meshes are not nested");
    NestingFactors f;
    f.fx = fine.J / coarse.J;
    f.fy = fine.K / coarse.K;
    const auto pow2 = [](int v) { return (v & (v - 1)) == 0; };
    if (!pow2(f.fx) || !pow2(f.fy))
        throw ConfigError("field_difference: refinement factors must be powers of two");
    return f;
}

} // namespace

FieldDiff field_difference(const WaveField& fine, const WaveField& coarse) {
    const NestingFactors f = nesting_factors(fine.grid, coarse.grid);
    const WaveField restricted =
        (f.fx == 1 && f.fy == 1) ? fine : restrict_field(fine, f.fx, f.fy);

    WaveField diff = restricted;
    diff.values -= coarse.values;

    FieldDiff out;
    out.e_c = norm_c(diff);
    out.e_l2 = norm_l2(diff);
    out.ref_c = norm_c(restricted);
    out.ref_l2 = norm_l2(restricted);
    return out;
}

LevelDiff level_diff_from_fields(int level, double t, const WaveField& fine,
                                 const WaveField& coarse) {
    const FieldDiff fd = field_difference(fine, coarse);
    LevelDiff d;
    d.level = level;
    d.t = t;
    d.e_c = fd.e_c;
    d.e_l2 = fd.e_l2;
    if (fd.ref_c >= kRelFloor)
        d.rel_c = fd.e_c / fd.ref_c;
    if (fd.ref_l2 >= kRelFloor)
        d.rel_l2 = fd.e_l2 / fd.ref_l2;
    return d;
}

DiffSeries difference_norms(const RunReport& a, const RunReport& b) {
    const bool a_fine = a.config.J * static_cast<long>(a.config.K) * a.config.M >=
                        b.config.J * static_cast<long>(b.config.K) * b.config.M;
    const RunReport& fine = a_fine ? a : b;
    const RunReport& coarse = a_fine ? b : a;
    if (fine.config.T != coarse.config.T)
        throw ConfigError("difference_norms: time horizons differ");
    if (coarse.config.M > 0) {
        if (fine.config.M % coarse.config.M != 0)
            throw ConfigError("difference_norms: time meshes are not nested");
    }
    const int stride = coarse.config.M > 0 ? fine.config.M / coarse.config.M : 1;

    DiffSeries series;
    for (const auto& [level, coarse_field] : coarse.snapshots) {
        const auto it = fine.snapshots.find(level * stride);
        if (it == fine.snapshots.end())
            continue;
        LevelDiff d = level_diff_from_fields(level, coarse.t_of(level), it->second, coarse_field);
        series.max_e_c = std::max(series.max_e_c, d.e_c);
        series.max_e_l2 = std::max(series.max_e_l2, d.e_l2);
        series.levels.push_back(std::move(d));
    }
    if (series.levels.empty())
        throw ConfigError("difference_norms: no common snapshot levels");
    return series;
}

double reference_ratio(double order, int ell) {
    if (!(order > 0.0) || ell < 1)
        throw ConfigError("reference_ratio: need order > 0 and ell >= 1");
    return (std::pow(2.0, (ell + 1) * order) - 1.0) / (std::pow(2.0, ell * order) - 1.0);
}

RatioTable ratio_table_from_series(const RunConfig& reference, char direction,
                                   const std::vector<DiffSeries>& series) {
    const int ell_max = static_cast<int>(series.size());
    RatioTable table;
    table.direction = direction;
    for (int ell = ell_max; ell >= 1; --ell) {
        const DiffSeries& s = series[ell - 1];
        RatioRow row;
        row.direction = direction;
        row.ell = ell;
        const int div = 1 << ell;
        row.J = direction == 'x' ? reference.J / div : reference.J;
        row.K = direction == 'y' ? reference.K / div : reference.K;
        row.M = direction == 't' ? reference.M / div : reference.M;
        row.e_c = s.max_e_c;
        row.e_l2 = s.max_e_l2;
        if (ell < ell_max) {
            const DiffSeries& coarser = series[ell]; // index ell = series of ell+1
            if (s.max_e_c > 0.0)
                row.r_c = coarser.max_e_c / s.max_e_c;
            if (s.max_e_l2 > 0.0)
                row.r_l2 = coarser.max_e_l2 / s.max_e_l2;
            if (row.r_c) {
                int best = 1;
                double best_gap = std::abs(*row.r_c - reference_ratio(1, ell));
                for (int order = 2; order <= 4; ++order) {
                    const double gap = std::abs(*row.r_c - reference_ratio(order, ell));
                    if (gap < best_gap) {
                        best = order;
                        best_gap = gap;
                    }
                }
                row.nearest_order_c = best;
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

RatioTable refinement_study(const RunConfig& reference, char direction, int ell_max,
                            std::vector<DiffSeries>* pair_series) {
    if (direction != 'x' && direction != 'y' && direction != 't')
        throw ConfigError("refinement_study: direction must be one of x, y, t");
    if (ell_max < 1)
        throw ConfigError("refinement_study: ell_max must be >= 1");
    validate_config(reference);
    apply_thread_count(reference.threads);

    const int div_max = 1 << ell_max;
    const int ref_count = direction == 'x'   ? reference.J
                          : direction == 'y' ? reference.K
                                             : reference.M;
    if (ref_count % div_max != 0)
        throw ConfigError("refinement_study: reference " + std::string(1, direction) +
                          "-count " + std::to_string(ref_count) + " not divisible by 2^" +
                          std::to_string(ell_max));

    std::vector<RunConfig> coarse_cfgs;
    for (int ell = 1; ell <= ell_max; ++ell) {
        RunConfig cfg = reference;
        const int div = 1 << ell;
        if (direction == 'x')
            cfg.J = reference.J / div;
        else if (direction == 'y')
            cfg.K = reference.K / div;
        else
            cfg.M = reference.M / div;
        if (cfg.transform == TransformPath::Fft && (cfg.K & (cfg.K - 1)) != 0)
            cfg.transform = TransformPath::Direct;
        validate_config(cfg);
        coarse_cfgs.push_back(std::move(cfg));
    }

    Simulation ref_sim = make_simulation(reference);
    std::vector<std::unique_ptr<Simulation>> coarse_sims;
    for (const auto& cfg : coarse_cfgs)
        coarse_sims.push_back(std::make_unique<Simulation>(make_simulation(cfg)));

    std::vector<DiffSeries> series(ell_max);
    const auto compare = [&](int ell) {
        const Simulation& coarse = *coarse_sims[ell - 1];
        LevelDiff d = level_diff_from_fields(coarse.level(),
                                             coarse.level() * coarse.grid().tau,
                                             ref_sim.field(), coarse.field());
        DiffSeries& s = series[ell - 1];
        s.max_e_c = std::max(s.max_e_c, d.e_c);
        s.max_e_l2 = std::max(s.max_e_l2, d.e_l2);
        s.levels.push_back(std::move(d));
    };

    for (int ell = 1; ell <= ell_max; ++ell)
        compare(ell);
    for (int m = 1; m <= reference.M; ++m) {
        ref_sim.step();
        for (int ell = 1; ell <= ell_max; ++ell) {
            if (direction == 't') {
                if (m % (1 << ell) == 0) {
                    coarse_sims[ell - 1]->step();
                    compare(ell);
                }
            } else {
                coarse_sims[ell - 1]->step();
                compare(ell);
            }
        }
    }

    RatioTable table = ratio_table_from_series(reference, direction, series);
    if (pair_series)
        *pair_series = std::move(series);
    return table;
}

} // namespace qstrip
