#include "qstrip/runner.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qstrip/errors.hpp"

namespace qstrip {

void apply_thread_count(int threads) {
#ifdef _OPENMP
    if (threads <= 0)
        threads = omp_get_num_procs();
    omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

Simulation make_simulation(const RunConfig& cfg) {
    validate_config(cfg);
    const GridSpec grid = config_grid(cfg);
    StepperSetup setup = make_stepper_setup(grid, cfg.physics, cfg.geometry);
    const TabulatedMesh potential = config_potential_mesh(cfg, grid);
    WaveField psi0 =
        gaussian_packet(cfg.packet, grid, cfg.geometry == Geometry::SemiInfinite);
    Simulation::Options opts;
    opts.transform = cfg.transform;
    opts.debug_checks = cfg.debug_checks;
    return Simulation(std::move(setup), potential.values, std::move(psi0), opts);
}

RunReport run(const RunConfig& cfg) {
    validate_config(cfg);
    apply_thread_count(cfg.threads);

    RunReport report;
    report.config = cfg;

    std::vector<int> snaps = cfg.snapshot_levels;
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    const auto want_snapshot = [&](int m) {
        return std::binary_search(snaps.begin(), snaps.end(), m);
    };

    if (cfg.M == 0) {
        const GridSpec grid = config_grid(cfg);
        WaveField psi0 =
            gaussian_packet(cfg.packet, grid, cfg.geometry == Geometry::SemiInfinite);
        report.l2_series.push_back(norm_l2(psi0));
        report.c_series.push_back(norm_c(psi0));
        if (want_snapshot(0))
            report.snapshots.emplace(0, psi0);
        return report;
    }

    Simulation sim = make_simulation(cfg);
    report.initial_boundary_tail = sim.initial_boundary_tail();
    report.warnings = sim.warnings();
    report.l2_series.reserve(cfg.M + 1);
    report.c_series.reserve(cfg.M + 1);
    report.l2_series.push_back(norm_l2(sim.field()));
    report.c_series.push_back(norm_c(sim.field()));
    if (want_snapshot(0))
        report.snapshots.emplace(0, sim.field());

    for (int m = 1; m <= cfg.M; ++m) {
        sim.step();
        report.l2_series.push_back(norm_l2(sim.field()));
        report.c_series.push_back(norm_c(sim.field()));
        if (want_snapshot(m))
            report.snapshots.emplace(m, sim.field());
    }
    report.timings = sim.timings();
    return report;
}

} // namespace qstrip
