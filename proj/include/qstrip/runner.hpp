#pragma once

#include <map>
#include <string>
#include <vector>

#include "qstrip/config.hpp"
#include "qstrip/stepper.hpp"

namespace qstrip {

/// Everything a finished run reports: the config echo, per-level norm
/// series, requested snapshots and per-phase wall-clock timings.
struct RunReport {
    RunConfig config;
    std::vector<double> l2_series; // M+1 entries
    std::vector<double> c_series;  // M+1 entries
    std::map<int, WaveField> snapshots;
    PhaseTimings timings;
    double initial_boundary_tail = 0.0;
    std::vector<std::string> warnings;

    double t_of(int m) const { return m * (config.T / std::max(config.M, 1)); }
};

/// Builds the simulation a config describes: mesh potential, initial
/// packet, phase multiplier and boundary states.
Simulation make_simulation(const RunConfig& cfg);

/// Advances M levels recording norms at every level and fields at the
/// configured snapshot levels. Deterministic for a fixed config regardless
/// of thread count. M = 0 reports just the initial state.
RunReport run(const RunConfig& cfg);

/// Applies cfg.threads to the parallel runtime (0 = hardware parallelism).
void apply_thread_count(int threads);

} // namespace qstrip
