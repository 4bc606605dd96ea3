#pragma once

#include <string>
#include <vector>

#include "qstrip/physics.hpp"
#include "qstrip/sine_transform.hpp"
#include "qstrip/stepper.hpp"

namespace qstrip {

enum class PotentialKind { Zero, PoschlTeller, Rectangular };

/// Validated description of one run: mesh, physics, initial packet,
/// barrier, geometry and output behavior.
struct RunConfig {
    double X = 0.0, Y = 0.0, T = 0.0;
    int J = 0, K = 0, M = 0;

    PhysicsParams physics;
    PacketParams packet;

    PotentialKind potential_kind = PotentialKind::Zero;
    PoschlTellerBarrier pt;
    RectangularBarrier rect;
    bool averaged = true; // rectangular barrier: use the mesh-averaged values

    Geometry geometry = Geometry::SemiInfinite;
    TransformPath transform = TransformPath::Fft;
    int threads = 0; // 0 = hardware parallelism
    bool debug_checks = false;
    std::vector<int> snapshot_levels;
    std::string out_dir;

    bool operator==(const RunConfig&) const = default;
};

/// Directions and depth of a refinement study around a reference config.
struct StudySpec {
    std::vector<char> directions; // subset of {'x','y','t'}
    int ell_max = 1;
};

/// Parses `key = value` lines with `#` comments and `[section]` headers.
/// Unknown keys, type mismatches and invariant violations throw a
/// ConfigError naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Same format plus a [study] section (directions, ell_max).
std::pair<RunConfig, StudySpec> parse_study_config(const std::string& text);
std::pair<RunConfig, StudySpec> parse_study_config_file(const std::string& path);

/// Canonical text form; parse(emit(config)) == config.
std::string emit_config(const RunConfig& cfg);

void validate_config(const RunConfig& cfg);

/// Mesh-sampled potential of the config (averaged mesh values when
/// requested for a rectangular barrier).
TabulatedMesh config_potential_mesh(const RunConfig& cfg, const GridSpec& grid);

GridSpec config_grid(const RunConfig& cfg);

} // namespace qstrip
