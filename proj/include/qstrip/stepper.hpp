#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qstrip/grid.hpp"
#include "qstrip/physics.hpp"
#include "qstrip/sine_transform.hpp"
#include "qstrip/tbc_kernel.hpp"
#include "qstrip/types.hpp"

namespace qstrip {

enum class Geometry { SemiInfinite, InfiniteStrip, ClosedBox };

/// Pointwise factor (1 - i (tau/4hbar) dV) / (1 + i (tau/4hbar) dV) of the
/// potential half-steps. Unimodular at every node; exactly 1 where dV = 0
/// and outside the phase-step domain of the chosen geometry.
struct PhaseMultiplier {
    CField values; // (K+1) x (J+1)
};

PhaseMultiplier make_phase_multiplier(const RField& delta_v, const GridSpec& grid,
                                      double tau, double hbar, Geometry geometry);

/// In-place pointwise product; preserves the modulus at every node.
void phase_halfstep(WaveField& field, const PhaseMultiplier& mult);

/// Everything about the problem that is constant over a run.
struct StepperSetup {
    GridSpec grid;
    PhysicsParams physics;
    Geometry geometry = Geometry::SemiInfinite;
    RVector vtilde;                       // auxiliary 1D potential per j, size J+1
    ModeEigenvalues eigs;
    std::vector<ModeCoefficients> coeffs; // q = 1..K-1
    // Modulus-of-continuity constants of a non-constant vtilde for the
    // uniqueness warning; L = 0 means constant.
    double vtilde_L = 0.0;
    double vtilde_holder = 1.0;
};

StepperSetup make_stepper_setup(const GridSpec& grid, const PhysicsParams& physics,
                                Geometry geometry, RVector vtilde = {});

/// Tridiagonal system in x for one mode. Unknowns are
/// j = j_begin..j_begin+n-1; lower[0] and upper[n-1] are unused/zero.
struct ModeSystem {
    int q = 0;
    int j_begin = 0;
    CVector lower, diag, upper, rhs;
};

/// Assembles the one-mode system at one time level. breve holds the Fourier
/// coefficients of the phase-multiplied field over j = 0..J; forcing (may be
/// null) the coefficients of F over the same range. The boundary rows come
/// from the geometry: Dirichlet or the convolution boundary condition with
/// the current kernel head folded onto the diagonal. Kernels of the supplied
/// boundary states must already be extended to the current level.
ModeSystem assemble_mode_system(const StepperSetup& setup, const ModeLine& breve,
                                const CVector* forcing, const TbcState* left,
                                const TbcState* right);

/// Thomas elimination without pivoting, with an infinity-norm residual check
/// (rel. 1e-12). level is diagnostic context for error messages.
CVector solve_tridiagonal(const ModeSystem& sys, int level = -1);

struct PhaseTimings {
    double explicit_steps = 0.0; // steps 1 and 5
    double forward_dst = 0.0;    // step 2
    double mode_solves = 0.0;    // step 3
    double inverse_dst = 0.0;    // step 4
};

/// One simulation advancing the splitting scheme level by level: explicit
/// phase half-step, forward sine transform, per-mode tridiagonal solves
/// with boundary conditions, inverse transform, final phase half-step.
class Simulation {
public:
    struct Options {
        TransformPath transform = TransformPath::Fft;
        bool debug_checks = false;       // per-level modulus-preservation assertion
        bool keep_intermediates = false; // retain breve/tilde fields per level
    };

    Simulation(StepperSetup setup, const RField& potential_mesh, WaveField psi0,
               Options opts, const WaveField* forcing = nullptr);

    void step();
    int level() const { return m_; }
    const GridSpec& grid() const { return setup_.grid; }
    const StepperSetup& setup() const { return setup_; }
    const WaveField& field() const { return psi_; }

    const WaveField& breve_field() const { return breve_; }
    const WaveField& tilde_field() const { return tilde_; }

    const TbcState* right_tbc() const { return right_ ? &*right_ : nullptr; }
    const TbcState* left_tbc() const { return left_ ? &*left_ : nullptr; }

    double max_phase_modulus_drift() const { return max_phase_drift_; }
    double initial_boundary_tail() const { return initial_tail_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    const PhaseTimings& timings() const { return timings_; }

private:
    void apply_phase();
    void forward_columns(const CField& src, CField& dst);
    void solve_modes();
    void inverse_columns();
    void validate_startup(const RField& potential_mesh);

    StepperSetup setup_;
    Options opts_;
    DstPlan plan_;
    PhaseMultiplier phase_;
    WaveField psi_;
    WaveField breve_, tilde_;
    CField bcoef_, tcoef_;          // (K-1) x (J+1) Fourier coefficients
    CField fcoef_;                  // forcing coefficients, empty when no forcing
    bool has_forcing_ = false;
    std::optional<TbcState> left_, right_;
    int unknown_begin_ = 1, unknown_end_ = 0;
    int m_ = 0;
    double max_phase_drift_ = 0.0;
    double initial_tail_ = 0.0;
    std::vector<std::string> warnings_;
    PhaseTimings timings_;
};

} // namespace qstrip
