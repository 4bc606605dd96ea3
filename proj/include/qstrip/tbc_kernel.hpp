#pragma once

#include <vector>

#include "qstrip/grid.hpp"
#include "qstrip/physics.hpp"
#include "qstrip/sine_transform.hpp"
#include "qstrip/types.hpp"

namespace qstrip {

/// Per-mode scalars of the one-dimensional boundary problem. Validated
/// ranges at construction: sigma_q in (2/3,1), theta_q in (1/12,1/8),
/// mu_q in (-1,1), |kappa_q| = 1, alpha_q != 0 with arg alpha_q in (0,2pi).
struct ModeCoefficients {
    int q = 0;
    double lambda_q = 0.0;
    double sigma_q = 0.0;
    double c_hbar_q = 0.0; // modified diffusion coefficient
    double theta_q = 0.0;  // mode-dependent average parameter
    double V_inf_q = 0.0;  // modified asymptotic potential
    Complex a_q;
    Complex alpha_q;
    double arg_alpha_q = 0.0;
    double beta_q = 0.0;
    Complex c1_q;
    Complex kappa_q; // unimodular
    double mu_q = 0.0;
};

ModeCoefficients mode_coefficients(int q, const GridSpec& grid, const PhysicsParams& physics,
                                   const ModeEigenvalues& eigs);

/// arg z shifted to (0, 2pi); errors out on the positive real axis where
/// the branch is ambiguous.
double arg_in_0_2pi(Complex z);

/// Convolution kernel R_q^m generated by
///   R^0 = c_1q,  R^1 = -c_1q kappa_q mu_q,
///   R^m = ((2m-3)/m) kappa_q mu_q R^{m-1} - ((m-3)/m) kappa_q^2 R^{m-2}.
class KernelSeries {
public:
    explicit KernelSeries(const ModeCoefficients& co);

    /// Fixed table of explicit values (tests, dumps); cannot be extended.
    explicit KernelSeries(std::vector<Complex> values);

    /// Idempotent: grows the table so R^0..R^{up_to_m} are available.
    void extend(int up_to_m);

    Complex operator[](int m) const { return values_[m]; }
    int max_level() const { return static_cast<int>(values_.size()) - 1; }

private:
    Complex kappa_mu_;
    Complex kappa_sq_;
    bool extendable_ = true;
    std::vector<Complex> values_;
};

enum class BoundarySide { Left, Right };

/// Kernel tables and boundary-trace history for one artificial boundary.
/// history[q-1][n] is the Fourier-space trace of the solution at the
/// boundary column on time level n; at level m it holds entries 0..m-1.
struct TbcState {
    BoundarySide side = BoundarySide::Right;
    std::vector<KernelSeries> kernels;           // q = 1..K-1
    std::vector<std::vector<Complex>> history;   // [q-1][level]

    static TbcState make(BoundarySide side, const std::vector<ModeCoefficients>& coeffs);
};

void kernel_extend(TbcState& state, int q, int up_to_m);

/// sum_{p=1..m} R_q^p * trace^{m-p} where m is the current history length.
/// The p = 0 term multiplies the still-unknown current trace and is folded
/// into the boundary matrix row by the stepper instead.
Complex convolve_history(const TbcState& state, int q);

} // namespace qstrip
