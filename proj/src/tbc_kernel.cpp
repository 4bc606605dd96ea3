#include "qstrip/tbc_kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qstrip/errors.hpp"

namespace qstrip {

double arg_in_0_2pi(Complex z) {
    if (z == Complex(0.0, 0.0))
        throw NumericsError("arg_in_0_2pi: zero argument");
    double a = std::arg(z); // principal value in (-pi, pi]
    if (a == 0.0)
        throw NumericsError("arg_in_0_2pi: argument on the positive real axis; "
                            "the branch in (0, 2pi) is ambiguous");
    if (a < 0.0)
        a += 2.0 * std::numbers::pi;
    return a;
}

ModeCoefficients mode_coefficients(int q, const GridSpec& grid, const PhysicsParams& physics,
                                   const ModeEigenvalues& eigs) {
    if (q < 1 || q > grid.K - 1)
        throw ConfigError("mode_coefficients: q=" + std::to_string(q) + " out of 1.." +
                          std::to_string(grid.K - 1));
    const auto fail = [&](const std::string& what) {
        throw NumericsError("mode_coefficients: q=" + std::to_string(q) + ": " + what);
    };

    ModeCoefficients co;
    co.q = q;
    co.lambda_q = eigs.lambda(q - 1);
    co.sigma_q = eigs.sigma(q - 1);
    if (!(co.sigma_q > 2.0 / 3.0 && co.sigma_q < 1.0))
        fail("sigma_q=" + std::to_string(co.sigma_q) + " outside (2/3, 1)");

    const double ratio = grid.h_x * grid.h_y * co.lambda_q / (12.0 * co.sigma_q);
    co.c_hbar_q = physics.c_hbar * (1.0 + ratio * ratio);
    co.theta_q = 1.0 / (12.0 * co.sigma_q);
    if (!(co.theta_q > 1.0 / 12.0 && co.theta_q < 1.0 / 8.0))
        fail("theta_q=" + std::to_string(co.theta_q) + " outside (1/12, 1/8)");
    co.V_inf_q = physics.V_inf + physics.c_hbar * co.lambda_q / co.sigma_q;

    co.a_q = Complex(co.V_inf_q / (2.0 * co.c_hbar_q), physics.hbar / (grid.tau * co.c_hbar_q));
    const double w = (1.0 - 4.0 * co.theta_q) * grid.h_x * grid.h_x;
    co.alpha_q = 2.0 * co.a_q + w * co.a_q * co.a_q;
    co.beta_q = 2.0 * co.a_q.real() + w * std::norm(co.a_q);
    if (co.alpha_q == Complex(0.0, 0.0))
        fail("alpha_q = 0");

    co.arg_alpha_q = arg_in_0_2pi(co.alpha_q);
    const double mod = std::abs(co.alpha_q);
    co.c1_q = -0.5 * std::sqrt(mod) *
              std::exp(Complex(0.0, -0.5 * co.arg_alpha_q));
    co.kappa_q = -std::exp(Complex(0.0, co.arg_alpha_q));
    co.mu_q = co.beta_q / mod;
    if (!(std::abs(co.mu_q) < 1.0))
        fail("mu_q=" + std::to_string(co.mu_q) + " outside (-1, 1)");
    if (std::abs(std::abs(co.kappa_q) - 1.0) > 1e-14)
        fail("kappa_q not unimodular");
    return co;
}

KernelSeries::KernelSeries(const ModeCoefficients& co)
    : kappa_mu_(co.kappa_q * co.mu_q), kappa_sq_(co.kappa_q * co.kappa_q) {
    values_.reserve(64);
    values_.push_back(co.c1_q);
    values_.push_back(-co.c1_q * kappa_mu_);
    if (values_[0].imag() < 0.0)
        throw NumericsError("KernelSeries: Im R_q^0 < 0 for q=" + std::to_string(co.q));
}

KernelSeries::KernelSeries(std::vector<Complex> values)
    : kappa_mu_(0.0), kappa_sq_(0.0), extendable_(false), values_(std::move(values)) {
    if (values_.empty())
        throw ConfigError("KernelSeries: need at least one value");
}

void KernelSeries::extend(int up_to_m) {
    if (!extendable_ && up_to_m > max_level())
        throw NumericsError("KernelSeries: fixed-value series cannot be extended");
    for (int m = static_cast<int>(values_.size()); m <= up_to_m; ++m) {
        const double dm = m;
        values_.push_back((2.0 * dm - 3.0) / dm * kappa_mu_ * values_[m - 1] -
                          (dm - 3.0) / dm * kappa_sq_ * values_[m - 2]);
    }
}

TbcState TbcState::make(BoundarySide side, const std::vector<ModeCoefficients>& coeffs) {
    TbcState st;
    st.side = side;
    st.kernels.reserve(coeffs.size());
    for (const auto& co : coeffs)
        st.kernels.emplace_back(co);
    st.history.resize(coeffs.size());
    return st;
}

void kernel_extend(TbcState& state, int q, int up_to_m) {
    state.kernels[q - 1].extend(up_to_m);
}

Complex convolve_history(const TbcState& state, int q) {
    const auto& hist = state.history[q - 1];
    const auto& kernel = state.kernels[q - 1];
    const int m = static_cast<int>(hist.size());
    if (kernel.max_level() < m)
        throw NumericsError("convolve_history: kernel for q=" + std::to_string(q) +
                            " not extended to level " + std::to_string(m));
    Complex sum(0.0, 0.0);
    for (int p = 1; p <= m; ++p)
        sum += kernel[p] * hist[m - p];
    return sum;
}

} // namespace qstrip
