#include "qstrip/sine_transform.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qstrip/errors.hpp"

namespace qstrip {

namespace {

constexpr double kEndpointTol = 1e-12;

void fft_inplace(Complex* a, int n, const std::vector<Complex>& twiddle,
                 const std::vector<int>& bitrev) {
    for (int i = 0; i < n; ++i) {
        const int r = bitrev[i];
        if (i < r)
            std::swap(a[i], a[r]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const int stride = n / len;
        const int half = len / 2;
        for (int base = 0; base < n; base += len) {
            for (int k = 0; k < half; ++k) {
                const Complex w = twiddle[k * stride];
                const Complex u = a[base + k];
                const Complex v = a[base + k + half] * w;
                a[base + k] = u + v;
                a[base + k + half] = u - v;
            }
        }
    }
}

} // namespace

ModeEigenvalues eigenvalues(const GridSpec& grid) {
    const int K = grid.K;
    ModeEigenvalues e;
    e.lambda.resize(K - 1);
    e.sigma.resize(K - 1);
    for (int q = 1; q <= K - 1; ++q) {
        const double s = std::sin(std::numbers::pi * q / (2.0 * K));
        const double t = (2.0 / grid.h_y) * s;
        e.lambda(q - 1) = t * t;
        e.sigma(q - 1) = 1.0 - s * s / 3.0;
    }
    return e;
}

double sigma_weight(const GridSpec& grid, const ModeEigenvalues& eigs, int q) {
    const double sigma = eigs.sigma(q - 1);
    const double r = grid.h_x * grid.h_y * eigs.lambda(q - 1) / (12.0 * sigma);
    return sigma * (1.0 + r * r);
}

DstPlan::DstPlan(int K, TransformPath path) : K_(K), path_(path) {
    if (K < 2)
        throw ConfigError("DstPlan: need K >= 2");
    if (path == TransformPath::Fft) {
        if ((K & (K - 1)) != 0)
            throw ConfigError("DstPlan: K=" + std::to_string(K) +
                              " is not a power of two; the FFT transform path requires "
                              "K = 2^p — select the direct transform fallback");
        const int n = 2 * K;
        twiddle_.resize(K);
        for (int k = 0; k < K; ++k) {
            const double phi = -2.0 * std::numbers::pi * k / n;
            twiddle_[k] = Complex(std::cos(phi), std::sin(phi));
        }
        bitrev_.assign(n, 0);
        int bits = 0;
        while ((1 << bits) < n)
            ++bits;
        for (int i = 1; i < n; ++i)
            bitrev_[i] = (bitrev_[i >> 1] >> 1) | ((i & 1) << (bits - 1));
    } else {
        sine_matrix_.resize(K - 1, K - 1);
        for (int q = 1; q <= K - 1; ++q)
            for (int k = 1; k <= K - 1; ++k)
                sine_matrix_(q - 1, k - 1) =
                    std::sin(std::numbers::pi * static_cast<double>(q) * k / K);
    }
}

void DstPlan::sine_sums(const Complex* in, Complex* out, Complex scale,
                        DstWorkspace& ws) const {
    // out[q-1] = scale * (-2i) * sum_{k=1..K-1} in[k-1] sin(pi q k / K)
    // via the odd extension of length 2K; callers pass scale = i/2 times
    // their normalization so the sine sum comes out directly.
    const int n = 2 * K_;
    if (ws.buf.size() < static_cast<size_t>(n))
        ws.buf.resize(n);
    Complex* ext = ws.buf.data();
    ext[0] = Complex(0.0, 0.0);
    ext[K_] = Complex(0.0, 0.0);
    for (int k = 1; k <= K_ - 1; ++k) {
        ext[k] = in[k - 1];
        ext[n - k] = -in[k - 1];
    }
    fft_inplace(ext, n, twiddle_, bitrev_);
    for (int q = 1; q <= K_ - 1; ++q)
        out[q - 1] = scale * ext[q];
}

void DstPlan::forward(const Complex* line, Complex* coeffs, DstWorkspace& ws) const {
    if (std::abs(line[0]) > kEndpointTol || std::abs(line[K_]) > kEndpointTol)
        throw NumericsError("dst_forward: nonzero line endpoints (|" +
                            std::to_string(std::abs(line[0])) + "|, |" +
                            std::to_string(std::abs(line[K_])) +
                            "|) — boundary condition violated upstream");
    if (path_ == TransformPath::Fft) {
        // forward scale: (2/K) * (i/2) = i/K
        sine_sums(line + 1, coeffs, Complex(0.0, 1.0 / K_), ws);
    } else {
        Eigen::Map<const CVector> z(line + 1, K_ - 1);
        Eigen::Map<CVector> c(coeffs, K_ - 1);
        c = (2.0 / K_) * (sine_matrix_ * z);
    }
}

void DstPlan::inverse(const Complex* coeffs, Complex* line, DstWorkspace& ws) const {
    if (path_ == TransformPath::Fft) {
        sine_sums(coeffs, line + 1, Complex(0.0, 0.5), ws);
    } else {
        Eigen::Map<const CVector> c(coeffs, K_ - 1);
        Eigen::Map<CVector> z(line + 1, K_ - 1);
        z = sine_matrix_ * c;
    }
    line[0] = Complex(0.0, 0.0);
    line[K_] = Complex(0.0, 0.0);
}

CVector DstPlan::forward(const CVector& line) const {
    if (line.size() != K_ + 1)
        throw ConfigError("dst_forward: line must have K+1 entries");
    DstWorkspace ws;
    CVector coeffs(K_ - 1);
    forward(line.data(), coeffs.data(), ws);
    return coeffs;
}

CVector DstPlan::inverse(const CVector& coeffs) const {
    if (coeffs.size() != K_ - 1)
        throw ConfigError("dst_inverse: coeffs must have K-1 entries");
    DstWorkspace ws;
    CVector line(K_ + 1);
    inverse(coeffs.data(), line.data(), ws);
    return line;
}

} // namespace qstrip
