#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qstrip/grid.hpp"
#include "qstrip/types.hpp"

namespace qstrip {

/// Eigenvalues of -d_y dbar_y (lambda_q) and of the Numerov average s_Ny
/// (sigma_q) on the y-mesh, for q = 1..K-1 (index q-1).
struct ModeEigenvalues {
    RVector lambda;
    RVector sigma;
};

ModeEigenvalues eigenvalues(const GridSpec& grid);

/// Kernel weight sigma_q * [1 + (h_x h_y lambda_q / (12 sigma_q))^2],
/// positive for every mode.
double sigma_weight(const GridSpec& grid, const ModeEigenvalues& eigs, int q);

enum class TransformPath { Fft, Direct };

/// Per-thread scratch for DstPlan calls.
struct DstWorkspace {
    std::vector<Complex> buf;
};

/// Discrete Fourier sine transform over a y-line with homogeneous
/// endpoints. Forward: Z^(q) = (2/K) sum_k Z_k sin(pi q k / K);
/// inverse: Z_k = sum_q Z^(q) sin(pi q k / K). The FFT path embeds the
/// line into an odd extension of length 2K and needs K = 2^p; the direct
/// path multiplies by the precomputed sine matrix.
class DstPlan {
public:
    DstPlan(int K, TransformPath path);

    int size() const { return K_; }
    TransformPath path() const { return path_; }

    /// line has K+1 entries with line[0] = line[K] = 0 (checked to 1e-12);
    /// coeffs receives K-1 entries.
    void forward(const Complex* line, Complex* coeffs, DstWorkspace& ws) const;

    /// coeffs has K-1 entries; line receives K+1 entries with exact zero
    /// endpoints.
    void inverse(const Complex* coeffs, Complex* line, DstWorkspace& ws) const;

    CVector forward(const CVector& line) const;
    CVector inverse(const CVector& coeffs) const;

private:
    void sine_sums(const Complex* in, Complex* out, Complex scale, DstWorkspace& ws) const;

    int K_;
    TransformPath path_;
    std::vector<Complex> twiddle_; // exp(-2 pi i k / (2K)), k = 0..K-1
    std::vector<int> bitrev_;      // bit-reversal permutation of 0..2K-1
    Eigen::MatrixXcd sine_matrix_; // direct path: S_{q,k} = sin(pi q k / K)
};

} // namespace qstrip
