#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qstrip {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// 2D node arrays are stored with k (the y index) along rows and j (the x
// index) along columns, so a y-line at fixed j is a contiguous column.
using CField = Eigen::ArrayXXcd;
using RField = Eigen::ArrayXXd;

inline constexpr Complex kImag{0.0, 1.0};

} // namespace qstrip
