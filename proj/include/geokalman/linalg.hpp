#pragma once

#include <Eigen/Dense>

namespace geokalman {

inline constexpr double kEigenvalueFloor = 1e-12;

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
symmetrize(const Eigen::MatrixBase<Derived>& a) {
  return (a + a.transpose()) / typename Derived::Scalar(2);
}

/// Symmetrizes and raises eigenvalues below `floor` to `floor`. A matrix that
/// is already symmetric with every eigenvalue >= floor is returned bit-for-bit.
Eigen::MatrixXd clamp_psd(const Eigen::MatrixXd& a, double floor = kEigenvalueFloor);

/// Lower-triangular L with L L^T = a for positive semi-definite a. Pivots that
/// are zero up to rounding give zero columns; a clearly negative pivot throws
/// DegenerateCovariance.
Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& a);

/// Largest |a - a^T| entry.
double asymmetry(const Eigen::MatrixXd& a);

}  // namespace geokalman
