#pragma once

// Dynamic-size helpers shared by the SO(n) and SE(n) handles.

#include <Eigen/Dense>

#include "geokalman/geometry.hpp"

namespace geokalman::matrix_groups {

Eigen::MatrixXd skew_part(const Eigen::MatrixXd& a);

/// k-th element of the Frobenius-orthonormal basis of so(n). For n = 3 this
/// is hat(e_k) / sqrt(2).
Eigen::MatrixXd so_basis_element(int n, int k);

Eigen::MatrixXd so_exp(const Eigen::MatrixXd& x);
/// Throws OutOfDomain for rotations by pi (n = 2, 3).
Eigen::MatrixXd so_log(const Eigen::MatrixXd& r);

/// Haar-distributed rotation via QR of a Gaussian matrix.
Eigen::MatrixXd random_rotation(int n, Rng& rng);
double rotation_residual(const Eigen::MatrixXd& r);

}  // namespace geokalman::matrix_groups
