#include "geokalman/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "geokalman/errors.hpp"

namespace geokalman {

Eigen::MatrixXd clamp_psd(const Eigen::MatrixXd& a, double floor) {
  const Eigen::MatrixXd sym = symmetrize(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw DegenerateCovariance("clamp_psd: eigendecomposition failed");
  }
  if (eig.eigenvalues().minCoeff() >= floor) return sym;
  const Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(floor);
  return symmetrize(eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose());
}

Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  const double scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
  const double tol = 1e-13 * scale;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot < -tol) {
      throw DegenerateCovariance("psd_cholesky: matrix is not positive semi-definite");
    }
    if (pivot <= tol) continue;
    const double root = std::sqrt(pivot);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / root;
    }
  }
  return l;
}

double asymmetry(const Eigen::MatrixXd& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace geokalman
