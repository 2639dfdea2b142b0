#include "geokalman/errors.hpp"
#include "geokalman/filters.hpp"
#include "geokalman/linalg.hpp"

namespace geokalman {
namespace {

Eigen::MatrixXd transport_in_bases(const Manifold& m, const Point& from, const Tangent& dir,
                                   const Basis& bto, const Eigen::MatrixXd& cov) {
  const Basis bfrom = m.basis_at(from);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(cov));
  if (eig.info() != Eigen::Success) {
    throw DegenerateCovariance("transport_covariance: eigendecomposition failed");
  }
  const int d = bfrom.dim();
  Eigen::MatrixXd moved(d, d);
  for (int u = 0; u < d; ++u) {
    const Tangent y = from_coeffs(bfrom, eig.eigenvectors().col(u));
    moved.col(u) = to_coeffs(bto, m.parallel_transport(from, dir, y));
  }
  return symmetrize(moved * eig.eigenvalues().asDiagonal() * moved.transpose());
}

}  // namespace

Eigen::MatrixXd transport_covariance_along(const Manifold& m, const Point& from,
                                           const Tangent& dir, const Eigen::MatrixXd& cov) {
  return transport_in_bases(m, from, dir, m.basis_at(m.exp(from, dir)), cov);
}

Eigen::MatrixXd transport_covariance(const Manifold& m, const Point& from, const Point& to,
                                     const Eigen::MatrixXd& cov) {
  return transport_in_bases(m, from, m.log(from, to), m.basis_at(to), cov);
}

}  // namespace geokalman
