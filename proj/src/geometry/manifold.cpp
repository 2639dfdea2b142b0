#include <cmath>

#include "geokalman/geometry.hpp"

namespace geokalman {

double Manifold::inner(const Point&, const Tangent& x, const Tangent& y) const {
  return x.dot(y);
}

double Manifold::volume_density(const Point& p, const Point& q) const {
  return volume_density_fd(*this, p, q);
}

Point Manifold::compose(const Point&, const Point&) const {
  throw UnsupportedOperation(name() + " has no group structure");
}

Point Manifold::inverse(const Point&) const {
  throw UnsupportedOperation(name() + " has no group structure");
}

Point Manifold::identity() const {
  throw UnsupportedOperation(name() + " has no group structure");
}

Eigen::VectorXd Manifold::embed(const Point& p) const { return p; }

Eigen::VectorXd Manifold::tangent_to_ambient(const Point&, const Tangent&) const {
  throw UnsupportedOperation(name() + " has no metric embedding");
}

Tangent Manifold::ambient_to_tangent(const Point&, const Eigen::VectorXd&) const {
  throw UnsupportedOperation(name() + " has no metric embedding");
}

double distance(const Manifold& m, const Point& p, const Point& q) {
  const Tangent x = m.log(p, q);
  return std::sqrt(m.inner(p, x, x));
}

Tangent random_tangent(const Manifold& m, const Point& p, Rng& rng, double scale) {
  std::normal_distribution<double> normal;
  const Basis b = m.basis_at(p);
  Eigen::VectorXd c(b.dim());
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = scale * normal(rng);
  return from_coeffs(b, c);
}

double volume_density_fd(const Manifold& m, const Point& p, const Point& q, double step) {
  const Basis bp = m.basis_at(p);
  const Basis bq = m.basis_at(q);
  const Eigen::VectorXd v = to_coeffs(bp, m.log(p, q));
  const int d = bp.dim();
  Eigen::MatrixXd jac(d, d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd vp = v, vm = v;
    vp[j] += step;
    vm[j] -= step;
    const Eigen::VectorXd cp = to_coeffs(bq, m.log(q, m.exp(p, from_coeffs(bp, vp))));
    const Eigen::VectorXd cm = to_coeffs(bq, m.log(q, m.exp(p, from_coeffs(bp, vm))));
    jac.col(j) = (cp - cm) / (2.0 * step);
  }
  return std::abs(jac.determinant());
}

}  // namespace geokalman
