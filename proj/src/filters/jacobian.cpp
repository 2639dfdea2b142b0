#include <algorithm>

#include "geokalman/filters.hpp"

namespace geokalman {

double default_jacobian_step(const Point& p) {
  const double scale = p.size() > 0 ? p.cwiseAbs().maxCoeff() : 0.0;
  return 1e-6 * std::max(1.0, scale);
}

Eigen::MatrixXd chart_jacobian(const Manifold& in, const Manifold& out, const PointMap& fn,
                               const Point& p, double step) {
  return chart_jacobian(in, out, fn, p, step, fn(p));
}

Eigen::MatrixXd chart_jacobian(const Manifold& in, const Manifold& out, const PointMap& fn,
                               const Point& p, double step, const Point& out_base) {
  if (step <= 0.0) throw std::invalid_argument("chart_jacobian: step must be positive");
  const Basis bin = in.basis_at(p);
  const Basis bout = out.basis_at(out_base);
  const auto chart = [&](const Point& q) { return to_coeffs(bout, out.log(out_base, q)); };

  Eigen::MatrixXd jac(bout.dim(), bin.dim());
  for (int j = 0; j < bin.dim(); ++j) {
    const Tangent e = step * bin.vectors.col(j);
    jac.col(j) = (chart(fn(in.exp(p, e))) - chart(fn(in.exp(p, -e)))) / (2.0 * step);
  }
  return jac;
}

Eigen::MatrixXd left_jacobian(const Manifold& in, const Manifold& out, const PointMap& fn,
                              const Point& p, double step) {
  const Point fp_inv = out.inverse(fn(p));
  const PointMap g = [&](const Point& q) { return out.compose(fn(in.compose(q, p)), fp_inv); };
  return chart_jacobian(in, out, g, in.identity(), step);
}

Eigen::MatrixXd crossed_jacobian_output(const Manifold& in, const Manifold& out,
                                        const PointMap& fn, const Point& p, double step) {
  const Point fp_inv = out.inverse(fn(p));
  const PointMap g = [&](const Point& q) { return out.compose(fn(q), fp_inv); };
  return chart_jacobian(in, out, g, p, step);
}

Eigen::MatrixXd crossed_jacobian_input(const Manifold& in, const Manifold& out,
                                       const PointMap& fn, const Point& p, double step) {
  const PointMap g = [&](const Point& q) { return fn(in.compose(q, p)); };
  return chart_jacobian(in, out, g, in.identity(), step);
}

}  // namespace geokalman
