#include "geokalman/stats.hpp"

#include <cmath>

#include "geokalman/errors.hpp"
#include "geokalman/linalg.hpp"

namespace geokalman {
namespace {

double quadratic_form_inverse(const Eigen::MatrixXd& cov, const Eigen::VectorXd& c) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw DegenerateCovariance("density: covariance is not positive definite");
  }
  return c.dot(llt.solve(c));
}

}  // namespace

Point sample_wrapped(const Manifold& m, const GaussianBelief& belief, Rng& rng) {
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd l = psd_cholesky(belief.cov);
  Eigen::VectorXd z(l.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
  const Basis b = m.basis_at(belief.mean);
  return m.exp(belief.mean, from_coeffs(b, l * z));
}

Point sample_wrapped(const Manifold& m, const GaussianBelief& belief, std::uint64_t seed) {
  Rng rng(seed);
  return sample_wrapped(m, belief, rng);
}

double pdf_concentrated(const Manifold& m, const GaussianBelief& belief, const Point& p) {
  const Eigen::VectorXd c = to_coeffs(m.basis_at(belief.mean), m.log(belief.mean, p));
  return std::exp(-0.5 * quadratic_form_inverse(belief.cov, c));
}

double pdf_wrapped(const Manifold& m, const GaussianBelief& belief, const Point& p) {
  return pdf_concentrated(m, belief, p) * m.volume_density(belief.mean, p);
}

LogVolumeCorrection log_volume_correction(const Manifold& m, const Point& ref) {
  const Basis b = m.basis_at(ref);
  const int d = b.dim();
  const auto f = [&](const Eigen::VectorXd& c) {
    return std::log(m.volume_density(ref, m.exp(ref, from_coeffs(b, c))));
  };

  constexpr double kGradStep = 1e-4;
  constexpr double kHessStep = 1e-3;
  LogVolumeCorrection out{Eigen::VectorXd(d), Eigen::MatrixXd(d, d)};
  for (int i = 0; i < d; ++i) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(d, i) * kGradStep;
    out.gradient[i] = (f(e) - f(-e)) / (2.0 * kGradStep);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const Eigen::VectorXd ei = Eigen::VectorXd::Unit(d, i) * kHessStep;
      const Eigen::VectorXd ej = Eigen::VectorXd::Unit(d, j) * kHessStep;
      const double v =
          (f(ei + ej) - f(ei - ej) - f(ej - ei) + f(-ei - ej)) / (4.0 * kHessStep * kHessStep);
      out.hessian(i, j) = v;
      out.hessian(j, i) = v;
    }
  }
  return out;
}

Eigen::MatrixXd empirical_covariance(const Manifold& m, const Point& base,
                                     const std::vector<Point>& points,
                                     const std::vector<double>& weights) {
  if (points.size() != weights.size()) {
    throw std::invalid_argument("empirical_covariance: points and weights differ in length");
  }
  const Basis b = m.basis_at(base);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(b.dim(), b.dim());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::VectorXd c = to_coeffs(b, m.log(base, points[i]));
    cov.noalias() += weights[i] * c * c.transpose();
  }
  return symmetrize(cov);
}

}  // namespace geokalman
