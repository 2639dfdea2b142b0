#include <cmath>
#include <stdexcept>

#include "common.hpp"
#include "geokalman/errors.hpp"
#include "geokalman/filters.hpp"
#include "geokalman/linalg.hpp"

namespace geokalman {

void SigmaConfig::validate(int d) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("sigma config: alpha must be positive");
  if (!(kappa >= 0.0)) throw std::invalid_argument("sigma config: kappa must be non-negative");
  if (!(beta >= 0.0)) throw std::invalid_argument("sigma config: beta must be non-negative");
  if (!(d + lambda(d) > 0.0)) throw std::invalid_argument("sigma config: d + lambda must be positive");
}

SigmaPoints sigma_points(const Manifold& m, const GaussianBelief& belief, const SigmaConfig& cfg) {
  const Basis b = m.basis_at(belief.mean);
  const int d = b.dim();
  cfg.validate(d);
  const double lambda = cfg.lambda(d);

  const Eigen::MatrixXd scaled = (d + lambda) * symmetrize(belief.cov);
  Eigen::MatrixXd chol;
  try {
    chol = psd_cholesky(scaled);
  } catch (const DegenerateCovariance&) {
    chol = psd_cholesky(clamp_psd(scaled));
  }

  SigmaPoints out;
  out.points.reserve(2 * d + 1);
  out.points.push_back(belief.mean);
  for (int i = 0; i < d; ++i) out.points.push_back(m.exp(belief.mean, from_coeffs(b, chol.col(i))));
  for (int i = 0; i < d; ++i) out.points.push_back(m.exp(belief.mean, from_coeffs(b, -chol.col(i))));

  out.mean_weights = Eigen::VectorXd::Constant(2 * d + 1, 1.0 / (2.0 * (d + lambda)));
  out.mean_weights[0] = lambda / (d + lambda);
  out.cov_weights = out.mean_weights;
  out.cov_weights[0] += 1.0 - cfg.alpha * cfg.alpha + cfg.beta;
  return out;
}

Point exponential_barycenter(const Manifold& m, const std::vector<Point>& points,
                             const Eigen::VectorXd& weights, const Point& init, double tol,
                             int max_iter) {
  if (points.empty() || static_cast<Eigen::Index>(points.size()) != weights.size()) {
    throw std::invalid_argument("exponential_barycenter: points and weights differ in length");
  }
  Point p = init;
  for (int iter = 0; iter <= max_iter; ++iter) {
    Tangent step = Tangent::Zero(m.tangent_size());
    for (std::size_t i = 0; i < points.size(); ++i) step += weights[i] * m.log(p, points[i]);
    const double norm = std::sqrt(m.inner(p, step, step));
    if (!std::isfinite(norm)) break;
    if (norm < tol) return p;
    if (iter == max_iter) break;
    p = m.exp(p, step);
  }
  throw BarycenterDivergence("exponential_barycenter: no convergence after " +
                             std::to_string(max_iter) + " iterations");
}

namespace {

Eigen::MatrixXd coefficient_deviations(const Manifold& m, const Point& base,
                                       const std::vector<Point>& points) {
  const Basis b = m.basis_at(base);
  Eigen::MatrixXd out(b.dim(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = to_coeffs(b, m.log(base, points[i]));
  }
  return out;
}

}  // namespace

Prediction ukf_predict(const DiscreteSystem& sys, const FilterState& state, const SigmaConfig& cfg,
                       double /*jacobian_step*/) {
  const Manifold& m = *sys.state_space;
  const double t = sys.time(state.step);
  const Control q = sys.control(t);
  const Point& p = state.belief.mean;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.process_noise_dim);

  const SigmaPoints sp = sigma_points(m, state.belief, cfg);
  std::vector<Point> moved;
  moved.reserve(sp.points.size());
  for (const Point& s : sp.points) moved.push_back(sys.dynamics(s, q, zero, t));

  const Point mean = exponential_barycenter(m, moved, sp.mean_weights, moved.front());
  const Eigen::MatrixXd X = coefficient_deviations(m, mean, moved);
  const Eigen::MatrixXd L = detail::noise_jacobian(
      m, sys.process_noise_dim, [&](const Eigen::VectorXd& w) { return sys.dynamics(p, q, w, t); },
      mean);

  Prediction out;
  out.state = state;
  out.state.step = state.step + 1;
  out.state.belief.mean = mean;
  out.state.belief.cov = clamp_psd(X * sp.cov_weights.asDiagonal() * X.transpose() +
                                   L * state.process_cov * L.transpose());
  out.L = L;
  return out;
}

Update ukf_update(const DiscreteSystem& sys, const FilterState& state, const Point& z,
                  const SigmaConfig& cfg, double /*jacobian_step*/) {
  const Manifold& m = *sys.state_space;
  const Manifold& n = *sys.obs_space;
  const double t = sys.time(state.step);
  const Control q = sys.control(t);
  const Point& p = state.belief.mean;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.obs_noise_dim);

  const SigmaPoints sp = sigma_points(m, state.belief, cfg);
  std::vector<Point> observed;
  observed.reserve(sp.points.size());
  for (const Point& s : sp.points) observed.push_back(sys.measurement(s, q, zero, t));

  Update out;
  out.expected = exponential_barycenter(n, observed, sp.mean_weights, observed.front());
  const Eigen::MatrixXd X = coefficient_deviations(m, p, sp.points);
  const Eigen::MatrixXd Y = coefficient_deviations(n, out.expected, observed);
  out.W = detail::noise_jacobian(
      n, sys.obs_noise_dim, [&](const Eigen::VectorXd& v) { return sys.measurement(p, q, v, t); },
      out.expected);
  out.residual = to_coeffs(n.basis_at(out.expected), n.log(out.expected, z));

  out.S = symmetrize(out.W * state.obs_cov * out.W.transpose() +
                     Y * sp.cov_weights.asDiagonal() * Y.transpose());
  out.cross_cov = X * sp.cov_weights.asDiagonal() * Y.transpose();
  const auto s_llt = detail::factor_innovation(out.S);
  out.K = detail::gain(out.cross_cov, s_llt);
  const Eigen::MatrixXd posterior =
      symmetrize(state.belief.cov - out.K * out.S * out.K.transpose());

  out.state = state;
  out.state.belief = detail::apply_correction(m, p, out.K * out.residual, posterior);
  return out;
}

}  // namespace geokalman
