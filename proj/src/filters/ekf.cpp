#include <cmath>

#include "common.hpp"
#include "geokalman/errors.hpp"
#include "geokalman/filters.hpp"
#include "geokalman/linalg.hpp"

namespace geokalman {
namespace detail {

Eigen::MatrixXd noise_jacobian(const Manifold& out, int noise_dim,
                               const std::function<Point(const Eigen::VectorXd&)>& fn,
                               const Point& out_base) {
  const ManifoldHandle noise = euclidean(noise_dim);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(noise_dim);
  return chart_jacobian(*noise, out, fn, zero, default_jacobian_step(zero), out_base);
}

Eigen::LLT<Eigen::MatrixXd> factor_innovation(const Eigen::MatrixXd& s) {
  constexpr double kMinRcond = 1e-12;
  Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(s));
  if (llt.info() != Eigen::Success || !(llt.rcond() > kMinRcond)) {
    throw SingularInnovation("innovation covariance is numerically singular");
  }
  return llt;
}

Eigen::MatrixXd gain(const Eigen::MatrixXd& cross, const Eigen::LLT<Eigen::MatrixXd>& s) {
  // K = C S^{-1}  <=>  S K^T = C^T, S symmetric.
  return s.solve(cross.transpose()).transpose();
}

GaussianBelief apply_correction(const Manifold& m, const Point& mean, const Eigen::VectorXd& delta,
                                const Eigen::MatrixXd& posterior_cov) {
  const Tangent dir = from_coeffs(m.basis_at(mean), delta);
  GaussianBelief out;
  out.mean = delta.isZero(0.0) ? mean : m.exp(mean, dir);
  out.cov = clamp_psd(transport_covariance_along(m, mean, dir, posterior_cov));
  return out;
}

}  // namespace detail

Prediction ekf_predict(const DiscreteSystem& sys, const FilterState& state, double jacobian_step) {
  const Manifold& m = *sys.state_space;
  const double t = sys.time(state.step);
  const Control q = sys.control(t);
  const Point& p = state.belief.mean;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.process_noise_dim);

  const PointMap f = [&](const Point& x) { return sys.dynamics(x, q, zero, t); };
  const Point mean = f(p);
  const Eigen::MatrixXd F =
      chart_jacobian(m, m, f, p, detail::state_step(jacobian_step, p), mean);
  const Eigen::MatrixXd L = detail::noise_jacobian(
      m, sys.process_noise_dim, [&](const Eigen::VectorXd& w) { return sys.dynamics(p, q, w, t); },
      mean);

  Prediction out;
  out.state = state;
  out.state.step = state.step + 1;
  out.state.belief.mean = mean;
  out.state.belief.cov = clamp_psd(F * state.belief.cov * F.transpose() +
                                   L * state.process_cov * L.transpose());
  out.F = F;
  out.L = L;
  return out;
}

Update ekf_update(const DiscreteSystem& sys, const FilterState& state, const Point& z,
                  UpdateModel model, double jacobian_step) {
  const Manifold& m = *sys.state_space;
  const Manifold& n = *sys.obs_space;
  const double t = sys.time(state.step);
  const Control q = sys.control(t);
  const Point& p = state.belief.mean;
  const Eigen::MatrixXd& P = state.belief.cov;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.obs_noise_dim);

  const PointMap h = [&](const Point& x) { return sys.measurement(x, q, zero, t); };
  Update out;
  out.expected = h(p);
  out.H = chart_jacobian(m, n, h, p, detail::state_step(jacobian_step, p), out.expected);
  out.W = detail::noise_jacobian(
      n, sys.obs_noise_dim, [&](const Eigen::VectorXd& v) { return sys.measurement(p, q, v, t); },
      out.expected);
  out.residual = to_coeffs(n.basis_at(out.expected), n.log(out.expected, z));

  const Eigen::MatrixXd noise = out.W * state.obs_cov * out.W.transpose();
  const Eigen::MatrixXd& H = out.H;

  Eigen::MatrixXd prior = P;
  Eigen::VectorXd grad;
  if (model == UpdateModel::WrappedQuadratic) {
    const LogVolumeCorrection lv = log_volume_correction(m, p);
    if (!lv.gradient.isZero(0.0) || !lv.hessian.isZero(0.0)) {
      // Prior information P^{-1} - Hess log nu; the gradient enters the residual.
      Eigen::LLT<Eigen::MatrixXd> p_llt(symmetrize(P));
      if (p_llt.info() != Eigen::Success) {
        throw DegenerateCovariance("wrapped-quadratic update needs an invertible prior covariance");
      }
      const Eigen::MatrixXd info =
          symmetrize(p_llt.solve(Eigen::MatrixXd::Identity(P.rows(), P.cols())) - lv.hessian);
      Eigen::LLT<Eigen::MatrixXd> info_llt(info);
      if (info_llt.info() != Eigen::Success) {
        throw DegenerateCovariance("wrapped-quadratic prior information is not positive definite");
      }
      prior = symmetrize(info_llt.solve(Eigen::MatrixXd::Identity(P.rows(), P.cols())));
      grad = lv.gradient;
    }
  }

  out.S = symmetrize(H * prior * H.transpose() + noise);
  const auto s_llt = detail::factor_innovation(out.S);
  out.K = detail::gain(prior * H.transpose(), s_llt);
  const Eigen::MatrixXd posterior = symmetrize(prior - out.K * out.S * out.K.transpose());

  Eigen::VectorXd delta = out.K * out.residual;
  if (grad.size() > 0) delta += posterior * grad;

  out.state = state;
  out.state.belief = detail::apply_correction(m, p, delta, posterior);
  return out;
}

}  // namespace geokalman
