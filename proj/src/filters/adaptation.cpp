#include <stdexcept>

#include "geokalman/errors.hpp"
#include "geokalman/filters.hpp"
#include "geokalman/linalg.hpp"

namespace geokalman {
namespace {

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& a, const char* name) {
  if (a.rows() != a.cols()) {
    throw AdaptationNotApplicable(std::string("adapt_noise: ") + name + " is not square");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw AdaptationNotApplicable(std::string("adapt_noise: ") + name + " is singular");
  }
  return lu.inverse();
}

}  // namespace

AdaptedNoise adapt_noise(const FilterState& state, const Eigen::VectorXd& residual,
                         const Eigen::MatrixXd& S, const Eigen::MatrixXd& K,
                         const Eigen::MatrixXd& L, const Eigen::MatrixXd& W, double alpha,
                         AdaptationMode mode) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("adapt_noise: alpha must lie in [0, 1]");
  }
  const Eigen::MatrixXd& R = state.obs_cov;
  const Eigen::MatrixXd& Q = state.process_cov;

  const Eigen::MatrixXd w_inv = checked_inverse(W, "W");
  const Eigen::MatrixXd matched =
      w_inv * (residual * residual.transpose() + S) * w_inv.transpose();
  AdaptedNoise out;
  if (mode == AdaptationMode::SubtractPrior) {
    out.obs_cov = alpha * R + (1.0 - alpha) * (matched - R);
  } else {
    out.obs_cov = alpha * R + (1.0 - alpha) * matched;
  }
  out.obs_cov = clamp_psd(out.obs_cov);

  if (L.size() == 0) {
    out.process_cov = Q;
  } else {
    const Eigen::VectorXd u = checked_inverse(L, "L") * (K * residual);
    out.process_cov = clamp_psd(alpha * Q + (1.0 - alpha) * (u * u.transpose()));
  }
  return out;
}

}  // namespace geokalman
