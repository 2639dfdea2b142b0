#pragma once

#include "geokalman/filters.hpp"

namespace geokalman::detail {

inline double state_step(double requested, const Point& p) {
  return requested > 0.0 ? requested : default_jacobian_step(p);
}

/// Jacobian of w -> fn(w) at w = 0, output chart centred at `out_base`.
Eigen::MatrixXd noise_jacobian(const Manifold& out, int noise_dim,
                               const std::function<Point(const Eigen::VectorXd&)>& fn,
                               const Point& out_base);

/// Factorizes the innovation covariance, throwing SingularInnovation when it
/// is not numerically positive definite.
Eigen::LLT<Eigen::MatrixXd> factor_innovation(const Eigen::MatrixXd& s);

/// K = cross S^{-1} given the factorization of S.
Eigen::MatrixXd gain(const Eigen::MatrixXd& cross, const Eigen::LLT<Eigen::MatrixXd>& s);

/// Moves the mean by `delta` (coefficients at the prior mean) and resets the
/// posterior covariance to the new mean.
GaussianBelief apply_correction(const Manifold& m, const Point& mean, const Eigen::VectorXd& delta,
                                const Eigen::MatrixXd& posterior_cov);

}  // namespace geokalman::detail
