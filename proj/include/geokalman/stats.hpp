#pragma once

#include <vector>

#include <Eigen/Dense>

#include "geokalman/geometry.hpp"

namespace geokalman {

/// Mean point plus covariance expressed in basis_at(mean).
struct GaussianBelief {
  Point mean;
  Eigen::MatrixXd cov;
};

/// Draw from the exponential-wrapped normal: exp_mean(B c), c ~ N(0, cov).
Point sample_wrapped(const Manifold& m, const GaussianBelief& belief, Rng& rng);
Point sample_wrapped(const Manifold& m, const GaussianBelief& belief, std::uint64_t seed);

/// Unnormalized concentrated Gaussian exp(-1/2 c^T cov^{-1} c),
/// c = coefficients of log_mean(p).
double pdf_concentrated(const Manifold& m, const GaussianBelief& belief, const Point& p);

/// Unnormalized exponential-wrapped density: the concentrated density times
/// the volume density of exp at the mean.
double pdf_wrapped(const Manifold& m, const GaussianBelief& belief, const Point& p);

inline double volume_density(const Manifold& m, const Point& p, const Point& q) {
  return m.volume_density(p, q);
}

struct LogVolumeCorrection {
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Gradient and Hessian of c -> log nu_ref(exp_ref(B c)) at c = 0, by central
/// differences (step 1e-4 for the gradient, 1e-3 for the Hessian).
LogVolumeCorrection log_volume_correction(const Manifold& m, const Point& ref);

/// sum_i w_i c_i c_i^T with c_i the coefficients of log_base(points[i]).
Eigen::MatrixXd empirical_covariance(const Manifold& m, const Point& base,
                                     const std::vector<Point>& points,
                                     const std::vector<double>& weights);

}  // namespace geokalman
