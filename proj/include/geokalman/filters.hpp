#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geokalman/geometry.hpp"
#include "geokalman/stats.hpp"

namespace geokalman {

using Control = Eigen::VectorXd;

/// Discrete stochastic system: p_{n+1} = dynamics(p_n, q_n, w_n, t_n) and
/// z_n = measurement(p_n, q_n, v_n, t_n), with t_n = n * dt and q_n = control(t_n).
struct DiscreteSystem {
  using Map = std::function<Point(const Point&, const Control&, const Eigen::VectorXd&, double)>;

  ManifoldHandle state_space;
  ManifoldHandle obs_space;
  int process_noise_dim = 0;
  int obs_noise_dim = 0;
  Map dynamics;
  Map measurement;
  double dt = 1.0;
  std::function<Control(double)> control;

  double time(int step) const { return step * dt; }
};

struct FilterState {
  GaussianBelief belief;
  Eigen::MatrixXd process_cov;  // Q
  Eigen::MatrixXd obs_cov;      // R
  int step = 0;
};

/// Wan-Merwe scaled sigma-point parameters.
struct SigmaConfig {
  double alpha = 1.0;
  double kappa = 0.0;
  double beta = 2.0;

  double lambda(int d) const { return alpha * alpha * (d + kappa) - d; }
  /// Throws std::invalid_argument for alpha <= 0, kappa < 0 or beta < 0.
  void validate(int d) const;
};

struct SigmaPoints {
  std::vector<Point> points;  // sigma_0 = mean, then +columns, then -columns
  Eigen::VectorXd mean_weights;
  Eigen::VectorXd cov_weights;
};

/// Linearization of a system at the current estimate, all in orthonormal
/// tangent bases. The measurement-noise Jacobian is called W throughout.
struct JacobianSet {
  Eigen::MatrixXd F;  // dynamics w.r.t. state
  Eigen::MatrixXd L;  // dynamics w.r.t. process noise
  Eigen::MatrixXd H;  // measurement w.r.t. state
  Eigen::MatrixXd W;  // measurement w.r.t. measurement noise
};

enum class UpdateModel { Concentrated, WrappedQuadratic };

/// SubtractPrior: R' = a R + (1 - a)(W^-1 (y y^T + S) W^-T - R).
/// EmaStandard: R' = a R + (1 - a) W^-1 (y y^T + S) W^-T.
enum class AdaptationMode { SubtractPrior, EmaStandard };

struct AdaptationSettings {
  double alpha = 0.99;
  bool adapt_obs = true;
  bool adapt_process = true;
  AdaptationMode mode = AdaptationMode::SubtractPrior;
};

enum class FilterKind { Ekf, Ukf };

struct FilterAlgorithm {
  FilterKind kind = FilterKind::Ekf;
  SigmaConfig sigma;
  UpdateModel model = UpdateModel::Concentrated;
  std::optional<AdaptationSettings> adaptation;
  /// Central-difference step for Jacobians; 0 selects 1e-6 * max(1, |p|_inf).
  double jacobian_step = 0.0;
};

// ---------------------------------------------------------------------------
// Jacobians

using PointMap = std::function<Point(const Point&)>;

double default_jacobian_step(const Point& p);

/// Central-difference Jacobian of fn in normal coordinates: column j is
/// [c(log_o fn(exp_p(h e_j))) - c(log_o fn(exp_p(-h e_j)))] / 2h with o = fn(p).
Eigen::MatrixXd chart_jacobian(const Manifold& in, const Manifold& out, const PointMap& fn,
                               const Point& p, double step);
/// Same, with the output chart centred at `out_base` instead of fn(p).
Eigen::MatrixXd chart_jacobian(const Manifold& in, const Manifold& out, const PointMap& fn,
                               const Point& p, double step, const Point& out_base);

/// Jacobian of q -> fn(q o p) o fn(p)^{-1} at the identity.
Eigen::MatrixXd left_jacobian(const Manifold& in, const Manifold& out, const PointMap& fn,
                              const Point& p, double step);
/// Jacobian of q -> fn(q) o fn(p)^{-1} at p.
Eigen::MatrixXd crossed_jacobian_output(const Manifold& in, const Manifold& out,
                                        const PointMap& fn, const Point& p, double step);
/// Jacobian of q -> fn(q o p) at the identity.
Eigen::MatrixXd crossed_jacobian_input(const Manifold& in, const Manifold& out,
                                       const PointMap& fn, const Point& p, double step);

// ---------------------------------------------------------------------------
// Filter steps

struct Prediction {
  FilterState state;
  Eigen::MatrixXd F;  // empty for the UKF
  Eigen::MatrixXd L;
};

struct Update {
  FilterState state;
  Point expected;              // o_e
  Eigen::VectorXd residual;    // y_n in basis_at(o_e)
  Eigen::MatrixXd S;
  Eigen::MatrixXd K;
  Eigen::MatrixXd H;           // empty for the UKF
  Eigen::MatrixXd W;
  Eigen::MatrixXd cross_cov;   // P_XY, UKF only
};

Prediction ekf_predict(const DiscreteSystem& sys, const FilterState& state,
                       double jacobian_step = 0.0);
Update ekf_update(const DiscreteSystem& sys, const FilterState& state, const Point& z,
                  UpdateModel model = UpdateModel::Concentrated, double jacobian_step = 0.0);

/// Moves a covariance from basis_at(from) to basis_at(to) by parallel
/// transport of its eigenvectors along log_from(to), keeping the eigenvalues.
Eigen::MatrixXd transport_covariance(const Manifold& m, const Point& from, const Point& to,
                                     const Eigen::MatrixXd& cov);
/// Same, along the geodesic t -> exp_from(t dir) with the covariance expressed
/// in basis_at(exp_from(dir)) on return.
Eigen::MatrixXd transport_covariance_along(const Manifold& m, const Point& from,
                                           const Tangent& dir, const Eigen::MatrixXd& cov);

SigmaPoints sigma_points(const Manifold& m, const GaussianBelief& belief, const SigmaConfig& cfg);

/// Fixed-point iteration p <- exp_p(sum_i w_i log_p x_i). Weights must sum to
/// one and may be negative.
Point exponential_barycenter(const Manifold& m, const std::vector<Point>& points,
                             const Eigen::VectorXd& weights, const Point& init,
                             double tol = 1e-10, int max_iter = 100);

Prediction ukf_predict(const DiscreteSystem& sys, const FilterState& state,
                       const SigmaConfig& cfg, double jacobian_step = 0.0);
Update ukf_update(const DiscreteSystem& sys, const FilterState& state, const Point& z,
                  const SigmaConfig& cfg, double jacobian_step = 0.0);

struct AdaptedNoise {
  Eigen::MatrixXd obs_cov;
  Eigen::MatrixXd process_cov;
};

/// Covariance matching for R and Q. An empty L leaves Q untouched. Throws
/// AdaptationNotApplicable when W or a non-empty L is not square and invertible.
AdaptedNoise adapt_noise(const FilterState& state, const Eigen::VectorXd& residual,
                         const Eigen::MatrixXd& S, const Eigen::MatrixXd& K,
                         const Eigen::MatrixXd& L, const Eigen::MatrixXd& W, double alpha,
                         AdaptationMode mode = AdaptationMode::SubtractPrior);

// ---------------------------------------------------------------------------

struct StepRecord {
  FilterState predicted;  // p_{n|n-1}, P_{n|n-1}
  FilterState updated;    // p_{n|n}, P_{n|n}
};

struct FilterRunResult {
  std::vector<StepRecord> records;  // every completed step, starting with the initial state
  std::optional<int> failed_step;
  std::string failure;
};

/// As run_filter, but stops at the first failing step and reports it instead
/// of throwing. Argument errors still throw.
FilterRunResult run_filter_partial(const DiscreteSystem& sys, const FilterAlgorithm& algorithm,
                                   const FilterState& init, const std::vector<Point>& measurements,
                                   const std::vector<Control>& controls = {});

/// Runs predict/update for measurements z_1..z_K. Element 0 holds the initial
/// state in both slots. When `controls` is non-empty it must hold q_0..q_K and
/// replaces sys.control. Errors are rethrown as FilterStepError.
std::vector<StepRecord> run_filter(const DiscreteSystem& sys, const FilterAlgorithm& algorithm,
                                   const FilterState& init, const std::vector<Point>& measurements,
                                   const std::vector<Control>& controls = {});

}  // namespace geokalman
