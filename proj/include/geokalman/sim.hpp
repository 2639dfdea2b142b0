#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geokalman/filters.hpp"

namespace geokalman::sim {

enum class SystemName { Car2d, Sphere };

std::string to_string(SystemName name);
/// Throws std::invalid_argument naming the valid set.
SystemName parse_system_name(const std::string& text);

/// Forward speed used by both experiment systems.
inline constexpr double kForwardSpeed = 1.0;

/// Heading/velocity control q(t) = sin(t / 2).
Control default_control(double t);

/// SE(2) car: R' = R exp(dt (q + w1) J), t' = t + dt R [v, 0] + sqrt(dt) [w2, w3],
/// observed through z = t + v.
DiscreteSystem car2d_system(double dt);

/// Tangent bundle of S^2 driven through the bundle retraction by
/// (dt v X + sqrt(dt) B_p [w3, w4], dt p x [0, q v + w1, w2]), observed
/// through z = exp_p(B_p v).
DiscreteSystem sphere_system(double dt);

DiscreteSystem make_system(SystemName name, double dt);

/// Identity of SE(2) for the car; ([1, 0, 0], [0, 1, 0]) for the sphere.
Point initial_state(SystemName name);

struct ExperimentConfig {
  SystemName name = SystemName::Car2d;
  double dt = 0.01;
  int steps = 200;
  std::uint64_t seed = 42;
  Eigen::MatrixXd true_process_cov;
  Eigen::MatrixXd true_obs_cov;
  Eigen::MatrixXd filter_init_cov;
  Eigen::MatrixXd filter_process_cov;
  Eigen::MatrixXd filter_obs_cov;
  double adapt_alpha = 0.99;
  AdaptationMode adapt_mode = AdaptationMode::SubtractPrior;
  SigmaConfig sigma;

  /// Throws std::invalid_argument on mismatched or non-PSD settings.
  void validate() const;
};

/// Reference experiment parameters for the named system.
ExperimentConfig reference_config(SystemName name);

struct Trajectory {
  std::vector<Point> states;        // p_0..p_K
  std::vector<Point> measurements;  // z_1..z_K
};

/// Draws w_{n-1} then v_n for n = 1..K from one stream seeded with cfg.seed.
Trajectory simulate(const DiscreteSystem& sys, const ExperimentConfig& cfg);

/// Translation distance for the car, great-circle distance between base
/// points (or base point and measurement) for the sphere.
double position_error(SystemName name, const Point& truth, const Point& other);

/// sqrt(mean of squares) of errors[0..n] for every n.
std::vector<double> running_rmse(const std::vector<double>& errors);

enum class FilterId { Ekf, Ukf, AdaptiveEkf };

std::string to_string(FilterId id);
/// Accepts "ekf", "ukf" and "adaptive-ekf".
FilterId parse_filter_id(const std::string& text);

inline const std::vector<FilterId>& all_filters() {
  static const std::vector<FilterId> ids{FilterId::Ekf, FilterId::Ukf, FilterId::AdaptiveEkf};
  return ids;
}

/// Algorithm settings the experiment uses for each filter.
FilterAlgorithm filter_algorithm(SystemName name, FilterId id, const ExperimentConfig& cfg);

struct FilterRun {
  FilterId id = FilterId::Ekf;
  /// Posterior means p_{0|0}..p_{K|K}; shorter when the filter failed.
  std::vector<Point> estimates;
  std::vector<double> errors;  // position errors for n = 1..len
  std::vector<double> rmse;    // running RMSE of `errors`
  std::optional<int> failed_step;
  std::string failure;

  bool failed() const { return failed_step.has_value(); }
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<double> times;  // t_0..t_K
  std::vector<Point> true_states;
  std::vector<Point> measurements;
  std::vector<double> measurement_errors;  // n = 1..K
  std::vector<double> measurement_rmse;
  std::vector<FilterRun> filters;

  const FilterRun* find(FilterId id) const;
};

/// Simulates once and runs the requested filters on the same measurements.
ExperimentRecord run_experiment(const ExperimentConfig& cfg,
                                const std::vector<FilterId>& filters = all_filters());

}  // namespace geokalman::sim
