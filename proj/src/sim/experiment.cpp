#include <cmath>
#include <stdexcept>

#include "geokalman/errors.hpp"
#include "geokalman/linalg.hpp"
#include "geokalman/sim.hpp"

namespace geokalman::sim {
namespace {

Eigen::MatrixXd diag(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v.asDiagonal();
}

void check_cov(const Eigen::MatrixXd& m, int dim, const char* name) {
  if (m.rows() != dim || m.cols() != dim) {
    throw std::invalid_argument(std::string(name) + " must be " + std::to_string(dim) + "x" +
                                std::to_string(dim));
  }
  if (!m.allFinite() || asymmetry(m) > 1e-12) {
    throw std::invalid_argument(std::string(name) + " must be finite and symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12) {
    throw std::invalid_argument(std::string(name) + " must be positive semi-definite");
  }
}

Eigen::VectorXd standard_normal(Rng& rng, int n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  if (!(adapt_alpha >= 0.0 && adapt_alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  const DiscreteSystem sys = make_system(name, dt);
  const int d = sys.state_space->dim();
  check_cov(true_process_cov, sys.process_noise_dim, "true process covariance");
  check_cov(true_obs_cov, sys.obs_noise_dim, "true measurement covariance");
  check_cov(filter_init_cov, d, "initial covariance");
  check_cov(filter_process_cov, sys.process_noise_dim, "filter process covariance");
  check_cov(filter_obs_cov, sys.obs_noise_dim, "filter measurement covariance");
  sigma.validate(d);
}

ExperimentConfig reference_config(SystemName name) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.dt = 0.01;
  cfg.steps = 200;
  cfg.adapt_alpha = 0.99;
  if (name == SystemName::Car2d) {
    cfg.true_process_cov = diag({10, 100, 100});
    cfg.true_obs_cov = diag({0.01, 0.01});
    cfg.filter_init_cov = diag({0.1, 0.1, 0.1});
    cfg.filter_process_cov = diag({2, 2, 2});
    cfg.filter_obs_cov = diag({0.01, 0.01});
  } else {
    cfg.true_process_cov = diag({10, 10, 1, 1});
    cfg.true_obs_cov = diag({0.01, 0.01});
    cfg.filter_init_cov = diag({0.1, 0.1, 0.1, 0.1});
    cfg.filter_process_cov = diag({0.1, 0.1, 0.01, 0.01});
    cfg.filter_obs_cov = diag({0.01, 0.01});
  }
  return cfg;
}

Trajectory simulate(const DiscreteSystem& sys, const ExperimentConfig& cfg) {
  const Eigen::MatrixXd lq = psd_cholesky(cfg.true_process_cov);
  const Eigen::MatrixXd lr = psd_cholesky(cfg.true_obs_cov);
  Rng rng(cfg.seed);

  Trajectory out;
  out.states.reserve(cfg.steps + 1);
  out.measurements.reserve(cfg.steps);
  out.states.push_back(initial_state(cfg.name));
  for (int n = 1; n <= cfg.steps; ++n) {
    try {
      const double t_prev = sys.time(n - 1);
      const Eigen::VectorXd w = lq * standard_normal(rng, sys.process_noise_dim);
      out.states.push_back(sys.dynamics(out.states.back(), sys.control(t_prev), w, t_prev));
      const double t = sys.time(n);
      const Eigen::VectorXd v = lr * standard_normal(rng, sys.obs_noise_dim);
      out.measurements.push_back(sys.measurement(out.states.back(), sys.control(t), v, t));
    } catch (const std::exception& e) {
      throw Error("simulation step " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

double position_error(SystemName name, const Point& truth, const Point& other) {
  if (name == SystemName::Car2d) return (truth.head<2>() - other.head<2>()).norm();
  const Eigen::Vector3d a = truth.head<3>();
  const Eigen::Vector3d b = other.head<3>();
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

std::vector<double> running_rmse(const std::vector<double>& errors) {
  std::vector<double> out;
  out.reserve(errors.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    sum += errors[i] * errors[i];
    out.push_back(std::sqrt(sum / static_cast<double>(i + 1)));
  }
  return out;
}

std::string to_string(FilterId id) {
  switch (id) {
    case FilterId::Ekf: return "ekf";
    case FilterId::Ukf: return "ukf";
    case FilterId::AdaptiveEkf: return "adaptive-ekf";
  }
  return "?";
}

FilterId parse_filter_id(const std::string& text) {
  if (text == "ekf") return FilterId::Ekf;
  if (text == "ukf") return FilterId::Ukf;
  if (text == "adaptive-ekf") return FilterId::AdaptiveEkf;
  throw std::invalid_argument("unknown filter '" + text +
                              "' (expected one of: ekf, ukf, adaptive-ekf)");
}

FilterAlgorithm filter_algorithm(SystemName name, FilterId id, const ExperimentConfig& cfg) {
  FilterAlgorithm alg;
  alg.sigma = cfg.sigma;
  alg.kind = id == FilterId::Ukf ? FilterKind::Ukf : FilterKind::Ekf;
  if (id == FilterId::AdaptiveEkf) {
    AdaptationSettings a;
    a.alpha = cfg.adapt_alpha;
    a.mode = cfg.adapt_mode;
    a.adapt_obs = true;
    // The sphere experiment adapts the measurement covariance only.
    a.adapt_process = name == SystemName::Car2d;
    alg.adaptation = a;
  }
  return alg;
}

const FilterRun* ExperimentRecord::find(FilterId id) const {
  for (const FilterRun& f : filters) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg, const std::vector<FilterId>& filters) {
  cfg.validate();
  const DiscreteSystem sys = make_system(cfg.name, cfg.dt);
  const Trajectory traj = simulate(sys, cfg);

  ExperimentRecord rec;
  rec.config = cfg;
  rec.true_states = traj.states;
  rec.measurements = traj.measurements;
  for (int n = 0; n <= cfg.steps; ++n) rec.times.push_back(sys.time(n));
  for (int n = 1; n <= cfg.steps; ++n) {
    rec.measurement_errors.push_back(
        position_error(cfg.name, traj.states[n], traj.measurements[n - 1]));
  }
  rec.measurement_rmse = running_rmse(rec.measurement_errors);

  FilterState init;
  init.belief = {initial_state(cfg.name), cfg.filter_init_cov};
  init.process_cov = cfg.filter_process_cov;
  init.obs_cov = cfg.filter_obs_cov;

  for (FilterId id : filters) {
    const FilterRunResult result =
        run_filter_partial(sys, filter_algorithm(cfg.name, id, cfg), init, traj.measurements);
    FilterRun run;
    run.id = id;
    run.failed_step = result.failed_step;
    run.failure = result.failure;
    for (const StepRecord& r : result.records) run.estimates.push_back(r.updated.belief.mean);
    for (std::size_t n = 1; n < run.estimates.size(); ++n) {
      run.errors.push_back(position_error(cfg.name, traj.states[n], run.estimates[n]));
    }
    run.rmse = running_rmse(run.errors);
    rec.filters.push_back(std::move(run));
  }
  return rec;
}

}  // namespace geokalman::sim
