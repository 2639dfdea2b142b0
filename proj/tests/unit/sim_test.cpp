#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "geokalman/sim.hpp"

using namespace geokalman;
using namespace geokalman::sim;
using fixtures::max_abs;

namespace {

ExperimentConfig noise_free(SystemName name) {
  ExperimentConfig cfg = reference_config(name);
  cfg.true_process_cov.setZero();
  cfg.true_obs_cov.setZero();
  return cfg;
}

}  // namespace

TEST(Names, RoundTripAndRejectUnknown) {
  EXPECT_EQ(parse_system_name("car2d"), SystemName::Car2d);
  EXPECT_EQ(parse_system_name(to_string(SystemName::Sphere)), SystemName::Sphere);
  try {
    parse_system_name("mars");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("car2d, sphere"), std::string::npos);
  }
  for (FilterId id : all_filters()) EXPECT_EQ(parse_filter_id(to_string(id)), id);
  EXPECT_THROW(parse_filter_id("pf"), std::invalid_argument);
}

TEST(Car, MeasurementAtIdentityIsOrigin) {
  const DiscreteSystem car = car2d_system(0.01);
  const Point z = car.measurement(initial_state(SystemName::Car2d), Control::Zero(1),
                                  Eigen::Vector2d::Zero(), 0.0);
  EXPECT_EQ(z, Point(Eigen::Vector2d::Zero()));
}

TEST(Car, NoiseFreeStepMovesAlongHeading) {
  const double dt = 0.01;
  const DiscreteSystem car = car2d_system(dt);
  const Point next = car.dynamics(initial_state(SystemName::Car2d), Control::Zero(1),
                                  Eigen::Vector3d::Zero(), 0.0);
  EXPECT_LT(max_abs(next.head(2) - Eigen::Vector2d(dt * kForwardSpeed, 0.0)), 1e-15);
  EXPECT_LT(max_abs(next.tail(4) - Eigen::Vector4d(1, 0, 0, 1)), 1e-15);
}

TEST(Car, NoisePlacement) {
  const double dt = 0.04;
  const DiscreteSystem car = car2d_system(dt);
  const Point id = initial_state(SystemName::Car2d);
  const Point moved = car.dynamics(id, Control::Zero(1), Eigen::Vector3d(0.0, 1.0, -2.0), 0.0);
  EXPECT_LT(max_abs(moved.head(2) - Eigen::Vector2d(dt + 0.2, -0.4)), 1e-15);

  const Point turned = car.dynamics(id, Control::Constant(1, 0.5), Eigen::Vector3d(1.5, 0, 0), 0.0);
  const double heading = std::atan2(turned[3], turned[2]);
  EXPECT_NEAR(heading, dt * 2.0, 1e-15);
}

TEST(Sphere, MeasurementWithoutNoiseIsBasePoint) {
  const DiscreteSystem sys = sphere_system(0.01);
  const Point s = initial_state(SystemName::Sphere);
  const Point z = sys.measurement(s, Control::Zero(1), Eigen::Vector2d::Zero(), 0.0);
  EXPECT_EQ(z, Point(s.head(3)));
}

TEST(Sphere, MeasurementNoiseIsGeodesicDistance) {
  const DiscreteSystem sys = sphere_system(0.01);
  const Point s = initial_state(SystemName::Sphere);
  for (double theta : {0.1, 0.7, 2.0}) {
    const Point z = sys.measurement(s, Control::Zero(1), Eigen::Vector2d(theta, 0), 0.0);
    EXPECT_NEAR(position_error(SystemName::Sphere, s, z), theta, 1e-12);
  }
}

TEST(Sphere, NoiseFreeStatesStayOnBundle) {
  const ExperimentConfig cfg = noise_free(SystemName::Sphere);
  const Trajectory traj = simulate(sphere_system(cfg.dt), cfg);
  ASSERT_EQ(traj.states.size(), 201u);
  for (const Point& s : traj.states) {
    EXPECT_NEAR(s.head<3>().norm(), 1.0, 1e-9);
    EXPECT_NEAR(s.head<3>().dot(s.tail<3>()), 0.0, 1e-9);
  }
}

TEST(Simulate, ZeroNoiseMeasurementsAreExact) {
  for (SystemName name : {SystemName::Car2d, SystemName::Sphere}) {
    const ExperimentConfig cfg = noise_free(name);
    const DiscreteSystem sys = make_system(name, cfg.dt);
    const Trajectory traj = simulate(sys, cfg);
    for (int n = 1; n <= cfg.steps; ++n) {
      const Point expected = sys.measurement(traj.states[n], sys.control(sys.time(n)),
                                             Eigen::VectorXd::Zero(sys.obs_noise_dim), sys.time(n));
      ASSERT_EQ(traj.measurements[n - 1], expected) << n;
    }
  }
}

TEST(Simulate, CarStaysInSe2) {
  const ExperimentConfig cfg = reference_config(SystemName::Car2d);
  const DiscreteSystem sys = car2d_system(cfg.dt);
  const Trajectory traj = simulate(sys, cfg);
  ASSERT_EQ(traj.states.size(), 201u);
  ASSERT_EQ(traj.measurements.size(), 200u);
  for (const Point& p : traj.states) EXPECT_LT(sys.state_space->point_residual(p), 1e-9);
}

TEST(Simulate, SeedDeterminesOutput) {
  ExperimentConfig cfg = reference_config(SystemName::Sphere);
  const DiscreteSystem sys = sphere_system(cfg.dt);
  const Trajectory a = simulate(sys, cfg);
  const Trajectory b = simulate(sys, cfg);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.measurements, b.measurements);
  cfg.seed += 1;
  EXPECT_NE(simulate(sys, cfg).measurements, a.measurements);
}

TEST(PositionError, Examples) {
  const Point id = initial_state(SystemName::Car2d);
  Point moved = id;
  moved.head<2>() << 3, 4;
  EXPECT_EQ(position_error(SystemName::Car2d, id, id), 0.0);
  EXPECT_EQ(position_error(SystemName::Car2d, id, moved), 5.0);

  const Point s = initial_state(SystemName::Sphere);
  EXPECT_EQ(position_error(SystemName::Sphere, s, s), 0.0);
  EXPECT_NEAR(position_error(SystemName::Sphere, s, Point(-s.head(3))), std::numbers::pi, 1e-15);
}

TEST(RunningRmse, CumulativeRootMeanSquare) {
  const std::vector<double> r = running_rmse({3.0, 4.0, 0.0});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_DOUBLE_EQ(r[0], 3.0);
  EXPECT_DOUBLE_EQ(r[1], std::sqrt(12.5));
  EXPECT_DOUBLE_EQ(r[2], std::sqrt(25.0 / 3));
  EXPECT_TRUE(running_rmse({}).empty());
}

TEST(Config, ValidationCatchesBadSettings) {
  ExperimentConfig cfg = reference_config(SystemName::Car2d);
  EXPECT_NO_THROW(cfg.validate());
  cfg.steps = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = reference_config(SystemName::Car2d);
  cfg.filter_obs_cov = Eigen::Matrix3d::Identity();
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = reference_config(SystemName::Sphere);
  cfg.true_obs_cov(0, 0) = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = reference_config(SystemName::Sphere);
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Experiment, RecordShapes) {
  for (SystemName name : {SystemName::Car2d, SystemName::Sphere}) {
    ExperimentConfig cfg = reference_config(name);
    cfg.steps = 30;
    const ExperimentRecord rec = run_experiment(cfg);
    EXPECT_EQ(rec.times.size(), 31u);
    EXPECT_EQ(rec.true_states.size(), 31u);
    EXPECT_EQ(rec.measurements.size(), 30u);
    EXPECT_EQ(rec.measurement_errors.size(), 30u);
    EXPECT_EQ(rec.measurement_rmse.size(), 30u);
    ASSERT_EQ(rec.filters.size(), 3u);
    const DiscreteSystem sys = make_system(name, cfg.dt);
    for (const FilterRun& f : rec.filters) {
      ASSERT_FALSE(f.failed()) << to_string(f.id) << ": " << f.failure;
      EXPECT_EQ(f.estimates.size(), 31u);
      EXPECT_EQ(f.rmse.size(), 30u);
      for (const Point& p : f.estimates) EXPECT_LT(sys.state_space->point_residual(p), 1e-9);
    }
    EXPECT_NE(rec.find(FilterId::Ukf), nullptr);
  }
}

TEST(Experiment, SubsetOfFilters) {
  ExperimentConfig cfg = reference_config(SystemName::Car2d);
  cfg.steps = 5;
  const ExperimentRecord rec = run_experiment(cfg, {FilterId::Ekf});
  ASSERT_EQ(rec.filters.size(), 1u);
  EXPECT_EQ(rec.find(FilterId::Ukf), nullptr);
}

TEST(Experiment, SphereAdaptsMeasurementCovarianceOnly) {
  const ExperimentConfig cfg = reference_config(SystemName::Sphere);
  const FilterAlgorithm alg = filter_algorithm(SystemName::Sphere, FilterId::AdaptiveEkf, cfg);
  ASSERT_TRUE(alg.adaptation.has_value());
  EXPECT_TRUE(alg.adaptation->adapt_obs);
  EXPECT_FALSE(alg.adaptation->adapt_process);
  const FilterAlgorithm car = filter_algorithm(SystemName::Car2d, FilterId::AdaptiveEkf, cfg);
  EXPECT_TRUE(car.adaptation->adapt_process);
  EXPECT_FALSE(filter_algorithm(SystemName::Car2d, FilterId::Ukf, cfg).adaptation.has_value());
}

// The filters assume the exact model: no true noise, and filter covariances
// small enough that the sigma-point spread does not bias the UKF.
TEST(Experiment, ZeroNoiseExactModelTracksTruth) {
  for (SystemName name : {SystemName::Car2d, SystemName::Sphere}) {
    ExperimentConfig cfg = noise_free(name);
    cfg.filter_init_cov *= 1e-9;
    cfg.filter_process_cov *= 1e-9;
    cfg.filter_obs_cov *= 1e-8;
    const ExperimentRecord rec = run_experiment(cfg);
    for (const FilterRun& f : rec.filters) {
      ASSERT_FALSE(f.failed()) << to_string(f.id) << ": " << f.failure;
      EXPECT_LT(f.errors.back(), 1e-6) << to_string(name) << " " << to_string(f.id);
    }
  }
}

TEST(Experiment, DeterministicPerSeed) {
  ExperimentConfig cfg = reference_config(SystemName::Car2d);
  cfg.steps = 50;
  const ExperimentRecord a = run_experiment(cfg);
  const ExperimentRecord b = run_experiment(cfg);
  for (std::size_t i = 0; i < a.filters.size(); ++i) {
    EXPECT_EQ(a.filters[i].estimates, b.filters[i].estimates);
    EXPECT_EQ(a.filters[i].rmse, b.filters[i].rmse);
  }
}
