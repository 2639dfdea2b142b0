#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geokalman/filters.hpp"
#include "geokalman/geometry.hpp"
#include "oracles.hpp"

namespace fixtures {

struct Named {
  std::string name;
  geokalman::ManifoldHandle m;
};

/// The seven spaces every conformance check runs over.
inline std::vector<Named> core_manifolds() {
  using namespace geokalman;
  return {{"R3", euclidean(3)},
          {"S2", sphere(2)},
          {"SO3", rotations(3)},
          {"UnitQuaternions", unit_quaternions()},
          {"SE2", special_euclidean(2)},
          {"SE3", special_euclidean(3)},
          {"TS2", tangent_bundle(sphere(2))}};
}

/// Core spaces plus the less common shapes.
inline std::vector<Named> all_manifolds() {
  using namespace geokalman;
  auto out = core_manifolds();
  out.push_back({"R1", euclidean(1)});
  out.push_back({"S3", sphere(3)});
  out.push_back({"SO2", rotations(2)});
  out.push_back({"SO4", rotations(4)});
  out.push_back({"SE4", special_euclidean(4)});
  out.push_back({"R2xS2", product(euclidean(2), sphere(2))});
  out.push_back({"TSO3", tangent_bundle(rotations(3))});
  return out;
}

inline std::vector<Named> groups() {
  using namespace geokalman;
  return {{"SO3", rotations(3)},
          {"UnitQuaternions", unit_quaternions()},
          {"SE2", special_euclidean(2)},
          {"SE3", special_euclidean(3)},
          {"R3", euclidean(3)},
          {"SO4", rotations(4)}};
}

/// Tangent at p with norm exactly `norm` (under the manifold metric).
inline geokalman::Tangent tangent_with_norm(const geokalman::Manifold& m, const geokalman::Point& p,
                                            geokalman::Rng& rng, double norm) {
  geokalman::Tangent x = geokalman::random_tangent(m, p, rng);
  const double n = std::sqrt(m.inner(p, x, x));
  return n > 0.0 ? geokalman::Tangent(x * (norm / n)) : x;
}

/// Linear-Gaussian model wrapped as a geometric system on Euclidean spaces.
inline geokalman::DiscreteSystem linear_system(const oracle::LinearGaussian& s) {
  geokalman::DiscreteSystem sys;
  const int d = static_cast<int>(s.A.rows());
  const int dn = static_cast<int>(s.C.rows());
  sys.state_space = geokalman::euclidean(d);
  sys.obs_space = geokalman::euclidean(dn);
  sys.process_noise_dim = d;
  sys.obs_noise_dim = dn;
  sys.dt = 1.0;
  sys.control = [](double) { return geokalman::Control(); };
  const Eigen::MatrixXd A = s.A;
  const Eigen::MatrixXd C = s.C;
  sys.dynamics = [A](const geokalman::Point& p, const geokalman::Control&,
                     const Eigen::VectorXd& w, double) { return geokalman::Point(A * p + w); };
  sys.measurement = [C](const geokalman::Point& p, const geokalman::Control&,
                        const Eigen::VectorXd& v, double) { return geokalman::Point(C * p + v); };
  return sys;
}

/// Simulated measurements z_1..z_K of a linear-Gaussian model from x0.
inline std::vector<geokalman::Point> linear_measurements(const oracle::LinearGaussian& s,
                                                         const Eigen::VectorXd& x0, int steps,
                                                         std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd lq = s.Q.llt().matrixL();
  const Eigen::MatrixXd lr = s.R.llt().matrixL();
  auto draw = [&](Eigen::Index n) {
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
    return z;
  };
  std::vector<geokalman::Point> out;
  Eigen::VectorXd x = x0;
  for (int k = 0; k < steps; ++k) {
    x = s.A * x + lq * draw(x.size());
    out.push_back(s.C * x + lr * draw(s.C.rows()));
  }
  return out;
}

inline double max_abs(const Eigen::MatrixXd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace fixtures
