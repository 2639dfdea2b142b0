// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "geokalman/cli.hpp"
#include "geokalman/filters.hpp"
#include "geokalman/linalg.hpp"
#include "geokalman/sim.hpp"

using namespace geokalman;
using fixtures::max_abs;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kKalmanTol = 1e-6;
constexpr double kExpLogTol = 1e-8;
constexpr double kMembershipTol = 1e-9;
constexpr double kIsometryTol = 1e-9;
constexpr double kGroupTol = 1e-12;
constexpr double kEigenTol = 1e-10;
constexpr double kTensorOdeTol = 1e-6;
constexpr double kVectorOdeTol = 1e-6;
constexpr double kRk4RatioLo = 12.0;
constexpr double kRk4RatioHi = 20.0;
constexpr double kBarycenterTol = 1e-8;
constexpr double kWeightSumTol = 1e-12;
constexpr double kSlopeLo = 1.8;
constexpr double kSlopeHi = 2.2;
constexpr double kAsymmetryTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.size() < 400) detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

bool report(int id, const char* title, double budget_s, const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = check();
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0.0) out.require(secs < budget_s, "runtime " + num(secs) + " s");
  std::printf("criterion %d %s: %s (%.2f s)%s%s\n", id, title, out.pass ? "PASS" : "FAIL", secs,
              out.detail.empty() ? "" : " - ", out.detail.c_str());
  std::fflush(stdout);
  return out.pass;
}

FilterState init_state(const Point& mean, const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                       const Eigen::MatrixXd& R) {
  return FilterState{{mean, P}, Q, R, 0};
}

// ---------------------------------------------------------------------------

Outcome flat_space_oracle() {
  Outcome out;
  std::mt19937_64 rng(2024);
  const oracle::LinearGaussian model = oracle::random_stable_system(3, 2, rng);
  const Eigen::VectorXd x0 = Eigen::Vector3d(1.0, -0.5, 0.25);
  const Eigen::MatrixXd P0 = oracle::random_spd(3, rng);
  const auto z = fixtures::linear_measurements(model, x0, 50, rng);

  std::vector<oracle::Moments> ref{{x0, P0}};
  for (const Point& zk : z) {
    ref.push_back(oracle::kf_update(model, oracle::kf_predict(model, ref.back()), zk));
  }

  const DiscreteSystem sys = fixtures::linear_system(model);
  for (FilterKind kind : {FilterKind::Ekf, FilterKind::Ukf}) {
    FilterAlgorithm alg;
    alg.kind = kind;
    const auto rec = run_filter(sys, alg, init_state(x0, P0, model.Q, model.R), z);
    double worst = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      worst = std::max({worst, max_abs(rec[k].updated.belief.mean - ref[k].x),
                        max_abs(rec[k].updated.belief.cov - ref[k].P)});
    }
    const char* name = kind == FilterKind::Ekf ? "EKF" : "UKF";
    out.require(worst <= kKalmanTol, std::string(name) + " deviation " + num(worst));
  }
  return out;
}

Outcome geometry_conformance() {
  Outcome out;
  for (const auto& [name, m] : fixtures::core_manifolds()) {
    Rng rng(100);
    double inv = 0.0, member = 0.0, iso = 0.0, group = 0.0;
    const bool check_iso =
        m->connection() == ConnectionKind::LeviCivita || m->connection() == ConnectionKind::Flat;
    for (int i = 0; i < 100; ++i) {
      const Point p = m->random_point(rng);
      const Tangent x = fixtures::tangent_with_norm(*m, p, rng, 1.0);
      const Point q = m->exp(p, random_tangent(*m, p, rng, 0.8));

      const Point ex = m->exp(p, x);
      const Tangent lq = m->log(p, q);
      inv = std::max({inv, max_abs(m->log(p, ex) - x), max_abs(m->exp(p, lq) - q)});
      member = std::max({member, m->point_residual(ex), m->point_residual(q),
                         m->tangent_residual(p, lq), m->tangent_residual(p, x)});

      const Tangent y = random_tangent(*m, p, rng);
      const Tangent ty = m->parallel_transport(p, x, y);
      member = std::max(member, m->tangent_residual(ex, ty));
      if (check_iso) {
        iso = std::max(iso, std::abs(m->inner(ex, ty, ty) - m->inner(p, y, y)));
      }
      if (m->has_group()) {
        const Point e = m->identity();
        group = std::max({group,
                          max_abs(m->compose(m->compose(p, q), ex) - m->compose(p, m->compose(q, ex))),
                          max_abs(m->compose(p, e) - p), max_abs(m->compose(e, p) - p),
                          max_abs(m->compose(p, m->inverse(p)) - e),
                          max_abs(m->compose(m->inverse(p), p) - e)});
      }
    }
    out.require(inv <= kExpLogTol, name + " exp/log " + num(inv));
    out.require(member <= kMembershipTol, name + " membership " + num(member));
    out.require(iso <= kIsometryTol, name + " isometry " + num(iso));
    out.require(group <= kGroupTol, name + " group axioms " + num(group));
  }
  return out;
}

Outcome covariance_transport() {
  Outcome out;
  for (const ManifoldHandle& m : {sphere(2), rotations(3)}) {
    Rng rng(300);
    double eig_err = 0.0, ode_err = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Point p = m->random_point(rng);
      const Tangent d = random_tangent(*m, p, rng, 0.8);
      const Eigen::MatrixXd P = oracle::random_spd(m->dim(), rng);
      const Eigen::MatrixXd moved = transport_covariance(*m, p, m->exp(p, d), P);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> a(P), b(moved);
      eig_err = std::max(eig_err, max_abs(a.eigenvalues() - b.eigenvalues()));

      const NormalChart chart(m, m->exp(p, 0.5 * d));
      const Eigen::MatrixXd ode =
          transport_tensor_ode(chart, embedded_levi_civita(chart), p, d, P, 100);
      ode_err = std::max(ode_err, max_abs(moved - ode));
    }
    out.require(eig_err <= kEigenTol, m->name() + " eigenvalues " + num(eig_err));
    out.require(ode_err <= kTensorOdeTol, m->name() + " tensor ODE " + num(ode_err));
  }
  return out;
}

Outcome vector_transport_ode() {
  Outcome out;
  for (const ManifoldHandle& m : {sphere(2), rotations(3)}) {
    Rng rng(400);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Point p = m->random_point(rng);
      const NormalChart chart(m, m->exp(p, random_tangent(*m, p, rng, 0.3)));
      const Tangent d = random_tangent(*m, p, rng, 0.8);
      const Tangent x = random_tangent(*m, p, rng);
      const Tangent got = parallel_transport_ode(chart, embedded_levi_civita(chart), p, d, x, 100);
      worst = std::max(worst, max_abs(got - m->parallel_transport(p, d, x)));
    }
    out.require(worst <= kVectorOdeTol, m->name() + " closed-form gap " + num(worst));

    // Step-halving ratios along one long geodesic, where truncation error
    // dominates the finite-difference Christoffel symbols.
    const Point p = m->random_point(rng);
    const NormalChart chart(m, p);
    const ChristoffelField gamma = embedded_levi_civita(chart);
    const Tangent d = fixtures::tangent_with_norm(*m, p, rng, 1.5);
    const Tangent x = random_tangent(*m, p, rng);
    const Tangent exact = m->parallel_transport(p, d, x);
    double prev = 0.0;
    for (int steps : {8, 16, 32}) {
      const double err = (parallel_transport_ode(chart, gamma, p, d, x, steps) - exact).norm();
      if (prev > 0.0) {
        const double ratio = prev / err;
        out.require(ratio >= kRk4RatioLo && ratio <= kRk4RatioHi,
                    m->name() + " ratio at " + std::to_string(steps) + " steps " + num(ratio));
      }
      prev = err;
    }
  }
  return out;
}

Outcome experiment_reproduction() {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / "geokalman_acceptance_5";
  for (sim::SystemName name : {sim::SystemName::Car2d, sim::SystemName::Sphere}) {
    int violations = 0;
    std::string first;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      sim::ExperimentConfig cfg = sim::reference_config(name);
      cfg.seed = seed;
      const sim::ExperimentRecord rec = sim::run_experiment(cfg);
      const double meas = rec.measurement_rmse.back();
      for (const sim::FilterRun& f : rec.filters) {
        const bool ok = !f.failed() && f.rmse.back() < meas;
        if (!ok) {
          ++violations;
          if (first.empty()) {
            first = "seed " + std::to_string(seed) + " " + sim::to_string(f.id) + " " +
                    (f.failed() ? "failed" : num(f.rmse.back())) + " vs measurements " + num(meas);
          }
        }
      }
      if (seed == 1) {
        const auto paths = cli::write_outputs(rec, dir);
        const std::size_t width = name == sim::SystemName::Car2d ? 9 : 13;
        std::ifstream traj(paths[0]);
        std::size_t rows = 0;
        bool widths_ok = true;
        for (std::string line; std::getline(traj, line); ++rows) {
          widths_ok &= static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1 == width;
        }
        out.require(rows == 202 && widths_ok, sim::to_string(name) + " trajectory shape");
        std::ifstream errs(paths[2]);
        std::string header;
        std::getline(errs, header);
        const std::string expected =
            name == sim::SystemName::Car2d
                ? "times,measurement_errors,error_UKF,error_EKF,error_EKF adaptive α=0.99"
                : "times,measurement_errors,error_UKF,error_EKF,error_EKF adaptive M α=0.99";
        out.require(header == expected, sim::to_string(name) + " errors header");
      }
    }
    out.require(violations == 0, sim::to_string(name) + ": " + std::to_string(violations) +
                                     "/30 filter runs not below measurement RMSE, e.g. " + first);
  }
  fs::remove_all(dir);
  return out;
}

Outcome sigma_round_trip() {
  Outcome out;
  for (const ManifoldHandle& m : {euclidean(3), sphere(2), special_euclidean(2)}) {
    Rng rng(600);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const GaussianBelief b{m->random_point(rng), 0.05 * oracle::random_spd(m->dim(), rng)};
      const SigmaPoints sp = sigma_points(*m, b, SigmaConfig{});
      const Point c = exponential_barycenter(*m, sp.points, sp.mean_weights, sp.points[0]);
      worst = std::max(worst, distance(*m, c, b.mean));
    }
    out.require(worst <= kBarycenterTol, m->name() + " barycenter " + num(worst));
  }
  std::mt19937_64 rng(601);
  std::uniform_real_distribution<double> unif(0.05, 3.0);
  double worst = 0.0;
  const auto r3 = euclidean(3);
  for (int i = 0; i < 20; ++i) {
    const SigmaConfig cfg{unif(rng), unif(rng) - 0.05, unif(rng)};
    const SigmaPoints sp =
        sigma_points(*r3, {Eigen::Vector3d::Zero(), Eigen::Matrix3d::Identity()}, cfg);
    worst = std::max(worst, std::abs(sp.mean_weights.sum() - 1.0));
  }
  out.require(worst <= kWeightSumTol, "weight sum " + num(worst));
  return out;
}

Outcome jacobian_convergence() {
  Outcome out;
  struct Case {
    std::string name;
    ManifoldHandle in, out;
    PointMap fn;
    Point p;
    Eigen::MatrixXd exact;
  };
  std::vector<Case> cases;
  {
    const Point p = Eigen::Vector2d(0.7, -0.4);
    Eigen::MatrixXd j(2, 2);
    j << std::cos(p[0]) * p[1], std::sin(p[0]), 3 * p[0] * p[0], std::exp(p[1]);
    cases.push_back({"trig-poly R2->R2", euclidean(2), euclidean(2),
                     [](const Point& x) {
                       return Point(Eigen::Vector2d(std::sin(x[0]) * x[1],
                                                    std::exp(x[1]) + x[0] * x[0] * x[0]));
                     },
                     p, j});
  }
  {
    const Point p = Eigen::Vector3d(0.2, 1.1, -0.6);
    Eigen::MatrixXd j(1, 3);
    j << std::exp(p[0]) * std::sin(p[1]), std::exp(p[0]) * std::cos(p[1]), 3 * p[2] * p[2];
    cases.push_back({"scalar R3->R1", euclidean(3), euclidean(1),
                     [](const Point& x) {
                       return Point(Eigen::VectorXd::Constant(
                           1, std::exp(x[0]) * std::sin(x[1]) + x[2] * x[2] * x[2]));
                     },
                     p, j});
  }
  {
    // Inclusion S^2 -> R^3: the differential in normal coordinates is the basis.
    const auto s2 = sphere(2);
    const Point p = Eigen::Vector3d(0.48, 0.6, 0.64);
    cases.push_back({"inclusion S2->R3", s2, euclidean(3), [](const Point& x) { return x; }, p,
                     s2->basis_at(p).vectors});
  }
  for (const Case& c : cases) {
    std::vector<double> lh, le;
    for (double h : {4e-2, 2e-2, 1e-2, 5e-3}) {
      lh.push_back(std::log(h));
      le.push_back(std::log(max_abs(chart_jacobian(*c.in, *c.out, c.fn, c.p, h) - c.exact)));
    }
    const double mh = std::accumulate(lh.begin(), lh.end(), 0.0) / lh.size();
    const double me = std::accumulate(le.begin(), le.end(), 0.0) / le.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lh.size(); ++i) {
      sxy += (lh[i] - mh) * (le[i] - me);
      sxx += (lh[i] - mh) * (lh[i] - mh);
    }
    const double slope = sxy / sxx;
    out.require(slope >= kSlopeLo && slope <= kSlopeHi, c.name + " slope " + num(slope));
  }
  return out;
}

bool symmetric_psd(const Eigen::MatrixXd& a) {
  if (asymmetry(a) > kAsymmetryTol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= 0.0;
}

Outcome adaptation_fixed_points() {
  Outcome out;
  sim::ExperimentConfig cfg = sim::reference_config(sim::SystemName::Car2d);
  const DiscreteSystem sys = sim::car2d_system(cfg.dt);
  const sim::Trajectory traj = sim::simulate(sys, cfg);
  const FilterState init = init_state(sim::initial_state(cfg.name), cfg.filter_init_cov,
                                      cfg.filter_process_cov, cfg.filter_obs_cov);

  cfg.adapt_alpha = 1.0;
  const auto frozen = run_filter(
      sys, sim::filter_algorithm(cfg.name, sim::FilterId::AdaptiveEkf, cfg), init, traj.measurements);
  bool unchanged = frozen.size() == traj.measurements.size() + 1;
  for (const StepRecord& r : frozen) {
    unchanged &= r.updated.obs_cov == init.obs_cov && r.updated.process_cov == init.process_cov;
  }
  out.require(unchanged, "alpha = 1 changed R or Q");

  cfg.adapt_alpha = 0.99;
  const auto adapted = run_filter(
      sys, sim::filter_algorithm(cfg.name, sim::FilterId::AdaptiveEkf, cfg), init, traj.measurements);
  int bad = 0;
  for (const StepRecord& r : adapted) {
    bad += !symmetric_psd(r.updated.obs_cov) + !symmetric_psd(r.updated.process_cov);
  }
  out.require(adapted.size() == 201, "adaptive run length " + std::to_string(adapted.size()));
  out.require(bad == 0, std::to_string(bad) + " adapted matrices not symmetric PSD");
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome out;
  const fs::path a = fs::temp_directory_path() / "geokalman_acceptance_9a";
  const fs::path b = fs::temp_directory_path() / "geokalman_acceptance_9b";
  for (const char* name : {"car2d", "sphere"}) {
    std::ostringstream sink;
    for (const fs::path& dir : {a, b}) {
      const int code = cli::run_main({"--experiment", name, "--seed", "3", "--out", dir.string()},
                                     sink, sink);
      out.require(code == 0, std::string(name) + " exit code " + std::to_string(code));
    }
    for (const char* kind : {"_trajectory.csv", "_measurements.csv", "_errors.csv"}) {
      const std::string file = std::string(name) + kind;
      const std::string x = slurp(a / file);
      out.require(!x.empty() && x == slurp(b / file), file + " differs");
    }
  }
  fs::remove_all(a);
  fs::remove_all(b);
  return out;
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, "flat-space Kalman oracle", 1.0, flat_space_oracle);
  ok &= report(2, "geometry conformance", 5.0, geometry_conformance);
  ok &= report(3, "covariance transport vs tensor ODE", 5.0, covariance_transport);
  ok &= report(4, "vector transport ODE and RK4 order", 5.0, vector_transport_ode);
  ok &= report(5, "experiment reproduction", 30.0, experiment_reproduction);
  ok &= report(6, "sigma-point round trip", 2.0, sigma_round_trip);
  ok &= report(7, "Jacobian convergence order", 2.0, jacobian_convergence);
  ok &= report(8, "adaptation fixed points", 2.0, adaptation_fixed_points);
  ok &= report(9, "CSV determinism", 0.0, determinism);
  return ok ? 0 : 1;
}
