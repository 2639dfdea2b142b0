#include <cmath>
#include <stdexcept>
#include <utility>

#include "geokalman/errors.hpp"
#include "geokalman/filters.hpp"

namespace geokalman {

FilterRunResult run_filter_partial(const DiscreteSystem& sys, const FilterAlgorithm& algorithm,
                                   const FilterState& init, const std::vector<Point>& measurements,
                                   const std::vector<Control>& controls) {
  DiscreteSystem local = sys;
  if (!controls.empty()) {
    if (controls.size() != measurements.size() + 1) {
      throw std::invalid_argument("run_filter: controls must hold one entry per time step q_0..q_K");
    }
    const double dt = sys.dt;
    local.control = [&controls, dt](double t) {
      const auto k = static_cast<std::size_t>(std::llround(t / dt));
      return controls.at(k);
    };
  }

  FilterRunResult result;
  std::vector<StepRecord>& records = result.records;
  records.reserve(measurements.size() + 1);
  records.push_back({init, init});
  FilterState current = init;

  for (std::size_t k = 0; k < measurements.size(); ++k) {
    const int n = current.step + 1;
    try {
      Prediction pred = algorithm.kind == FilterKind::Ekf
                            ? ekf_predict(local, current, algorithm.jacobian_step)
                            : ukf_predict(local, current, algorithm.sigma, algorithm.jacobian_step);
      Update upd =
          algorithm.kind == FilterKind::Ekf
              ? ekf_update(local, pred.state, measurements[k], algorithm.model,
                           algorithm.jacobian_step)
              : ukf_update(local, pred.state, measurements[k], algorithm.sigma,
                           algorithm.jacobian_step);

      if (algorithm.adaptation) {
        const AdaptationSettings& a = *algorithm.adaptation;
        const Eigen::MatrixXd no_l;
        try {
          const AdaptedNoise adapted =
              adapt_noise(upd.state, upd.residual, upd.S, upd.K, a.adapt_process ? pred.L : no_l,
                          upd.W, a.alpha, a.mode);
          if (a.adapt_obs) upd.state.obs_cov = adapted.obs_cov;
          if (a.adapt_process) upd.state.process_cov = adapted.process_cov;
        } catch (const AdaptationNotApplicable&) {
          // Keep the previous covariances.
        }
      }

      records.push_back({pred.state, upd.state});
      current = upd.state;
    } catch (const std::exception& e) {
      result.failed_step = n;
      result.failure = e.what();
      break;
    }
  }
  return result;
}

std::vector<StepRecord> run_filter(const DiscreteSystem& sys, const FilterAlgorithm& algorithm,
                                   const FilterState& init, const std::vector<Point>& measurements,
                                   const std::vector<Control>& controls) {
  FilterRunResult result = run_filter_partial(sys, algorithm, init, measurements, controls);
  if (result.failed_step) throw FilterStepError(*result.failed_step, result.failure);
  return std::move(result.records);
}

}  // namespace geokalman
