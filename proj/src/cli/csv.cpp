#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "geokalman/cli.hpp"
#include "geokalman/errors.hpp"

namespace geokalman::cli {
namespace {

namespace fs = std::filesystem;

int position_size(sim::SystemName name) { return name == sim::SystemName::Car2d ? 2 : 3; }

const char* axis(int i) {
  static const char* names[] = {"x", "y", "z"};
  return names[i];
}

std::string block_prefix(sim::FilterId id) {
  switch (id) {
    case sim::FilterId::Ekf: return "ekf";
    case sim::FilterId::Ukf: return "ukf";
    case sim::FilterId::AdaptiveEkf: return "adaptive_ekf";
  }
  return "?";
}

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open " + path.string() + " for writing");
  file << content;
  file.close();
  if (!file) throw Error("failed writing " + path.string());
}

void append_position(std::ostringstream& row, const Point* p, int size) {
  for (int i = 0; i < size; ++i) {
    row << ',' << format_number(p != nullptr ? (*p)[i] : std::nan(""));
  }
}

/// Filters present in the record, in trajectory-file order.
std::vector<const sim::FilterRun*> ordered(const sim::ExperimentRecord& record,
                                           std::initializer_list<sim::FilterId> order) {
  std::vector<const sim::FilterRun*> out;
  for (sim::FilterId id : order) {
    if (const sim::FilterRun* run = record.find(id)) out.push_back(run);
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string errors_header(const sim::ExperimentRecord& record) {
  std::string header = "times,measurement_errors";
  for (const sim::FilterRun* run :
       ordered(record, {sim::FilterId::Ukf, sim::FilterId::Ekf, sim::FilterId::AdaptiveEkf})) {
    switch (run->id) {
      case sim::FilterId::Ukf: header += ",error_UKF"; break;
      case sim::FilterId::Ekf: header += ",error_EKF"; break;
      case sim::FilterId::AdaptiveEkf:
        header += record.config.name == sim::SystemName::Car2d ? ",error_EKF adaptive α="
                                                                : ",error_EKF adaptive M α=";
        header += shortest(record.config.adapt_alpha);
        break;
    }
  }
  return header;
}

std::vector<fs::path> write_outputs(const sim::ExperimentRecord& record, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());

  const std::string name = sim::to_string(record.config.name);
  const int size = position_size(record.config.name);
  const std::size_t steps = record.measurements.size();

  // Trajectory: true, EKF, UKF, adaptive EKF.
  const auto traj_runs =
      ordered(record, {sim::FilterId::Ekf, sim::FilterId::Ukf, sim::FilterId::AdaptiveEkf});
  std::ostringstream traj;
  traj << "times";
  for (int i = 0; i < size; ++i) traj << ",true_" << axis(i);
  for (const sim::FilterRun* run : traj_runs) {
    for (int i = 0; i < size; ++i) traj << ',' << block_prefix(run->id) << '_' << axis(i);
  }
  traj << '\n';
  for (std::size_t n = 0; n <= steps; ++n) {
    traj << format_number(record.times[n]);
    append_position(traj, &record.true_states[n], size);
    for (const sim::FilterRun* run : traj_runs) {
      append_position(traj, n < run->estimates.size() ? &run->estimates[n] : nullptr, size);
    }
    traj << '\n';
  }

  std::ostringstream meas;
  meas << "times";
  for (int i = 0; i < size; ++i) meas << ',' << axis(i);
  meas << '\n';
  for (std::size_t n = 1; n <= steps; ++n) {
    meas << format_number(record.times[n]);
    append_position(meas, &record.measurements[n - 1], size);
    meas << '\n';
  }

  // Errors: running RMSE per step, UKF before EKF.
  const auto err_runs =
      ordered(record, {sim::FilterId::Ukf, sim::FilterId::Ekf, sim::FilterId::AdaptiveEkf});
  std::ostringstream errs;
  errs << errors_header(record) << '\n';
  for (std::size_t n = 1; n <= steps; ++n) {
    errs << format_number(record.times[n]) << ',' << format_number(record.measurement_rmse[n - 1]);
    for (const sim::FilterRun* run : err_runs) {
      errs << ',' << format_number(n <= run->rmse.size() ? run->rmse[n - 1] : std::nan(""));
    }
    errs << '\n';
  }

  const std::vector<fs::path> paths{out_dir / (name + "_trajectory.csv"),
                                    out_dir / (name + "_measurements.csv"),
                                    out_dir / (name + "_errors.csv")};
  write_file(paths[0], traj.str());
  write_file(paths[1], meas.str());
  write_file(paths[2], errs.str());
  return paths;
}

}  // namespace geokalman::cli
