#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geokalman/sim.hpp"

namespace geokalman::cli {

/// Bad command line or configuration file. Maps to exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// --help was given; what() holds the help text. Maps to exit code 0.
class HelpRequested : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct CliInvocation {
  sim::SystemName experiment = sim::SystemName::Car2d;
  std::vector<sim::FilterId> filters = sim::all_filters();
  int steps = 200;
  double dt = 0.01;
  std::uint64_t seed = 42;
  double alpha = 0.99;
  AdaptationMode adapt_mode = AdaptationMode::SubtractPrior;
  SigmaConfig sigma;
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> config_file;
  /// key=value pairs given through --set, in order.
  std::vector<std::string> overrides;
};

/// Parses arguments (without the program name). Precedence, lowest first:
/// built-in defaults, GEOKALMAN_OUT (out dir only), --config file, --set
/// key=value, explicit flags.
CliInvocation parse_args(const std::vector<std::string>& args);

sim::ExperimentConfig to_experiment_config(const CliInvocation& inv);

/// Shortest-safe decimal form: 17 significant digits, "nan" for NaN.
std::string format_number(double x);

/// Header line of the errors file, e.g. "times,measurement_errors,error_UKF,...".
std::string errors_header(const sim::ExperimentRecord& record);

/// Writes <name>_trajectory.csv, <name>_measurements.csv and <name>_errors.csv
/// into out_dir (created if needed) and returns their paths. Throws
/// geokalman::Error naming the path on I/O failure.
std::vector<std::filesystem::path> write_outputs(const sim::ExperimentRecord& record,
                                                 const std::filesystem::path& out_dir);

/// Full command: parse, run, write, summarize. Returns 0 on success, 1 when the
/// experiment or a filter failed or outputs could not be written, 2 on usage
/// errors.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geokalman::cli
