#include "geokalman/cli.hpp"

#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "geokalman/errors.hpp"

namespace geokalman::cli {
namespace {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{"experiment", "steps",       "dt",
                                             "seed",       "alpha",       "filters",
                                             "out",        "adapt-mode",  "sigma-alpha",
                                             "sigma-kappa", "sigma-beta"};
  return keys;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::vector<sim::FilterId> parse_filters(const std::string& text) {
  std::vector<sim::FilterId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const sim::FilterId id = sim::parse_filter_id(item);
    bool seen = false;
    for (sim::FilterId f : out) seen = seen || f == id;
    if (!seen) out.push_back(id);
  }
  if (out.empty()) throw std::invalid_argument("--filters needs at least one filter");
  return out;
}

AdaptationMode parse_adapt_mode(const std::string& text) {
  if (text == "subtract-prior") return AdaptationMode::SubtractPrior;
  if (text == "ema-standard") return AdaptationMode::EmaStandard;
  throw std::invalid_argument("unknown adapt-mode '" + text +
                              "' (expected one of: subtract-prior, ema-standard)");
}

/// Turns every `--set key=value` into `--key value` placed ahead of the
/// remaining arguments, so explicit flags given later take precedence.
std::vector<std::string> expand_overrides(const std::vector<std::string>& args,
                                          std::vector<std::string>& overrides) {
  std::vector<std::string> front;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string assignment;
    if (args[i] == "--set") {
      if (i + 1 >= args.size()) throw UsageError("--set needs a key=value argument");
      assignment = args[++i];
    } else if (args[i].rfind("--set=", 0) == 0) {
      assignment = args[i].substr(6);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--set expects key=value, got '" + assignment + "'");
    }
    std::string key = assignment.substr(0, eq);
    for (char& c : key) c = c == '_' ? '-' : c;
    bool known = false;
    for (const std::string& k : known_keys()) known = known || k == key;
    if (!known) {
      throw UsageError("unknown key '" + key + "' (expected one of: " + join(known_keys()) + ")");
    }
    overrides.push_back(key + "=" + assignment.substr(eq + 1));
    front.push_back("--" + key);
    front.push_back(assignment.substr(eq + 1));
  }
  front.insert(front.end(), rest.begin(), rest.end());
  return front;
}

}  // namespace

CliInvocation parse_args(const std::vector<std::string>& args) {
  CliInvocation inv;
  const std::vector<std::string> expanded = expand_overrides(args, inv.overrides);

  std::string experiment;
  std::string filters = "ekf,ukf,adaptive-ekf";
  std::string adapt_mode = "subtract-prior";
  std::string out_dir = "out";
  if (const char* env = std::getenv("GEOKALMAN_OUT"); env != nullptr && *env != '\0') {
    out_dir = env;
  }

  CLI::App app{"Run a geometric Kalman filtering experiment and write CSV results.",
               "geokalman"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.allow_config_extras(false);
  app.set_config("--config", "", "Flat key=value file; flags override its entries");
  app.add_option("--experiment", experiment, "car2d or sphere");
  app.add_option("--steps", inv.steps, "Number of filter steps")->capture_default_str();
  app.add_option("--dt", inv.dt, "Time step")->capture_default_str();
  app.add_option("--seed", inv.seed, "Random seed")->capture_default_str();
  app.add_option("--alpha", inv.alpha, "Forgetting factor of the adaptive EKF")
      ->capture_default_str();
  app.add_option("--filters", filters, "Comma-separated subset of ekf,ukf,adaptive-ekf")
      ->capture_default_str();
  app.add_option("--out", out_dir, "Output directory (default $GEOKALMAN_OUT or ./out)");
  app.add_option("--adapt-mode", adapt_mode, "subtract-prior or ema-standard")->capture_default_str();
  app.add_option("--sigma-alpha", inv.sigma.alpha, "Sigma-point spread alpha")
      ->capture_default_str();
  app.add_option("--sigma-kappa", inv.sigma.kappa, "Sigma-point kappa")->capture_default_str();
  app.add_option("--sigma-beta", inv.sigma.beta, "Sigma-point beta")->capture_default_str();
  std::vector<std::string> set_placeholder;
  app.add_option("--set", set_placeholder, "Override a key, e.g. --set steps=50")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->configurable(false);

  std::vector<const char*> argv{"geokalman"};
  for (const std::string& a : expanded) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  try {
    if (experiment.empty()) {
      throw std::invalid_argument("--experiment is required (expected one of: car2d, sphere)");
    }
    inv.experiment = sim::parse_system_name(experiment);
    inv.filters = parse_filters(filters);
    inv.adapt_mode = parse_adapt_mode(adapt_mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (inv.steps < 1) throw UsageError("--steps must be at least 1");
  if (!(inv.dt > 0.0)) throw UsageError("--dt must be positive");
  if (!(inv.alpha >= 0.0 && inv.alpha <= 1.0)) throw UsageError("--alpha must lie in [0, 1]");
  inv.out_dir = out_dir;
  if (const CLI::Option* config = app.get_config_ptr(); config->count() > 0) {
    inv.config_file = config->as<std::string>();
  }
  return inv;
}

sim::ExperimentConfig to_experiment_config(const CliInvocation& inv) {
  sim::ExperimentConfig cfg = sim::reference_config(inv.experiment);
  cfg.steps = inv.steps;
  cfg.dt = inv.dt;
  cfg.seed = inv.seed;
  cfg.adapt_alpha = inv.alpha;
  cfg.adapt_mode = inv.adapt_mode;
  cfg.sigma = inv.sigma;
  return cfg;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliInvocation inv;
  sim::ExperimentConfig cfg;
  try {
    inv = parse_args(args);
    cfg = to_experiment_config(inv);
    cfg.validate();
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "geokalman: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "geokalman: " << e.what() << "\n";
    return 2;
  }

  sim::ExperimentRecord record;
  try {
    record = sim::run_experiment(cfg, inv.filters);
    write_outputs(record, inv.out_dir);
  } catch (const std::exception& e) {
    err << "geokalman: " << e.what() << "\n";
    return 1;
  }

  bool any_failed = false;
  const std::string meas = format_number(record.measurement_rmse.back());
  for (const sim::FilterRun& run : record.filters) {
    out << sim::to_string(run.id) << ": ";
    if (run.failed()) {
      any_failed = true;
      out << "failed at step " << *run.failed_step << ": " << run.failure << "\n";
    } else {
      out << "final RMSE " << format_number(run.rmse.back()) << " (measurements " << meas
          << ")\n";
    }
  }
  return any_failed ? 1 : 0;
}

}  // namespace geokalman::cli
