// qlimits: quantum-limit sensitivity calculator for a detuned-cavity
// optomechanical displacement detector.
//
// Verbs:
//   sweep        frequency sweep of qcrb / sql / sensitivity curves
//   single-shot  Monte Carlo single-shot estimation experiment
//   verify       run the invariant suite, nonzero exit on failure
//   show-config  print the resolved configuration as JSON

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qlim/config.hpp"
#include "qlim/errors.hpp"
#include "qlim/format.hpp"
#include "qlim/single_shot.hpp"
#include "qlim/sweep.hpp"
#include "qlim/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
  std::string config_path;
  std::string preset_name = "fig3-tuned";
  bool has_detuning = false;
  double detuning_hz = 0.0;
  bool has_seed = false;
  uint64_t seed = 0;
  std::string out_path;
  bool single_sided = false;
  bool svg = false;
};

qlim::RunConfig resolve_config(const CommonOpts& o) {
  qlim::RunConfig c = o.config_path.empty()
                          ? qlim::preset(o.preset_name)
                          : qlim::load_config_file(o.config_path);
  if (o.has_detuning) c.detuning_hz = o.detuning_hz;
  if (o.has_seed) c.seed = o.seed;
  if (!o.out_path.empty()) c.output.path = o.out_path;
  if (o.single_sided) c.output.sided = "single";
  if (o.svg) c.output.svg = true;
  c.validate();
  return c;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--preset", o.preset_name,
                  "built-in preset: fig3-tuned | fig3-detuned");
  cmd->add_option("--detuning-hz", o.detuning_hz, "override detuning [Hz]")
      ->each([&o](const std::string&) { o.has_detuning = true; });
  cmd->add_option("--seed", o.seed, "override RNG seed")
      ->each([&o](const std::string&) { o.has_seed = true; });
}

std::string single_shot_report(const qlim::sshot::SingleShotState& st,
                               const qlim::sshot::SingleShotResult& res,
                               uint64_t seed) {
  std::ostringstream o;
  o << "{\n"
    << "  \"r\": " << qlim::fmt17(st.r) << ",\n"
    << "  \"phi\": " << qlim::fmt17(st.phi) << ",\n"
    << "  \"theta_used\": " << qlim::fmt17(res.theta_used) << ",\n"
    << "  \"x_true\": " << qlim::fmt17(res.x_true) << ",\n"
    << "  \"n_samples\": " << res.n_samples << ",\n"
    << "  \"seed\": " << seed << ",\n"
    << "  \"mse\": " << qlim::fmt17(res.mse) << ",\n"
    << "  \"stderr_mse\": " << qlim::fmt17(res.stderr_mse) << ",\n"
    << "  \"qcrb\": " << qlim::fmt17(res.qcrb) << ",\n"
    << "  \"sigma_xx_analytic\": "
    << qlim::fmt17(qlim::sshot::sigma_xx_analytic(st, res.theta_used)) << "\n"
    << "}\n";
  return o.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-limit calculator for linear continuous measurements"};
  app.require_subcommand(1);

  CommonOpts sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a frequency sweep");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--out", sweep_opts.out_path, "output file path");
  sweep_cmd->add_flag("--single-sided", sweep_opts.single_sided,
                      "single-sided spectral convention (amplitudes x sqrt 2)");
  sweep_cmd->add_flag("--svg", sweep_opts.svg, "also write an SVG chart");

  CommonOpts verify_opts;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the invariant suite");
  add_common(verify_cmd, verify_opts);

  CommonOpts show_opts;
  CLI::App* show_cmd =
      app.add_subcommand("show-config", "print the resolved configuration");
  add_common(show_cmd, show_opts);

  double ss_r = 0.0, ss_phi = 0.0, ss_xtrue = 0.0;
  std::string ss_theta = "opt";
  uint64_t ss_n = 1000000, ss_seed = 20250101;
  std::string ss_out;
  CLI::App* ss_cmd =
      app.add_subcommand("single-shot", "single-shot Monte Carlo estimation");
  ss_cmd->add_option("--r", ss_r, "squeeze factor (>= 0)");
  ss_cmd->add_option("--phi", ss_phi, "squeeze angle [rad]");
  ss_cmd->add_option("--theta", ss_theta, "readout angle [rad], or \"opt\"");
  ss_cmd->add_option("--x-true", ss_xtrue, "true signal value");
  ss_cmd->add_option("--n-samples", ss_n, "number of samples (>= 2)");
  ss_cmd->add_option("--seed", ss_seed, "RNG seed");
  ss_cmd->add_option("--out", ss_out, "write the JSON report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints help or the parse error
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep_cmd) {
      const qlim::RunConfig cfg = resolve_config(sweep_opts);
      const auto rows = qlim::run_sweep(cfg);
      const auto files = qlim::emit(rows, cfg);
      for (const auto& p : files) std::cout << "wrote " << p << "\n";
      return kExitOk;
    }
    if (*verify_cmd) {
      const qlim::RunConfig cfg = resolve_config(verify_opts);
      const qlim::VerificationReport rep = qlim::run_verification(cfg);
      std::cout << qlim::render_report(rep);
      return rep.all_pass() ? kExitOk : kExitVerifyFail;
    }
    if (*show_cmd) {
      const qlim::RunConfig cfg = resolve_config(show_opts);
      std::cout << qlim::config_to_json(cfg);
      return kExitOk;
    }
    if (*ss_cmd) {
      const auto st = qlim::sshot::covariance(ss_r, ss_phi);
      double theta;
      if (ss_theta == "opt") {
        theta = qlim::sshot::optimal_angle(st);
      } else {
        try {
          theta = std::stod(ss_theta);
        } catch (const std::exception&) {
          throw qlim::ConfigError("--theta must be a number or \"opt\"");
        }
      }
      const auto res =
          qlim::sshot::mc_estimate(st, theta, ss_xtrue, ss_n, ss_seed);
      const std::string report = single_shot_report(st, res, ss_seed);
      std::cout << report;
      if (!ss_out.empty()) {
        std::ofstream out(ss_out, std::ios::binary);
        if (!out) throw qlim::IoError("cannot open output file: " + ss_out);
        out << report;
      }
      return kExitOk;
    }
  } catch (const qlim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qlim::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  }
  return kExitOk;
}
