#ifndef SPINET_TOOLS_COMMANDS_HPP
#define SPINET_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "spinet/device.hpp"
#include "spinet/fvm.hpp"
#include "spinet/model2_elliptic.hpp"

namespace spinet::cli {

enum Exit { ok = 0, invalid_input = 1, not_converged = 2, certificate_violation = 3 };

struct DeviceSelection {
  std::string preset = "three-layer";
  std::string config_path;  ///< takes precedence over preset when set
  double polarization = -1.0;  ///< < 0 keeps the profile value
  bool has_bias = false;
  double bias_V = 0.0;
};

struct RunConfig {
  DeviceSelection device;
  int m = 334;
  double dt = 5e-4;
  double threshold = 1e-8;
  long max_steps = 4'000'000;
  std::string mode = "energy-transport";
  std::string output_dir;  ///< empty: $SPINET_OUTPUT_DIR, then "."
  int history_stride = 1;
  bool quiet = false;
};

struct SweepConfig {
  RunConfig run;
  std::vector<double> p_values{0.0, 0.33, 0.66};
};

struct EntropyCheckConfig {
  EntropyRunOptions run;
  unsigned seed = 1;
  double amplitude = 0.2;
  bool uniform = false;
  std::string output_dir;
};

struct Model2StepConfig {
  std::string input;
  double h = 1e-3;
  double tau_sf = 1.0;
  Model2Options options;
  std::string output_dir;
};

/// Resolved output directory: explicit value, else SPINET_OUTPUT_DIR, else ".".
std::string output_directory(const std::string& explicit_dir);
DeviceProfile resolve_profile(const DeviceSelection& sel);
Mode parse_mode(const std::string& name);

int cmd_simulate(const RunConfig& cfg, std::ostream& err);
int cmd_sweep(const SweepConfig& cfg, std::ostream& err);
int cmd_entropy_check(const EntropyCheckConfig& cfg, std::ostream& err);
int cmd_model2_step(const Model2StepConfig& cfg, std::ostream& err);
int cmd_presets(const std::string& show, std::ostream& out, std::ostream& err);

/// Full command line front end; returns the process exit code.
int run(int argc, char** argv);

}  // namespace spinet::cli

#endif
