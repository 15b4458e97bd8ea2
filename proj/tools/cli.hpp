#pragma once

// Batch front-end shared by the `bianchi` executable and the tests.

#include <iosfwd>
#include <string>
#include <vector>

#include "bianchi/eisenstein.hpp"
#include "bianchi/exponents.hpp"

namespace bianchi::cli {

enum class Format { csv, json };

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 2,
  exit_window = 3,
  exit_nonconvergence = 4,
  exit_verification = 5,
};

/// 12 log-spaced values from 20 to 200
std::vector<double> default_supnorm_t_grid();
/// 0.5, 1, ..., 100
std::vector<double> default_scattering_t_grid();

struct RunConfig {
  int field_D = -1;
  double precision_target = 1e-10;
  double tail_tolerance = 1e-13;

  double t = 1.0;
  std::vector<HyperbolicPoint> points{{0.1, 0.2, 1.0}};

  std::vector<double> supnorm_t_grid = default_supnorm_t_grid();
  int supnorm_n = 10;
  double box[6] = {-0.5, 0.5, -0.5, 0.5, 0.8, 2.0};
  bool resolve = true;
  int polish_starts = 48;
  double supnorm_max_exponent = 1.1;
  double supnorm_max_shift = 0.05;

  LPolicy policy{LPolicyKind::glh, 0.001};
  double eps = 0.1;
  double density_exponent = 2.0;
  std::vector<double> t_f_grid{50, 100, 200, 400};
  double t_k = 1.0;
  double slope_band[2] = {-1.7, -1.3};
  double subconvexity_band[2] = {0.115, 0.135};

  int automorphy_samples = 50;
  double automorphy_t_max = 20.0;
  unsigned long long seed = 20240611ULL;
  std::vector<double> scattering_t_grid = default_scattering_t_grid();

  std::string input;

  std::string out_dir = ".";
  Format format = Format::csv;
  int threads = 1;
};

/// Reads `key = value` lines under `[section]` headers. Unknown keys and
/// malformed values raise ErrorCode::usage.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::istream& in);

/// Checks the config against the preconditions of the modules it feeds.
void validate(const RunConfig& config);

/// Runs the command line; outputs go to files under --out and a short log to
/// `out`, errors as one JSON object per line to `err`. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 17 significant digits
std::string format_double(double v);

}  // namespace bianchi::cli
