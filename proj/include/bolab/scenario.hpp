#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bolab/evolution.hpp"

namespace bolab {

inline constexpr const char* kVersion = "1.0.0";

struct GridConfig {
  std::size_t n_points = 4096;
  double length = 0.0;               // resolved length
  std::optional<double> length_pi;   // set when the config gave the length in units of pi
};

struct InitialDataConfig {
  std::string kind = "gaussian";  // soliton | gaussian | odd_gaussian | gaussian_derivative | random_localized | file
  double amplitude = 1.0;
  double width = 1.0;
  double x0 = 0.0;
  double c = 0.25;
  std::optional<double> eps;      // with normalize: rescale to ||f|| + ||x f|| = eps
  bool normalize = false;
  double band = 0.0;              // random_localized spectral cut
  std::string path;               // file
};

struct IntegratorConfig {
  std::string name = "ifrk4";
  double dt = 1e-3;
  double t_end = 1.0;
  std::int64_t snapshot_cadence = 100;
  bool enforce_dt_max = true;
};

struct OutputConfig {
  std::string directory = "bo-lab-out";
  std::vector<std::string> formats{"csv", "json"};  // + "bof" for field snapshots
};

struct ConservationDiag {
  double boundary_tol = 1e-8;
  double max_drift = 1e-6;
};

struct IdentityDiag {
  std::vector<std::string> tests{"scaling"};  // scaling | hilbert | moment
  int samples = 20;
  std::vector<double> times{0.0, 1.0, 5.0};
  double eps = 0.1;
  double band = 1.5;  // spectrum |xi| <= 2 band; cubic products stay below the dealias cutoff
  double scaling_tol = 1e-6;
  double hilbert_tol = 1e-10;
  double moment_tol = 1e-8;
  double boundary_tol = 1e-8;
};

struct NormalFormDiag {
  int k_min = 1;
  int k_max = 8;
  double amplitude = 0.05;
  std::vector<double> amplitudes{0.01, 0.02, 0.04, 0.08};
  double nyquist_factor = 12.0;  // per-k grid with xi_nyquist = factor 2^k; 0 keeps grid.length
  double tolerance = 1e-8;
  double slope_tol = 0.1;
  bool include_k0 = true;
};

struct SolitonControl {
  double c = 0.05;
  double exponent = 0.5;
  double tolerance = 0.1;
};

struct DecayDiag {
  std::optional<double> eps;     // defaults to the data functional of the initial field
  double fit_t_min = 1.0;
  std::optional<double> fit_t_max;
  double ratio_limit = 5.0;
  double exponent = -0.5;
  double exponent_tol = 0.1;
  int log_samples = 0;           // linear flow only: log-spaced sample times instead of the cadence
  std::optional<SolitonControl> soliton_control;
};

struct PointwiseDiag {
  int samples = 50;
  std::vector<double> times{1.0, 4.0, 16.0};
  double eps = 0.1;
  double max_constant = 10.0;
  double boundary_tol = 1e-8;
};

struct EnvelopeDiag {
  double delta = 0.1;
  double floor = 1.0;
};

struct BilinearDiag {
  int band_min = 2;
  int band_max = 8;
  int min_gap = 3;
  double packet_width = 4.0;
  double carrier = 1.25;   // packet frequency carrier 2^j
  int shifts = 33;
  double shift_span = 8.0;
  double window = 6.4;     // time window [-window/2^k, window/2^k]
  int time_samples = 64;
  double max_ratio = 10.0;
  double band_factor = 0.70710678118654752;
  double band_factor_tol = 0.3;
};

struct ConvergenceDiag {
  std::vector<int> n_list{4, 5, 6, 7, 8, 9};
  double slope = -1.0;
  double slope_tol = 0.3;
  bool require_monotone = true;
};

struct SolitonDiag {
  double residual_tol = 1e-8;
  double shape_tol = 1e-4;
  double speed_tol = 0.01;
};

struct DiagnosticsConfig {
  std::optional<ConservationDiag> conservation;
  std::optional<IdentityDiag> identity;
  std::optional<NormalFormDiag> normalform;
  std::optional<DecayDiag> decay;
  std::optional<PointwiseDiag> pointwise;
  std::optional<EnvelopeDiag> envelope;
  std::optional<BilinearDiag> bilinear;
  std::optional<ConvergenceDiag> convergence;
  std::optional<SolitonDiag> soliton;
};

struct ScenarioConfig {
  GridConfig grid;
  std::optional<InitialDataConfig> initial_data;
  IntegratorConfig integrator;
  DiagnosticsConfig diagnostics;
  OutputConfig output;
  std::uint64_t seed = 1;
};

// throws ConfigError listing every problem as "path: message", one per line
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
// all fields, defaults filled in, 2-space indent, trailing newline
std::string emit_canonical(const ScenarioConfig& c);

const std::vector<std::string>& subcommands();

struct CheckResult {
  std::string name;
  double value = 0.0;
  std::string relation;  // e.g. "<", "<=", "in"
  double lo = 0.0;       // bound, or interval low end for "in"
  double hi = 0.0;
  bool passed = false;
};

struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  int exit_code = 0;        // 0 ok, 1 a check failed, 2 bad config, 3 divergence
  std::string status;       // "ok" | "checks_failed" | "error" | "diverged"
  std::string message;
  std::vector<CheckResult> checks;
  std::optional<double> last_good_time;
  std::string out_dir;
  double wall_time = 0.0;
};

// runs one scenario, writes outputs and manifest.json into the output directory
RunResult run_scenario(const std::string& subcommand, const ScenarioConfig& cfg,
                       const RunOverrides& ov = {});

// acceptance catalogue: one CLI invocation per criterion
struct AcceptanceCheck {
  int id;
  std::string name;
  std::string subcommand;
  std::string config;       // file name under configs/
  std::string tolerance;
  std::vector<std::string> prefixes;  // manifest checks belonging to this criterion
  bool extended = false;
};
const std::vector<AcceptanceCheck>& acceptance_checks();

}  // namespace bolab
