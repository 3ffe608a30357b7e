#ifndef SBOLAB_CONFIG_HPP
#define SBOLAB_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbolab/integrate.hpp"
#include "sbolab/model.hpp"

namespace sbolab {

// Run configuration: a nested JSON document.  Every key is optional (defaults
// below), unknown keys are rejected, and parsing reports *all* problems at
// once, each with the dotted path of the offending key.
//
// Schema (defaults in parentheses):
//   grid        { L (100), N (512) }
//   params      { beta (1), rho (1), lambda (1) }
//   init        { u0 {...}, v0 {...} }         field specs; default zero data
//   init_b      { u0 {...}, v0 {...} }         optional second pair (diff runs)
//   horizon     { T (1) }  or  { auto_from_apriori: true, A_s }
//   controls    { rel_tol (1e-8), dt_init (1e-3), dt_min (1e-12),
//                 dt_max (5e-2), cadence (1e-2) }
//   diagnostics { s (1.5), delta (1), eps (0.1), oversample (4) }
//   seed        (0)
//
// Field specs: { family: "gaussian" | "plane_wave" | "random_band_limited"
//                        | "file",
//                amplitude, width, center, wavenumber, band, decay, seed,
//                base_length, path }

struct HorizonSpec {
  bool auto_from_apriori = false;
  double T = 1.0;    // horizon when auto_from_apriori is false
  double a_s = 1.0;  // constant A_s for the (A_s (1+norm))^{-2} horizon
};

struct DiagnosticsSpec {
  double s = 1.5;              // Sobolev index of the monitored pair norm
  double delta = 1.0;          // dispersive-smoothing exponent knob
  double eps = 0.1;            // regularity margin for the smoothing check
  std::size_t oversample = 4;  // grid refinement factor for sup/L^p norms
};

struct RunConfig {
  double L = 100.0;
  std::size_t N = 512;
  SboParams params;
  InitPair init;
  std::optional<InitPair> init_b;
  HorizonSpec horizon;
  StepControls controls;
  DiagnosticsSpec diagnostics;
  std::uint64_t seed = 0;
};

struct ConfigError {
  std::string path;  // dotted key path, e.g. "params.rho"
  std::string message;
};

struct ConfigResult {
  std::optional<RunConfig> config;  // engaged iff errors is empty
  std::vector<ConfigError> errors;
  bool ok() const { return errors.empty(); }
};

// Parses and fully validates; never throws on bad input (all problems are
// collected into `errors`).
ConfigResult parse_config(const std::string& text);

// Canonical emission: every key explicit, keys sorted, numbers round-trip
// exactly.  parse_config(dump_config(c)) reproduces c.
std::string dump_config(const RunConfig& config);

// The time horizon a run should use: horizon.T, or the guaranteed-existence
// time (A_s (1 + ||init||_{H^{s+1/2} x H^s}))^{-2} evaluated on the config's
// own grid when auto_from_apriori is set.
double resolve_horizon(const RunConfig& config);

}  // namespace sbolab

#endif  // SBOLAB_CONFIG_HPP
