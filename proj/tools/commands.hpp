#ifndef SBOLAB_TOOLS_COMMANDS_HPP
#define SBOLAB_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace sbolab::cmd {

// Exit codes: 0 all assertions passed, 1 an assertion or run failed,
// 2 configuration problem.  Unexpected exceptions surface as 3 in main.

struct CmdOptions {
  std::string config_path;           // empty: built-in defaults
  std::string out_dir = ".";         // artifact directory (created if absent)
  std::optional<std::uint64_t> seed; // overrides the config seed
  bool quiet = false;                // suppress stdout progress lines
};

// Evolve one configured state; emits diagnostics.csv + final_snapshot.bin.
int cmd_run(const CmdOptions& opt);

// Co-evolve the config's init/init_b pair with the exact difference system;
// emits run_a.csv, run_b.csv, difference.csv, lipschitz.json.
int cmd_diff_run(const CmdOptions& opt);

// Built-in refinement studies; emits temporal.csv (4th-order slope) and
// spatial.csv (error collapse under N doubling).
int cmd_convergence(const CmdOptions& opt);

// Runs the full commutator-inequality probe set; emits estimates.json
// (byte-identical across repeats for one seed).
int cmd_estimates(const CmdOptions& opt);

// Dilation-symmetry checks: L^2 scaling identity across a lambda ladder,
// spec-level roundtrip exactness, choose_lambda verification; emits
// rescale.csv + rescale.json.
int cmd_rescale_check(const CmdOptions& opt);

}  // namespace sbolab::cmd

#endif  // SBOLAB_TOOLS_COMMANDS_HPP
