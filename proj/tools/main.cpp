#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

struct SubOptions {
  CLI::App* app = nullptr;
  sbolab::cmd::CmdOptions opts;
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt = nullptr;
};

void attach_options(SubOptions& s) {
  s.app->add_option("--config", s.opts.config_path,
                    "JSON run configuration (defaults used when omitted)")
      ->check(CLI::ExistingFile);
  s.app->add_option("--out", s.opts.out_dir,
                    "output directory for artifacts (default: .)");
  s.seed_opt = s.app->add_option("--seed", s.seed_value,
                                 "override the config's base seed");
  s.app->add_flag("--quiet", s.opts.quiet, "suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Pseudospectral evolution and verification lab for a coupled "
      "short-wave / long-wave dispersive system"};
  app.require_subcommand(1);

  SubOptions run, diff_run, convergence, estimates, rescale_check;
  run.app = app.add_subcommand(
      "run", "evolve one configured state; emits diagnostics.csv and "
             "final_snapshot.bin");
  diff_run.app = app.add_subcommand(
      "diff_run", "co-evolve two states and their exact difference; emits "
                  "run_a.csv, run_b.csv, difference.csv, lipschitz.json");
  convergence.app = app.add_subcommand(
      "convergence", "temporal and spatial refinement studies; emits "
                     "temporal.csv and spatial.csv");
  estimates.app = app.add_subcommand(
      "estimates", "randomized commutator-inequality probes; emits "
                   "estimates.json");
  rescale_check.app = app.add_subcommand(
      "rescale_check", "dilation-symmetry checks; emits rescale.csv and "
                       "rescale.json");
  for (SubOptions* s :
       {&run, &diff_run, &convergence, &estimates, &rescale_check}) {
    attach_options(*s);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (SubOptions* s :
         {&run, &diff_run, &convergence, &estimates, &rescale_check}) {
      if (!s->app->parsed()) continue;
      if (s->seed_opt->count() > 0) s->opts.seed = s->seed_value;
      if (s->app == run.app) return sbolab::cmd::cmd_run(s->opts);
      if (s->app == diff_run.app) return sbolab::cmd::cmd_diff_run(s->opts);
      if (s->app == convergence.app) {
        return sbolab::cmd::cmd_convergence(s->opts);
      }
      if (s->app == estimates.app) return sbolab::cmd::cmd_estimates(s->opts);
      return sbolab::cmd::cmd_rescale_check(s->opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  std::cerr << "no subcommand selected\n";
  return 2;
}
