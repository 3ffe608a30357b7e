#ifndef SBOLAB_INTEGRATE_HPP
#define SBOLAB_INTEGRATE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "sbolab/model.hpp"

namespace sbolab {

// Time stepping: integrating-factor RK4 in Fourier coefficients.  The stiff
// linear flow (Schrodinger dispersion for u, the |k|-smoothing wave for v) is
// applied exactly through unimodular diagonal propagators; classical RK4
// handles only the dealiased nonlinear terms.  Adaptive step size control
// uses step doubling: one step of size dt is compared against two steps of
// size dt/2, the relative gap drives accept/reject and the next proposal,
// and the fine solution is kept.

struct StepControls {
  double dt_init = 1e-3;        // first attempted step
  double rel_tol = 1e-8;        // accept when the doubling error is below this
  double dt_min = 1e-12;        // reject below this -> step_underflow
  double dt_max = 5e-2;         // never propose more than this
  double safety = 0.9;          // shrink factor in the proposal
  double cadence = 1e-2;        // spacing of recorded samples (landed exactly)
  double blowup_ceiling = 1e6;  // abort when the smoothness norm passes this
  std::size_t max_steps = 10'000'000;  // hard safety valve (throws if hit)
};

void validate(const StepControls& c);

enum class RunStatus {
  completed,       // reached the final time
  blowup_aborted,  // smoothness norm exceeded the ceiling
  step_underflow,  // error control pushed dt below dt_min
};

const char* to_string(RunStatus s);

struct Trajectory {
  // States at t = 0, cadence, 2*cadence, ..., T (the last sample sits at T
  // even when T is not a cadence multiple).  Sample times are stamped
  // exactly.  On an aborted run the recorded prefix is kept.
  std::vector<SboState> samples;
  RunStatus status = RunStatus::completed;
  double end_time = 0.0;  // time actually reached
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
  double final_dt = 0.0;  // last accepted step size
};

// Diagonal phases of the exact linear flow over time h, in coefficient
// storage order.  u_phase[i] = exp(-i k^2 h); v_phase[i] = exp(i k|k| h)
// with k|k| taken as 0 at the Nyquist index.  Both are unimodular and
// v_phase is real at Nyquist, so real fields stay real.
void linear_phases(const SpectralGrid& g, double h, std::vector<cplx>& u_phase,
                   std::vector<cplx>& v_phase);

// One integrating-factor RK4 step of size dt (no error control).
SboState step_once(const SboState& s, const SboParams& p, double dt);

// Adaptive evolution to time T >= 0.
Trajectory evolve(const SboState& initial, const SboParams& p, double T,
                  const StepControls& controls);

// Fixed-step evolution (no error control; steps are still clipped so that
// samples land exactly on the cadence grid).  Used for order studies.
Trajectory evolve_fixed_dt(const SboState& initial, const SboParams& p,
                           double T, double dt, double cadence);

// Co-evolution of two solutions and their difference system.  All three are
// advanced with one shared step sequence (error-controlled on the two
// solutions), and the difference stages are fed the stagewise sums of the
// two solutions.  Because every nonlinear building block is bilinear, the
// co-evolved difference tracks the literal subtraction of the two solutions
// to rounding error; `diff` stores w in the complex slot and z in the real
// slot.
struct PairEvolution {
  Trajectory a;
  Trajectory b;
  Trajectory diff;
};

PairEvolution evolve_pair_with_difference(const SboState& a0,
                                          const SboState& b0,
                                          const SboParams& p, double T,
                                          const StepControls& controls);

}  // namespace sbolab

#endif  // SBOLAB_INTEGRATE_HPP
