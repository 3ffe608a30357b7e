#ifndef SBOLAB_DIAGNOSTICS_HPP
#define SBOLAB_DIAGNOSTICS_HPP

#include <cstddef>
#include <vector>

#include "sbolab/integrate.hpp"
#include "sbolab/model.hpp"

namespace sbolab {

// Functionals evaluated on states and along trajectories: the four conserved
// quantities, the modified energies (solution and difference versions),
// coercivity, energy-rate ratios, the dispersive-smoothing accumulators, and
// the Gronwall / Lipschitz growth checks.
//
// Conventions shared by everything below:
//   - sup-norms are taken on a 4x spectrally refined grid;
//   - cubic and quartic space integrals are evaluated on 2x / 4x refined
//     grids, which makes the rectangle rule exact for band-limited data;
//   - time integrals (the acc_* columns) use the trapezoid rule on the
//     sample cadence.

// --- pointwise functionals --------------------------------------------------

// e1 = integral of v
// e2 = integral of |u|^2
// e3 = Im integral of u d_x(conj u) + 1/2 integral of v^2
// e4 = 1/2 ||D^{1/2}v||^2 - (rho/6) integral v^3 + integral v|u|^2
//      + (beta/2) integral |u|^4 + integral |d_x u|^2
// e1 and e2 are conserved by the flow for every (beta, rho, lambda); e3 and
// e4 are conserved when lambda = 1.
struct ConservedQuantities {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
};

ConservedQuantities conserved_quantities(const SboState& state,
                                         const SboParams& params);

// E = ||u||^2 + ||D^{s+1/2}u||^2 + ||v||^2 + 1/2 ||D^s v||^2
//     + integral of D^{s-1/2}v * D^{s-1/2}(|u|^2),
// split into its quadratic part and the cubic cross term (|u|^2 dealiased).
// Requires s >= 1/2.
struct ModifiedEnergy {
  double total = 0.0;
  double quadratic = 0.0;
  double cross = 0.0;
};

ModifiedEnergy modified_energy(const SboState& state, double s);

// ratio = |cross| / quadratic.  When ratio <= 1/2 the energy is squeezed
// between half and three halves of its own quadratic part.
struct CoercivityReport {
  double quadratic = 0.0;
  double cross = 0.0;
  double ratio = 0.0;
  bool holds = true;
};

CoercivityReport coercivity_check(const SboState& state, double s);

// --- per-sample trajectory records ------------------------------------------

struct DiagnosticsRecord {
  double t = 0.0;
  double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;
  double em_s = 0.0;       // modified energy at index s
  double hs_u = 0.0;       // ||u||_{H^{s+1/2}}
  double hs_v = 0.0;       // ||v||_{H^s}
  double vx_inf = 0.0;     // ||d_x v||_inf (4x refined)
  double acc_l1 = 0.0;     // integral_0^t ||d_x v||_inf
  double acc_l2sq = 0.0;   // integral_0^t ||d_x v||_inf^2
  double s = 0.0;          // Sobolev index the record was computed with
};

std::vector<DiagnosticsRecord> diagnostics_series(const Trajectory& traj,
                                                  const SboParams& params,
                                                  double s);

// --- energy rate ------------------------------------------------------------

// r(t) = |dE/dt| / ((1 + ||d_x v||_inf) * E) with dE/dt from 4th-order
// centered differences on the sample grid (only interior samples with
// uniform spacing contribute).  Reported both for the modified energy and
// for its bare quadratic part; 0/0 is guarded to 0.
struct EnergyRateReport {
  double max_ratio_modified = 0.0;
  double max_ratio_quadratic = 0.0;
  std::size_t points_used = 0;
};

EnergyRateReport energy_rate_check(const Trajectory& traj,
                                   const SboParams& params, double s);

// --- growth bounds along a run ----------------------------------------------

// sup_t ||(u,v)(t)|| <= 2 exp(kappa (T + acc_l1(T))) ||(u,v)(0)|| in the
// joint H^{s+1/2} x H^s norm.  kappa_min is the smallest constant that
// passes (0 when the bound already holds with kappa = 0).
struct GronwallReport {
  double sup_norm = 0.0;
  double initial_norm = 0.0;
  double acc_l1_total = 0.0;
  double bound = 0.0;
  double kappa_min = 0.0;
  bool holds = true;
};

GronwallReport gronwall_check(const Trajectory& traj, double s, double kappa);

// ||d_x v||_{L^2_T L^inf} <= C (T^{1/2} sup_t ||J^{1+delta/4+eps} v||
//                               + ||J^{1-3delta/4+eps} F||_{L^2_T L^2})
// with F = -(rho/2) d_x(v^2) + d_x(|u|^2); reports both sides and their
// ratio.  delta in [0,1], eps > 0.
struct StrichartzReport {
  double lhs = 0.0;
  double term_sup = 0.0;      // T^{1/2} sup_t ||J^{1+delta/4+eps} v||
  double term_forcing = 0.0;  // L^2_T L^2 norm of J^{1-3delta/4+eps} F
  double rhs = 0.0;
  double ratio = 0.0;         // lhs / rhs (0 when both vanish)
};

StrichartzReport strichartz_check(const Trajectory& traj,
                                  const SboParams& params, double s,
                                  double delta, double eps);

// --- difference-system functionals -------------------------------------------

// For the difference variables (w, z) with parent sums (u, v):
//   em0 = ||w||^2 + ||D^{1/2}w||^2 + 1/2||z||^2 + Re int J^{-1}z (conj(u) w)
//   ems = ||w||^2 + ||D^{s+1/2}w||^2 + ||z||^2 + 1/2||D^s z||^2
//         + Re int D^{s-1/2}z D^{s-1/2}(conj(u) w)
//   fs  = ||D^s d_x v||_inf ||D^s z|| ||z|| + ||D^s v|| ||D^s z|| ||d_x z||_inf
//         + ||D^{s+1/2}v||_inf ||w|| ||D^{s+1/2}w||
//         + ||D^{s+1}u||_inf ||w|| ||D^s z||
// Requires s > 1/2.
struct DiffEnergies {
  double em0 = 0.0;
  double ems = 0.0;
  double fs = 0.0;
  double em0_quadratic = 0.0;
  double em0_cross = 0.0;
  double ems_quadratic = 0.0;
  double ems_cross = 0.0;
};

DiffEnergies diff_energies(const DiffState& d, double s);

struct DiffDiagnosticsRecord {
  double t = 0.0;
  double em0_tilde = 0.0;
  double ems_tilde = 0.0;
  double h12_w = 0.0;  // ||w||_{H^{1/2}}
  double l2_z = 0.0;   // ||z||
  double hss_w = 0.0;  // ||w||_{H^{s+1/2}}
  double hs_z = 0.0;   // ||z||_{H^s}
  double fs = 0.0;
};

// Per-sample difference records; `diff` carries (w, z) and `a`, `b` are the
// two co-evolved solutions (their sums feed the cross terms and fs).
std::vector<DiffDiagnosticsRecord> diff_diagnostics_series(
    const Trajectory& diff, const Trajectory& a, const Trajectory& b,
    double s);

// sup_t ||(w,z)(t)||_{H^{1/2} x L^2} <= 2 exp(c (K+1) T) ||(w,z)(0)||,
// K = max over the two solutions of integral_0^T ||d_x v_i||_inf.
// c_min is the smallest passing constant; a vanishing initial gap is guarded
// (identical data passes for every c).
struct LipschitzReport {
  double sup_gap = 0.0;
  double initial_gap = 0.0;
  double K = 0.0;
  double bound = 0.0;
  double c_min = 0.0;
  bool holds = true;
};

LipschitzReport lipschitz_check(const PairEvolution& pair, double c);

}  // namespace sbolab

#endif  // SBOLAB_DIAGNOSTICS_HPP
