// Acceptance harness: runs the full battery of verification criteria and
// prints exactly one PASS/FAIL line per criterion.  Exit code = number of
// failed criteria.  All tolerances are pinned as constants below; criteria
// with a runtime budget fail when the budget is exceeded.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "commands.hpp"
#include "sbolab/config.hpp"
#include "sbolab/diagnostics.hpp"
#include "sbolab/estimates.hpp"
#include "sbolab/fourier.hpp"
#include "sbolab/grid.hpp"
#include "sbolab/integrate.hpp"
#include "sbolab/io.hpp"
#include "sbolab/model.hpp"
#include "test_helpers.hpp"

namespace {

using namespace sbolab;
using sbolab::testing::kPi;
using sbolab::testing::max_abs;
using sbolab::testing::max_abs_diff;
using sbolab::testing::random_complex;
using sbolab::testing::random_real;
namespace fs = std::filesystem;

// --- pinned tolerances -------------------------------------------------------

constexpr double kTolIdentity = 1e-12;       // C1: multiplier identities
constexpr double kTolSymbolStable = 1e-10;   // C2: sup stability under refinement
constexpr double kC1Frozen = 0.30028310600077760789;  // sup|T1| (independent oracle)
constexpr double kC2Frozen = 0.39759856843450278815;  // sup|T2| (independent oracle)
constexpr double kSlack = 1e-12;             // generic roundoff slack (1 + kSlack)
constexpr double kTolPlaneWave = 1e-7;       // C3: pointwise global error
constexpr double kTolE1Drift = 1e-10;        // C4: mean drift (absolute)
constexpr double kTolE2Rel = 1e-8;           // C4: mass drift (relative)
constexpr double kTolE34Rel = 1e-6;          // C4: momentum/energy drift (relative)
constexpr double kTolCoercSlope = 0.05;      // C6: amplitude-scaling slope
constexpr double kTolRateStability = 0.10;   // C7: energy-rate N-refinement spread
constexpr double kTolDiffRel = 1e-6;         // C8: co-evolved vs subtracted
constexpr double kTolDiffZero = 1e-12;       // C8: zero-difference stays zero
constexpr double kTolLipStability = 0.10;    // C9: minimal c spread
constexpr double kTolSmoothStability = 0.15; // C10: suite constant spread
constexpr double kTolConstFieldZero = 1e-13; // C11: constant-factor commutators
constexpr double kTolContraction = 1e-12;    // C12: projection contraction slack
constexpr double kTolScalingL2 = 1e-8;       // C13: L2 dilation identity

struct Outcome {
  bool pass = false;
  std::string details;
};

struct Criterion {
  int id;
  const char* label;
  double cap_seconds;  // <= 0: no budget
  std::function<Outcome()> fn;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InitDataSpec gauss_spec(double amplitude, double width, double center,
                        double wavenumber = 0.0) {
  InitDataSpec s;
  s.family = InitDataSpec::Family::gaussian;
  s.amplitude = amplitude;
  s.width = width;
  s.center = center;
  s.wavenumber = wavenumber;
  return s;
}

SboState make_state(const GridPtr& g, const InitDataSpec& su,
                    const InitDataSpec& sv) {
  return SboState{eval_complex(su, g), eval_real(sv, g), 0.0};
}

SboState perturbed(const SboState& base, const SboState& dir, double size) {
  return SboState{base.u + size * dir.u, base.v + size * dir.v, base.t};
}

fs::path scratch_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "sbolab_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

// --- criterion 1: multiplier identities --------------------------------------

Outcome c01_multiplier_identities() {
  const GridPtr g = make_grid(50.0, 256);
  double worst_dh = 0.0, worst_hd = 0.0, worst_inv = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    const RealField f = random_real(g, 60, 1.0, 1000 + seed);
    // D^1 = H d_x (band-limited data keeps the Nyquist mode empty).
    worst_dh = std::max(worst_dh, max_abs_diff(riesz(f, 1.0), hilbert(deriv(f, 1))));
    // d_x = -H D^1.
    worst_hd = std::max(worst_hd, max_abs_diff(deriv(f, 1), -1.0 * hilbert(riesz(f, 1.0))));
    // H^2 = -(I - mean).
    double mean = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) mean += f[j];
    mean /= static_cast<double>(f.size());
    const RealField h2 = hilbert(hilbert(f));
    double w = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      w = std::max(w, std::abs(h2[j] + f[j] - mean));
    }
    worst_inv = std::max(worst_inv, w);
  }
  Outcome o;
  o.pass = worst_dh <= kTolIdentity && worst_hd <= kTolIdentity &&
           worst_inv <= kTolIdentity;
  o.details = "max |D f - H f_x| = " + fmt(worst_dh) +
              ", |f_x + H D f| = " + fmt(worst_hd) +
              ", |H^2 f + f - mean| = " + fmt(worst_inv) + " over 100 fields";
  return o;
}

// --- criterion 2: bounded symbols ---------------------------------------------

Outcome c02_bounded_symbols() {
  const double c1a = t1_symbol_sup(20001);
  const double c1b = t1_symbol_sup(40001);
  const double c2a = t2_symbol_sup(20001);
  const double c2b = t2_symbol_sup(40001);
  bool ok = std::isfinite(c1b) && std::isfinite(c2b) && c1b < 1.0 && c2b < 1.0;
  ok = ok && std::abs(c1a - c1b) <= kTolSymbolStable &&
       std::abs(c2a - c2b) <= kTolSymbolStable;
  ok = ok && std::abs(c1b - kC1Frozen) <= kTolSymbolStable &&
       std::abs(c2b - kC2Frozen) <= kTolSymbolStable;

  const GridPtr g = make_grid(50.0, 256);
  double worst1 = 0.0, worst2 = 0.0;  // ||T_i f|| / (c_i ||f||)
  for (int seed = 0; seed < 100; ++seed) {
    const RealField f = random_real(g, 60, 1.0, 2000 + seed);
    const double n0 = lp_norm(f, 2.0);
    worst1 = std::max(worst1, lp_norm(t1_apply(f), 2.0) / (c1b * n0));
    worst2 = std::max(worst2, lp_norm(t2_apply(f), 2.0) / (c2b * n0));
  }
  ok = ok && worst1 <= 1.0 + kSlack && worst2 <= 1.0 + kSlack;

  Outcome o;
  o.pass = ok;
  o.details = "c1 = " + fmt(c1b) + ", c2 = " + fmt(c2b) +
              "; refinement shifts " + fmt(std::abs(c1a - c1b)) + ", " +
              fmt(std::abs(c2a - c2b)) + "; worst ||T_i f||/(c_i ||f||) = " +
              fmt(worst1) + ", " + fmt(worst2);
  return o;
}

// --- criterion 3: plane-wave exact solution -----------------------------------

Outcome c03_plane_wave() {
  const double A = 0.75, kw = 3.0, c = 0.4;
  SboParams p;  // beta = rho = lambda = 1
  const double omega = kw * kw + p.lambda * c + p.beta * A * A;

  const GridPtr g = make_grid(2.0 * kPi, 256);
  InitDataSpec su;
  su.family = InitDataSpec::Family::plane_wave;
  su.amplitude = A;
  su.wavenumber = kw;
  InitDataSpec sv;
  sv.family = InitDataSpec::Family::plane_wave;
  sv.amplitude = c;
  sv.wavenumber = 0.0;

  StepControls ctl;
  ctl.rel_tol = 1e-8;
  ctl.cadence = 0.1;
  const Trajectory traj = evolve(make_state(g, su, sv), p, 1.0, ctl);

  double worst = 0.0;
  for (const SboState& s : traj.samples) {
    for (std::size_t j = 0; j < g->size(); ++j) {
      const double phase = kw * g->node(j) - omega * s.t;
      const cplx exact = A * cplx(std::cos(phase), std::sin(phase));
      worst = std::max(worst, std::abs(s.u[j] - exact));
      worst = std::max(worst, std::abs(s.v[j] - c));
    }
  }
  Outcome o;
  o.pass = traj.status == RunStatus::completed && worst <= kTolPlaneWave;
  o.details = "pointwise error " + fmt(worst) + " over T = 1 (" +
              std::to_string(traj.samples.size()) + " samples, " +
              std::to_string(traj.steps_accepted) + " steps)";
  return o;
}

// --- criterion 4: conserved quantities -----------------------------------------

Outcome c04_conservation() {
  const GridPtr g = make_grid(100.0, 512);
  SboState s0 = make_state(g, gauss_spec(1.0, 2.0, 50.0, 1.0),
                           gauss_spec(0.5, 3.0, 50.0));
  const double jn = joint_norm(s0.u, s0.v, 1.5);
  const double scale = 0.1 / jn;
  s0.u = scale * s0.u;
  s0.v = scale * s0.v;

  SboParams p;  // physical coupling: lambda = 1
  StepControls ctl;
  ctl.rel_tol = 1e-10;
  ctl.cadence = 0.1;
  const Trajectory traj = evolve(s0, p, 1.0, ctl);

  const ConservedQuantities q0 = conserved_quantities(traj.samples.front(), p);
  double d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
  for (const SboState& s : traj.samples) {
    const ConservedQuantities q = conserved_quantities(s, p);
    d1 = std::max(d1, std::abs(q.e1 - q0.e1));
    d2 = std::max(d2, std::abs(q.e2 - q0.e2) / std::abs(q0.e2));
    d3 = std::max(d3, std::abs(q.e3 - q0.e3) / std::abs(q0.e3));
    d4 = std::max(d4, std::abs(q.e4 - q0.e4) / std::abs(q0.e4));
  }
  Outcome o;
  o.pass = traj.status == RunStatus::completed && d1 <= kTolE1Drift &&
           d2 <= kTolE2Rel && d3 <= kTolE34Rel && d4 <= kTolE34Rel;
  o.details = "drifts: mean " + fmt(d1) + ", mass " + fmt(d2) + " rel, " +
              "momentum " + fmt(d3) + " rel, energy " + fmt(d4) + " rel";
  return o;
}

// --- criterion 5: convergence orders -------------------------------------------

Outcome c05_convergence() {
  cmd::CmdOptions opt;
  opt.out_dir = (scratch_root() / "conv").string();
  opt.quiet = true;
  const int rc = cmd::cmd_convergence(opt);

  // Recover the headline numbers for the report line.
  std::string extra;
  const CsvTable t = read_csv((scratch_root() / "conv" / "temporal.csv").string());
  std::vector<double> lx, ly;
  for (const auto& row : t.rows) {
    lx.push_back(std::log(row[0]));
    ly.push_back(std::log(row[1]));
  }
  extra = "temporal slope " + fmt(lsq_slope(lx, ly));
  const CsvTable sp = read_csv((scratch_root() / "conv" / "spatial.csv").string());
  for (std::size_t i = 1; i < sp.rows.size(); ++i) {
    extra += ", drop " + fmt(sp.rows[i - 1][0]) + "->" + fmt(sp.rows[i][0]) +
             ": " + fmt(sp.rows[i][2]) + "x";
  }
  Outcome o;
  o.pass = rc == 0;
  o.details = extra + " (exit " + std::to_string(rc) + ")";
  return o;
}

// --- criterion 6: coercivity amplitude scaling ----------------------------------

Outcome c06_coercivity() {
  const double s = 1.5;
  const GridPtr g = make_grid(100.0, 512);
  const SboState base = make_state(g, gauss_spec(1.0, 2.0, 50.0, 1.0),
                                   gauss_spec(0.5, 3.0, 50.0));
  std::vector<double> lx, ly;
  bool two_sided_ok = true;
  std::size_t bounded = 0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const SboState st{eps * base.u, eps * base.v, 0.0};
    const CoercivityReport cr = coercivity_check(st, s);
    lx.push_back(std::log(eps));
    ly.push_back(std::log(cr.ratio));
    if (cr.ratio <= 0.5) {
      ++bounded;
      const ModifiedEnergy em = modified_energy(st, s);
      const bool lo = em.total >= 0.5 * em.quadratic * (1.0 - kSlack);
      const bool hi = em.total <= 1.5 * em.quadratic * (1.0 + kSlack);
      two_sided_ok = two_sided_ok && lo && hi && cr.holds;
    }
  }
  const double slope = lsq_slope(lx, ly);
  Outcome o;
  o.pass = std::abs(slope - 1.0) <= kTolCoercSlope && two_sided_ok && bounded > 0;
  o.details = "cross/quadratic slope " + fmt(slope) + " in amplitude; " +
              "two-sided energy bound held at " + std::to_string(bounded) +
              "/4 amplitudes with ratio <= 1/2";
  return o;
}

// --- criterion 7: energy-rate refinement stability -------------------------------

Outcome c07_energy_rate() {
  const double s = 1.5;
  const double L = 6.0 * kPi;
  SboParams p;
  StepControls ctl;
  ctl.rel_tol = 1e-9;
  ctl.cadence = 0.01;

  double worst_spread = 0.0, worst_quad_spread = 0.0;
  bool ok = true;
  std::string per;
  for (double k0 : {4.0, 8.0, 16.0, 32.0}) {
    const InitDataSpec su = gauss_spec(0.5, 1.5, 3.0 * kPi, k0);
    const InitDataSpec sv = gauss_spec(0.25, 1.5, 3.0 * kPi);
    double r[2] = {0.0, 0.0}, rq[2] = {0.0, 0.0};
    int slot = 0;
    for (std::size_t N : {std::size_t{256}, std::size_t{512}}) {
      const GridPtr g = make_grid(L, N);
      const Trajectory traj = evolve(make_state(g, su, sv), p, 0.2, ctl);
      ok = ok && traj.status == RunStatus::completed;
      const EnergyRateReport er = energy_rate_check(traj, p, s);
      ok = ok && er.points_used > 0;
      r[slot] = er.max_ratio_modified;
      rq[slot] = er.max_ratio_quadratic;
      ++slot;
    }
    const double spread = std::abs(r[1] - r[0]) / r[0];
    const double qspread = std::abs(rq[1] - rq[0]) / rq[0];
    worst_spread = std::max(worst_spread, spread);
    worst_quad_spread = std::max(worst_quad_spread, qspread);
    ok = ok && spread <= kTolRateStability;
    per += (per.empty() ? "k0=" : ", k0=") + fmt(k0) + ": " + fmt(r[1]);
  }
  Outcome o;
  o.pass = ok;
  o.details = "modified-energy rate spread " + fmt(worst_spread) +
              " (quadratic-energy " + fmt(worst_quad_spread) + "); " + per;
  return o;
}

// --- criterion 8: difference-system oracle ---------------------------------------

Outcome c08_difference_oracle() {
  const GridPtr g = make_grid(50.0, 256);
  const SboState a0 = make_state(g, gauss_spec(0.8, 2.0, 25.0, 1.0),
                                 gauss_spec(0.4, 3.0, 25.0));
  const SboState dir = make_state(g, gauss_spec(1.0, 1.5, 25.0, 2.0),
                                  gauss_spec(1.0, 1.5, 25.0));
  SboParams p;
  StepControls ctl;
  ctl.rel_tol = 1e-9;
  ctl.cadence = 0.05;

  const PairEvolution pe =
      evolve_pair_with_difference(a0, perturbed(a0, dir, 1e-3), p, 0.5, ctl);
  bool ok = pe.a.status == RunStatus::completed &&
            pe.b.status == RunStatus::completed &&
            pe.a.samples.size() == pe.diff.samples.size() &&
            pe.b.samples.size() == pe.diff.samples.size();
  double worst_rel = 0.0;
  for (std::size_t i = 0; ok && i < pe.diff.samples.size(); ++i) {
    const ComplexField wd = pe.a.samples[i].u - pe.b.samples[i].u;
    const RealField zd = pe.a.samples[i].v - pe.b.samples[i].v;
    const double gap = std::hypot(sobolev_norm(wd, 0.5), lp_norm(zd, 2.0));
    const double mism =
        std::hypot(sobolev_norm(pe.diff.samples[i].u - wd, 0.5),
                   lp_norm(pe.diff.samples[i].v - zd, 2.0));
    worst_rel = std::max(worst_rel, mism / std::max(gap, 1e-300));
  }
  ok = ok && worst_rel <= kTolDiffRel;

  // Identical initial data: the difference must stay identically zero.
  const PairEvolution pz = evolve_pair_with_difference(a0, a0, p, 0.5, ctl);
  double worst_zero = 0.0;
  for (const SboState& d : pz.diff.samples) {
    worst_zero = std::max(
        worst_zero, std::hypot(sobolev_norm(d.u, 0.5), lp_norm(d.v, 2.0)));
  }
  ok = ok && worst_zero <= kTolDiffZero;

  Outcome o;
  o.pass = ok;
  o.details = "co-evolved vs subtracted mismatch " + fmt(worst_rel) +
              " rel; zero-difference sup " + fmt(worst_zero);
  return o;
}

// --- criterion 9: Lipschitz-constant stability ------------------------------------

Outcome c09_lipschitz_stability() {
  // Amplitudes are chosen so the perturbation gap more than doubles over the
  // horizon: the minimal passing c is then strictly positive and the
  // stability comparison across perturbation sizes is meaningful.
  const GridPtr g = make_grid(50.0, 256);
  const SboState a0 = make_state(g, gauss_spec(2.0, 2.0, 25.0, 1.0),
                                 gauss_spec(1.0, 3.0, 25.0));
  const SboState dir = make_state(g, gauss_spec(1.0, 1.5, 25.0, 2.0),
                                  gauss_spec(1.0, 1.5, 25.0));
  SboParams p;
  StepControls ctl;
  ctl.rel_tol = 1e-9;
  ctl.cadence = 0.05;

  std::vector<double> cmins;
  bool ok = true;
  for (double size : {1e-4, 1e-5, 1e-6}) {
    const PairEvolution pe =
        evolve_pair_with_difference(a0, perturbed(a0, dir, size), p, 1.0, ctl);
    ok = ok && pe.a.status == RunStatus::completed;
    const LipschitzReport rep = lipschitz_check(pe, 1.0);
    ok = ok && std::isfinite(rep.c_min);
    cmins.push_back(rep.c_min);
  }
  const double cmax = *std::max_element(cmins.begin(), cmins.end());
  const double cmin = *std::min_element(cmins.begin(), cmins.end());
  ok = ok && (cmax - cmin) <= kTolLipStability * cmax + 1e-15;

  Outcome o;
  o.pass = ok;
  o.details = "minimal passing c = {" + fmt(cmins[0]) + ", " + fmt(cmins[1]) +
              ", " + fmt(cmins[2]) + "} across perturbation sizes 1e-4..1e-6";
  return o;
}

// --- criterion 10: dispersive-smoothing suite constant -----------------------------

Outcome c10_smoothing_constant() {
  const double s = 1.5, delta = 1.0, eps = 0.1;
  const double L = 50.0;
  const double kBase = 2.0 * kPi / L;
  SboParams p;
  StepControls ctl;
  ctl.rel_tol = 1e-9;
  ctl.cadence = 0.025;

  // The shipped closed-form families: localized envelopes, plane waves, and
  // seeded band-limited data.
  struct Family {
    InitDataSpec u, v;
  };
  std::vector<Family> fams;
  fams.push_back({gauss_spec(1.0, 2.0, 25.0, 1.0), gauss_spec(0.5, 3.0, 25.0)});
  {
    InitDataSpec su;
    su.family = InitDataSpec::Family::plane_wave;
    su.amplitude = 0.5;
    su.wavenumber = 2.0 * kBase;
    InitDataSpec sv;
    sv.family = InitDataSpec::Family::plane_wave;
    sv.amplitude = 0.25;
    sv.wavenumber = kBase;
    fams.push_back({su, sv});
  }
  {
    InitDataSpec su;
    su.family = InitDataSpec::Family::random_band_limited;
    su.amplitude = 0.3;
    su.band = 10;
    su.decay = 1.5;
    su.seed = 11;
    su.base_length = L;
    InitDataSpec sv = su;
    sv.seed = 12;
    fams.push_back({su, sv});
  }

  double suite[2] = {0.0, 0.0};
  bool ok = true;
  std::string per;
  int slot = 0;
  for (std::size_t N : {std::size_t{256}, std::size_t{512}}) {
    const GridPtr g = make_grid(L, N);
    for (std::size_t fi = 0; fi < fams.size(); ++fi) {
      const Trajectory traj =
          evolve(make_state(g, fams[fi].u, fams[fi].v), p, 0.5, ctl);
      ok = ok && traj.status == RunStatus::completed;
      const StrichartzReport rep = strichartz_check(traj, p, s, delta, eps);
      ok = ok && std::isfinite(rep.ratio) && rep.rhs > 0.0;
      suite[slot] = std::max(suite[slot], rep.ratio);
      if (slot == 0) {
        per += (per.empty() ? "ratios " : ", ") + fmt(rep.ratio);
      }
    }
    ++slot;
  }
  // One constant covers every family (it is the suite max); it must be
  // finite, positive, and refinement-stable.
  ok = ok && suite[0] > 0.0 &&
       std::abs(suite[1] - suite[0]) <= kTolSmoothStability * suite[0];

  Outcome o;
  o.pass = ok;
  o.details = "suite constant " + fmt(suite[0]) + " (N = 256) vs " +
              fmt(suite[1]) + " (N = 512); " + per;
  return o;
}

// --- criterion 11: estimate probes + constant-factor degeneracy ---------------------

Outcome c11_probes() {
  bool ok = true;
  std::string per;
  const std::size_t nsamp = 100;
  const std::uint64_t seed = 0;
  std::vector<ProbeReport> reports;
  reports.push_back(
      probe_fractional_leibniz(0.5, 0.25, 0.25, 2.0, 4.0, 4.0, nsamp, seed));
  {
    KatoPonceExponents ex;
    ex.p = 2.0;
    ex.p1 = std::numeric_limits<double>::infinity();
    ex.p2 = 2.0;
    reports.push_back(probe_kato_ponce(0.75, KatoPonceCase::one, ex, nsamp, seed));
  }
  {
    KatoPonceExponents ex;
    ex.p = 2.0;
    ex.p1 = 4.0;
    ex.p2 = 4.0;
    ex.p3 = std::numeric_limits<double>::infinity();
    ex.p4 = 2.0;
    reports.push_back(probe_kato_ponce(1.5, KatoPonceCase::two, ex, nsamp, seed));
  }
  reports.push_back(probe_calderon(1, 1, 2.0, nsamp, seed));
  reports.push_back(probe_sharp_commutation(0.25, 0.5, 2.0, nsamp, seed));

  for (const ProbeReport& r : reports) {
    ok = ok && std::isfinite(r.max_ratio) && r.max_ratio > 0.0 && r.stable;
    per += (per.empty() ? "" : ", ") + r.tag + "=" + fmt(r.max_ratio) +
           (r.stable ? "" : " UNSTABLE");
  }

  // Constant factors degenerate: commuting a constant through any of the
  // probed operators leaves nothing.  Scalar path (power-of-two factor
  // commutes bitwise through the transforms) must be exactly zero; the
  // constant-as-field path goes through the dealiasing pipeline and may keep
  // rounding dust.
  const GridPtr g = make_grid(50.0, 256);
  const RealField f = random_real(g, 40, 1.0, 77);
  const double scalar_gap =
      max_abs_diff(riesz(0.5 * f, 0.75), 0.5 * riesz(f, 0.75));
  ok = ok && scalar_gap == 0.0;

  const RealField chalf(g, std::vector<double>(g->size(), 0.5));
  double field_gap = 0.0;
  for (CommutatorVariant v : {CommutatorVariant::Ds, CommutatorVariant::HDs,
                              CommutatorVariant::LeibnizDefect}) {
    field_gap = std::max(field_gap, max_abs(commutator_Ds(chalf, f, 0.75, v)));
  }
  ok = ok && field_gap <= kTolConstFieldZero;

  Outcome o;
  o.pass = ok;
  o.details = per + "; constant-factor: scalar path " + fmt(scalar_gap) +
              " (exact), field path " + fmt(field_gap);
  return o;
}

// --- criterion 12: low-pass regularization rates --------------------------------

Outcome c12_lowpass_rates() {
  const double s = 1.0, sigma = 0.5;
  const GridPtr g = make_grid(2.0 * kPi, 1024);
  // Power-law spectra sitting exactly on the Sobolev boundary for each slot.
  const ComplexField u = random_complex(g, 400, (s + 0.5) + 0.5, 5);
  const RealField v = random_real(g, 400, s + 0.5, 6);
  const std::vector<double> ladder{4, 8, 16, 32, 64};

  const BonaSmithReport ru = bona_smith_rates(u, s + 0.5, sigma, ladder);
  const BonaSmithReport rv = bona_smith_rates(v, s, sigma, ladder);
  bool ok = ru.growth_ok && ru.decay_ok && rv.growth_ok && rv.decay_ok;

  // The projection contracts every Sobolev norm we test.
  double worst = 0.0;
  for (double st : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    worst = std::max(worst, sobolev_norm(bona_smith_project(u, 16.0), st) /
                                sobolev_norm(u, st));
    worst = std::max(worst, sobolev_norm(bona_smith_project(v, 16.0), st) /
                                sobolev_norm(v, st));
  }
  ok = ok && worst <= 1.0 + kTolContraction;

  Outcome o;
  o.pass = ok;
  o.details = "slopes: u growth " + fmt(ru.growth_slope) + ", u decay " +
              fmt(ru.decay_slope) + ", v growth " + fmt(rv.growth_slope) +
              ", v decay " + fmt(rv.decay_slope) +
              "; worst contraction ratio " + fmt(worst);
  return o;
}

// --- criterion 13: dilation identities ------------------------------------------

Outcome c13_scaling() {
  InitPair init;
  init.u0 = gauss_spec(1.0, 2.0, 50.0, 1.0);
  init.v0 = gauss_spec(0.5, 3.0, 50.0);
  const double s = 1.5;

  bool ok = true;
  double worst_dev = 0.0;
  for (int j = 0; j <= 10; ++j) {
    const double lambda = std::ldexp(1.0, -j);
    const ScalingReport r = scaling_norm_check(init, lambda, s, 100.0, 512);
    worst_dev = std::max({worst_dev, r.u_l2_deviation, r.v_l2_deviation});
  }
  ok = ok && worst_dev <= kTolScalingL2;

  // choose_lambda must return a power of two whose rescaled data actually
  // lands under the requested threshold on the dilation-tracking grid.
  const double delta = 0.1;
  const double lam = choose_lambda(init, delta, s);
  const bool pow2 = std::ldexp(1.0, static_cast<int>(std::lround(std::log2(lam)))) == lam;
  const GridPtr gt = make_grid(100.0 / lam, 1024);
  const double jn = joint_norm(eval_complex(rescale_initdata(init.u0, lam), gt),
                               eval_real(rescale_initdata(init.v0, lam), gt), s);
  ok = ok && pow2 && jn <= delta * (1.0 + kSlack);

  // Spec-level roundtrip on the power-of-two ladder is bit-exact.
  auto spec_equal = [](const InitDataSpec& a, const InitDataSpec& b) {
    return a.family == b.family && a.amplitude == b.amplitude &&
           a.width == b.width && a.center == b.center &&
           a.wavenumber == b.wavenumber && a.band == b.band &&
           a.decay == b.decay && a.seed == b.seed &&
           a.base_length == b.base_length && a.path == b.path;
  };
  InitDataSpec plane;
  plane.family = InitDataSpec::Family::plane_wave;
  plane.amplitude = 0.5;
  plane.wavenumber = 2.0 * (2.0 * kPi / 100.0);
  InitDataSpec rnd;
  rnd.family = InitDataSpec::Family::random_band_limited;
  rnd.amplitude = 0.3;
  rnd.band = 10;
  rnd.decay = 1.5;
  rnd.seed = 11;
  rnd.base_length = 100.0;
  bool roundtrip = true;
  for (int j = 0; j <= 10; ++j) {
    const double lambda = std::ldexp(1.0, -j);
    for (const InitDataSpec& spec : {init.u0, init.v0, plane, rnd}) {
      roundtrip = roundtrip &&
                  spec_equal(rescale_initdata(rescale_initdata(spec, lambda),
                                              1.0 / lambda),
                             spec);
    }
  }
  ok = ok && roundtrip;

  Outcome o;
  o.pass = ok;
  o.details = "worst L2 deviation " + fmt(worst_dev) +
              " over lambda = 1..2^-10; choose_lambda = " + fmt(lam) +
              " gives norm " + fmt(jn) + " <= " + fmt(delta) +
              "; roundtrip bit-exact: " + (roundtrip ? "yes" : "NO");
  return o;
}

// --- criterion 14: determinism ---------------------------------------------------

Outcome c14_determinism() {
  RunConfig cfg;
  cfg.L = 50.0;
  cfg.N = 128;
  cfg.init.u0 = gauss_spec(0.5, 2.0, 25.0, 1.0);
  cfg.init.v0 = gauss_spec(0.25, 3.0, 25.0);
  cfg.horizon.T = 0.1;
  cfg.controls.rel_tol = 1e-8;
  cfg.controls.cadence = 0.025;
  const fs::path root = scratch_root();
  const fs::path cfg_path = root / "det_config.json";
  {
    std::ofstream out(cfg_path);
    out << dump_config(cfg);
  }

  auto run_into = [&](const char* sub, auto command) {
    cmd::CmdOptions opt;
    opt.config_path = cfg_path.string();
    opt.out_dir = (root / sub).string();
    opt.quiet = true;
    return command(opt);
  };
  bool ok = run_into("det_a", cmd::cmd_run) == 0 &&
            run_into("det_b", cmd::cmd_run) == 0;
  bool csv_same = false, snap_same = false, json_same = false;
  if (ok) {
    csv_same = read_bytes(root / "det_a" / "diagnostics.csv") ==
               read_bytes(root / "det_b" / "diagnostics.csv");
    snap_same = read_bytes(root / "det_a" / "final_snapshot.bin") ==
                read_bytes(root / "det_b" / "final_snapshot.bin");
  }
  ok = ok && run_into("det_ea", cmd::cmd_estimates) == 0 &&
       run_into("det_eb", cmd::cmd_estimates) == 0;
  if (ok) {
    json_same = read_bytes(root / "det_ea" / "estimates.json") ==
                read_bytes(root / "det_eb" / "estimates.json");
  }
  ok = ok && csv_same && snap_same && json_same;

  Outcome o;
  o.pass = ok;
  o.details = std::string("repeat runs byte-identical: diagnostics.csv ") +
              (csv_same ? "yes" : "NO") + ", final_snapshot.bin " +
              (snap_same ? "yes" : "NO") + ", estimates.json " +
              (json_same ? "yes" : "NO");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "multiplier identities", 1.0, c01_multiplier_identities},
      {2, "bounded symbols", 0.0, c02_bounded_symbols},
      {3, "plane-wave exact solution", 10.0, c03_plane_wave},
      {4, "conserved quantities", 60.0, c04_conservation},
      {5, "convergence orders", 300.0, c05_convergence},
      {6, "coercivity scaling", 0.0, c06_coercivity},
      {7, "energy-rate stability", 0.0, c07_energy_rate},
      {8, "difference-system oracle", 0.0, c08_difference_oracle},
      {9, "Lipschitz-constant stability", 0.0, c09_lipschitz_stability},
      {10, "dispersive-smoothing constant", 0.0, c10_smoothing_constant},
      {11, "estimate probes", 300.0, c11_probes},
      {12, "low-pass regularization rates", 0.0, c12_lowpass_rates},
      {13, "dilation identities", 0.0, c13_scaling},
      {14, "determinism", 0.0, c14_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.details = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    bool pass = out.pass;
    if (c.cap_seconds > 0.0 && secs >= c.cap_seconds) {
      pass = false;
      out.details += "; runtime budget " + fmt(c.cap_seconds) + " s exceeded";
    }
    std::printf("criterion %02d: %s - %s (%s; %.2f s)\n", c.id,
                pass ? "PASS" : "FAIL", c.label, out.details.c_str(), secs);
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu criteria passed\n", static_cast<std::size_t>(14));
  } else {
    std::printf("%d criteria FAILED\n", failures);
  }
  return failures;
}
