#include "sbolab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "rhs_internal.hpp"
#include "sbolab/fourier.hpp"

namespace sbolab {

namespace {

using V = std::vector<cplx>;

// Spectral state of one (u, v) system: coefficient vectors on a shared grid.
struct YState {
  V uh;
  V vh;
};

// Nonlinear stage values as raw vectors.
struct NL {
  V nu;
  V nv;
};

YState to_y(const SboState& s) {
  Spectrum uh = to_spectral(s.u);
  Spectrum vh = to_spectral(s.v);
  return {std::move(uh.coeffs()), std::move(vh.coeffs())};
}

SboState to_state(const GridPtr& g, const YState& y, double t) {
  Spectrum us(g, V(y.uh));
  Spectrum vs(g, V(y.vh));
  return {from_spectral(us), from_spectral_real(vs), t};
}

void enforce_real_v(const GridPtr& g, V& vh) {
  Spectrum s(g, std::move(vh));
  symmetrize(s);
  vh = std::move(s.coeffs());
}

NL eval_single(const GridPtr& g, const YState& y, const SboParams& p) {
  Spectrum us(g, V(y.uh));
  Spectrum vs(g, V(y.vh));
  auto r = rhs_internal::nonlinear(us, vs, p);
  return {std::move(r.nu.coeffs()), std::move(r.nv.coeffs())};
}

// Difference-system stage: the coefficient fields passed to the bilinear
// kernel are the stagewise sums of the two co-evolved solutions.
NL eval_diff(const GridPtr& g, const YState& d, const YState& a,
             const YState& b, const SboParams& p) {
  const std::size_t n = d.uh.size();
  V su(n), sv(n);
  for (std::size_t i = 0; i < n; ++i) {
    su[i] = a.uh[i] + b.uh[i];
    sv[i] = a.vh[i] + b.vh[i];
  }
  Spectrum ws(g, V(d.uh));
  Spectrum zs(g, V(d.vh));
  Spectrum us(g, std::move(su));
  Spectrum vs(g, std::move(sv));
  auto r = rhs_internal::diff_nonlinear(ws, zs, us, vs, p);
  return {std::move(r.nu.coeffs()), std::move(r.nv.coeffs())};
}

// Phases of the linear flow over time tau, in coefficient storage order.
void half_phases(const SpectralGrid& g, double tau, V& eu, V& ev) {
  const std::size_t n = g.size();
  eu.resize(n);
  ev.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = g.wavenumber(i);
    eu[i] = std::polar(1.0, -k * k * tau);
    ev[i] = std::polar(1.0, rhs_internal::bo_phase(g, i) * tau);
  }
}

// The four linear-combination patterns of integrating-factor RK4, applied to
// both components at once.  eu/ev are the phases over h/2.
YState stage_b_input(const YState& y, const NL& a, double h, const V& eu,
                     const V& ev) {
  const std::size_t n = y.uh.size();
  YState s{V(n), V(n)};
  for (std::size_t i = 0; i < n; ++i) {
    s.uh[i] = eu[i] * (y.uh[i] + 0.5 * h * a.nu[i]);
    s.vh[i] = ev[i] * (y.vh[i] + 0.5 * h * a.nv[i]);
  }
  return s;
}

YState stage_c_input(const YState& y, const NL& b, double h, const V& eu,
                     const V& ev) {
  const std::size_t n = y.uh.size();
  YState s{V(n), V(n)};
  for (std::size_t i = 0; i < n; ++i) {
    s.uh[i] = eu[i] * y.uh[i] + 0.5 * h * b.nu[i];
    s.vh[i] = ev[i] * y.vh[i] + 0.5 * h * b.nv[i];
  }
  return s;
}

YState stage_d_input(const YState& y, const NL& c, double h, const V& eu,
                     const V& ev) {
  const std::size_t n = y.uh.size();
  YState s{V(n), V(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const cplx e2u = eu[i] * eu[i];
    const cplx e2v = ev[i] * ev[i];
    s.uh[i] = e2u * y.uh[i] + h * (eu[i] * c.nu[i]);
    s.vh[i] = e2v * y.vh[i] + h * (ev[i] * c.nv[i]);
  }
  return s;
}

YState combine(const YState& y, const NL& a, const NL& b, const NL& c,
               const NL& d, double h, const V& eu, const V& ev) {
  const std::size_t n = y.uh.size();
  YState s{V(n), V(n)};
  const double w = h / 6.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx e2u = eu[i] * eu[i];
    const cplx e2v = ev[i] * ev[i];
    s.uh[i] = e2u * y.uh[i] +
              w * (e2u * a.nu[i] + 2.0 * (eu[i] * (b.nu[i] + c.nu[i])) +
                   d.nu[i]);
    s.vh[i] = e2v * y.vh[i] +
              w * (e2v * a.nv[i] + 2.0 * (ev[i] * (b.nv[i] + c.nv[i])) +
                   d.nv[i]);
  }
  return s;
}

YState ifrk4(const GridPtr& g, const YState& y, double h, const SboParams& p,
             const V& eu, const V& ev) {
  const NL a = eval_single(g, y, p);
  const YState y1 = stage_b_input(y, a, h, eu, ev);
  const NL b = eval_single(g, y1, p);
  const YState y2 = stage_c_input(y, b, h, eu, ev);
  const NL c = eval_single(g, y2, p);
  const YState y3 = stage_d_input(y, c, h, eu, ev);
  const NL d = eval_single(g, y3, p);
  return combine(y, a, b, c, d, h, eu, ev);
}

struct TripleY {
  YState a;
  YState b;
  YState d;
};

TripleY ifrk4_pair(const GridPtr& g, const TripleY& y, double h,
                   const SboParams& p, const V& eu, const V& ev) {
  const NL ka = eval_single(g, y.a, p);
  const NL kb = eval_single(g, y.b, p);
  const NL kd = eval_diff(g, y.d, y.a, y.b, p);
  const YState a1 = stage_b_input(y.a, ka, h, eu, ev);
  const YState b1 = stage_b_input(y.b, kb, h, eu, ev);
  const YState d1 = stage_b_input(y.d, kd, h, eu, ev);
  const NL la = eval_single(g, a1, p);
  const NL lb = eval_single(g, b1, p);
  const NL ld = eval_diff(g, d1, a1, b1, p);
  const YState a2 = stage_c_input(y.a, la, h, eu, ev);
  const YState b2 = stage_c_input(y.b, lb, h, eu, ev);
  const YState d2 = stage_c_input(y.d, ld, h, eu, ev);
  const NL ma = eval_single(g, a2, p);
  const NL mb = eval_single(g, b2, p);
  const NL md = eval_diff(g, d2, a2, b2, p);
  const YState a3 = stage_d_input(y.a, ma, h, eu, ev);
  const YState b3 = stage_d_input(y.b, mb, h, eu, ev);
  const YState d3 = stage_d_input(y.d, md, h, eu, ev);
  const NL na = eval_single(g, a3, p);
  const NL nb = eval_single(g, b3, p);
  const NL nd = eval_diff(g, d3, a3, b3, p);
  return {combine(y.a, ka, la, ma, na, h, eu, ev),
          combine(y.b, kb, lb, mb, nb, h, eu, ev),
          combine(y.d, kd, ld, md, nd, h, eu, ev)};
}

double l2_norm(const YState& y) {
  double s = 0.0;
  for (const cplx& c : y.uh) s += std::norm(c);
  for (const cplx& c : y.vh) s += std::norm(c);
  return std::sqrt(s);
}

double l2_gap(const YState& x, const YState& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.uh.size(); ++i) s += std::norm(x.uh[i] - y.uh[i]);
  for (std::size_t i = 0; i < x.vh.size(); ++i) s += std::norm(x.vh[i] - y.vh[i]);
  return std::sqrt(s);
}

// Smoothness norm used for the blow-up guard: H^{5/2} for u, H^2 for v.
double smoothness_norm(const GridPtr& g, const YState& y) {
  Spectrum us(g, V(y.uh));
  Spectrum vs(g, V(y.vh));
  return std::hypot(sobolev_norm(us, 2.5), sobolev_norm(vs, 2.0));
}

// Times at which samples are recorded (offsets from the start), ending at T.
std::vector<double> output_offsets(double T, double cadence) {
  std::vector<double> outs;
  const double tiny = 1e-12 * std::max(1.0, T);
  for (std::size_t j = 1; double(j) * cadence < T - tiny; ++j)
    outs.push_back(double(j) * cadence);
  outs.push_back(T);
  return outs;
}

double controller_proposal(double h, double err, double rel_tol,
                           double safety) {
  double growth = 2.0;
  if (err > 0.0)
    growth = std::clamp(safety * std::pow(rel_tol / err, 0.2), 0.3, 2.0);
  return h * growth;
}

}  // namespace

void validate(const StepControls& c) {
  if (!(c.dt_init > 0.0)) throw std::invalid_argument("dt_init must be positive");
  if (!(c.rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  if (!(c.dt_min > 0.0)) throw std::invalid_argument("dt_min must be positive");
  if (!(c.dt_max >= c.dt_min))
    throw std::invalid_argument("dt_max must be at least dt_min");
  if (!(c.safety > 0.0 && c.safety <= 1.0))
    throw std::invalid_argument("safety must be in (0, 1]");
  if (!(c.cadence > 0.0)) throw std::invalid_argument("cadence must be positive");
  if (!(c.blowup_ceiling > 0.0))
    throw std::invalid_argument("blowup_ceiling must be positive");
  if (c.max_steps == 0) throw std::invalid_argument("max_steps must be positive");
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_aborted: return "blowup_aborted";
    case RunStatus::step_underflow: return "step_underflow";
  }
  return "unknown";
}

void linear_phases(const SpectralGrid& g, double h, std::vector<cplx>& u_phase,
                   std::vector<cplx>& v_phase) {
  half_phases(g, h, u_phase, v_phase);
}

SboState step_once(const SboState& s, const SboParams& p, double dt) {
  validate(p);
  detail::require_same_grid_pub(s.u.grid(), s.v.grid());
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const GridPtr& g = s.u.grid_ptr();
  YState y = to_y(s);
  V eu, ev;
  half_phases(*g, 0.5 * dt, eu, ev);
  YState out = ifrk4(g, y, dt, p, eu, ev);
  enforce_real_v(g, out.vh);
  return to_state(g, out, s.t + dt);
}

Trajectory evolve(const SboState& initial, const SboParams& p, double T,
                  const StepControls& controls) {
  validate(p);
  validate(controls);
  detail::require_same_grid_pub(initial.u.grid(), initial.v.grid());
  if (!(T >= 0.0)) throw std::invalid_argument("final time must be nonnegative");

  const GridPtr& g = initial.u.grid_ptr();
  const double t0 = initial.t;
  Trajectory tr;
  tr.samples.push_back({initial.u, initial.v, t0});
  tr.end_time = t0;

  YState y = to_y(initial);
  if (!(smoothness_norm(g, y) <= controls.blowup_ceiling)) {
    tr.status = RunStatus::blowup_aborted;
    return tr;
  }
  if (T == 0.0) return tr;

  const std::vector<double> outs = output_offsets(T, controls.cadence);
  double t = 0.0;  // offset from t0
  double dt_want = std::clamp(controls.dt_init, controls.dt_min, controls.dt_max);
  V eu_h, ev_h, eu_q, ev_q;
  double phases_for = -1.0;

  for (double out : outs) {
    while (t < out) {
      if (tr.steps_accepted + tr.steps_rejected >= controls.max_steps)
        throw std::runtime_error("maximum step count exceeded");
      const double gap = out - t;
      const double h = std::min(dt_want, gap);
      const bool landing = (h == gap);
      if (h != phases_for) {
        half_phases(*g, 0.5 * h, eu_h, ev_h);
        half_phases(*g, 0.25 * h, eu_q, ev_q);
        phases_for = h;
      }
      YState ybig = ifrk4(g, y, h, p, eu_h, ev_h);
      YState yhalf = ifrk4(g, y, 0.5 * h, p, eu_q, ev_q);
      YState ysmall = ifrk4(g, yhalf, 0.5 * h, p, eu_q, ev_q);
      const double err =
          l2_gap(ysmall, ybig) / std::max(l2_norm(ysmall), 1e-12);
      if (err <= controls.rel_tol) {
        y = std::move(ysmall);
        enforce_real_v(g, y.vh);
        t = landing ? out : t + h;
        ++tr.steps_accepted;
        tr.final_dt = h;
        tr.end_time = t0 + t;
        const double prop =
            controller_proposal(h, err, controls.rel_tol, controls.safety);
        dt_want = landing ? std::max(dt_want, prop) : prop;
        dt_want = std::clamp(dt_want, controls.dt_min, controls.dt_max);
        if (!(smoothness_norm(g, y) <= controls.blowup_ceiling)) {
          tr.status = RunStatus::blowup_aborted;
          return tr;
        }
      } else {
        ++tr.steps_rejected;
        if (h <= controls.dt_min) {
          tr.status = RunStatus::step_underflow;
          return tr;
        }
        dt_want = std::max(
            controller_proposal(h, err, controls.rel_tol, controls.safety),
            controls.dt_min);
      }
    }
    tr.samples.push_back(to_state(g, y, t0 + out));
  }
  tr.end_time = t0 + T;
  return tr;
}

Trajectory evolve_fixed_dt(const SboState& initial, const SboParams& p,
                           double T, double dt, double cadence) {
  validate(p);
  detail::require_same_grid_pub(initial.u.grid(), initial.v.grid());
  if (!(T >= 0.0)) throw std::invalid_argument("final time must be nonnegative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(cadence > 0.0)) throw std::invalid_argument("cadence must be positive");

  const GridPtr& g = initial.u.grid_ptr();
  const double t0 = initial.t;
  Trajectory tr;
  tr.samples.push_back({initial.u, initial.v, t0});
  tr.end_time = t0;

  YState y = to_y(initial);
  constexpr double kCeiling = 1e6;
  if (!(smoothness_norm(g, y) <= kCeiling)) {
    tr.status = RunStatus::blowup_aborted;
    return tr;
  }
  if (T == 0.0) return tr;

  const std::vector<double> outs = output_offsets(T, cadence);
  double t = 0.0;
  V eu, ev;
  double phases_for = -1.0;
  for (double out : outs) {
    while (t < out) {
      const double gap = out - t;
      const double h = std::min(dt, gap);
      const bool landing = (h == gap);
      if (h != phases_for) {
        half_phases(*g, 0.5 * h, eu, ev);
        phases_for = h;
      }
      y = ifrk4(g, y, h, p, eu, ev);
      enforce_real_v(g, y.vh);
      t = landing ? out : t + h;
      ++tr.steps_accepted;
      tr.final_dt = h;
      tr.end_time = t0 + t;
      if (!(smoothness_norm(g, y) <= kCeiling)) {
        tr.status = RunStatus::blowup_aborted;
        return tr;
      }
    }
    tr.samples.push_back(to_state(g, y, t0 + out));
  }
  tr.end_time = t0 + T;
  return tr;
}

PairEvolution evolve_pair_with_difference(const SboState& a0,
                                          const SboState& b0,
                                          const SboParams& p, double T,
                                          const StepControls& controls) {
  validate(p);
  validate(controls);
  detail::require_same_grid_pub(a0.u.grid(), a0.v.grid());
  detail::require_same_grid_pub(b0.u.grid(), b0.v.grid());
  detail::require_same_grid_pub(a0.u.grid(), b0.u.grid());
  if (!(T >= 0.0)) throw std::invalid_argument("final time must be nonnegative");

  const GridPtr& g = a0.u.grid_ptr();
  const double t0 = a0.t;
  const std::size_t n = g->size();

  TripleY y{to_y(a0), to_y(b0), {V(n), V(n)}};
  for (std::size_t i = 0; i < n; ++i) {
    y.d.uh[i] = y.a.uh[i] - y.b.uh[i];
    y.d.vh[i] = y.a.vh[i] - y.b.vh[i];
  }

  PairEvolution pe;
  pe.a.samples.push_back({a0.u, a0.v, t0});
  pe.b.samples.push_back({b0.u, b0.v, t0});
  pe.diff.samples.push_back(to_state(g, y.d, t0));
  pe.a.end_time = pe.b.end_time = pe.diff.end_time = t0;

  auto set_status = [&](RunStatus st) {
    pe.a.status = pe.b.status = pe.diff.status = st;
  };

  const double ceil2 = controls.blowup_ceiling;
  if (!(smoothness_norm(g, y.a) <= ceil2) ||
      !(smoothness_norm(g, y.b) <= ceil2)) {
    set_status(RunStatus::blowup_aborted);
    return pe;
  }
  if (T == 0.0) return pe;

  const std::vector<double> outs = output_offsets(T, controls.cadence);
  double t = 0.0;
  double dt_want = std::clamp(controls.dt_init, controls.dt_min, controls.dt_max);
  V eu_h, ev_h, eu_q, ev_q;
  double phases_for = -1.0;

  auto note_step = [&](bool accepted, double h, double reached) {
    for (Trajectory* traj : {&pe.a, &pe.b, &pe.diff}) {
      if (accepted) {
        ++traj->steps_accepted;
        traj->final_dt = h;
        traj->end_time = t0 + reached;
      } else {
        ++traj->steps_rejected;
      }
    }
  };

  for (double out : outs) {
    while (t < out) {
      if (pe.a.steps_accepted + pe.a.steps_rejected >= controls.max_steps)
        throw std::runtime_error("maximum step count exceeded");
      const double gap = out - t;
      const double h = std::min(dt_want, gap);
      const bool landing = (h == gap);
      if (h != phases_for) {
        half_phases(*g, 0.5 * h, eu_h, ev_h);
        half_phases(*g, 0.25 * h, eu_q, ev_q);
        phases_for = h;
      }
      TripleY ybig = ifrk4_pair(g, y, h, p, eu_h, ev_h);
      TripleY yhalf = ifrk4_pair(g, y, 0.5 * h, p, eu_q, ev_q);
      TripleY ysmall = ifrk4_pair(g, yhalf, 0.5 * h, p, eu_q, ev_q);
      const double err_a =
          l2_gap(ysmall.a, ybig.a) / std::max(l2_norm(ysmall.a), 1e-12);
      const double err_b =
          l2_gap(ysmall.b, ybig.b) / std::max(l2_norm(ysmall.b), 1e-12);
      const double err = std::max(err_a, err_b);
      if (err <= controls.rel_tol) {
        y = std::move(ysmall);
        enforce_real_v(g, y.a.vh);
        enforce_real_v(g, y.b.vh);
        enforce_real_v(g, y.d.vh);
        t = landing ? out : t + h;
        note_step(true, h, t);
        const double prop =
            controller_proposal(h, err, controls.rel_tol, controls.safety);
        dt_want = landing ? std::max(dt_want, prop) : prop;
        dt_want = std::clamp(dt_want, controls.dt_min, controls.dt_max);
        if (!(smoothness_norm(g, y.a) <= ceil2) ||
            !(smoothness_norm(g, y.b) <= ceil2)) {
          set_status(RunStatus::blowup_aborted);
          return pe;
        }
      } else {
        note_step(false, h, t);
        if (h <= controls.dt_min) {
          set_status(RunStatus::step_underflow);
          return pe;
        }
        dt_want = std::max(
            controller_proposal(h, err, controls.rel_tol, controls.safety),
            controls.dt_min);
      }
    }
    pe.a.samples.push_back(to_state(g, y.a, t0 + out));
    pe.b.samples.push_back(to_state(g, y.b, t0 + out));
    pe.diff.samples.push_back(to_state(g, y.d, t0 + out));
  }
  pe.a.end_time = pe.b.end_time = pe.diff.end_time = t0 + T;
  return pe;
}

}  // namespace sbolab
