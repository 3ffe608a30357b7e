#include "sbolab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "sbolab/fourier.hpp"

namespace sbolab {

namespace {

constexpr double kTiny = 1e-300;

// Folding summation: O(log n) rounding-error growth without scratch memory
// beyond the term vector itself.
double fold_sum(std::vector<double> terms) {
  if (terms.empty()) return 0.0;
  std::size_t n = terms.size();
  while (n > 1) {
    const std::size_t h = n / 2;
    for (std::size_t i = 0; i < h; ++i) terms[i] += terms[n - 1 - i];
    n -= h;
  }
  return terms[0];
}

// |k|^(2s) with the identity-operator convention at k = 0 for s = 0.
double riesz_weight2(double k, double s) {
  if (k == 0.0) return s == 0.0 ? 1.0 : 0.0;
  return std::pow(std::abs(k), 2.0 * s);
}

// sum_k w(k) |c_k|^2
template <typename W>
double spec_sum(const Spectrum& c, W w) {
  std::vector<double> terms(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    terms[i] = w(c.grid().wavenumber(i)) * std::norm(c[i]);
  return fold_sum(std::move(terms));
}

// Re sum_k w(k) a_k conj(b_k)
template <typename W>
double cross_sum(const Spectrum& a, const Spectrum& b, W w) {
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    terms[i] =
        w(a.grid().wavenumber(i)) * std::real(a[i] * std::conj(b[i]));
  return fold_sum(std::move(terms));
}

void require_samples(const Trajectory& traj, std::size_t n) {
  if (traj.samples.size() < n)
    throw std::invalid_argument("trajectory has too few samples");
}

double vx_sup(const RealField& v) { return sup_norm(deriv(v, 1), 4); }

}  // namespace

ConservedQuantities conserved_quantities(const SboState& state,
                                         const SboParams& params) {
  validate(params);
  detail::require_same_grid_pub(state.u.grid(), state.v.grid());
  const Spectrum uh = to_spectral(state.u);
  const Spectrum vh = to_spectral(state.v);

  ConservedQuantities q;
  q.e1 = integral(state.v);
  q.e2 = spec_sum(uh, [](double) { return 1.0; });
  q.e3 = spec_sum(uh, [](double k) { return -k; }) +
         0.5 * spec_sum(vh, [](double) { return 1.0; });

  const double half_v_half = 0.5 * spec_sum(vh, [](double k) {
    return riesz_weight2(k, 0.5);
  });

  const RealField v2 = oversample(state.v, 2);
  const ComplexField u2 = oversample(state.u, 2);
  std::vector<double> cube(v2.size()), mix(v2.size());
  for (std::size_t j = 0; j < v2.size(); ++j) {
    cube[j] = v2[j] * v2[j] * v2[j];
    mix[j] = v2[j] * std::norm(u2[j]);
  }
  const double int_v3 = integral(RealField(v2.grid_ptr(), std::move(cube)));
  const double int_vu2 = integral(RealField(v2.grid_ptr(), std::move(mix)));
  const double l4 = lp_norm(oversample(state.u, 4), 4);
  const double int_u4 = l4 * l4 * l4 * l4;
  const double grad = spec_sum(uh, [](double k) { return k * k; });

  q.e4 = half_v_half - (params.rho / 6.0) * int_v3 + int_vu2 +
         0.5 * params.beta * int_u4 + grad;
  return q;
}

ModifiedEnergy modified_energy(const SboState& state, double s) {
  if (!(s >= 0.5)) throw std::invalid_argument("s must be at least 1/2");
  detail::require_same_grid_pub(state.u.grid(), state.v.grid());
  const Spectrum uh = to_spectral(state.u);
  const Spectrum vh = to_spectral(state.v);

  ModifiedEnergy e;
  e.quadratic = spec_sum(uh, [s](double k) {
                  return 1.0 + riesz_weight2(k, s + 0.5);
                }) +
                spec_sum(vh, [s](double k) {
                  return 1.0 + 0.5 * riesz_weight2(k, s);
                });
  const Spectrum qh = to_spectral(dealiased_abs2(state.u));
  e.cross = cross_sum(vh, qh, [s](double k) {
    return riesz_weight2(k, s - 0.5);
  });
  e.total = e.quadratic + e.cross;
  return e;
}

CoercivityReport coercivity_check(const SboState& state, double s) {
  const ModifiedEnergy e = modified_energy(state, s);
  CoercivityReport r;
  r.quadratic = e.quadratic;
  r.cross = e.cross;
  r.ratio = e.quadratic > kTiny ? std::abs(e.cross) / e.quadratic : 0.0;
  r.holds = r.ratio <= 0.5;
  return r;
}

std::vector<DiagnosticsRecord> diagnostics_series(const Trajectory& traj,
                                                  const SboParams& params,
                                                  double s) {
  validate(params);
  require_samples(traj, 1);
  std::vector<DiagnosticsRecord> out;
  out.reserve(traj.samples.size());
  double acc1 = 0.0, acc2 = 0.0;
  double prev_t = 0.0, prev_vx = 0.0;
  for (std::size_t j = 0; j < traj.samples.size(); ++j) {
    const SboState& st = traj.samples[j];
    DiagnosticsRecord rec;
    rec.t = st.t;
    const ConservedQuantities q = conserved_quantities(st, params);
    rec.e1 = q.e1;
    rec.e2 = q.e2;
    rec.e3 = q.e3;
    rec.e4 = q.e4;
    rec.em_s = modified_energy(st, s).total;
    rec.hs_u = sobolev_norm(st.u, s + 0.5);
    rec.hs_v = sobolev_norm(st.v, s);
    rec.vx_inf = vx_sup(st.v);
    if (j > 0) {
      const double dt = st.t - prev_t;
      acc1 += 0.5 * (prev_vx + rec.vx_inf) * dt;
      acc2 += 0.5 * (prev_vx * prev_vx + rec.vx_inf * rec.vx_inf) * dt;
    }
    rec.acc_l1 = acc1;
    rec.acc_l2sq = acc2;
    rec.s = s;
    prev_t = st.t;
    prev_vx = rec.vx_inf;
    out.push_back(rec);
  }
  return out;
}

EnergyRateReport energy_rate_check(const Trajectory& traj,
                                   const SboParams& params, double s) {
  validate(params);
  if (traj.samples.size() < 5)
    throw std::invalid_argument(
        "cadence too coarse: need at least 5 samples for the rate stencil");
  const std::size_t m = traj.samples.size();
  std::vector<double> t(m), em(m), qd(m), vx(m);
  for (std::size_t j = 0; j < m; ++j) {
    const SboState& st = traj.samples[j];
    const ModifiedEnergy e = modified_energy(st, s);
    t[j] = st.t;
    em[j] = e.total;
    qd[j] = e.quadratic;
    vx[j] = vx_sup(st.v);
  }
  EnergyRateReport rep;
  for (std::size_t j = 2; j + 2 < m; ++j) {
    const double d0 = t[j - 1] - t[j - 2];
    bool uniform = d0 > 0.0;
    for (int i = -1; i <= 1 && uniform; ++i) {
      const double d = t[j + i + 1] - t[j + i];
      uniform = std::abs(d - d0) <= 1e-9 * d0;
    }
    if (!uniform) continue;
    const auto ratio = [&](const std::vector<double>& e) {
      const double de =
          (-e[j + 2] + 8.0 * e[j + 1] - 8.0 * e[j - 1] + e[j - 2]) /
          (12.0 * d0);
      const double denom = (1.0 + vx[j]) * e[j];
      return denom > kTiny ? std::abs(de) / denom : 0.0;
    };
    rep.max_ratio_modified = std::max(rep.max_ratio_modified, ratio(em));
    rep.max_ratio_quadratic = std::max(rep.max_ratio_quadratic, ratio(qd));
    ++rep.points_used;
  }
  return rep;
}

GronwallReport gronwall_check(const Trajectory& traj, double s, double kappa) {
  require_samples(traj, 2);
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be nonnegative");
  GronwallReport rep;
  double acc1 = 0.0, prev_vx = 0.0, prev_t = 0.0;
  for (std::size_t j = 0; j < traj.samples.size(); ++j) {
    const SboState& st = traj.samples[j];
    const double jn = joint_norm(st.u, st.v, s);
    const double vx = vx_sup(st.v);
    if (j == 0) {
      rep.initial_norm = jn;
      rep.sup_norm = jn;
    } else {
      acc1 += 0.5 * (prev_vx + vx) * (st.t - prev_t);
      rep.sup_norm = std::max(rep.sup_norm, jn);
    }
    prev_vx = vx;
    prev_t = st.t;
  }
  rep.acc_l1_total = acc1;
  const double horizon = traj.samples.back().t - traj.samples.front().t;
  const double expo = horizon + acc1;
  rep.bound = 2.0 * std::exp(kappa * expo) * rep.initial_norm;
  rep.holds = rep.sup_norm <= rep.bound * (1.0 + 1e-12);
  if (rep.initial_norm <= kTiny) {
    rep.kappa_min = 0.0;
  } else {
    const double ratio = rep.sup_norm / (2.0 * rep.initial_norm);
    rep.kappa_min =
        (ratio <= 1.0 || expo <= 0.0) ? 0.0 : std::log(ratio) / expo;
  }
  return rep;
}

StrichartzReport strichartz_check(const Trajectory& traj,
                                  const SboParams& params, double s,
                                  double delta, double eps) {
  validate(params);
  require_samples(traj, 2);
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("delta must be in [0, 1]");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  (void)s;

  const double sv = 1.0 + 0.25 * delta + eps;
  const double sf = 1.0 - 0.75 * delta + eps;
  const double horizon = traj.samples.back().t - traj.samples.front().t;

  StrichartzReport rep;
  double acc_vx2 = 0.0, acc_f2 = 0.0;
  double sup_v = 0.0;
  double prev_t = 0.0, prev_vx2 = 0.0, prev_f2 = 0.0;
  for (std::size_t j = 0; j < traj.samples.size(); ++j) {
    const SboState& st = traj.samples[j];
    const double vx = vx_sup(st.v);
    sup_v = std::max(sup_v, sobolev_norm(st.v, sv));

    // F = -(rho/2) d_x(v^2) + d_x(|u|^2), dealiased.
    const Spectrum vh = to_spectral(st.v);
    const Spectrum uh = to_spectral(st.u);
    Spectrum vv = detail::dealiased_product(vh, vh, true, true);
    Spectrum qq = to_spectral(dealiased_abs2(st.u));
    const SpectralGrid& gr = vh.grid();
    std::vector<cplx> fh(vh.size());
    for (std::size_t i = 0; i < vh.size(); ++i) {
      const double k =
          i == gr.nyquist_index() ? 0.0 : gr.wavenumber(i);
      fh[i] = cplx{0.0, k} * (-0.5 * params.rho * vv[i] + qq[i]);
    }
    const double f_norm = sobolev_norm(Spectrum(st.v.grid_ptr(), std::move(fh)), sf);

    if (j > 0) {
      const double dt = st.t - prev_t;
      acc_vx2 += 0.5 * (prev_vx2 + vx * vx) * dt;
      acc_f2 += 0.5 * (prev_f2 + f_norm * f_norm) * dt;
    }
    prev_t = st.t;
    prev_vx2 = vx * vx;
    prev_f2 = f_norm * f_norm;
  }
  rep.lhs = std::sqrt(acc_vx2);
  rep.term_sup = std::sqrt(horizon) * sup_v;
  rep.term_forcing = std::sqrt(acc_f2);
  rep.rhs = rep.term_sup + rep.term_forcing;
  if (rep.rhs > kTiny)
    rep.ratio = rep.lhs / rep.rhs;
  else
    rep.ratio = rep.lhs > kTiny ? std::numeric_limits<double>::infinity() : 0.0;
  return rep;
}

DiffEnergies diff_energies(const DiffState& d, double s) {
  if (!(s > 0.5)) throw std::invalid_argument("s must exceed 1/2");
  detail::require_same_grid_pub(d.w.grid(), d.z.grid());
  detail::require_same_grid_pub(d.w.grid(), d.u.grid());
  detail::require_same_grid_pub(d.w.grid(), d.v.grid());

  const Spectrum wh = to_spectral(d.w);
  const Spectrum zh = to_spectral(d.z);
  const Spectrum uh = to_spectral(d.u);
  const Spectrum vh = to_spectral(d.v);
  const Spectrum uw =
      detail::dealiased_product(conj_spectrum(uh), wh, false, false);

  DiffEnergies e;
  e.em0_quadratic = spec_sum(wh, [](double k) {
                      return 1.0 + riesz_weight2(k, 0.5);
                    }) +
                    0.5 * spec_sum(zh, [](double) { return 1.0; });
  e.em0_cross = cross_sum(zh, uw, [](double k) {
    return std::pow(1.0 + k * k, -0.5);
  });
  e.em0 = e.em0_quadratic + e.em0_cross;

  e.ems_quadratic = spec_sum(wh, [s](double k) {
                      return 1.0 + riesz_weight2(k, s + 0.5);
                    }) +
                    spec_sum(zh, [s](double k) {
                      return 1.0 + 0.5 * riesz_weight2(k, s);
                    });
  e.ems_cross = cross_sum(zh, uw, [s](double k) {
    return riesz_weight2(k, s - 0.5);
  });
  e.ems = e.ems_quadratic + e.ems_cross;

  const double l2_w = std::sqrt(spec_sum(wh, [](double) { return 1.0; }));
  const double l2_z = std::sqrt(spec_sum(zh, [](double) { return 1.0; }));
  const double ds_z =
      std::sqrt(spec_sum(zh, [s](double k) { return riesz_weight2(k, s); }));
  const double ds_v =
      std::sqrt(spec_sum(vh, [s](double k) { return riesz_weight2(k, s); }));
  const double dsh_w = std::sqrt(
      spec_sum(wh, [s](double k) { return riesz_weight2(k, s + 0.5); }));

  const double t1 = sup_norm(riesz(deriv(d.v, 1), s)) * ds_z * l2_z;
  const double t2 = ds_v * ds_z * sup_norm(deriv(d.z, 1));
  const double t3 = sup_norm(riesz(d.v, s + 0.5)) * l2_w * dsh_w;
  const double t4 = sup_norm(riesz(d.u, s + 1.0)) * l2_w * ds_z;
  e.fs = t1 + t2 + t3 + t4;
  return e;
}

std::vector<DiffDiagnosticsRecord> diff_diagnostics_series(
    const Trajectory& diff, const Trajectory& a, const Trajectory& b,
    double s) {
  if (diff.samples.size() != a.samples.size() ||
      diff.samples.size() != b.samples.size())
    throw std::invalid_argument("trajectories have different sample counts");
  std::vector<DiffDiagnosticsRecord> out;
  out.reserve(diff.samples.size());
  for (std::size_t j = 0; j < diff.samples.size(); ++j) {
    const SboState& dj = diff.samples[j];
    const SboState& aj = a.samples[j];
    const SboState& bj = b.samples[j];
    DiffState ds{dj.u, dj.v, aj.u + bj.u, aj.v + bj.v, dj.t};
    const DiffEnergies e = diff_energies(ds, s);
    DiffDiagnosticsRecord rec;
    rec.t = dj.t;
    rec.em0_tilde = e.em0;
    rec.ems_tilde = e.ems;
    rec.h12_w = sobolev_norm(dj.u, 0.5);
    rec.l2_z = lp_norm(dj.v, 2);
    rec.hss_w = sobolev_norm(dj.u, s + 0.5);
    rec.hs_z = sobolev_norm(dj.v, s);
    rec.fs = e.fs;
    out.push_back(rec);
  }
  return out;
}

LipschitzReport lipschitz_check(const PairEvolution& pair, double c) {
  require_samples(pair.a, 2);
  require_samples(pair.b, 2);
  require_samples(pair.diff, 2);
  if (pair.a.samples.size() != pair.b.samples.size() ||
      pair.a.samples.size() != pair.diff.samples.size())
    throw std::invalid_argument("trajectories have different sample counts");
  if (!(c >= 0.0)) throw std::invalid_argument("c must be nonnegative");

  constexpr double kFloor = 1e-12;
  LipschitzReport rep;
  double acc_a = 0.0, acc_b = 0.0;
  double prev_t = 0.0, prev_va = 0.0, prev_vb = 0.0;
  for (std::size_t j = 0; j < pair.a.samples.size(); ++j) {
    const double va = vx_sup(pair.a.samples[j].v);
    const double vb = vx_sup(pair.b.samples[j].v);
    const SboState& dj = pair.diff.samples[j];
    const double gap = std::hypot(sobolev_norm(dj.u, 0.5), lp_norm(dj.v, 2));
    if (j == 0) {
      rep.initial_gap = gap;
      rep.sup_gap = gap;
    } else {
      const double dt = pair.a.samples[j].t - prev_t;
      acc_a += 0.5 * (prev_va + va) * dt;
      acc_b += 0.5 * (prev_vb + vb) * dt;
      rep.sup_gap = std::max(rep.sup_gap, gap);
    }
    prev_t = pair.a.samples[j].t;
    prev_va = va;
    prev_vb = vb;
  }
  rep.K = std::max(acc_a, acc_b);
  const double horizon =
      pair.a.samples.back().t - pair.a.samples.front().t;
  rep.bound = 2.0 * std::exp(c * (rep.K + 1.0) * horizon) * rep.initial_gap;
  if (rep.initial_gap <= kFloor) {
    rep.holds = rep.sup_gap <= kFloor;
    rep.c_min = 0.0;
  } else {
    rep.holds = rep.sup_gap <= rep.bound * (1.0 + 1e-12);
    const double ratio = rep.sup_gap / (2.0 * rep.initial_gap);
    const double expo = (rep.K + 1.0) * horizon;
    rep.c_min = (ratio <= 1.0 || expo <= 0.0) ? 0.0 : std::log(ratio) / expo;
  }
  return rep;
}

}  // namespace sbolab
