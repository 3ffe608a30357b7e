#pragma once

// Shared spectral right-hand-side kernel (internal; not installed).  The
// public rhs()/diff_rhs() and the integrator stages must evaluate the same
// arithmetic so that lambda = 1 reproduces the unscaled system bit-for-bit
// and difference co-evolution matches parent subtraction to roundoff.

#include "sbolab/grid.hpp"
#include "sbolab/model.hpp"

namespace sbolab::rhs_internal {

inline constexpr cplx kI{0.0, 1.0};

struct Nonlinear {
  Spectrum nu;
  Spectrum nv;
};

// (ik) with the Nyquist coefficient zeroed (odd symbol).
inline Spectrum times_ik(const Spectrum& s) {
  const std::size_t n = s.size();
  std::vector<cplx> c(n);
  for (std::size_t i = 0; i < n; ++i)
    c[i] = kI * s.grid().wavenumber(i) * s[i];
  c[s.grid().nyquist_index()] = cplx{0.0, 0.0};
  return Spectrum(s.grid_ptr(), std::move(c));
}

// Linear phases: u_t picks up -i k^2, v_t picks up +i k|k| (sgn undefined at
// Nyquist, so the phase is 0 there, keeping the propagator real at that mode).
inline double bo_phase(const SpectralGrid& g, std::size_t i) {
  if (i == g.nyquist_index()) return 0.0;
  const double k = g.wavenumber(i);
  return k * std::abs(k);
}

//   Nu = -i (lambda uv + beta |u|^2 u)
//   Nv = -rho v v_x + d_x(|u|^2)
inline Nonlinear nonlinear(const Spectrum& uh, const Spectrum& vh,
                           const SboParams& p) {
  using sbolab::detail::dealiased_product;
  Spectrum uv = dealiased_product(uh, vh, false, true);
  Spectrum u2 = dealiased_product(uh, conj_spectrum(uh), false, false);
  symmetrize(u2);
  Spectrum cubic = dealiased_product(u2, uh, true, false);

  const std::size_t n = uh.size();
  std::vector<cplx> nu(n);
  for (std::size_t i = 0; i < n; ++i)
    nu[i] = -kI * (p.lambda * uv[i] + p.beta * cubic[i]);

  Spectrum vx = times_ik(vh);
  Spectrum vvx = dealiased_product(vh, vx, true, true);
  Spectrum u2x = times_ik(u2);
  std::vector<cplx> nv(n);
  for (std::size_t i = 0; i < n; ++i) nv[i] = -p.rho * vvx[i] + u2x[i];
  Spectrum nvs(vh.grid_ptr(), std::move(nv));
  symmetrize(nvs);
  return {Spectrum(uh.grid_ptr(), std::move(nu)), std::move(nvs)};
}

//   Nw = -i ((lambda/2)(v w + u z) + beta(|w|^2 w + 2 |u|^2 w + u^2 conj(w))/4)
//   Nz = -(rho/2) d_x(v z) + d_x Re(conj(u) w)
// with u, v the parent sums; exactly the parentwise subtraction of
// `nonlinear` by bilinearity of the dealiased product.
inline Nonlinear diff_nonlinear(const Spectrum& wh, const Spectrum& zh,
                                const Spectrum& uh, const Spectrum& vh,
                                const SboParams& p) {
  using sbolab::detail::dealiased_product;
  Spectrum vw = dealiased_product(vh, wh, true, false);
  Spectrum uz = dealiased_product(uh, zh, false, true);
  Spectrum wconj = conj_spectrum(wh);
  Spectrum w2 = dealiased_product(wh, wconj, false, false);
  Spectrum w2w = dealiased_product(w2, wh, false, false);
  Spectrum u2 = dealiased_product(uh, conj_spectrum(uh), false, false);
  Spectrum u2w = dealiased_product(u2, wh, false, false);
  Spectrum uu = dealiased_product(uh, uh, false, false);
  Spectrum uuwb = dealiased_product(uu, wconj, false, false);

  const std::size_t n = wh.size();
  std::vector<cplx> nw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx coupling = 0.5 * p.lambda * (vw[i] + uz[i]);
    const cplx cubic =
        p.beta * (0.25 * w2w[i] + 0.5 * u2w[i] + 0.25 * uuwb[i]);
    nw[i] = -kI * (coupling + cubic);
  }

  Spectrum vz = dealiased_product(vh, zh, true, true);
  Spectrum uw = dealiased_product(conj_spectrum(uh), wh, false, false);
  Spectrum uw_conj = conj_spectrum(uw);
  std::vector<cplx> re_uw(n);
  for (std::size_t i = 0; i < n; ++i)
    re_uw[i] = 0.5 * (uw[i] + uw_conj[i]);
  Spectrum re_uw_s(wh.grid_ptr(), std::move(re_uw));

  Spectrum dvz = times_ik(vz);
  Spectrum duw = times_ik(re_uw_s);
  std::vector<cplx> nz(n);
  for (std::size_t i = 0; i < n; ++i)
    nz[i] = -0.5 * p.rho * dvz[i] + duw[i];
  Spectrum nzs(zh.grid_ptr(), std::move(nz));
  symmetrize(nzs);
  return {Spectrum(wh.grid_ptr(), std::move(nw)), std::move(nzs)};
}

}  // namespace sbolab::rhs_internal
