#include "sbolab/model.hpp"

#include <cmath>
#include <stdexcept>

#include "rhs_internal.hpp"
#include "sbolab/fourier.hpp"
#include "sbolab/io.hpp"

namespace sbolab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

void validate(const SboParams& p) {
  require_finite(p.beta, "beta");
  require_finite(p.rho, "rho");
  if (!std::isfinite(p.lambda) || !(p.lambda > 0.0) || p.lambda > 1.0)
    throw std::invalid_argument("lambda must be in (0, 1]");
}

// --- right-hand sides -------------------------------------------------------

SboRhs rhs(const SboState& s, const SboParams& p) {
  validate(p);
  detail::require_same_grid_pub(s.u.grid(), s.v.grid());
  Spectrum uh = to_spectral(s.u);
  Spectrum vh = to_spectral(s.v);
  auto nl = rhs_internal::nonlinear(uh, vh, p);
  const SpectralGrid& g = uh.grid();
  for (std::size_t i = 0; i < uh.size(); ++i) {
    const double k = g.wavenumber(i);
    nl.nu.coeffs()[i] += -kI * (k * k) * uh[i];
    nl.nv.coeffs()[i] += kI * rhs_internal::bo_phase(g, i) * vh[i];
  }
  symmetrize(nl.nv);
  return {from_spectral(nl.nu), from_spectral_real(nl.nv)};
}

DiffRhs diff_rhs(const DiffState& d, const SboParams& p) {
  validate(p);
  detail::require_same_grid_pub(d.w.grid(), d.z.grid());
  detail::require_same_grid_pub(d.w.grid(), d.u.grid());
  detail::require_same_grid_pub(d.w.grid(), d.v.grid());
  Spectrum wh = to_spectral(d.w);
  Spectrum zh = to_spectral(d.z);
  Spectrum uh = to_spectral(d.u);
  Spectrum vh = to_spectral(d.v);
  auto nl = rhs_internal::diff_nonlinear(wh, zh, uh, vh, p);
  const SpectralGrid& g = wh.grid();
  for (std::size_t i = 0; i < wh.size(); ++i) {
    const double k = g.wavenumber(i);
    nl.nu.coeffs()[i] += -kI * (k * k) * wh[i];
    nl.nv.coeffs()[i] += kI * rhs_internal::bo_phase(g, i) * zh[i];
  }
  symmetrize(nl.nv);
  return {from_spectral(nl.nu), from_spectral_real(nl.nv)};
}

// --- initial data -----------------------------------------------------------

namespace detail {

double GaussianDraw::uniform01() {
  // 53-bit mantissa uniform in (0, 1].
  return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianDraw::operator()() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * kPi * u2;
  spare_ = r * std::sin(th);
  have_spare_ = true;
  return r * std::cos(th);
}

}  // namespace detail

namespace {

void check_family_params(const InitDataSpec& spec) {
  require_finite(spec.amplitude, "amplitude");
  switch (spec.family) {
    case InitDataSpec::Family::gaussian:
      if (!(spec.width > 0.0))
        throw std::invalid_argument("gaussian width must be positive");
      break;
    case InitDataSpec::Family::plane_wave:
      break;
    case InitDataSpec::Family::random_band_limited:
      if (spec.band < 1)
        throw std::invalid_argument("random family needs band >= 1");
      if (!(spec.base_length > 0.0))
        throw std::invalid_argument("random family needs base_length > 0");
      break;
    case InitDataSpec::Family::file:
      if (spec.path.empty())
        throw std::invalid_argument("file family needs a path");
      break;
  }
}

// Random-family coefficients: mode n of the base period gets amplitude
// (1 + k_n^2)^{-decay/2} and independent standard-normal real/imag parts.
// The draw order is fixed (n = 1..band; +n then -n) so the function is
// fully determined by (seed, band, decay, base_length).
struct RandomCoeffs {
  std::vector<cplx> pos, neg;
};

RandomCoeffs random_coeffs(const InitDataSpec& spec) {
  detail::GaussianDraw draw(spec.seed);
  RandomCoeffs rc;
  rc.pos.resize(spec.band + 1);
  rc.neg.resize(spec.band + 1);
  for (int n = 1; n <= spec.band; ++n) {
    const double k = 2.0 * kPi * n / spec.base_length;
    const double amp = std::pow(1.0 + k * k, -0.5 * spec.decay);
    const double a = draw(), b = draw(), c = draw(), d = draw();
    rc.pos[n] = amp * cplx{a, b};
    rc.neg[n] = amp * cplx{c, d};
  }
  return rc;
}

}  // namespace

ComplexField eval_complex(const InitDataSpec& spec, const GridPtr& grid) {
  check_family_params(spec);
  const std::size_t n = grid->size();
  std::vector<cplx> out(n);
  switch (spec.family) {
    case InitDataSpec::Family::gaussian:
      for (std::size_t j = 0; j < n; ++j) {
        const double x = grid->node(j);
        const double arg = (x - spec.center) / spec.width;
        out[j] = spec.amplitude * std::exp(-arg * arg) *
                 std::exp(kI * (spec.wavenumber * x));
      }
      break;
    case InitDataSpec::Family::plane_wave:
      for (std::size_t j = 0; j < n; ++j)
        out[j] = spec.amplitude * std::exp(kI * (spec.wavenumber * grid->node(j)));
      break;
    case InitDataSpec::Family::random_band_limited: {
      const RandomCoeffs rc = random_coeffs(spec);
      for (std::size_t j = 0; j < n; ++j) {
        const double x = grid->node(j);
        cplx acc{0.0, 0.0};
        for (int m = 1; m <= spec.band; ++m) {
          const double kx = 2.0 * kPi * m / spec.base_length * x;
          const cplx e{std::cos(kx), std::sin(kx)};
          acc += rc.pos[m] * e + rc.neg[m] * std::conj(e);
        }
        out[j] = spec.amplitude * acc;
      }
      break;
    }
    case InitDataSpec::Family::file: {
      SboState st = read_snapshot(spec.path);
      if (!st.u.grid().same_as(*grid))
        throw std::invalid_argument("snapshot grid does not match target grid");
      return st.u;
    }
  }
  return ComplexField(grid, std::move(out));
}

RealField eval_real(const InitDataSpec& spec, const GridPtr& grid) {
  check_family_params(spec);
  const std::size_t n = grid->size();
  std::vector<double> out(n);
  switch (spec.family) {
    case InitDataSpec::Family::gaussian:
      for (std::size_t j = 0; j < n; ++j) {
        const double x = grid->node(j);
        const double arg = (x - spec.center) / spec.width;
        out[j] = spec.amplitude * std::exp(-arg * arg) *
                 std::cos(spec.wavenumber * x);
      }
      break;
    case InitDataSpec::Family::plane_wave:
      for (std::size_t j = 0; j < n; ++j)
        out[j] = spec.amplitude * std::cos(spec.wavenumber * grid->node(j));
      break;
    case InitDataSpec::Family::random_band_limited: {
      const RandomCoeffs rc = random_coeffs(spec);
      for (std::size_t j = 0; j < n; ++j) {
        const double x = grid->node(j);
        double acc = 0.0;
        for (int m = 1; m <= spec.band; ++m) {
          const double kx = 2.0 * kPi * m / spec.base_length * x;
          // Hermitian pairing of the +n draw: a cos + b sin.
          acc += rc.pos[m].real() * std::cos(kx) +
                 rc.pos[m].imag() * std::sin(kx);
        }
        out[j] = spec.amplitude * acc;
      }
      break;
    }
    case InitDataSpec::Family::file: {
      SboState st = read_snapshot(spec.path);
      if (!st.v.grid().same_as(*grid))
        throw std::invalid_argument("snapshot grid does not match target grid");
      return st.v;
    }
  }
  return RealField(grid, std::move(out));
}

InitDataSpec rescale_initdata(const InitDataSpec& spec, double lambda) {
  if (!std::isfinite(lambda) || !(lambda > 0.0))
    throw std::invalid_argument("rescale factor must be positive");
  check_family_params(spec);
  InitDataSpec r = spec;
  switch (spec.family) {
    case InitDataSpec::Family::gaussian:
      r.amplitude = lambda * spec.amplitude;
      r.width = spec.width / lambda;
      r.center = spec.center / lambda;
      r.wavenumber = lambda * spec.wavenumber;
      break;
    case InitDataSpec::Family::plane_wave:
      r.amplitude = lambda * spec.amplitude;
      r.wavenumber = lambda * spec.wavenumber;
      break;
    case InitDataSpec::Family::random_band_limited:
      r.amplitude = lambda * spec.amplitude;
      r.base_length = spec.base_length / lambda;
      break;
    case InitDataSpec::Family::file:
      throw std::invalid_argument(
          "file-based data cannot be rescaled (no array-level rescaling)");
  }
  return r;
}

double choose_lambda(const InitPair& init, double delta, double s,
                     double L_ref, std::size_t N_ref) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  double lambda = 1.0;
  for (int j = 0; j <= 60; ++j) {
    const GridPtr grid = make_grid(L_ref / lambda, N_ref);
    const ComplexField u =
        eval_complex(rescale_initdata(init.u0, lambda), grid);
    const RealField v = eval_real(rescale_initdata(init.v0, lambda), grid);
    if (joint_norm(u, v, s) <= delta) return lambda;
    lambda *= 0.5;
  }
  throw std::runtime_error(
      "choose_lambda: target norm not reached within 60 halvings");
}

ScalingReport scaling_norm_check(const InitPair& init, double lambda, double s,
                                 double L, std::size_t N) {
  if (!std::isfinite(lambda) || !(lambda > 0.0) || lambda > 1.0)
    throw std::invalid_argument("lambda must be in (0, 1]");
  const GridPtr base = make_grid(L, N);
  const GridPtr scaled = make_grid(L / lambda, N);
  const ComplexField u0 = eval_complex(init.u0, base);
  const RealField v0 = eval_real(init.v0, base);
  const ComplexField ul =
      eval_complex(rescale_initdata(init.u0, lambda), scaled);
  const RealField vl = eval_real(rescale_initdata(init.v0, lambda), scaled);

  ScalingReport rep;
  rep.lambda = lambda;
  rep.s = s;
  const double su = s + 0.5;
  const double root = std::sqrt(lambda);
  rep.u_constant = sobolev_norm(ul, su) /
                   (root * (1.0 + std::pow(lambda, su)) * sobolev_norm(u0, su));
  rep.v_constant = sobolev_norm(vl, s) /
                   (root * (1.0 + std::pow(lambda, s)) * sobolev_norm(v0, s));
  rep.u_l2_deviation =
      std::abs(lp_norm(ul, 2.0) / (root * lp_norm(u0, 2.0)) - 1.0);
  rep.v_l2_deviation =
      std::abs(lp_norm(vl, 2.0) / (root * lp_norm(v0, 2.0)) - 1.0);
  return rep;
}

}  // namespace sbolab
