#include "sbolab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>

#include "sbolab/model.hpp"

namespace sbolab {
namespace {

constexpr double kTiny = 1e-300;
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kProbeBand = 60;
constexpr std::size_t kCoarseN = 256;
constexpr std::size_t kFineN = 1024;

// Band-limited random field: identical function at every resolution, and
// all pairwise products stay below the coarse grid's Nyquist frequency.
RealField probe_field(const GridPtr& grid, double decay, std::uint64_t seed) {
  InitDataSpec spec;
  spec.family = InitDataSpec::Family::random_band_limited;
  spec.amplitude = 1.0;
  spec.band = kProbeBand;
  spec.decay = decay;
  spec.seed = seed;
  spec.base_length = kTwoPi;
  return eval_real(spec, grid);
}

// L^p norm of the underlying function: evaluate on a 4x oversampled grid so
// the quadrature sees the product structure, not bare grid samples.
double norm_p(const RealField& f, double p) {
  return lp_norm(oversample(f, 4), p);
}

bool p_in(double p, std::initializer_list<double> allowed) {
  for (double a : allowed) {
    if (std::isinf(a) ? std::isinf(p) : p == a) return true;
  }
  return false;
}

double inv_p(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// SplitMix64 finalizer.  Per-sample seeds are derived by hashing
// (base seed, stream, sample index) so that nearby base seeds produce
// unrelated sample sets; a plain additive offset would make seed and
// seed + 1 share all but one sample.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index) {
  return mix64(mix64(seed ^ (stream << 56)) + index);
}

bool harmonic_matches(double lhs, std::initializer_list<double> rhs) {
  double sum = 0.0;
  for (double p : rhs) sum += inv_p(p);
  return std::abs(inv_p(lhs) - sum) <= 1e-12;
}

using RatioFn = std::function<double(const RealField&, const RealField&)>;

ProbeReport run_probe(std::string tag, std::vector<double> exponents,
                      std::size_t samples, std::uint64_t seed,
                      const RatioFn& ratio) {
  if (samples == 0) throw std::invalid_argument("samples must be positive");
  ProbeReport rep;
  rep.tag = std::move(tag);
  rep.exponents = std::move(exponents);
  rep.samples = samples;
  const std::size_t levels[2] = {kCoarseN, kFineN};
  double maxes[2] = {0.0, 0.0};
  for (int lev = 0; lev < 2; ++lev) {
    GridPtr grid = make_grid(kTwoPi, levels[lev]);
    for (std::size_t i = 0; i < samples; ++i) {
      const RealField f = probe_field(grid, 1.5, sample_seed(seed, 1, i));
      const RealField g = probe_field(grid, 1.0, sample_seed(seed, 2, i));
      const double r = ratio(f, g);
      if (!std::isfinite(r)) {
        throw std::runtime_error("probe ratio is not finite");
      }
      maxes[lev] = std::max(maxes[lev], r);
    }
  }
  rep.ratio_coarse = maxes[0];
  rep.ratio_fine = maxes[1];
  rep.max_ratio = std::max(maxes[0], maxes[1]);
  rep.stable = maxes[0] > 0.0
                   ? std::abs(maxes[1] - maxes[0]) <= 0.10 * maxes[0]
                   : maxes[1] == 0.0;
  return rep;
}

double safe_ratio(double num, double den) {
  if (den <= kTiny) return num <= kTiny ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::max(y[i], kTiny));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double det = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / det;
}

template <typename Field>
Field project_impl(const Field& f, double n, const CutoffChi& chi) {
  if (!(n > 0.0)) throw std::invalid_argument("cutoff n must be positive");
  return apply_multiplier(
      f, [&](double k) { return cplx(chi(std::abs(k) / n), 0.0); },
      Parity::even);
}

template <typename Field>
BonaSmithReport rates_impl(const Field& f, double regularity, double sigma,
                           const std::vector<double>& ladder) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  if (!(regularity >= sigma)) {
    throw std::invalid_argument("sigma must not exceed the base regularity");
  }
  if (ladder.size() < 2) {
    throw std::invalid_argument("ladder needs at least two cutoffs");
  }
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0) || (i > 0 && !(ladder[i] > ladder[i - 1]))) {
      throw std::invalid_argument("ladder entries must be positive and increasing");
    }
  }
  BonaSmithReport rep;
  rep.ladder = ladder;
  const CutoffChi chi;
  for (double n : ladder) {
    const Field pn = bona_smith_project(f, n, chi);
    rep.growth_norms.push_back(sobolev_norm(pn, regularity + sigma));
    rep.decay_norms.push_back(sobolev_norm(pn - f, regularity - sigma));
  }
  rep.growth_slope = loglog_slope(ladder, rep.growth_norms);
  rep.decay_slope = loglog_slope(ladder, rep.decay_norms);
  rep.growth_ok = rep.growth_slope <= sigma + 0.1;
  rep.decay_ok = rep.decay_slope <= -sigma + 0.1;
  return rep;
}

}  // namespace

ProbeReport probe_fractional_leibniz(double alpha, double alpha1,
                                     double alpha2, double p, double p1,
                                     double p2, std::size_t samples,
                                     std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (!(alpha1 > 0.0 && alpha2 > 0.0 &&
        std::abs(alpha1 + alpha2 - alpha) <= 1e-12)) {
    throw std::invalid_argument("alpha1 and alpha2 must be positive and sum to alpha");
  }
  if (!p_in(p, {1.0, 2.0, 4.0, 8.0})) {
    throw std::invalid_argument("p must be one of 1, 2, 4, 8");
  }
  if (!p_in(p1, {2.0, 4.0, 8.0}) || !p_in(p2, {2.0, 4.0, 8.0})) {
    throw std::invalid_argument("p1 and p2 must be one of 2, 4, 8");
  }
  if (!harmonic_matches(p, {p1, p2})) {
    throw std::invalid_argument("exponents must satisfy 1/p = 1/p1 + 1/p2");
  }
  return run_probe(
      "fractional_leibniz", {alpha, alpha1, alpha2, p, p1, p2}, samples, seed,
      [=](const RealField& f, const RealField& g) {
        const RealField defect =
            commutator_Ds(f, g, alpha, CommutatorVariant::LeibnizDefect);
        const double num = norm_p(defect, p);
        const double den =
            norm_p(riesz(f, alpha1), p1) * norm_p(riesz(g, alpha2), p2);
        return safe_ratio(num, den);
      });
}

ProbeReport probe_kato_ponce(double s, KatoPonceCase kind,
                             const KatoPonceExponents& ex,
                             std::size_t samples, std::uint64_t seed) {
  if (kind == KatoPonceCase::one && !(s > 0.0 && s <= 1.0)) {
    throw std::invalid_argument("s must lie in (0, 1] for case I");
  }
  if (kind == KatoPonceCase::two && !(s > 1.0)) {
    throw std::invalid_argument("s must exceed 1 for case II");
  }
  if (!p_in(ex.p, {2.0, 4.0, 8.0})) {
    throw std::invalid_argument("p must be one of 2, 4, 8");
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (double q : {ex.p1, ex.p2}) {
    if (!p_in(q, {2.0, 4.0, 8.0, inf})) {
      throw std::invalid_argument("p1 and p2 must be one of 2, 4, 8, inf");
    }
  }
  if (!harmonic_matches(ex.p, {ex.p1, ex.p2})) {
    throw std::invalid_argument("exponents must satisfy 1/p = 1/p1 + 1/p2");
  }
  if (kind == KatoPonceCase::two) {
    for (double q : {ex.p3, ex.p4}) {
      if (!p_in(q, {2.0, 4.0, 8.0, inf})) {
        throw std::invalid_argument("p3 and p4 must be one of 2, 4, 8, inf");
      }
    }
    if (!harmonic_matches(ex.p, {ex.p3, ex.p4})) {
      throw std::invalid_argument("exponents must satisfy 1/p = 1/p3 + 1/p4");
    }
  }
  const char* tag =
      kind == KatoPonceCase::one ? "kato_ponce_I" : "kato_ponce_II";
  std::vector<double> expo = {s, ex.p, ex.p1, ex.p2};
  if (kind == KatoPonceCase::two) {
    expo.push_back(ex.p3);
    expo.push_back(ex.p4);
  }
  return run_probe(
      tag, std::move(expo), samples, seed,
      [=](const RealField& f, const RealField& g) {
        const double num = std::max(
            norm_p(commutator_Ds(f, g, s, CommutatorVariant::Ds), ex.p),
            norm_p(commutator_Ds(f, g, s, CommutatorVariant::HDs), ex.p));
        double den;
        if (kind == KatoPonceCase::one) {
          den = norm_p(riesz(deriv(f, 1), s - 1.0), ex.p1) * norm_p(g, ex.p2);
        } else {
          den = norm_p(riesz(f, s), ex.p1) * norm_p(g, ex.p2) +
                norm_p(deriv(f, 1), ex.p3) * norm_p(riesz(g, s - 1.0), ex.p4);
        }
        return safe_ratio(num, den);
      });
}

ProbeReport probe_calderon(int l, int m, double p, std::size_t samples,
                           std::uint64_t seed) {
  if (l < 0 || m < 0) {
    throw std::invalid_argument("l and m must be nonnegative");
  }
  if (!p_in(p, {2.0, 4.0, 8.0})) {
    throw std::invalid_argument("p must be one of 2, 4, 8");
  }
  return run_probe(
      "calderon", {static_cast<double>(l), static_cast<double>(m), p}, samples,
      seed, [=](const RealField& f, const RealField& g) {
        const RealField gm = deriv(g, m);
        const RealField comm =
            hilbert(dealiased_product(f, gm)) -
            dealiased_product(f, hilbert(gm));
        const double num = norm_p(deriv(comm, l), p);
        const double den = sup_norm(deriv(f, l + m)) * norm_p(g, p);
        return safe_ratio(num, den);
      });
}

ProbeReport probe_sharp_commutation(double alpha, double beta, double p,
                                    std::size_t samples, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1)");
  }
  if (!(beta > 0.0 && beta <= 1.0 - alpha)) {
    throw std::invalid_argument("beta must lie in (0, 1 - alpha]");
  }
  if (!p_in(p, {2.0, 4.0, 8.0})) {
    throw std::invalid_argument("p must be one of 2, 4, 8");
  }
  return run_probe(
      "sharp_commutation", {alpha, beta, p}, samples, seed,
      [=](const RealField& f, const RealField& g) {
        const RealField term1 = riesz(
            dealiased_product(g, riesz(f, 1.0 - alpha - beta)), alpha + beta);
        const RealField term2 =
            riesz(dealiased_product(g, riesz(f, 1.0 - alpha)), alpha);
        const double num = norm_p(term1 - term2, p);
        const double den = sup_norm(deriv(g, 1)) * norm_p(f, p);
        return safe_ratio(num, den);
      });
}

double CutoffChi::operator()(double r) const {
  const double a = std::abs(r);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double x = a - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

ComplexField bona_smith_project(const ComplexField& f, double n,
                                const CutoffChi& chi) {
  return project_impl(f, n, chi);
}

RealField bona_smith_project(const RealField& f, double n,
                             const CutoffChi& chi) {
  return project_impl(f, n, chi);
}

BonaSmithReport bona_smith_rates(const ComplexField& f, double regularity,
                                 double sigma,
                                 const std::vector<double>& ladder) {
  return rates_impl(f, regularity, sigma, ladder);
}

BonaSmithReport bona_smith_rates(const RealField& f, double regularity,
                                 double sigma,
                                 const std::vector<double>& ladder) {
  return rates_impl(f, regularity, sigma, ladder);
}

double apriori_time(double norm, double a_s) {
  if (!(a_s > 0.0)) throw std::invalid_argument("a_s must be positive");
  if (!(norm >= 0.0)) throw std::invalid_argument("norm must be nonnegative");
  const double d = a_s * (1.0 + norm);
  return 1.0 / (d * d);
}

}  // namespace sbolab
