#include "sbolab/fourier.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sbolab {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

cplx ipow(int m) {
  // i^m
  switch (((m % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

Spectrum apply_multiplier(const Spectrum& s, const SymbolFn& symbol,
                          Parity parity) {
  const std::size_t n = s.size();
  std::vector<cplx> c(n);
  for (std::size_t i = 0; i < n; ++i)
    c[i] = symbol(s.grid().wavenumber(i)) * s[i];
  if (parity == Parity::odd) c[s.grid().nyquist_index()] = cplx{0.0, 0.0};
  return Spectrum(s.grid_ptr(), std::move(c));
}

ComplexField apply_multiplier(const ComplexField& f, const SymbolFn& symbol,
                              Parity parity) {
  return from_spectral(apply_multiplier(to_spectral(f), symbol, parity));
}

RealField apply_multiplier(const RealField& f, const SymbolFn& symbol,
                           Parity parity) {
  return from_spectral_real(apply_multiplier(to_spectral(f), symbol, parity));
}

namespace {

cplx hilbert_symbol(double k) { return cplx{0.0, -sgn(k)}; }

SymbolFn deriv_symbol(int m) {
  const cplx im = ipow(m);
  return [m, im](double k) { return im * std::pow(k, m); };
}

SymbolFn riesz_symbol(double s) {
  return [s](double k) {
    if (k == 0.0) return cplx{s == 0.0 ? 1.0 : 0.0, 0.0};
    return cplx{std::pow(std::abs(k), s), 0.0};
  };
}

SymbolFn bessel_symbol(double s) {
  return [s](double k) {
    return cplx{std::pow(1.0 + k * k, 0.5 * s), 0.0};
  };
}

void check_deriv_order(int m) {
  if (m < 0) throw std::invalid_argument("derivative order must be >= 0");
}

}  // namespace

ComplexField hilbert(const ComplexField& f) {
  return apply_multiplier(f, hilbert_symbol, Parity::odd);
}
RealField hilbert(const RealField& f) {
  return apply_multiplier(f, hilbert_symbol, Parity::odd);
}

ComplexField deriv(const ComplexField& f, int m) {
  check_deriv_order(m);
  return apply_multiplier(f, deriv_symbol(m),
                          m % 2 ? Parity::odd : Parity::even);
}
RealField deriv(const RealField& f, int m) {
  check_deriv_order(m);
  return apply_multiplier(f, deriv_symbol(m),
                          m % 2 ? Parity::odd : Parity::even);
}

ComplexField riesz(const ComplexField& f, double s) {
  return apply_multiplier(f, riesz_symbol(s), Parity::even);
}
RealField riesz(const RealField& f, double s) {
  return apply_multiplier(f, riesz_symbol(s), Parity::even);
}

ComplexField bessel(const ComplexField& f, double s) {
  return apply_multiplier(f, bessel_symbol(s), Parity::even);
}
RealField bessel(const RealField& f, double s) {
  return apply_multiplier(f, bessel_symbol(s), Parity::even);
}

double sobolev_norm(const Spectrum& f, double s) {
  // Pairwise-summed weighted coefficient mass.
  const std::size_t n = f.size();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = f.grid().wavenumber(i);
    terms[i] = std::pow(1.0 + k * k, s) * std::norm(f[i]);
  }
  double acc = 0.0;
  // Sum smallest-index-last is irrelevant here; plain pairwise reduction.
  std::size_t len = n;
  std::vector<double> work = std::move(terms);
  while (len > 1) {
    std::size_t half = (len + 1) / 2;
    for (std::size_t i = 0; i + half < len; ++i) work[i] += work[i + half];
    len = half;
  }
  acc = work[0];
  return std::sqrt(std::max(0.0, acc));
}

double sobolev_norm(const ComplexField& f, double s) {
  return sobolev_norm(to_spectral(f), s);
}
double sobolev_norm(const RealField& f, double s) {
  return sobolev_norm(to_spectral(f), s);
}

double joint_norm(const ComplexField& u, const RealField& v, double s) {
  const double a = sobolev_norm(u, s + 0.5);
  const double b = sobolev_norm(v, s);
  return std::hypot(a, b);
}

// --- bounded symbols T1, T2 -------------------------------------------------

namespace {

// |xi| - sqrt(1 + xi^2), evaluated without cancellation.
double sqrt_defect(double xi) {
  const double a = std::abs(xi);
  return -1.0 / (a + std::sqrt(1.0 + xi * xi));
}

}  // namespace

cplx t1_symbol(double xi) {
  const double r = xi / std::sqrt(1.0 + xi * xi) * sqrt_defect(xi);
  return cplx{0.0, r};
}

double t2_symbol(double xi) {
  const double a = std::abs(xi);
  return std::sqrt(a) / std::sqrt(1.0 + xi * xi) * sqrt_defect(xi);
}

ComplexField t1_apply(const ComplexField& f) {
  return apply_multiplier(f, t1_symbol, Parity::odd);
}
RealField t1_apply(const RealField& f) {
  return apply_multiplier(f, t1_symbol, Parity::odd);
}
ComplexField t2_apply(const ComplexField& f) {
  return apply_multiplier(
      f, [](double k) { return cplx{t2_symbol(k), 0.0}; }, Parity::even);
}
RealField t2_apply(const RealField& f) {
  return apply_multiplier(
      f, [](double k) { return cplx{t2_symbol(k), 0.0}; }, Parity::even);
}

namespace {

double symbol_sup_scan(const std::function<double(double)>& mag,
                       std::size_t scan_points) {
  if (scan_points < 3)
    throw std::invalid_argument("scan needs at least 3 points");
  // xi = 0 plus a log ladder over [1e-6, 1e6].
  std::vector<double> xs;
  xs.reserve(scan_points + 1);
  xs.push_back(0.0);
  const double lo = -6.0, hi = 6.0;
  for (std::size_t i = 0; i < scan_points; ++i) {
    const double t =
        lo + (hi - lo) * static_cast<double>(i) /
                 static_cast<double>(scan_points - 1);
    xs.push_back(std::pow(10.0, t));
  }
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = mag(xs[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section refinement on the bracketing interval.
  double a = xs[best > 0 ? best - 1 : 0];
  double b = xs[best + 1 < xs.size() ? best + 1 : xs.size() - 1];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = mag(x1), f2 = mag(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = mag(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = mag(x1);
    }
  }
  return std::max({best_val, f1, f2});
}

}  // namespace

double t1_symbol_sup(std::size_t scan_points) {
  return symbol_sup_scan([](double x) { return std::abs(t1_symbol(x)); },
                         scan_points);
}

double t2_symbol_sup(std::size_t scan_points) {
  return symbol_sup_scan([](double x) { return std::abs(t2_symbol(x)); },
                         scan_points);
}

// --- commutators ------------------------------------------------------------

RealField commutator_Ds(const RealField& f, const RealField& g, double s,
                        CommutatorVariant variant) {
  if (!(s > 0.0)) throw std::invalid_argument("commutator order s must be > 0");
  const RealField fg = dealiased_product(f, g);
  switch (variant) {
    case CommutatorVariant::Ds:
      return riesz(fg, s) - dealiased_product(f, riesz(g, s));
    case CommutatorVariant::HDs:
      return hilbert(riesz(fg, s)) -
             dealiased_product(f, hilbert(riesz(g, s)));
    case CommutatorVariant::LeibnizDefect:
      return riesz(fg, s) - dealiased_product(f, riesz(g, s)) -
             dealiased_product(g, riesz(f, s));
  }
  throw std::logic_error("unreachable");
}

}  // namespace sbolab
