#include "sbolab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace sbolab {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Recursive pairwise summation keeps accumulation error at the
// eps*log(n) level, which the 1e-13 transform guarantees rely on.
template <typename T>
T pairwise_sum(const T* x, std::size_t n) {
  if (n <= 32) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
  }
  std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

template <typename F>
double pairwise_map_sum(std::size_t n, F f) {
  // Evaluate into a scratch vector once, then sum pairwise.
  std::vector<double> tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = f(i);
  return pairwise_sum(tmp.data(), n);
}

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b) {
  if (!a.same_as(b)) throw std::invalid_argument("grid mismatch");
}

// --- FFTW plan cache ------------------------------------------------------
// The planner is not thread-safe; execution via fftw_execute_dft on caller
// buffers is.  Plans use FFTW_ESTIMATE (no timing: deterministic) and
// FFTW_UNALIGNED (any buffer is admissible for new-array execution).

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

PlanPair lookup_plans(std::size_t n) {
  static std::mutex mu;
  static std::unordered_map<std::size_t, PlanPair> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(n), b(n);
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  PlanPair p;
  p.fwd = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_FORWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.fwd || !p.bwd) throw std::runtime_error("FFTW plan creation failed");
  cache.emplace(n, p);
  return p;
}

}  // namespace

namespace detail {

void require_same_grid_pub(const SpectralGrid& a, const SpectralGrid& b) {
  require_same_grid(a, b);
}

void fft_forward(std::size_t n, const cplx* in, cplx* out) {
  PlanPair p = lookup_plans(n);
  fftw_execute_dft(p.fwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void fft_backward(std::size_t n, const cplx* in, cplx* out) {
  PlanPair p = lookup_plans(n);
  fftw_execute_dft(p.bwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void samples_to_coeffs(double L, std::size_t n, const cplx* in, cplx* out) {
  fft_forward(n, in, out);
  const double scale = std::sqrt(L) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] *= scale;
}

void coeffs_to_samples(double L, std::size_t n, const cplx* in, cplx* out) {
  fft_backward(n, in, out);
  const double scale = 1.0 / std::sqrt(L);
  for (std::size_t i = 0; i < n; ++i) out[i] *= scale;
}

void pad_coeffs(const std::vector<cplx>& in, std::vector<cplx>& out,
                bool split_nyquist) {
  const std::size_t n = in.size();
  const std::size_t m = out.size();
  std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
  // Non-negative modes 0..N/2-1 keep their index; negative modes shift.
  for (std::size_t i = 0; i < n / 2; ++i) out[i] = in[i];
  for (std::size_t i = n / 2 + 1; i < n; ++i) out[i + (m - n)] = in[i];
  const cplx nyq = in[n / 2];
  if (m == n) {
    out[n / 2] = nyq;
  } else if (split_nyquist) {
    out[n / 2] = 0.5 * nyq;          // +N/2
    out[m - n / 2] = 0.5 * nyq;      // -N/2
  } else {
    out[m - n / 2] = nyq;            // -N/2, the documented mode ladder
  }
}

void truncate_coeffs(const std::vector<cplx>& in, std::vector<cplx>& out) {
  const std::size_t m = in.size();
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n / 2; ++i) out[i] = in[i];
  out[n / 2] = cplx{0.0, 0.0};
  for (std::size_t i = n / 2 + 1; i < n; ++i) out[i] = in[i + (m - n)];
}

Spectrum dealiased_product(const Spectrum& a, const Spectrum& b, bool split_a,
                           bool split_b) {
  require_same_grid(a.grid(), b.grid());
  const std::size_t n = a.size();
  const std::size_t m = 3 * n / 2;
  const double L = a.grid().length();
  std::vector<cplx> pa(m), pb(m), wa(m), wb(m);
  pad_coeffs(a.coeffs(), pa, split_a);
  pad_coeffs(b.coeffs(), pb, split_b);
  coeffs_to_samples(L, m, pa.data(), wa.data());
  coeffs_to_samples(L, m, pb.data(), wb.data());
  for (std::size_t j = 0; j < m; ++j) wa[j] *= wb[j];
  samples_to_coeffs(L, m, wa.data(), wb.data());
  std::vector<cplx> r(n);
  truncate_coeffs(wb, r);
  return Spectrum(a.grid_ptr(), std::move(r));
}

}  // namespace detail

// --- grid -----------------------------------------------------------------

SpectralGrid::SpectralGrid(double L, std::size_t N)
    : L_(L), N_(N), dx_(L / static_cast<double>(N)) {
  nodes_.resize(N);
  modes_.resize(N);
  wavenumbers_.resize(N);
  for (std::size_t j = 0; j < N; ++j)
    nodes_[j] = L * static_cast<double>(j) / static_cast<double>(N);
  const long half = static_cast<long>(N / 2);
  for (std::size_t i = 0; i < N; ++i) {
    long n = static_cast<long>(i);
    if (n >= half) n -= static_cast<long>(N);
    modes_[i] = n;
    wavenumbers_[i] = 2.0 * kPi * static_cast<double>(n) / L;
  }
}

GridPtr make_grid(double L, std::size_t N) {
  if (!std::isfinite(L) || !(L > 0.0))
    throw std::invalid_argument("L must be positive");
  if (!is_pow2(N)) throw std::invalid_argument("N must be even power of two");
  if (N < 8) throw std::invalid_argument("N must be at least 8");
  return std::make_shared<const SpectralGrid>(L, N);
}

// --- fields ---------------------------------------------------------------

ComplexField::ComplexField(GridPtr grid, std::vector<cplx> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  if (!grid_) throw std::invalid_argument("null grid");
  if (samples_.size() != grid_->size())
    throw std::invalid_argument("field size does not match grid");
}

ComplexField ComplexField::zeros(GridPtr grid) {
  std::size_t n = grid->size();
  return ComplexField(std::move(grid), std::vector<cplx>(n));
}

RealField::RealField(GridPtr grid, std::vector<double> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  if (!grid_) throw std::invalid_argument("null grid");
  if (samples_.size() != grid_->size())
    throw std::invalid_argument("field size does not match grid");
}

RealField RealField::zeros(GridPtr grid) {
  std::size_t n = grid->size();
  return RealField(std::move(grid), std::vector<double>(n));
}

Spectrum::Spectrum(GridPtr grid, std::vector<cplx> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (!grid_) throw std::invalid_argument("null grid");
  if (coeffs_.size() != grid_->size())
    throw std::invalid_argument("spectrum size does not match grid");
}

Spectrum Spectrum::zeros(GridPtr grid) {
  std::size_t n = grid->size();
  return Spectrum(std::move(grid), std::vector<cplx>(n));
}

// --- transforms -----------------------------------------------------------

Spectrum to_spectral(const ComplexField& f) {
  std::vector<cplx> c(f.size());
  detail::samples_to_coeffs(f.grid().length(), f.size(), f.samples().data(),
                            c.data());
  return Spectrum(f.grid_ptr(), std::move(c));
}

Spectrum to_spectral(const RealField& f) {
  std::vector<cplx> in(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) in[j] = cplx{f[j], 0.0};
  std::vector<cplx> c(f.size());
  detail::samples_to_coeffs(f.grid().length(), f.size(), in.data(), c.data());
  Spectrum s(f.grid_ptr(), std::move(c));
  symmetrize(s);
  return s;
}

ComplexField from_spectral(const Spectrum& s) {
  std::vector<cplx> out(s.size());
  detail::coeffs_to_samples(s.grid().length(), s.size(), s.coeffs().data(),
                            out.data());
  return ComplexField(s.grid_ptr(), std::move(out));
}

RealField from_spectral_real(const Spectrum& s) {
  Spectrum h = s;
  symmetrize(h);
  std::vector<cplx> out(h.size());
  detail::coeffs_to_samples(h.grid().length(), h.size(), h.coeffs().data(),
                            out.data());
  std::vector<double> r(h.size());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = out[j].real();
  return RealField(s.grid_ptr(), std::move(r));
}

void symmetrize(Spectrum& s) {
  auto& c = s.coeffs();
  const std::size_t n = c.size();
  c[0] = cplx{c[0].real(), 0.0};
  c[n / 2] = cplx{c[n / 2].real(), 0.0};
  for (std::size_t i = 1; i < n / 2; ++i) {
    const cplx a = 0.5 * (c[i] + std::conj(c[n - i]));
    c[i] = a;
    c[n - i] = std::conj(a);
  }
}

bool is_hermitian(const Spectrum& s) {
  const auto& c = s.coeffs();
  const std::size_t n = c.size();
  if (c[0].imag() != 0.0 || c[n / 2].imag() != 0.0) return false;
  for (std::size_t i = 1; i < n / 2; ++i)
    if (c[i] != std::conj(c[n - i])) return false;
  return true;
}

// --- reductions -----------------------------------------------------------

cplx inner_product(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid(), g.grid());
  std::vector<cplx> tmp(f.size());
  for (std::size_t j = 0; j < f.size(); ++j)
    tmp[j] = f[j] * std::conj(g[j]);
  return f.grid().dx() * pairwise_sum(tmp.data(), tmp.size());
}

double inner_product(const RealField& f, const RealField& g) {
  require_same_grid(f.grid(), g.grid());
  return f.grid().dx() * pairwise_map_sum(f.size(), [&](std::size_t j) {
           return f[j] * g[j];
         });
}

cplx integral(const ComplexField& f) {
  return f.grid().dx() * pairwise_sum(f.samples().data(), f.size());
}

double integral(const RealField& f) {
  return f.grid().dx() * pairwise_sum(f.samples().data(), f.size());
}

namespace {

template <typename FieldT>
double lp_norm_impl(const FieldT& f, double p) {
  const std::size_t n = f.size();
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(f[j]));
    return m;
  }
  if (p == 1.0)
    return f.grid().dx() *
           pairwise_map_sum(n, [&](std::size_t j) { return std::abs(f[j]); });
  if (p == 2.0 || p == 4.0 || p == 8.0) {
    const int half = static_cast<int>(p) / 2;  // power of |f|^2
    double s = f.grid().dx() * pairwise_map_sum(n, [&](std::size_t j) {
                 double q = std::norm(cplx(f[j]));
                 double r = q;
                 for (int t = 1; t < half; ++t) r *= q;
                 return r;
               });
    return std::pow(s, 1.0 / p);
  }
  throw std::invalid_argument("unsupported Lp exponent (use 1, 2, 4, 8, inf)");
}

}  // namespace

double lp_norm(const ComplexField& f, double p) { return lp_norm_impl(f, p); }
double lp_norm(const RealField& f, double p) { return lp_norm_impl(f, p); }

double sup_norm(const ComplexField& f, std::size_t factor) {
  return lp_norm(oversample(f, factor),
                 std::numeric_limits<double>::infinity());
}

double sup_norm(const RealField& f, std::size_t factor) {
  return lp_norm(oversample(f, factor),
                 std::numeric_limits<double>::infinity());
}

// --- oversampling and dealiased products ----------------------------------

namespace {

void require_pow2_factor(std::size_t factor) {
  if (!is_pow2(factor))
    throw std::invalid_argument("oversample factor must be a power of two");
}

}  // namespace

ComplexField oversample(const ComplexField& f, std::size_t factor) {
  require_pow2_factor(factor);
  if (factor == 1) return f;
  const std::size_t m = f.size() * factor;
  GridPtr fine = make_grid(f.grid().length(), m);
  Spectrum s = to_spectral(f);
  std::vector<cplx> padded(m);
  detail::pad_coeffs(s.coeffs(), padded, /*split_nyquist=*/false);
  std::vector<cplx> out(m);
  detail::coeffs_to_samples(f.grid().length(), m, padded.data(), out.data());
  return ComplexField(std::move(fine), std::move(out));
}

RealField oversample(const RealField& f, std::size_t factor) {
  require_pow2_factor(factor);
  if (factor == 1) return f;
  const std::size_t m = f.size() * factor;
  GridPtr fine = make_grid(f.grid().length(), m);
  Spectrum s = to_spectral(f);
  std::vector<cplx> padded(m);
  detail::pad_coeffs(s.coeffs(), padded, /*split_nyquist=*/true);
  std::vector<cplx> out(m);
  detail::coeffs_to_samples(f.grid().length(), m, padded.data(), out.data());
  std::vector<double> r(m);
  for (std::size_t j = 0; j < m; ++j) r[j] = out[j].real();
  return RealField(std::move(fine), std::move(r));
}

Spectrum dealiased_product(const Spectrum& a, const Spectrum& b) {
  return detail::dealiased_product(a, b, false, false);
}

Spectrum conj_spectrum(const Spectrum& a) {
  const std::size_t n = a.size();
  std::vector<cplx> c(n);
  c[0] = std::conj(a[0]);
  for (std::size_t i = 1; i < n; ++i) c[i] = std::conj(a[n - i]);
  // Note c[N/2] maps to itself under n -> -n mod N.
  return Spectrum(a.grid_ptr(), std::move(c));
}

ComplexField dealiased_product(const ComplexField& a, const ComplexField& b) {
  Spectrum s =
      detail::dealiased_product(to_spectral(a), to_spectral(b), false, false);
  return from_spectral(s);
}

ComplexField dealiased_product(const ComplexField& a, const RealField& b) {
  Spectrum s =
      detail::dealiased_product(to_spectral(a), to_spectral(b), false, true);
  return from_spectral(s);
}

RealField dealiased_product(const RealField& a, const RealField& b) {
  Spectrum s =
      detail::dealiased_product(to_spectral(a), to_spectral(b), true, true);
  return from_spectral_real(s);
}

RealField dealiased_abs2(const ComplexField& u) {
  Spectrum s = to_spectral(u);
  Spectrum r = detail::dealiased_product(s, conj_spectrum(s), false, false);
  return from_spectral_real(r);
}

}  // namespace sbolab
