#pragma once

// Uniform periodic grid and Fourier substrate.
//
// Conventions, used everywhere downstream:
//   nodes        x_j = j L / N,  j = 0..N-1
//   wavenumbers  k_n = 2 pi n / L, n in {-N/2, ..., N/2-1}, stored in FFT
//                order [0, 1, ..., N/2-1, -N/2, ..., -1]
//   transform    fhat_n = (sqrt(L)/N) sum_j f_j exp(-i k_n x_j)
//                f_j    = (1/sqrt(L)) sum_n fhat_n exp(+i k_n x_j)
// so that sum_j |f_j|^2 dx == sum_n |fhat_n|^2 (discrete Plancherel, both
// sides approximating the continuum L^2 mass).  Coefficients in this
// normalization do not depend on N, which makes zero-padding (oversampling,
// 3/2-rule dealiasing) a plain embedding of coefficient arrays.

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace sbolab {

using cplx = std::complex<double>;

class SpectralGrid {
public:
  SpectralGrid(double L, std::size_t N);

  double length() const { return L_; }
  std::size_t size() const { return N_; }
  double dx() const { return dx_; }
  double node(std::size_t j) const { return nodes_[j]; }
  // Signed integer mode index n_i in FFT storage order.
  long mode_index(std::size_t i) const { return modes_[i]; }
  double wavenumber(std::size_t i) const { return wavenumbers_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }
  std::size_t nyquist_index() const { return N_ / 2; }

  bool same_as(const SpectralGrid& other) const {
    return this == &other || (L_ == other.L_ && N_ == other.N_);
  }

private:
  double L_;
  std::size_t N_;
  double dx_;
  std::vector<double> nodes_;
  std::vector<long> modes_;
  std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

// Throws std::invalid_argument unless L > 0 and N is an even power of two
// with N >= 8.
GridPtr make_grid(double L, std::size_t N);

class ComplexField {
public:
  ComplexField(GridPtr grid, std::vector<cplx> samples);
  static ComplexField zeros(GridPtr grid);

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  const std::vector<cplx>& samples() const { return samples_; }
  std::vector<cplx>& samples() { return samples_; }
  cplx operator[](std::size_t j) const { return samples_[j]; }

private:
  GridPtr grid_;
  std::vector<cplx> samples_;
};

class RealField {
public:
  RealField(GridPtr grid, std::vector<double> samples);
  static RealField zeros(GridPtr grid);

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  const std::vector<double>& samples() const { return samples_; }
  std::vector<double>& samples() { return samples_; }
  double operator[](std::size_t j) const { return samples_[j]; }

private:
  GridPtr grid_;
  std::vector<double> samples_;
};

// Fourier coefficients in FFT storage order, unitary normalization.
class Spectrum {
public:
  Spectrum(GridPtr grid, std::vector<cplx> coeffs);
  static Spectrum zeros(GridPtr grid);

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  std::vector<cplx>& coeffs() { return coeffs_; }
  cplx operator[](std::size_t i) const { return coeffs_[i]; }

private:
  GridPtr grid_;
  std::vector<cplx> coeffs_;
};

namespace detail {
void require_same_grid_pub(const SpectralGrid& a, const SpectralGrid& b);
}

// Pointwise arithmetic (same grid required).
template <typename F>
F field_combine(const F& a, const F& b, double ca, double cb) {
  detail::require_same_grid_pub(a.grid(), b.grid());
  F r = a;
  for (std::size_t j = 0; j < r.size(); ++j)
    r.samples()[j] = ca * a.samples()[j] + cb * b.samples()[j];
  return r;
}

inline ComplexField operator+(const ComplexField& a, const ComplexField& b) {
  return field_combine(a, b, 1.0, 1.0);
}
inline ComplexField operator-(const ComplexField& a, const ComplexField& b) {
  return field_combine(a, b, 1.0, -1.0);
}
inline RealField operator+(const RealField& a, const RealField& b) {
  return field_combine(a, b, 1.0, 1.0);
}
inline RealField operator-(const RealField& a, const RealField& b) {
  return field_combine(a, b, 1.0, -1.0);
}
inline ComplexField operator*(double c, const ComplexField& f) {
  ComplexField r = f;
  for (auto& x : r.samples()) x = c * x;
  return r;
}
inline RealField operator*(double c, const RealField& f) {
  RealField r = f;
  for (auto& x : r.samples()) x = c * x;
  return r;
}

Spectrum to_spectral(const ComplexField& f);
// Symmetrizes the coefficients, so the result is Hermitian bit-for-bit.
Spectrum to_spectral(const RealField& f);
ComplexField from_spectral(const Spectrum& s);
// Enforces Hermitian symmetry, inverts, and drops the (roundoff-level)
// imaginary part.
RealField from_spectral_real(const Spectrum& s);

// In place: coeff(-n) = conj(coeff(n)); mean and Nyquist forced real.
void symmetrize(Spectrum& s);
bool is_hermitian(const Spectrum& s);

// dx * sum_j f_j conj(g_j): the discrete integral f gbar dx.
cplx inner_product(const ComplexField& f, const ComplexField& g);
double inner_product(const RealField& f, const RealField& g);

// dx * sum_j f_j (discrete integral of f).
cplx integral(const ComplexField& f);
double integral(const RealField& f);

// p in {1, 2, 4, 8} (rectangle rule) or infinity (grid max).
double lp_norm(const ComplexField& f, double p);
double lp_norm(const RealField& f, double p);

// Max of |f| on the factor-times-refined grid (band-limited interpolation).
double sup_norm(const ComplexField& f, std::size_t factor = 4);
double sup_norm(const RealField& f, std::size_t factor = 4);

// Zero-padded spectral interpolation onto factor*N points; factor a power of
// two >= 1.  Exact for band-limited data.
ComplexField oversample(const ComplexField& f, std::size_t factor);
RealField oversample(const RealField& f, std::size_t factor);

// Pointwise product evaluated on the 3N/2 zero-padded grid and truncated
// back to modes |n| <= N/2 - 1 (3/2-rule dealiasing; result is Nyquist-free).
ComplexField dealiased_product(const ComplexField& a, const ComplexField& b);
ComplexField dealiased_product(const ComplexField& a, const RealField& b);
RealField dealiased_product(const RealField& a, const RealField& b);
// |u|^2 as a real field, dealiased.
RealField dealiased_abs2(const ComplexField& u);

Spectrum dealiased_product(const Spectrum& a, const Spectrum& b);
// Spectrum of conj(f) from the spectrum of f: c(k) = conj(a(-k)).
Spectrum conj_spectrum(const Spectrum& a);

namespace detail {
// Unnormalized c2c transforms (FFTW sign convention: forward = exp(-ikx)).
// Thread-safe; plans are cached per size behind a mutex.
void fft_forward(std::size_t n, const cplx* in, cplx* out);
void fft_backward(std::size_t n, const cplx* in, cplx* out);

// Unitary transforms between sample and coefficient vectors of length n on a
// domain of length L (n need not equal the grid size: used for padded work).
void samples_to_coeffs(double L, std::size_t n, const cplx* in, cplx* out);
void coeffs_to_samples(double L, std::size_t n, const cplx* in, cplx* out);

// Embed coefficients of an N-grid into an M-grid (M >= N) coefficient array
// by signed mode index; the source Nyquist coefficient is split between
// +/- N/2 when `split_nyquist` (the Hermitian-preserving choice for real
// fields), else placed wholly at -N/2.
void pad_coeffs(const std::vector<cplx>& in, std::vector<cplx>& out,
                bool split_nyquist);
// Inverse embedding: keep modes |n| <= N/2 - 1, zero the target Nyquist.
void truncate_coeffs(const std::vector<cplx>& in, std::vector<cplx>& out);

// Dealiased product with per-factor Nyquist placement (split for Hermitian
// spectra of real fields, whole-at--N/2 for complex ones).
Spectrum dealiased_product(const Spectrum& a, const Spectrum& b, bool split_a,
                           bool split_b);
}  // namespace detail

}  // namespace sbolab
