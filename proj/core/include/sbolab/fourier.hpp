#pragma once

// Fourier multiplier calculus on the periodic grid.
//
// Parity rules: odd symbols (sgn, odd derivatives) have no well-defined
// value at the Nyquist mode, so applying one zeroes that coefficient; even
// symbols act on it normally.  Real fields stay real because every symbol
// used here satisfies m(-k) = conj(m(k)) and the result is re-symmetrized.

#include <functional>

#include "sbolab/grid.hpp"

namespace sbolab {

enum class Parity { even, odd };

using SymbolFn = std::function<cplx(double)>;

Spectrum apply_multiplier(const Spectrum& s, const SymbolFn& symbol,
                          Parity parity);
ComplexField apply_multiplier(const ComplexField& f, const SymbolFn& symbol,
                              Parity parity);
RealField apply_multiplier(const RealField& f, const SymbolFn& symbol,
                           Parity parity);

// H: symbol -i sgn(k), sgn(0) = 0.
ComplexField hilbert(const ComplexField& f);
RealField hilbert(const RealField& f);

// d^m/dx^m: symbol (ik)^m, m >= 0.
ComplexField deriv(const ComplexField& f, int m = 1);
RealField deriv(const RealField& f, int m = 1);

// D^s = |k|^s.  s > 0: |0|^s = 0; s = 0: identity; s < 0: k = 0 zeroed.
ComplexField riesz(const ComplexField& f, double s);
RealField riesz(const RealField& f, double s);

// J^s = (1 + k^2)^{s/2}.
ComplexField bessel(const ComplexField& f, double s);
RealField bessel(const RealField& f, double s);

// (sum_n (1 + k_n^2)^s |fhat_n|^2)^{1/2}.
double sobolev_norm(const ComplexField& f, double s);
double sobolev_norm(const RealField& f, double s);
double sobolev_norm(const Spectrum& f, double s);

// ||(u, v)||_{H^{s+1/2} x H^s} = sqrt(||u||_{H^{s+1/2}}^2 + ||v||_{H^s}^2).
double joint_norm(const ComplexField& u, const RealField& v, double s);

// T1 = J^{-1} H d_xx - d_x,   symbol  i xi (1+xi^2)^{-1/2} (|xi| - sqrt(1+xi^2))
// T2 = D^{3/2} J^{-1} - D^{1/2}, symbol |xi|^{1/2} (1+xi^2)^{-1/2} (|xi| - sqrt(1+xi^2))
// Both symbols are bounded; the factor (|xi| - sqrt(1+xi^2)) is evaluated as
// -1/(|xi| + sqrt(1+xi^2)) to avoid cancellation at large |xi|.
cplx t1_symbol(double xi);
double t2_symbol(double xi);
ComplexField t1_apply(const ComplexField& f);
RealField t1_apply(const RealField& f);
ComplexField t2_apply(const ComplexField& f);
RealField t2_apply(const RealField& f);

// sup over |xi| in [0, 1e6] of the symbol modulus: dense log-spaced scan with
// `scan_points` samples, then golden-section refinement of the bracketing
// interval down to machine width.
double t1_symbol_sup(std::size_t scan_points = 20001);
double t2_symbol_sup(std::size_t scan_points = 20001);

enum class CommutatorVariant {
  Ds,             // D^s(fg) - f D^s g
  HDs,            // H D^s(fg) - f H D^s g
  LeibnizDefect,  // D^s(fg) - f D^s g - g D^s f
};

// Products are dealiased; s > 0.
RealField commutator_Ds(const RealField& f, const RealField& g, double s,
                        CommutatorVariant variant);

}  // namespace sbolab
