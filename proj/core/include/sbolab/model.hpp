#pragma once

// The coupled system and its lambda-rescaled family:
//
//   i du/dt + d_xx u = lambda u v + beta |u|^2 u
//     dv/dt - H d_xx v + rho v d_x v = d_x(|u|^2)
//
// lambda comes from the scaling u_l(x,t) = l u(lx, l^2 t), v_l = l v(lx,
// l^2 t) and multiplies the coupling uv only; the v-equation is invariant.
// lambda = 1 is the physical system.

#include <random>
#include <string>

#include "sbolab/grid.hpp"

namespace sbolab {

struct SboParams {
  double beta = 1.0;
  double rho = 1.0;
  double lambda = 1.0;
};

// Finite coefficients, lambda in (0, 1].
void validate(const SboParams& p);

struct SboState {
  ComplexField u;
  RealField v;
  double t = 0.0;
};

// Difference variables w = u1 - u2, z = v1 - v2 together with the parent
// sums u = u1 + u2, v = v1 + v2 they couple to:
//
//   i dw/dt + d_xx w = (lambda/2)(v w + u z)
//                      + beta(|w|^2 w + 2|u|^2 w + u^2 conj(w))/4 ... (see diff_rhs)
//     dz/dt - H d_xx z + (rho/2) d_x(v z) = d_x Re(conj(u) w)
struct DiffState {
  ComplexField w;
  RealField z;
  ComplexField u;
  RealField v;
  double t = 0.0;
};

struct SboRhs {
  ComplexField du;
  RealField dv;
};

struct DiffRhs {
  ComplexField dw;
  RealField dz;
};

// Full right-hand sides (linear + nonlinear), products dealiased.
SboRhs rhs(const SboState& s, const SboParams& p);
// Exactly rhs(u1,v1) - rhs(u2,v2) when (w,z,u,v) come from a parent pair:
// the cubic splits as beta(1/4 |w|^2 w + 1/2 |u|^2 w + 1/4 u^2 conj(w)).
DiffRhs diff_rhs(const DiffState& d, const SboParams& p);

// --- initial data ----------------------------------------------------------
// Closed-form families, evaluated analytically on any grid (the same
// function sampled; nothing is tied to a particular N).

struct InitDataSpec {
  enum class Family { gaussian, plane_wave, random_band_limited, file };
  Family family = Family::gaussian;

  double amplitude = 0.0;
  // gaussian: amplitude * exp(-((x-center)/width)^2) * e^{i wavenumber x}
  double width = 1.0;
  double center = 0.0;
  // plane_wave: amplitude * e^{i wavenumber x} (real evaluation: cos)
  double wavenumber = 0.0;
  // random_band_limited: seeded Fourier sum over modes 1..band of the base
  // period, spectral amplitudes (1 + k^2)^{-decay/2}
  int band = 0;
  double decay = 0.0;
  unsigned long long seed = 0;
  double base_length = 0.0;
  // file: snapshot to load (grid must match; not rescalable)
  std::string path;
};

ComplexField eval_complex(const InitDataSpec& spec, const GridPtr& grid);
RealField eval_real(const InitDataSpec& spec, const GridPtr& grid);

struct InitPair {
  InitDataSpec u0;
  InitDataSpec v0;
};

// Spec-level change of variables f -> lambda f(lambda x): gaussian(A, w)
// becomes gaussian(lambda A, w/lambda), plane waves scale amplitude and
// wavenumber, random families scale amplitude and base period.  No arrays
// are resampled; on the 2^{-j} ladder the roundtrip lambda, 1/lambda is
// bit-exact.  File-based data cannot be rescaled.
InitDataSpec rescale_initdata(const InitDataSpec& spec, double lambda);

// Largest lambda = 2^{-j} whose rescaled data satisfies
// ||(u_l, v_l)||_{H^{s+1/2} x H^s} <= delta, the norm evaluated on the grid
// (L_ref/lambda, N_ref) that tracks the dilation.  Throws after 60 halvings.
double choose_lambda(const InitPair& init, double delta, double s,
                     double L_ref = 100.0, std::size_t N_ref = 1024);

struct ScalingReport {
  double lambda = 1.0;
  double s = 0.0;
  // Measured ||f_l|| / (lambda^{1/2} (1 + lambda^{s_f}) ||f||), s_f the
  // component's Sobolev index; <= 1 up to discretization for lambda <= 1.
  double u_constant = 0.0;
  double v_constant = 0.0;
  // |  ||f_l||_{L^2} / (lambda^{1/2} ||f||_{L^2})  -  1 |: the L^2 piece of
  // the scaling is an identity, not an inequality.
  double u_l2_deviation = 0.0;
  double v_l2_deviation = 0.0;
};

ScalingReport scaling_norm_check(const InitPair& init, double lambda, double s,
                                 double L = 100.0, std::size_t N = 512);

namespace detail {
// Deterministic standard normals: Box-Muller over the mt19937_64 output
// sequence (which the standard pins down exactly), avoiding the
// implementation-defined std::normal_distribution.
class GaussianDraw {
 public:
  explicit GaussianDraw(unsigned long long seed) : eng_(seed) {}
  double operator()();

 private:
  double uniform01();
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};
}  // namespace detail

}  // namespace sbolab
