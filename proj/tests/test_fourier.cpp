#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "sbolab/fourier.hpp"
#include "sbolab/grid.hpp"
#include "test_helpers.hpp"

using namespace sbolab;
using namespace sbolab::testing;

namespace {

RealField make_cos(const GridPtr& g, double k, double amp = 1.0) {
  std::vector<double> v(g->size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = amp * std::cos(k * g->node(j));
  }
  return RealField(g, v);
}

RealField make_sin(const GridPtr& g, double k, double amp = 1.0) {
  std::vector<double> v(g->size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = amp * std::sin(k * g->node(j));
  }
  return RealField(g, v);
}

}  // namespace

TEST_CASE("Hilbert transform on pure modes") {
  const GridPtr g = make_grid(2.0 * kPi, 64);
  // H cos(kx) = sin(kx), H sin(kx) = -cos(kx) for k > 0; constants -> 0.
  CHECK(max_abs_diff(hilbert(make_cos(g, 3.0)), make_sin(g, 3.0)) <= 1e-13);
  CHECK(max_abs_diff(hilbert(make_sin(g, 5.0)), make_cos(g, 5.0, -1.0)) <=
        1e-13);
  CHECK(max_abs(hilbert(make_cos(g, 0.0, 2.5))) <= 1e-14);
}

TEST_CASE("Hilbert involution: H^2 = -(I - mean)") {
  const GridPtr g = make_grid(11.0, 128);
  const RealField f = random_real(g, 40, 0.4, 31);
  const RealField hh = hilbert(hilbert(f));
  const double mean = integral(f) / g->length();
  double m = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    m = std::max(m, std::abs(hh[j] + (f[j] - mean)));
  }
  CHECK(m <= 1e-12);
}

TEST_CASE("derivatives on closed forms") {
  const GridPtr g = make_grid(2.0 * kPi, 64);
  CHECK(max_abs_diff(deriv(make_cos(g, 4.0)), make_sin(g, 4.0, -4.0)) <= 1e-12);
  CHECK(max_abs_diff(deriv(make_cos(g, 4.0), 2), make_cos(g, 4.0, -16.0)) <=
        1e-11);
  // deriv with m = 0 is the identity.
  const RealField f = random_real(g, 20, 0.1, 3);
  CHECK(max_abs_diff(deriv(f, 0), f) <= 1e-13);
}

TEST_CASE("Riesz and Bessel multipliers on pure modes") {
  const GridPtr g = make_grid(2.0 * kPi, 64);
  // D^s cos(kx) = k^s cos(kx); J^s cos(kx) = (1+k^2)^{s/2} cos(kx).
  const double k = 5.0, s = 0.75;
  CHECK(max_abs_diff(riesz(make_cos(g, k), s),
                     make_cos(g, k, std::pow(k, s))) <= 1e-12);
  CHECK(max_abs_diff(bessel(make_cos(g, k), s),
                     make_cos(g, k, std::pow(1.0 + k * k, s / 2.0))) <= 1e-12);
  // D^s of a constant vanishes for s > 0 and is the identity at s = 0.
  CHECK(max_abs(riesz(make_cos(g, 0.0, 3.0), 0.5)) == 0.0);
  CHECK(max_abs_diff(riesz(make_cos(g, 0.0, 3.0), 0.0), make_cos(g, 0.0, 3.0)) <=
        1e-13);
  // Semigroup: D^{1/2} D^{1/2} = D^1.
  const RealField f = random_real(g, 25, 0.6, 8);
  CHECK(max_abs_diff(riesz(riesz(f, 0.5), 0.5), riesz(f, 1.0)) <= 1e-12);
}

TEST_CASE("multiplier identities D = H d_x and d_x = -H D") {
  const GridPtr g = make_grid(17.0, 128);
  const RealField f = random_real(g, 50, 0.7, 12);
  CHECK(max_abs_diff(riesz(f, 1.0), hilbert(deriv(f, 1))) <= 1e-12);
  const RealField lhs = deriv(f, 1);
  const RealField rhs = -1.0 * hilbert(riesz(f, 1.0));
  CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
}

TEST_CASE("odd symbols zero the Nyquist mode") {
  const GridPtr g = make_grid(2.0 * kPi, 32);
  // Put content on the Nyquist mode (cos(16x) is representable).
  Spectrum s = Spectrum::zeros(g);
  s.coeffs()[g->nyquist_index()] = 2.0;
  const RealField f = from_spectral_real(s);
  const Spectrum hs = to_spectral(hilbert(f));
  CHECK(std::abs(hs[g->nyquist_index()]) == 0.0);
  const Spectrum ds = to_spectral(deriv(f, 1));
  CHECK(std::abs(ds[g->nyquist_index()]) == 0.0);
  // Even symbols act on it normally: D^1 keeps |k| there.
  const Spectrum rs = to_spectral(riesz(f, 1.0));
  const double kny = std::abs(g->wavenumber(g->nyquist_index()));
  CHECK(std::abs(rs[g->nyquist_index()] - 2.0 * kny) <= 1e-12);
}

TEST_CASE("Sobolev norms on pure modes and joint norm") {
  const double L = 2.0 * kPi;
  const GridPtr g = make_grid(L, 64);
  const double k = 3.0, s = 1.25;
  // ||cos(kx)||_{H^s}^2 = (1+k^2)^s * L/2.
  const double expect =
      std::sqrt(std::pow(1.0 + k * k, s) * L / 2.0);
  CHECK(sobolev_norm(make_cos(g, k), s) == doctest::Approx(expect).epsilon(1e-13));

  const ComplexField u = random_complex(g, 20, 1.0, 4);
  const RealField v = random_real(g, 20, 1.0, 5);
  CHECK(joint_norm(u, v, 1.5) ==
        doctest::Approx(std::hypot(sobolev_norm(u, 2.0), sobolev_norm(v, 1.5)))
            .epsilon(1e-14));
}

TEST_CASE("dispersive symbol differences: frozen suprema") {
  // Independently computed (40-digit arithmetic, golden-section refinement):
  //   sup |T1| = 0.30028310600077761 at |xi| ~ 0.78615
  //   sup |T2| = 0.39759856843450279 at |xi| ~ 0.39332
  const double c1 = t1_symbol_sup();
  const double c2 = t2_symbol_sup();
  CHECK(std::abs(c1 - 0.30028310600077761) <= 1e-10);
  CHECK(std::abs(c2 - 0.39759856843450279) <= 1e-10);
  CHECK(c1 < 1.0);
  CHECK(c2 < 1.0);
  // Scan-refinement stability.
  CHECK(std::abs(t1_symbol_sup(40001) - c1) <= 1e-10);
  CHECK(std::abs(t2_symbol_sup(40001) - c2) <= 1e-10);
  // Pointwise symbol values at the frozen argmax.
  CHECK(std::abs(std::abs(t1_symbol(0.78615137775742328)) - 0.30028310600077761) <=
        1e-12);
  CHECK(std::abs(std::abs(t2_symbol(0.39331989319032864)) - 0.39759856843450279) <=
        1e-12);
  CHECK(std::abs(t1_symbol(0.0)) == 0.0);
  CHECK(std::abs(t2_symbol(0.0)) == 0.0);
}

TEST_CASE("T1 and T2 are L2-bounded by their symbol suprema") {
  const GridPtr g = make_grid(29.0, 128);
  const double c1 = t1_symbol_sup();
  const double c2 = t2_symbol_sup();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RealField f = random_real(g, 60, 0.2, 100 + seed);
    const double n2 = lp_norm(f, 2.0);
    CHECK(lp_norm(t1_apply(f), 2.0) <= c1 * n2 * (1.0 + 1e-12));
    CHECK(lp_norm(t2_apply(f), 2.0) <= c2 * n2 * (1.0 + 1e-12));
  }
}

TEST_CASE("commutators vanish for constant multiplier functions") {
  const GridPtr g = make_grid(2.0 * kPi, 64);
  const RealField c = make_cos(g, 0.0, 0.5);  // constant 1/2
  const RealField h = random_real(g, 20, 0.5, 51);
  CHECK(max_abs(commutator_Ds(c, h, 0.75, CommutatorVariant::Ds)) <= 1e-13);
  CHECK(max_abs(commutator_Ds(c, h, 0.75, CommutatorVariant::HDs)) <= 1e-13);
  CHECK(max_abs(commutator_Ds(c, h, 0.75, CommutatorVariant::LeibnizDefect)) <=
        1e-13);
}

TEST_CASE("commutator variants agree with their definitions") {
  const GridPtr g = make_grid(2.0 * kPi, 128);
  const RealField f = random_real(g, 20, 1.5, 61);
  const RealField h = random_real(g, 20, 1.0, 62);
  const double s = 0.6;
  const RealField fg = dealiased_product(f, h);
  const RealField ds_ref = riesz(fg, s) - dealiased_product(f, riesz(h, s));
  CHECK(max_abs_diff(commutator_Ds(f, h, s, CommutatorVariant::Ds), ds_ref) <=
        1e-13);
  const RealField hds_ref =
      hilbert(riesz(fg, s)) - dealiased_product(f, hilbert(riesz(h, s)));
  CHECK(max_abs_diff(commutator_Ds(f, h, s, CommutatorVariant::HDs), hds_ref) <=
        1e-13);
  const RealField leib_ref = ds_ref - dealiased_product(h, riesz(f, s));
  CHECK(max_abs_diff(
            commutator_Ds(f, h, s, CommutatorVariant::LeibnizDefect), leib_ref) <=
        1e-13);
  CHECK_THROWS_WITH((void)commutator_Ds(f, h, 0.0, CommutatorVariant::Ds),
                    "commutator order s must be > 0");
}

TEST_CASE("apply_multiplier respects parity at the Nyquist mode") {
  const GridPtr g = make_grid(2.0 * kPi, 32);
  Spectrum s = Spectrum::zeros(g);
  s.coeffs()[g->nyquist_index()] = 1.0;
  const auto one = [](double) { return cplx(1.0, 0.0); };
  const Spectrum even = apply_multiplier(s, one, Parity::even);
  CHECK(even[g->nyquist_index()] == cplx(1.0, 0.0));
  const Spectrum odd = apply_multiplier(s, one, Parity::odd);
  CHECK(odd[g->nyquist_index()] == cplx(0.0, 0.0));
}
