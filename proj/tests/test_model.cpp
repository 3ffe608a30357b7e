#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <vector>

#include "sbolab/fourier.hpp"
#include "sbolab/grid.hpp"
#include "sbolab/io.hpp"
#include "sbolab/model.hpp"
#include "test_helpers.hpp"

using namespace sbolab;
using namespace sbolab::testing;

TEST_CASE("parameter validation") {
  SboParams p;
  CHECK_NOTHROW(validate(p));
  p.lambda = 0.0;
  CHECK_THROWS_WITH(validate(p), "lambda must be in (0, 1]");
  p.lambda = 1.5;
  CHECK_THROWS_WITH(validate(p), "lambda must be in (0, 1]");
  p.lambda = 0.25;
  CHECK_NOTHROW(validate(p));
  p.beta = std::nan("");
  CHECK_THROWS_WITH(validate(p), "beta must be finite");
  p.beta = 1.0;
  p.rho = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH(validate(p), "rho must be finite");
}

TEST_CASE("plane wave in a constant background: closed-form u equation") {
  // u = A e^{ikx}, v = c: i du/dt = -d_xx u + lambda u v + beta |u|^2 u
  // so du/dt = i(-k^2*(-1)) ... explicitly du = (-i k^2 - i lambda c
  // - i beta A^2) u, and dv = 0 (all v-equation terms are x-independent).
  const GridPtr g = make_grid(2.0 * kPi, 64);
  const double A = 0.7, k = 3.0, c = 0.4;
  SboParams p;
  p.beta = 0.8;
  p.rho = 1.3;
  p.lambda = 0.9;

  std::vector<cplx> us(g->size());
  std::vector<double> vs(g->size(), c);
  for (std::size_t j = 0; j < us.size(); ++j) {
    const double x = g->node(j);
    us[j] = A * cplx(std::cos(k * x), std::sin(k * x));
  }
  SboState st{ComplexField(g, us), RealField(g, vs), 0.0};
  const SboRhs r = rhs(st, p);

  const cplx coef =
      cplx(0.0, -1.0) * (k * k + p.lambda * c + p.beta * A * A);
  double mu = 0.0, mv = 0.0;
  for (std::size_t j = 0; j < g->size(); ++j) {
    mu = std::max(mu, std::abs(r.du[j] - coef * st.u[j]));
    mv = std::max(mv, std::abs(r.dv[j]));
  }
  CHECK(mu <= 1e-12);
  CHECK(mv <= 1e-13);
}

TEST_CASE("v equation on a single cosine: dispersion and advection terms") {
  // u = 0, v = cos(mx):
  //   dv = H d_xx v - rho v d_x v = -m^2 sin(mx) + (rho m / 2) sin(2mx).
  const GridPtr g = make_grid(2.0 * kPi, 64);
  const double m = 3.0;
  SboParams p;
  p.rho = 1.7;
  std::vector<double> vs(g->size());
  for (std::size_t j = 0; j < vs.size(); ++j) vs[j] = std::cos(m * g->node(j));
  SboState st{ComplexField::zeros(g), RealField(g, vs), 0.0};
  const SboRhs r = rhs(st, p);
  double worst = 0.0;
  for (std::size_t j = 0; j < g->size(); ++j) {
    const double x = g->node(j);
    const double expect =
        -m * m * std::sin(m * x) + 0.5 * p.rho * m * std::sin(2.0 * m * x);
    worst = std::max(worst, std::abs(r.dv[j] - expect));
  }
  CHECK(worst <= 1e-12);
  CHECK(max_abs(r.du) == 0.0);
}

TEST_CASE("coupling forcing d_x(|u|^2) on a modulated gaussian-free case") {
  // u = e^{ix} + e^{2ix} gives |u|^2 = 2 + 2cos(x), so d_x|u|^2 = -2 sin x.
  const GridPtr g = make_grid(2.0 * kPi, 64);
  std::vector<cplx> us(g->size());
  for (std::size_t j = 0; j < us.size(); ++j) {
    const double x = g->node(j);
    us[j] = cplx(std::cos(x) + std::cos(2.0 * x),
                 std::sin(x) + std::sin(2.0 * x));
  }
  SboParams p;
  p.rho = 0.0;  // isolate the forcing
  SboState st{ComplexField(g, us), RealField::zeros(g), 0.0};
  const SboRhs r = rhs(st, p);
  double worst = 0.0;
  for (std::size_t j = 0; j < g->size(); ++j) {
    worst = std::max(worst, std::abs(r.dv[j] + 2.0 * std::sin(g->node(j))));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("difference right-hand side matches the subtracted parent sides") {
  const GridPtr g = make_grid(2.0 * kPi, 128);
  SboParams p;
  p.beta = 0.9;
  p.rho = 1.4;
  p.lambda = 0.7;
  const ComplexField u1 = random_complex(g, 20, 1.5, 301);
  const ComplexField u2 = random_complex(g, 20, 1.5, 302);
  const RealField v1 = random_real(g, 20, 1.5, 303);
  const RealField v2 = random_real(g, 20, 1.5, 304);

  const SboRhs r1 = rhs(SboState{u1, v1, 0.0}, p);
  const SboRhs r2 = rhs(SboState{u2, v2, 0.0}, p);
  DiffState d{u1 - u2, v1 - v2, u1 + u2, v1 + v2, 0.0};
  const DiffRhs dr = diff_rhs(d, p);

  // Same algebra, different grouping: roundoff is amplified by the second
  // derivative (k^2 ~ 400 at band 20), so allow a little more headroom.
  CHECK(max_abs_diff(dr.dw, r1.du - r2.du) <= 1e-11);
  CHECK(max_abs_diff(dr.dz, r1.dv - r2.dv) <= 1e-11);
}

TEST_CASE("difference system is exactly zero on identical parents") {
  const GridPtr g = make_grid(7.0, 64);
  const ComplexField u = random_complex(g, 15, 1.0, 311);
  const RealField v = random_real(g, 15, 1.0, 312);
  DiffState d{ComplexField::zeros(g), RealField::zeros(g), 2.0 * u, 2.0 * v,
              0.0};
  const DiffRhs dr = diff_rhs(d, SboParams{});
  CHECK(max_abs(dr.dw) == 0.0);
  CHECK(max_abs(dr.dz) == 0.0);
}

TEST_CASE("initial data families evaluate to their closed forms") {
  const GridPtr g = make_grid(50.0, 128);

  InitDataSpec gu;
  gu.family = InitDataSpec::Family::gaussian;
  gu.amplitude = 0.8;
  gu.width = 2.0;
  gu.center = 25.0;
  gu.wavenumber = 1.5;
  const ComplexField uu = eval_complex(gu, g);
  double worst = 0.0;
  for (std::size_t j = 0; j < g->size(); ++j) {
    const double x = g->node(j);
    const double arg = (x - 25.0) / 2.0;
    const cplx expect = 0.8 * std::exp(-arg * arg) *
                        cplx(std::cos(1.5 * x), std::sin(1.5 * x));
    worst = std::max(worst, std::abs(uu[j] - expect));
  }
  CHECK(worst <= 1e-15);

  InitDataSpec pw;
  pw.family = InitDataSpec::Family::plane_wave;
  pw.amplitude = 0.5;
  pw.wavenumber = 2.0;
  const RealField vv = eval_real(pw, g);
  worst = 0.0;
  for (std::size_t j = 0; j < g->size(); ++j) {
    worst = std::max(
        worst, std::abs(vv[j] - 0.5 * std::cos(2.0 * g->node(j))));
  }
  CHECK(worst <= 1e-16);

  // Truncated-tail gaussian integrals: \int A e^{-((x-c)/w)^2} = A w sqrt(pi).
  InitDataSpec gv = gu;
  gv.wavenumber = 0.0;
  const double mass = integral(eval_real(gv, g));
  CHECK(mass ==
        doctest::Approx(0.8 * 2.0 * std::sqrt(kPi)).epsilon(1e-12));
}

TEST_CASE("random family is a fixed function, not tied to the grid") {
  InitDataSpec spec;
  spec.family = InitDataSpec::Family::random_band_limited;
  spec.amplitude = 1.0;
  spec.band = 12;
  spec.decay = 1.0;
  spec.seed = 99;
  spec.base_length = 9.0;
  const GridPtr coarse = make_grid(9.0, 128);
  const GridPtr fine = make_grid(9.0, 512);
  const ComplexField uc = eval_complex(spec, coarse);
  const ComplexField uf = eval_complex(spec, fine);
  CHECK(max_abs_diff(oversample(uc, 4), uf) <= 1e-12);
  const RealField vc = eval_real(spec, coarse);
  const RealField vf = eval_real(spec, fine);
  CHECK(max_abs_diff(oversample(vc, 4), vf) <= 1e-12);
  // Same seed, same draw; different seed, different field.
  const ComplexField again = eval_complex(spec, coarse);
  CHECK(max_abs_diff(uc, again) == 0.0);
  InitDataSpec other = spec;
  other.seed = 100;
  CHECK(max_abs_diff(eval_complex(other, coarse), uc) > 1e-3);
}

TEST_CASE("family parameter validation") {
  const GridPtr g = make_grid(8.0, 32);
  InitDataSpec bad;
  bad.family = InitDataSpec::Family::gaussian;
  bad.amplitude = 1.0;
  bad.width = 0.0;
  CHECK_THROWS_WITH((void)eval_real(bad, g), "gaussian width must be positive");
  InitDataSpec rb;
  rb.family = InitDataSpec::Family::random_band_limited;
  rb.amplitude = 1.0;
  rb.band = 0;
  rb.base_length = 8.0;
  CHECK_THROWS_WITH((void)eval_real(rb, g), "random family needs band >= 1");
  rb.band = 4;
  rb.base_length = 0.0;
  CHECK_THROWS_WITH((void)eval_real(rb, g),
                    "random family needs base_length > 0");
  InitDataSpec fl;
  fl.family = InitDataSpec::Family::file;
  CHECK_THROWS_WITH((void)eval_real(fl, g), "file family needs a path");
}

TEST_CASE("rescaling is closed-form on the spec and exactly invertible") {
  InitDataSpec gu;
  gu.family = InitDataSpec::Family::gaussian;
  gu.amplitude = 0.8;
  gu.width = 2.0;
  gu.center = 25.0;
  gu.wavenumber = 1.5;
  const double lam = 0.0078125;  // 2^-7
  const InitDataSpec down = rescale_initdata(gu, lam);
  CHECK(down.amplitude == lam * 0.8);
  CHECK(down.width == 2.0 / lam);
  const InitDataSpec back = rescale_initdata(down, 1.0 / lam);
  CHECK(back.amplitude == gu.amplitude);
  CHECK(back.width == gu.width);
  CHECK(back.center == gu.center);
  CHECK(back.wavenumber == gu.wavenumber);

  InitDataSpec pw;
  pw.family = InitDataSpec::Family::plane_wave;
  pw.amplitude = 0.5;
  pw.wavenumber = 4.0;
  const InitDataSpec pd = rescale_initdata(pw, 0.25);
  CHECK(pd.amplitude == 0.125);
  CHECK(pd.wavenumber == 1.0);

  InitDataSpec rb;
  rb.family = InitDataSpec::Family::random_band_limited;
  rb.amplitude = 1.0;
  rb.band = 8;
  rb.base_length = 10.0;
  rb.seed = 7;
  const InitDataSpec rd = rescale_initdata(rb, 0.5);
  CHECK(rd.amplitude == 0.5);
  CHECK(rd.base_length == 20.0);
  CHECK(rd.seed == rb.seed);

  InitDataSpec fl;
  fl.family = InitDataSpec::Family::file;
  fl.path = "x.bin";
  CHECK_THROWS_WITH((void)rescale_initdata(fl, 0.5),
                    "file-based data cannot be rescaled (no array-level rescaling)");
  CHECK_THROWS_WITH((void)rescale_initdata(gu, 0.0),
                    "rescale factor must be positive");
}

TEST_CASE("smallness dial: power-of-two lambda meeting the norm target") {
  InitPair init;
  init.u0.family = InitDataSpec::Family::gaussian;
  init.u0.amplitude = 1.0;
  init.u0.width = 2.0;
  init.u0.center = 50.0;
  init.u0.wavenumber = 1.0;
  init.v0.family = InitDataSpec::Family::gaussian;
  init.v0.amplitude = 0.5;
  init.v0.width = 3.0;
  init.v0.center = 50.0;
  const double s = 1.5, delta = 0.1;
  const double lam = choose_lambda(init, delta, s);
  const double lg = std::log2(lam);
  CHECK(lg == std::floor(lg));  // exact power of two
  CHECK(lam <= 1.0);
  const GridPtr g = make_grid(100.0 / lam, 1024);
  const ComplexField u = eval_complex(rescale_initdata(init.u0, lam), g);
  const RealField v = eval_real(rescale_initdata(init.v0, lam), g);
  CHECK(joint_norm(u, v, s) <= delta);
  // The next-larger rung fails the target (lam is maximal).
  if (lam < 1.0) {
    const double lam2 = 2.0 * lam;
    const GridPtr g2 = make_grid(100.0 / lam2, 1024);
    const ComplexField u2 = eval_complex(rescale_initdata(init.u0, lam2), g2);
    const RealField v2 = eval_real(rescale_initdata(init.v0, lam2), g2);
    CHECK(joint_norm(u2, v2, s) > delta);
  }
  CHECK_THROWS_WITH((void)choose_lambda(init, 0.0, s),
                    "delta must be positive");
}

TEST_CASE("scaling check reports near-exact L2 identity and bounded constants") {
  InitPair init;
  init.u0.family = InitDataSpec::Family::gaussian;
  init.u0.amplitude = 1.0;
  init.u0.width = 2.0;
  init.u0.center = 50.0;
  init.u0.wavenumber = 1.0;
  init.v0.family = InitDataSpec::Family::gaussian;
  init.v0.amplitude = 0.5;
  init.v0.width = 3.0;
  init.v0.center = 50.0;
  const ScalingReport rep = scaling_norm_check(init, 0.25, 1.5);
  CHECK(rep.lambda == 0.25);
  CHECK(rep.u_l2_deviation <= 1e-10);
  CHECK(rep.v_l2_deviation <= 1e-10);
  CHECK(rep.u_constant <= 1.0 + 1e-10);
  CHECK(rep.v_constant <= 1.0 + 1e-10);
  CHECK(rep.u_constant > 0.0);
  CHECK(rep.v_constant > 0.0);
  CHECK_THROWS_WITH((void)scaling_norm_check(init, 2.0, 1.5),
                    "lambda must be in (0, 1]");
}

TEST_CASE("file family round-trips a snapshot and rejects mismatched grids") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sbolab_model_test";
  fs::create_directories(dir);
  const std::string path = (dir / "state.bin").string();

  const GridPtr g = make_grid(12.0, 64);
  SboState st{random_complex(g, 10, 0.5, 401), random_real(g, 10, 0.5, 402),
              0.75};
  write_snapshot(path, st);

  InitDataSpec fl;
  fl.family = InitDataSpec::Family::file;
  fl.path = path;
  const ComplexField u = eval_complex(fl, g);
  const RealField v = eval_real(fl, g);
  CHECK(max_abs_diff(u, st.u) == 0.0);
  CHECK(max_abs_diff(v, st.v) == 0.0);

  const GridPtr g2 = make_grid(12.0, 128);
  CHECK_THROWS_WITH((void)eval_complex(fl, g2),
                    "snapshot grid does not match target grid");
  fs::remove_all(dir);
}
