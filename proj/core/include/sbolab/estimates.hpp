#ifndef SBOLAB_ESTIMATES_HPP
#define SBOLAB_ESTIMATES_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sbolab/fourier.hpp"
#include "sbolab/grid.hpp"

namespace sbolab {

// Randomized numeric probes of the commutator inequalities the solver's
// analysis rests on, low-pass (smooth-projection) rate checks, and the
// small-data horizon formula.
//
// Every probe draws reproducible band-limited random fields (Gaussian
// coefficients under a power-law envelope, band 60 on a 2*pi domain) from
// fixed seeds, evaluates the inequality's ratio
//     ||defect|| / (product of right-hand norms)
// sample by sample, and reports the max ratio at two grid sizes (N = 256 and
// N = 1024).  The functions are band-limited, so the two levels see the same
// inputs and a genuine multiplier inequality yields level-independent
// ratios; `stable` asserts the two maxima agree within 10%.

struct ProbeReport {
  std::string tag;
  std::vector<double> exponents;  // instantiation, in the op's natural order
  std::size_t samples = 0;
  double ratio_coarse = 0.0;  // max ratio at N = 256
  double ratio_fine = 0.0;    // max ratio at N = 1024
  double max_ratio = 0.0;     // max over both levels
  bool stable = false;        // |fine - coarse| <= 10% of coarse
};

// ||D^a(fg) - f D^a g - g D^a f||_p <= C ||D^a1 f||_p1 ||D^a2 g||_p2
// with a = a1 + a2 in (0,1), a1, a2 in (0,a), 1/p = 1/p1 + 1/p2.
ProbeReport probe_fractional_leibniz(double alpha, double alpha1,
                                     double alpha2, double p, double p1,
                                     double p2, std::size_t samples = 100,
                                     std::uint64_t seed = 0);

// ||[D^s; f]g||_p <= C ||D^{s-1} d_x f||_p1 ||g||_p2          (I: 0 < s <= 1)
// ||[D^s; f]g||_p <= C (||D^s f||_p1 ||g||_p2
//                       + ||d_x f||_p3 ||D^{s-1} g||_p4)       (II: s > 1)
// Each sample also probes the commutator with H D^s in place of D^s; the
// reported ratio is the max over the two variants.
enum class KatoPonceCase { one, two };

struct KatoPonceExponents {
  double p = 2.0;
  double p1 = 2.0;
  double p2 = 2.0;
  double p3 = 2.0;  // case II only
  double p4 = 2.0;  // case II only
};

ProbeReport probe_kato_ponce(double s, KatoPonceCase kind,
                             const KatoPonceExponents& ex,
                             std::size_t samples = 100,
                             std::uint64_t seed = 0);

// ||d_x^l [H; f] d_x^m g||_p <= C ||d_x^{l+m} f||_inf ||g||_p
ProbeReport probe_calderon(int l, int m, double p, std::size_t samples = 100,
                           std::uint64_t seed = 0);

// ||D^{a+b}(g D^{1-(a+b)} f) - D^a(g D^{1-a} f)||_p <= C ||d_x g||_inf ||f||_p
// with 0 <= a < 1, 0 < b <= 1 - a.
ProbeReport probe_sharp_commutation(double alpha, double beta, double p,
                                    std::size_t samples = 100,
                                    std::uint64_t seed = 0);

// --- smooth low-pass projection ----------------------------------------------

// chi(r) = 1 on |r| <= 1, 0 on |r| >= 2, and the smooth bump bridge
// exp(1 - 1/(1 - (|r|-1)^2)) in between; C-infinity, monotone on [1,2].
struct CutoffChi {
  double operator()(double r) const;
};

// P_{<=n} f: multiplier chi(|k|/n) on the coefficients.  Leaves any f with
// spectrum inside [-n, n] unchanged and annihilates spectrum beyond 2n.
ComplexField bona_smith_project(const ComplexField& f, double n,
                                const CutoffChi& chi = CutoffChi{});
RealField bona_smith_project(const RealField& f, double n,
                             const CutoffChi& chi = CutoffChi{});

// Rates along a geometric ladder of cutoffs for data of base regularity r
// (use r = s + 1/2 for the complex field, r = s for the real one):
//   growth_norms[j] = ||P_{<=n_j} f||_{H^{r+sigma}}     (expected <~ n^sigma)
//   decay_norms[j]  = ||P_{<=n_j} f - f||_{H^{r-sigma}}  (expected o(n^-sigma))
// Slopes are least-squares fits in log-log; the flags check
// growth_slope <= sigma + 0.1 and decay_slope <= -sigma + 0.1.
struct BonaSmithReport {
  std::vector<double> ladder;
  std::vector<double> growth_norms;
  std::vector<double> decay_norms;
  double growth_slope = 0.0;
  double decay_slope = 0.0;
  bool growth_ok = false;
  bool decay_ok = false;
};

BonaSmithReport bona_smith_rates(const ComplexField& f, double regularity,
                                 double sigma,
                                 const std::vector<double>& ladder);
BonaSmithReport bona_smith_rates(const RealField& f, double regularity,
                                 double sigma,
                                 const std::vector<double>& ladder);

// --- small-data horizon -------------------------------------------------------

// T = (A_s (1 + norm))^{-2}: the guaranteed-existence horizon for initial
// data of the given joint norm.
double apriori_time(double norm, double a_s);

}  // namespace sbolab

#endif  // SBOLAB_ESTIMATES_HPP
