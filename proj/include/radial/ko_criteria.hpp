#pragma once

#include <string>

#include "radial/nonlinearity.hpp"

namespace radial {

enum class ConvergenceVerdict { Convergent, Divergent, Indeterminate };
enum class BallVerdict { Bounded, VBlowsUp, BothBlowUp, GlobalOnRN, Indeterminate };
enum class KOMethod { ClosedForm, TailExponent };
enum class BiharmonicVerdict { BlowUpExists, NoBlowUp, Indeterminate };

const char* to_string(ConvergenceVerdict v);
const char* to_string(BallVerdict v);
const char* to_string(KOMethod m);
const char* to_string(BiharmonicVerdict v);

// Keller-Osserman-type growth tests for the coupled system.  The plain test
// asks whether  int^inf ds / (int_0^s F)^{p/(2p+1)}  converges; the weighted
// test asks the same with an extra factor s in the numerator.  Equality cases
// (integrand decaying exactly like 1/s resp. 1/s^2... i.e. critical exponent)
// count as divergent.
struct KOReport {
  double p = 0.0;
  FKind f_kind = FKind::Power;
  double q = 0.0;  // power exponent; NaN for non-power kinds
  ConvergenceVerdict plain = ConvergenceVerdict::Indeterminate;
  ConvergenceVerdict weighted = ConvergenceVerdict::Indeterminate;
  KOMethod method = KOMethod::ClosedForm;
  // Decay exponent sigma of the plain integrand (int_0^s F)^{-p/(2p+1)}:
  // plain converges iff sigma > 1, weighted iff sigma > 2.  +inf for Exp.
  double tail_exponent = 0.0;
  std::string note;
};

struct Classification {
  BallVerdict verdict = BallVerdict::Indeterminate;
  KOReport evidence;
};

KOReport ko_report(const Nonlinearity& nl, double p);
ConvergenceVerdict ko_plain(const Nonlinearity& nl, double p);
ConvergenceVerdict ko_weighted(const Nonlinearity& nl, double p);

// Trichotomy on a ball: plain divergent -> every positive solution bounded;
// weighted convergent -> v blows up at the boundary while u stays bounded;
// plain convergent but weighted divergent -> u and v both blow up.
Classification classify_ball(const Nonlinearity& nl, double p);

// On the whole space: global positive radial solutions exist iff the plain
// integral diverges; otherwise every positive solution has a finite blow-up
// radius and the ball verdict describes the behaviour there.
Classification classify_whole_space(const Nonlinearity& nl, double p);

// p = 1 pathway (Delta^2 u = f(|grad u|) with v = Delta u): radial solutions
// with Delta u blowing up on the boundary exist iff both components blow up
// in the second-order system at p = 1.
BiharmonicVerdict classify_biharmonic(const Nonlinearity& nl);

// Region letter for figure/table output: A = Bounded, B = VBlowsUp,
// C = BothBlowUp, G = GlobalOnRN, ? = Indeterminate.
char region_letter(BallVerdict v);

// Numeric tail-exponent machinery (also used to cross-check that replacing
// (int_0^s F)^{p/(2p+1)} by (int_0^s sqrt(f))^{2p/(2p+1)} leaves verdicts
// unchanged).
struct TailFit {
  double sigma = 0.0;
  bool usable = false;
  std::string why;
};

TailFit tail_exponent_ff_route(const Nonlinearity& nl, double p,
                               double s_lo = 1e3, double s_hi = 1e6,
                               int n = 60);
TailFit tail_exponent_sqrtf_route(const Nonlinearity& nl, double p,
                                  double s_lo = 1e3, double s_hi = 1e6,
                                  int n = 60);

// Verdicts from a fitted exponent with a symmetric indeterminacy band
// `delta` around the critical values 1 and 2.
ConvergenceVerdict plain_verdict_from_sigma(const TailFit& fit,
                                            double delta = 0.05);
ConvergenceVerdict weighted_verdict_from_sigma(const TailFit& fit,
                                               double delta = 0.05);

}  // namespace radial
