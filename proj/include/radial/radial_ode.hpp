#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "radial/nonlinearity.hpp"

namespace radial {

// Radial formulation of  Delta u = v^p,  Delta v = f(|grad u|)  as the
// first-order system in r > 0 (w = u', psi = v'):
//   u'   = w
//   w'   = v^p    - (N-1)/r * w
//   v'   = psi
//   psi' = f(|w|) - (N-1)/r * psi
// with w(0) = psi(0) = 0, v(0) = m > 0, u(0) = u0.

struct BallDomain {
  double R = 1.0;
};
struct WholeSpaceDomain {};
using Domain = std::variant<BallDomain, WholeSpaceDomain>;

struct Params {
  double p = 1.0;
  Nonlinearity nl = Nonlinearity::power(1.0);
  int N = 3;
  double m = 1.0;   // v(0)
  Domain domain = BallDomain{1.0};
  double u0 = 1.0;  // u(0); only shifts u, nothing reads u back
};

struct StepControls {
  double rtol = 1e-9;
  double atol = 1e-12;
  double v_ceiling = 1e8;   // blow-up detection level
  double r_horizon = 1e6;   // whole-space stopping radius
  double r0_scale = 1e-6;   // starting radius as a fraction of the length scale
  long max_steps = 20'000'000;
};

struct Sample {
  double r, u, w, v, psi;
};

enum class Termination {
  ReachedRadius,  // integrated to the ball radius R
  BlowUp,         // v crossed the ceiling with a steep finite-radius tail
  GlobalHorizon,  // integrated to r_horizon without blow-up
  StepUnderflow,  // step size collapsed without a blow-up signature
  NonFinite,      // overflow/NaN in the right-hand side
  MaxSteps,
};
const char* to_string(Termination t);

struct BlowupFit {
  double R_max = 0.0;
  double beta = 0.0;  // v ~ B (R_max - r)^(-beta); NaN when unresolvable
  double B = 0.0;
  double sse = 0.0;
  std::size_t n_window = 0;
};

struct RadialSolution {
  std::vector<Sample> samples;  // every accepted step, starting at r0
  Termination termination = Termination::MaxSteps;
  double r_stop = 0.0;
  double u0 = 1.0;
  // Filled when termination == BlowUp:
  double R_max = 0.0;
  double fit_beta = 0.0;
  double fit_B = 0.0;
};

// Series start at r0 (Taylor expansion through the regular singular point):
//   w   ~ m^p r0 / N,        u ~ u0 + m^p r0^2 / (2N),
//   psi ~ (m^p/N)^q r0^{q+1}/(N+q)  for power f, and the quadrature analogue
// for other kinds;  v carries the matching integral correction.
Sample series_start(const Params& params, double r0);

RadialSolution integrate(const Params& params, const StepControls& controls = {});

// Least-squares fit of v(r) ~ B (R_max - r)^(-beta) over the terminal decade
// of v.  beta_hint pins the exponent (used when the theoretical rate is
// known); otherwise beta is free.  Requires a BlowUp solution with at least
// 20 samples in the window.
BlowupFit fit_blowup_radius(const RadialSolution& sol,
                            std::optional<double> beta_hint = std::nullopt);

struct ComparisonReport {
  bool ordered = false;     // strict pointwise ordering of (u, w, v, psi)
  bool degenerate = false;  // equal m: identical trajectories
  double first_violation_r = 0.0;
  std::string quantity;
  std::size_t points = 0;
  double min_gap_rel = 0.0;  // smallest relative gap seen (ordered case)
};

// Checks that the solution with the larger v(0) dominates the other one
// pointwise on the common existence interval (params must differ only in m).
ComparisonReport check_comparison(const Params& larger_m,
                                  const Params& smaller_m, double r_horizon);

// Scaling symmetry: for sigma in (0, 1],
//   w~(r) = sigma^a w(sigma r), v~(r) = sigma^b v(sigma r),
//   psi~(r) = sigma^c psi(sigma r), u~(r) = sigma^(a-1) u(sigma r)
// with a = (2p+1)/(pq-1), b = (q+2)/(pq-1), c = (pq+q+1)/(pq-1)
// solves the same system.  Power nonlinearities with pq > 1 only.
RadialSolution rescale_solution(const RadialSolution& sol, double sigma,
                                double p, double q);

// Log-linear interpolation of the sampled state at a given v level or
// radius; ok = false when the request is outside the sampled range.
struct LevelPoint {
  double r = 0.0, u = 0.0, w = 0.0, v = 0.0, psi = 0.0;
  bool ok = false;
};
LevelPoint state_at_v(const RadialSolution& sol, double v_level);
LevelPoint state_at_r(const RadialSolution& sol, double r);

}  // namespace radial
