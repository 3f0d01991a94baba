#pragma once

#include <string>
#include <vector>

#include "radial/radial_ode.hpp"

namespace radial {

// Near a blow-up radius R the solution with power nonlinearity f(s) = s^q,
// pq > 1, follows
//   w   ~ A (R - r)^{-alpha},  v ~ B (R - r)^{-beta},  psi ~ C (R - r)^{-gamma}
// with alpha = (1+2p)/(pq-1), beta = (q+2)/(pq-1), gamma = (q+pq+1)/(pq-1).
// Whether u itself stays bounded depends on the sign of 1 - alpha, i.e. on
// q versus 2(1 + 1/p).

enum class UCase {
  FiniteLimit,  // q > 2(1+1/p): u has a finite boundary limit
  LogRate,      // q = 2(1+1/p): u ~ A ln(1/(R-r))
  PowerRate,    // q < 2(1+1/p): u ~ A/(alpha-1) (R-r)^{1-alpha}
};
const char* to_string(UCase c);

struct BallRates {
  double p = 0.0, q = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double A = 0.0, B = 0.0, C = 0.0;
  UCase u_case = UCase::FiniteLimit;
  // FiniteLimit: u(R) - u(r) ~ const (R-r)^{1-alpha}; LogRate: u ~ const
  // ln(1/(R-r)); PowerRate: u ~ const (R-r)^{1-alpha}.
  double u_rate_constant = 0.0;
  // The rate formulas only need pq > 1; flags inputs with p < 1 or q < 1,
  // where the blow-up rates are computed but not backed by the theory.
  std::string note;
};

// Requires p, q > 0 and pq > 1.
BallRates ball_rates(double p, double q);

struct RateCheck {
  std::string quantity;
  double empirical = 0.0;
  double theoretical = 0.0;
  double rel_err = 0.0;
  double window_lo = 0.0;  // gap R-r (ball) or radius (whole space)
  double window_hi = 0.0;
  double half_window_drift = 0.0;  // relative shift on the half window
};

struct BallRateReport {
  BallRates rates;
  double R_hat = 0.0;  // refit of R with the exponent pinned to beta
  std::vector<RateCheck> checks;  // v, w, psi, u
};

// Measures the constants A, B, C and the u rate on a blow-up solution over
// the last `window_decades` of v (among samples whose distance to the fitted
// radius is numerically resolvable), and reports the drift when the window
// is cut to its last half.
BallRateReport verify_ball_rates(const RadialSolution& sol, double p, double q,
                                 double window_decades = 1.0);

// Whole-space power behaviour u ~ u_const r^{u_exponent},
// v ~ v_const r^{v_exponent}; the pure power pair solves the system exactly
// and every positive global solution approaches it.
struct WholeSpaceRates {
  double p = 0.0, q = 0.0;
  int N = 0;
  double Y2 = 0.0, Z2 = 0.0, W2 = 0.0;  // limits of r psi/v, r v^p/w, r w^q/psi
  double X_limit = 0.0;                 // limit of r u'/u, equals u_exponent
  double u_exponent = 0.0, v_exponent = 0.0;
  double u_const = 0.0, v_const = 0.0;
};

// Closed forms only; no hypothesis checks (constants are NaN when the
// defining products are not positive).
WholeSpaceRates whole_space_constants(double p, double q, int N);

// Validates the hypotheses q >= 1 > p, pq < 1 and
// p(q^2-4)/(1-pq) <= 2(N-1) before returning the constants; throws
// std::domain_error naming the failed inequality.
WholeSpaceRates whole_space_rates(double p, double q, int N);

double exact_u(const WholeSpaceRates& ws, double r);
double exact_v(const WholeSpaceRates& ws, double r);

// Largest relative residual of the two equations at radius r (or over a
// set of radii, skipping nonpositive entries), with every derivative taken
// by fourth-order central differences (h ~ 2.5e-3 r).  Requires pq < 1.
double exact_solution_residual(double p, double q, int N, double r);
double exact_solution_residual(double p, double q, int N,
                               const std::vector<double>& radii);

struct WholeSpaceReport {
  WholeSpaceRates rates;
  // u_exponent, v_exponent, u_const, v_const over the last two sampled
  // decades, then the transformed limits X, Y, Z, W over the last half
  // decade.
  std::vector<RateCheck> checks;
};

// Requires a solution integrated to the radius horizon with at least three
// sampled decades.
WholeSpaceReport verify_whole_space(const RadialSolution& sol, double p,
                                    double q, int N);

}  // namespace radial
