#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "radial/asymptotics.hpp"

namespace radial {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Roots of lambda^3 + c2 lambda^2 + c1 lambda + c0, Newton-polished,
// sorted by (Re, Im).
std::array<std::complex<double>, 3> cubic_roots(double c2, double c1,
                                                double c0);
std::array<std::complex<double>, 3> eigenvalues3(const Mat3& M);

enum class StabilityClass { AsymptoticallyStable, Saddle, Unstable, Marginal };
const char* to_string(StabilityClass s);

struct Equilibrium {
  Vec3 point{};
  std::array<std::complex<double>, 3> eigenvalues{};
  std::array<double, 3> char_poly{};  // lambda^3 + c[0] l^2 + c[1] l + c[2]
  StabilityClass stability = StabilityClass::Marginal;
  int dim_stable = 0;  // eigenvalues with real part below the dead band
  double residual = 0.0;  // max |g| after Newton refinement
};

// Autonomous part of the ball system in the scaled variables
//   X = w (1-r)^alpha / A,  Y = v (1-r)^beta / B,  Z = psi (1-r)^gamma / C,
// t = ln(1/(1-r)):
//   X_t = alpha (Y|Y|^{p-1} - X),  Y_t = beta (Z - Y),
//   Z_t = gamma (X|X|^{q-1} - Z),
// plus the transient drift -(N-1)/(e^t - 1) on X and Z in the full system.
// Equilibria 0 and +-1 = (+-1, +-1, +-1).
struct BallField {
  double p = 0.0, q = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  BallField(double p, double q);  // requires p, q >= 1 and pq > 1
  Vec3 operator()(const Vec3& s) const;
  Mat3 jacobian(const Vec3& s) const;
};

// Reduced whole-space system in s = (Y, Z, W) with
//   Y = r psi / v,  Z = r v^p / w,  W = r w^q / psi,  t = ln r:
//   Y_t = Y (W - (N-2) - Y),  Z_t = Z (N + pY - Z),
//   W_t = W (qZ - qN + q + N - W).
struct WholeSpaceField {
  double p = 0.0, q = 0.0;
  int N = 0;
  WholeSpaceField(double p, double q, int N);
  Vec3 operator()(const Vec3& s) const;
  Mat3 jacobian(const Vec3& s) const;
};

// BallField: the three equilibria 0, +1, -1, Newton-refined.
// WholeSpaceField: the equilibria in the physical region Z >= N, W >= N,
// i.e. zeta1 = (0, N, N+q) and (when pq < 1) zeta2.
std::vector<Equilibrium> equilibria(const BallField& field);
std::vector<Equilibrium> equilibria(const WholeSpaceField& field);

// Routh-Hurwitz certificate for zeta2 (characteristic polynomial
// lambda^3 + a lambda^2 + b lambda + (1-pq) c): a, b, (1-pq)c > 0 and
// a b > (1-pq) c, the last via AM-GM (a b >= 9 c).  Requires pq < 1.
struct StabilityTrace {
  double Y2 = 0.0, Z2 = 0.0, W2 = 0.0;
  double a = 0.0, b = 0.0, c = 0.0;  // elementary symmetric functions
  double constant_term = 0.0;        // (1 - pq) c
  double ab = 0.0;
  double am_gm_lower = 0.0;  // 9 c <= a b
  bool routh_hurwitz = false;
  bool positive_on_grid = false;  // P(lambda) > 0 sampled on lambda >= 0
  std::array<std::complex<double>, 3> eigenvalues{};
  bool all_re_negative = false;
};
StabilityTrace check_stability_zeta2(double p, double q, int N);

// Maximum of div g over an axis-aligned box (corners plus a sample grid;
// both fields have affine divergence, so corners alone are already exact).
// Default boxes: [-1,1]^3 for the ball field, [zeta1, zeta2] for the
// whole-space field, where the sign test certifies the absence of cycles.
struct DivergenceReport {
  double max_divergence = 0.0;
  Vec3 argmax{};
  bool nonpositive = false;
  // Closed-form equivalent of the sign test for the whole-space box:
  // p(q^2-4)/(1-pq) <= 2(N-1).  For the ball field the divergence is the
  // constant -(alpha+beta+gamma); lhs carries it, rhs is 0.
  double condition_lhs = 0.0;
  double condition_rhs = 0.0;
  bool condition_holds = false;
};
DivergenceReport check_divergence(const BallField& field);
DivergenceReport check_divergence(const WholeSpaceField& field);
DivergenceReport check_divergence(const BallField& field, const Vec3& lo,
                                  const Vec3& hi);
DivergenceReport check_divergence(const WholeSpaceField& field, const Vec3& lo,
                                  const Vec3& hi);

struct FlowSample {
  double t = 0.0;
  Vec3 s{};
};

std::vector<FlowSample> integrate_autonomous(const BallField& field, Vec3 s0,
                                             double t0, double t_end);
std::vector<FlowSample> integrate_autonomous(const WholeSpaceField& field,
                                             Vec3 s0, double t0, double t_end);

enum class BallOutcome {
  ConvergedToPlusOne,
  ConvergedToZero,
  Departed,  // left the bounded region before t_end
  Undecided,
};
const char* to_string(BallOutcome o);

struct TransformedBallRun {
  std::vector<FlowSample> samples;
  BallOutcome outcome = BallOutcome::Undecided;
  std::string note;
};

// Full (non-autonomous) ball system from t0 = 1e-6 with initial data mapped
// from the series start of the radial problem with v(0) = m.  Convergence
// to an equilibrium is declared when the trajectory stays within 1e-3 of it
// for at least one time unit up to t_end.
TransformedBallRun integrate_transformed_ball(double p, double q, int N,
                                              double m, double t_end);

struct WholeSpaceSample {
  double t = 0.0;  // ln r
  double X = 0.0, Y = 0.0, Z = 0.0, W = 0.0;
};

// Integrates the radial problem on the whole space (q >= 1 > p, pq < 1) and
// reports it in the variables X = r u'/u, Y = r psi/v, Z = r v^p/w,
// W = r w^q/psi.
std::vector<WholeSpaceSample> integrate_transformed_whole_space(
    double p, double q, int N, double m, double t_end);

// Bisection on m for the initial amplitude whose trajectory follows the
// connection to (1,1,1): classification at t_probe by Y against 1.
struct ShootResult {
  double m_star = 0.0;
  double t_probe = 0.0;
  double deviation_at_12 = 0.0;  // distance of the m_star run from (1,1,1)
  int iterations = 0;
};
ShootResult shoot_boundary_blowup_m(double p, double q, int N);

}  // namespace radial
