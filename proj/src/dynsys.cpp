#include "radial/dynsys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "radial/ode.hpp"
#include "radial/radial_ode.hpp"

namespace radial {

namespace {

double sgnpow(double y, double p) {
  return y == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(y), p), y);
}

double max_abs(const Vec3& s) {
  return std::max({std::abs(s[0]), std::abs(s[1]), std::abs(s[2])});
}

// Gaussian elimination with partial pivoting; false when near-singular.
bool solve3(Mat3 A, Vec3 b, Vec3& x) {
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[idx[r]][col]) > std::abs(A[idx[piv]][col])) piv = r;
    std::swap(idx[col], idx[piv]);
    const double d = A[idx[col]][col];
    if (std::abs(d) < 1e-14) return false;
    for (int r = col + 1; r < 3; ++r) {
      const double f = A[idx[r]][col] / d;
      for (int c = col; c < 3; ++c) A[idx[r]][c] -= f * A[idx[col]][c];
      b[idx[r]] -= f * b[idx[col]];
    }
  }
  for (int row = 2; row >= 0; --row) {
    double s = b[idx[row]];
    for (int c = row + 1; c < 3; ++c) s -= A[idx[row]][c] * x[c];
    x[row] = s / A[idx[row]][row];
  }
  return true;
}

std::array<double, 3> char_poly_of(const Mat3& M) {
  const double tr = M[0][0] + M[1][1] + M[2][2];
  const double m01 = M[0][0] * M[1][1] - M[0][1] * M[1][0];
  const double m02 = M[0][0] * M[2][2] - M[0][2] * M[2][0];
  const double m12 = M[1][1] * M[2][2] - M[1][2] * M[2][1];
  const double det =
      M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
      M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
      M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  return {-tr, m01 + m02 + m12, -det};
}

StabilityClass classify_eigen(const std::array<std::complex<double>, 3>& ev,
                              int& dim_stable) {
  double scale = 1.0;
  for (const auto& l : ev) scale = std::max(scale, std::abs(l));
  const double band = 1e-8 * scale;
  bool any_band = false, any_pos = false, any_neg = false;
  dim_stable = 0;
  for (const auto& l : ev) {
    if (std::abs(l.real()) <= band) any_band = true;
    else if (l.real() > 0) any_pos = true;
    else {
      any_neg = true;
      ++dim_stable;
    }
  }
  if (any_band) return StabilityClass::Marginal;
  if (any_pos && any_neg) return StabilityClass::Saddle;
  return any_pos ? StabilityClass::Unstable : StabilityClass::AsymptoticallyStable;
}

template <typename Field>
Equilibrium make_equilibrium(const Field& field, Vec3 seed) {
  Equilibrium eq;
  eq.point = seed;
  for (int it = 0; it < 8; ++it) {
    const Vec3 g = field(eq.point);
    if (max_abs(g) <= 1e-13) break;
    Vec3 delta{};
    if (!solve3(field.jacobian(eq.point), {-g[0], -g[1], -g[2]}, delta)) break;
    Vec3 next = eq.point;
    for (int i = 0; i < 3; ++i) next[i] += delta[i];
    if (max_abs(field(next)) >= max_abs(g)) break;
    eq.point = next;
  }
  eq.residual = max_abs(field(eq.point));
  const Mat3 J = field.jacobian(eq.point);
  eq.char_poly = char_poly_of(J);
  eq.eigenvalues =
      cubic_roots(eq.char_poly[0], eq.char_poly[1], eq.char_poly[2]);
  eq.stability = classify_eigen(eq.eigenvalues, eq.dim_stable);
  return eq;
}

template <typename Field>
std::vector<FlowSample> flow(const Field& field, Vec3 s0, double t0,
                             double t_end) {
  std::vector<FlowSample> out;
  out.push_back({t0, s0});
  OdeControls oc;
  auto rhs = [&](double, const std::array<double, 3>& y) {
    return field(Vec3{y[0], y[1], y[2]});
  };
  integrate_dopri5<3>(rhs, t0, t_end, {s0[0], s0[1], s0[2]}, oc,
                      [&](double t, const std::array<double, 3>& y, double) {
                        out.push_back({t, {y[0], y[1], y[2]}});
                        return max_abs(out.back().s) > 1e9;
                      });
  return out;
}

// Both fields have divergence affine in the state, so the grid (which
// includes the corners) attains the exact maximum over the box.
template <typename Field>
void grid_max_divergence(const Field& field, const Vec3& lo, const Vec3& hi,
                         DivergenceReport& rep) {
  rep.max_divergence = -std::numeric_limits<double>::infinity();
  const int n = 6;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vec3 s{lo[0] + (hi[0] - lo[0]) * i / (n - 1),
                     lo[1] + (hi[1] - lo[1]) * j / (n - 1),
                     lo[2] + (hi[2] - lo[2]) * k / (n - 1)};
        const Mat3 J = field.jacobian(s);
        const double d = J[0][0] + J[1][1] + J[2][2];
        if (d > rep.max_divergence) {
          rep.max_divergence = d;
          rep.argmax = s;
        }
      }
  rep.nonpositive = rep.max_divergence <= 0.0;
}

}  // namespace

std::array<std::complex<double>, 3> cubic_roots(double c2, double c1,
                                                double c0) {
  using C = std::complex<double>;
  std::array<C, 3> roots;
  // Depressed form x^3 + px + q with lambda = x - c2/3.
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;

  const double scale = std::max({std::abs(p), std::abs(q), 1e-300});
  if (scale < 1e-200) {
    roots.fill(C(-shift, 0.0));
    return roots;
  }

  if (disc > 0.0) {
    // One real root; pick the Cardano branch without cancellation.
    const double sd = std::sqrt(disc);
    double A, B;
    if (q <= 0.0) {
      A = std::cbrt(-q / 2.0 + sd);
      B = A != 0.0 ? -p / (3.0 * A) : 0.0;
    } else {
      B = -std::cbrt(q / 2.0 + sd);
      A = B != 0.0 ? -p / (3.0 * B) : 0.0;
    }
    const double x1 = A + B;
    const double re = -x1 / 2.0;
    const double im = std::sqrt(3.0) / 2.0 * (A - B);
    roots = {C(x1, 0.0), C(re, im), C(re, -im)};
  } else {
    // Three real roots (trigonometric form).
    const double mp3 = std::sqrt(std::max(-p / 3.0, 0.0));
    double arg = mp3 > 0.0 ? 3.0 * q / (2.0 * p * mp3) : 0.0;
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots[k] = C(2.0 * mp3 * std::cos(theta - 2.0 * M_PI * k / 3.0), 0.0);
  }

  for (auto& r : roots) {
    r -= shift;
    for (int it = 0; it < 4; ++it) {  // Newton polish on the original cubic
      const C f = ((r + c2) * r + c1) * r + c0;
      const C df = (3.0 * r + 2.0 * c2) * r + c1;
      if (std::abs(df) < 1e-300) break;
      r -= f / df;
    }
    if (std::abs(r.imag()) <= 1e-12 * (1.0 + std::abs(r.real())))
      r = C(r.real(), 0.0);
  }
  std::sort(roots.begin(), roots.end(), [](const C& a, const C& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

std::array<std::complex<double>, 3> eigenvalues3(const Mat3& M) {
  const auto c = char_poly_of(M);
  return cubic_roots(c[0], c[1], c[2]);
}

const char* to_string(StabilityClass s) {
  switch (s) {
    case StabilityClass::AsymptoticallyStable: return "asymptotically_stable";
    case StabilityClass::Saddle: return "saddle";
    case StabilityClass::Unstable: return "unstable";
    case StabilityClass::Marginal: return "marginal";
  }
  return "?";
}

BallField::BallField(double p_, double q_) : p(p_), q(q_) {
  if (!(p >= 1.0) || !(q >= 1.0))
    throw std::domain_error("BallField: requires p >= 1 and q >= 1");
  const BallRates r = ball_rates(p, q);  // also enforces pq > 1
  alpha = r.alpha;
  beta = r.beta;
  gamma = r.gamma;
}

Vec3 BallField::operator()(const Vec3& s) const {
  return {alpha * (sgnpow(s[1], p) - s[0]), beta * (s[2] - s[1]),
          gamma * (sgnpow(s[0], q) - s[2])};
}

Mat3 BallField::jacobian(const Vec3& s) const {
  return {{{-alpha, alpha * p * std::pow(std::abs(s[1]), p - 1.0), 0.0},
           {0.0, -beta, beta},
           {gamma * q * std::pow(std::abs(s[0]), q - 1.0), 0.0, -gamma}}};
}

WholeSpaceField::WholeSpaceField(double p_, double q_, int N_)
    : p(p_), q(q_), N(N_) {
  if (!(p > 0.0) || !(q > 0.0))
    throw std::domain_error("WholeSpaceField: requires p > 0 and q > 0");
  if (N < 2) throw std::domain_error("WholeSpaceField: requires N >= 2");
}

Vec3 WholeSpaceField::operator()(const Vec3& s) const {
  const double Y = s[0], Z = s[1], W = s[2];
  return {Y * (W - (N - 2.0) - Y), Z * (N + p * Y - Z),
          W * (q * Z - q * N + q + N - W)};
}

Mat3 WholeSpaceField::jacobian(const Vec3& s) const {
  const double Y = s[0], Z = s[1], W = s[2];
  return {{{W - (N - 2.0) - 2.0 * Y, 0.0, Y},
           {p * Z, N + p * Y - 2.0 * Z, 0.0},
           {0.0, q * W, q * Z - q * N + q + N - 2.0 * W}}};
}

std::vector<Equilibrium> equilibria(const BallField& field) {
  std::vector<Equilibrium> out;
  for (Vec3 seed : {Vec3{-1, -1, -1}, Vec3{0, 0, 0}, Vec3{1, 1, 1}})
    out.push_back(make_equilibrium(field, seed));
  return out;
}

std::vector<Equilibrium> equilibria(const WholeSpaceField& field) {
  const double p = field.p, q = field.q, N = field.N;
  std::vector<Vec3> seeds;
  seeds.push_back({0.0, N, N + q});  // zeta1
  if (p * q != 1.0) {
    const double Y2 = (q + 2.0) / (1.0 - p * q);
    seeds.push_back({Y2, N + p * Y2, N - 2.0 + Y2});  // zeta2
  }

  std::vector<Equilibrium> out;
  for (const Vec3& s : seeds) {
    // Keep only the physical region Z >= N, W >= N; for pq > 1 the second
    // seed leaves it and is dropped.
    if (s[1] < N - 1e-6 || s[2] < N - 1e-6) continue;
    out.push_back(make_equilibrium(field, s));
  }
  std::sort(out.begin(), out.end(),
            [](const Equilibrium& a, const Equilibrium& b) {
              return a.point < b.point;
            });
  return out;
}

StabilityTrace check_stability_zeta2(double p, double q, int N) {
  if (!(p > 0.0) || !(q > 0.0) || !(p * q < 1.0))
    throw std::domain_error(
        "check_stability_zeta2: requires p, q > 0 and pq < 1");
  const WholeSpaceRates ws = whole_space_constants(p, q, N);
  StabilityTrace tr;
  tr.Y2 = ws.Y2;
  tr.Z2 = ws.Z2;
  tr.W2 = ws.W2;
  tr.a = ws.Y2 + ws.Z2 + ws.W2;
  tr.b = ws.Y2 * ws.Z2 + ws.Y2 * ws.W2 + ws.Z2 * ws.W2;
  tr.c = ws.Y2 * ws.Z2 * ws.W2;
  tr.constant_term = (1.0 - p * q) * tr.c;
  tr.ab = tr.a * tr.b;
  tr.am_gm_lower = 9.0 * tr.c;
  tr.routh_hurwitz =
      tr.a > 0.0 && tr.constant_term > 0.0 && tr.ab > tr.constant_term;
  const double span =
      10.0 * std::max({1.0, tr.a, std::sqrt(std::abs(tr.b)),
                       std::cbrt(std::abs(tr.constant_term))});
  tr.positive_on_grid = true;
  for (int i = 0; i < 200; ++i) {
    const double l = span * i / 199.0;
    const double P = ((l + tr.a) * l + tr.b) * l + tr.constant_term;
    if (!(P > 0.0)) tr.positive_on_grid = false;
  }
  tr.eigenvalues = cubic_roots(tr.a, tr.b, tr.constant_term);
  tr.all_re_negative = true;
  for (const auto& l : tr.eigenvalues)
    if (!(l.real() < 0.0)) tr.all_re_negative = false;
  return tr;
}

DivergenceReport check_divergence(const BallField& field, const Vec3& lo,
                                  const Vec3& hi) {
  DivergenceReport rep;
  grid_max_divergence(field, lo, hi, rep);
  // div = -(alpha + beta + gamma), independent of the state.
  rep.condition_lhs = -(field.alpha + field.beta + field.gamma);
  rep.condition_rhs = 0.0;
  rep.condition_holds = rep.condition_lhs <= rep.condition_rhs;
  return rep;
}

DivergenceReport check_divergence(const BallField& field) {
  return check_divergence(field, Vec3{-1, -1, -1}, Vec3{1, 1, 1});
}

DivergenceReport check_divergence(const WholeSpaceField& field, const Vec3& lo,
                                  const Vec3& hi) {
  DivergenceReport rep;
  grid_max_divergence(field, lo, hi, rep);
  const double p = field.p, q = field.q;
  const int N = field.N;
  if (p * q < 1.0) {
    rep.condition_lhs = p * (q * q - 4.0) / (1.0 - p * q);
    rep.condition_rhs = 2.0 * (N - 1.0);
    rep.condition_holds = rep.condition_lhs <= rep.condition_rhs;
  } else {
    rep.condition_lhs = std::numeric_limits<double>::quiet_NaN();
    rep.condition_rhs = 2.0 * (N - 1.0);
    rep.condition_holds = false;
  }
  return rep;
}

DivergenceReport check_divergence(const WholeSpaceField& field) {
  if (!(field.p * field.q < 1.0))
    throw std::domain_error("check_divergence: requires pq < 1");
  const WholeSpaceRates ws =
      whole_space_constants(field.p, field.q, field.N);
  return check_divergence(field,
                          Vec3{0.0, double(field.N), field.N + field.q},
                          Vec3{ws.Y2, ws.Z2, ws.W2});
}

std::vector<FlowSample> integrate_autonomous(const BallField& field, Vec3 s0,
                                             double t0, double t_end) {
  return flow(field, s0, t0, t_end);
}

std::vector<FlowSample> integrate_autonomous(const WholeSpaceField& field,
                                             Vec3 s0, double t0, double t_end) {
  return flow(field, s0, t0, t_end);
}

const char* to_string(BallOutcome o) {
  switch (o) {
    case BallOutcome::ConvergedToPlusOne: return "converged_to_plus_one";
    case BallOutcome::ConvergedToZero: return "converged_to_zero";
    case BallOutcome::Departed: return "departed";
    case BallOutcome::Undecided: return "undecided";
  }
  return "?";
}

namespace {

// True when the trajectory stays within eps (max-norm) of `e` over a suffix
// spanning at least one time unit.
bool settles_at(const std::vector<FlowSample>& samples, const Vec3& e,
                double eps) {
  if (samples.empty()) return false;
  const double t_last = samples.back().t;
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(it->s[i] - e[i]));
    if (d > eps) return false;
    if (t_last - it->t >= 1.0) return true;
  }
  return false;
}

}  // namespace

TransformedBallRun integrate_transformed_ball(double p, double q, int N,
                                              double m, double t_end) {
  const BallField field(p, q);
  const BallRates rates = ball_rates(p, q);
  if (N < 2) throw std::domain_error("integrate_transformed_ball: N >= 2");
  if (!(m > 0.0)) throw std::domain_error("integrate_transformed_ball: m > 0");
  if (!(t_end > 1e-6))
    throw std::domain_error("integrate_transformed_ball: t_end > 1e-6");

  const double t0 = 1e-6;
  const double r0 = -std::expm1(-t0);
  Params par;
  par.p = p;
  par.nl = Nonlinearity::power(q);
  par.N = N;
  par.m = m;
  par.domain = BallDomain{1.0};
  const Sample st = series_start(par, r0);
  const double omr = std::exp(-t0);  // 1 - r0
  const Vec3 s0{st.w * std::pow(omr, rates.alpha) / rates.A,
                st.v * std::pow(omr, rates.beta) / rates.B,
                st.psi * std::pow(omr, rates.gamma) / rates.C};

  TransformedBallRun run;
  run.samples.push_back({t0, s0});
  const double drift = N - 1.0;
  auto rhs = [&](double t, const std::array<double, 3>& y) {
    const double mu = drift / std::expm1(t);
    const Vec3 g = field(Vec3{y[0], y[1], y[2]});
    return std::array<double, 3>{g[0] - mu * y[0], g[1], g[2] - mu * y[2]};
  };
  OdeControls oc;
  oc.h_init = 0.1 * t0;
  bool departed = false;
  integrate_dopri5<3>(rhs, t0, t_end, {s0[0], s0[1], s0[2]}, oc,
                      [&](double t, const std::array<double, 3>& y, double) {
                        run.samples.push_back({t, {y[0], y[1], y[2]}});
                        departed = max_abs(run.samples.back().s) > 1e6;
                        return departed;
                      });

  const double eps = 1e-3;
  if (departed) {
    run.outcome = BallOutcome::Departed;
    run.note =
        "blow-up before the boundary: v(0) above the critical amplitude "
        "(the blow-up radius shrinks as v(0) grows)";
  } else if (settles_at(run.samples, Vec3{1, 1, 1}, eps)) {
    run.outcome = BallOutcome::ConvergedToPlusOne;
    run.note = "on the connection to (1,1,1): boundary blow-up rates attained";
  } else if (settles_at(run.samples, Vec3{0, 0, 0}, eps)) {
    run.outcome = BallOutcome::ConvergedToZero;
    run.note =
        "decaying to the origin: v(0) below the critical amplitude for "
        "boundary blow-up";
  } else {
    run.outcome = BallOutcome::Undecided;
  }
  return run;
}

std::vector<WholeSpaceSample> integrate_transformed_whole_space(
    double p, double q, int N, double m, double t_end) {
  if (!(q >= 1.0) || !(p < 1.0))
    throw std::domain_error(
        "integrate_transformed_whole_space: requires q >= 1 > p");
  if (!(p * q < 1.0))
    throw std::domain_error(
        "integrate_transformed_whole_space: requires pq < 1");
  if (!(t_end > 0.0) || t_end > 600.0)
    throw std::domain_error(
        "integrate_transformed_whole_space: t_end must lie in (0, 600]");
  Params par;
  par.p = p;
  par.nl = Nonlinearity::power(q);
  par.N = N;
  par.m = m;
  par.domain = WholeSpaceDomain{};
  StepControls controls;
  controls.r_horizon = std::exp(t_end);
  const RadialSolution sol = integrate(par, controls);

  std::vector<WholeSpaceSample> out;
  out.reserve(sol.samples.size());
  for (const Sample& s : sol.samples) {
    if (!(s.u > 0.0) || !(s.w > 0.0) || !(s.v > 0.0) || !(s.psi > 0.0))
      continue;
    WholeSpaceSample w;
    w.t = std::log(s.r);
    w.X = s.r * s.w / s.u;
    w.Y = s.r * s.psi / s.v;
    w.Z = s.r * std::pow(s.v, p) / s.w;
    w.W = s.r * std::pow(s.w, q) / s.psi;
    out.push_back(w);
  }
  return out;
}

ShootResult shoot_boundary_blowup_m(double p, double q, int N) {
  const BallRates rates = ball_rates(p, q);
  const double t_probe = 17.0;
  int evals = 0;
  auto high = [&](double m) {
    ++evals;
    const TransformedBallRun run =
        integrate_transformed_ball(p, q, N, m, t_probe);
    if (run.outcome == BallOutcome::Departed) return true;
    return run.samples.back().s[1] >= 1.0;
  };

  double m_lo, m_hi;
  if (high(rates.B)) {
    m_hi = rates.B;
    m_lo = rates.B / 2.0;
    int guard = 0;
    while (high(m_lo)) {
      m_hi = m_lo;
      m_lo /= 2.0;
      if (++guard > 200)
        throw std::runtime_error("shoot_boundary_blowup_m: no lower bracket");
    }
  } else {
    m_lo = rates.B;
    m_hi = rates.B * 2.0;
    int guard = 0;
    while (!high(m_hi)) {
      m_lo = m_hi;
      m_hi *= 2.0;
      if (++guard > 200)
        throw std::runtime_error("shoot_boundary_blowup_m: no upper bracket");
    }
  }

  for (int it = 0; it < 90; ++it) {
    const double mid = 0.5 * (m_lo + m_hi);
    if (mid <= m_lo || mid >= m_hi) break;  // bracket at double resolution
    (high(mid) ? m_hi : m_lo) = mid;
  }

  ShootResult res;
  res.m_star = 0.5 * (m_lo + m_hi);
  res.t_probe = t_probe;
  res.iterations = evals;
  const TransformedBallRun run =
      integrate_transformed_ball(p, q, N, res.m_star, 12.0);
  double dev = 0.0;
  for (int i = 0; i < 3; ++i)
    dev = std::max(dev, std::abs(run.samples.back().s[i] - 1.0));
  res.deviation_at_12 = dev;
  return res;
}

}  // namespace radial
