#include "radial/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "radial/fit.hpp"

namespace radial {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(UCase c) {
  switch (c) {
    case UCase::FiniteLimit: return "finite_limit";
    case UCase::LogRate: return "log_rate";
    case UCase::PowerRate: return "power_rate";
  }
  return "?";
}

BallRates ball_rates(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0))
    throw std::domain_error("ball_rates: requires p > 0 and q > 0");
  const double d = p * q - 1.0;
  if (!(d > 0.0)) throw std::domain_error("ball_rates: requires pq > 1");

  BallRates r;
  r.p = p;
  r.q = q;
  r.alpha = (1.0 + 2.0 * p) / d;
  r.beta = (q + 2.0) / d;
  r.gamma = (q + p * q + 1.0) / d;

  const double a1 = 1.0 + 2.0 * p;    // = alpha d
  const double a2 = q + 2.0;          // = beta d
  const double a3 = q + p * q + 1.0;  // = gamma d
  // Log-domain products keep large p, q out of overflow territory.
  const double ld = std::log(d);
  r.A = std::exp((std::log(a1) + p * std::log(a2) + p * std::log(a3) -
                  (2.0 * p + 1.0) * ld) / d);
  r.B = std::exp((q * std::log(a1) + std::log(a2) + std::log(a3) -
                  (q + 2.0) * ld) / d);
  r.C = std::exp((q * std::log(a1) + p * q * std::log(a2) + std::log(a3) -
                  (q + p * q + 1.0) * ld) / d);

  const double q_crit = 2.0 * (1.0 + 1.0 / p);
  if (q > q_crit) {
    r.u_case = UCase::FiniteLimit;
    r.u_rate_constant = r.A / (1.0 - r.alpha);
  } else if (q == q_crit) {
    r.u_case = UCase::LogRate;
    r.u_rate_constant = r.A;
  } else {
    r.u_case = UCase::PowerRate;
    r.u_rate_constant = r.A / (r.alpha - 1.0);
  }
  if (p < 1.0 || q < 1.0)
    r.note = "outside the stated rate hypotheses p, q >= 1";
  return r;
}

namespace {

struct GapSample {
  double gap;  // R_hat - r
  const Sample* s;
};

double median_scaled(const std::vector<GapSample>& win, double exponent,
                     double Sample::* field) {
  std::vector<double> vals;
  vals.reserve(win.size());
  for (const auto& g : win)
    vals.push_back(std::log((g.s)->*field) + exponent * std::log(g.gap));
  return std::exp(median(std::move(vals)));
}

// Slope of u against the case-specific regressor; the additive constant of
// integration lands in the intercept and drops out.
double u_slope(const std::vector<GapSample>& win, const BallRates& rates) {
  std::vector<double> x, y;
  x.reserve(win.size());
  y.reserve(win.size());
  for (const auto& g : win) {
    switch (rates.u_case) {
      case UCase::LogRate: x.push_back(-std::log(g.gap)); break;
      default: x.push_back(std::pow(g.gap, 1.0 - rates.alpha)); break;
    }
    y.push_back(g.s->u);
  }
  const LinearFit f = linear_fit(x, y);
  return rates.u_case == UCase::FiniteLimit ? -f.slope : f.slope;
}

}  // namespace

BallRateReport verify_ball_rates(const RadialSolution& sol, double p, double q,
                                 double window_decades) {
  if (sol.termination != Termination::BlowUp)
    throw std::invalid_argument(
        "verify_ball_rates: needs a solution that terminated by blow-up");
  if (!(window_decades > 0.0))
    throw std::invalid_argument("verify_ball_rates: window_decades > 0");
  BallRateReport rep;
  rep.rates = ball_rates(p, q);
  const auto& S = sol.samples;
  const double r_end = S.back().r;
  const double eps_r =
      1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, r_end);

  // Refit R with the exponent pinned to the theoretical beta; the free-beta
  // estimate from the solver seeds the search bracket.
  double gap0 = std::isfinite(sol.R_max) ? sol.R_max - r_end : 0.0;
  gap0 = std::max(gap0, eps_r);
  std::vector<double> lx, ly;
  auto sse_at = [&](double R) {
    lx.clear();
    ly.clear();
    const double hi = 1e-4 * R;
    for (const Sample& s : S) {
      const double gap = R - s.r;
      if (gap < eps_r || gap > hi) continue;
      lx.push_back(std::log(gap));
      ly.push_back(std::log(s.v));
    }
    if (lx.size() < 6) return std::numeric_limits<double>::infinity();
    return linear_fit_fixed_slope(lx, ly, -rep.rates.beta).sse;
  };
  const double z_hat =
      golden_min([&](double z) { return sse_at(r_end + std::exp(z)); },
                 std::log(gap0 / 30.0), std::log(gap0 * 30.0));
  const double R_hat = r_end + std::exp(z_hat);
  rep.R_hat = R_hat;

  // Window: the last `window_decades` of v among samples whose gap to R_hat
  // the radius grid can still resolve; sensitivity from the last half.
  std::vector<GapSample> resolvable;
  for (const Sample& s : S) {
    const double gap = R_hat - s.r;
    if (gap >= eps_r && s.v > 0.0) resolvable.push_back({gap, &s});
  }
  if (resolvable.size() < 6)
    throw std::runtime_error(
        "verify_ball_rates: too few resolvable samples near the fitted "
        "radius; integrate with a higher blow-up ceiling");
  const double v_top = resolvable.back().s->v;
  const double v_cut = v_top * std::pow(10.0, -window_decades);
  const double v_half = v_top * std::pow(10.0, -0.5 * window_decades);
  std::vector<GapSample> win, half;
  for (const auto& g : resolvable) {
    if (g.s->v >= v_cut) win.push_back(g);
    if (g.s->v >= v_half) half.push_back(g);
  }
  if (win.size() < 6 || half.size() < 4)
    throw std::runtime_error(
        "verify_ball_rates: terminal window too thin; integrate with a "
        "higher blow-up ceiling or widen the window");

  auto make_check = [&](const char* name, double emp, double emp_half,
                        double theo) {
    RateCheck c;
    c.quantity = name;
    c.empirical = emp;
    c.theoretical = theo;
    c.rel_err = std::abs(emp - theo) / std::abs(theo);
    c.window_lo = win.back().gap;
    c.window_hi = win.front().gap;
    c.half_window_drift = std::abs(emp_half - emp) / std::abs(emp);
    rep.checks.push_back(std::move(c));
  };

  make_check("v", median_scaled(win, rep.rates.beta, &Sample::v),
             median_scaled(half, rep.rates.beta, &Sample::v), rep.rates.B);
  make_check("w", median_scaled(win, rep.rates.alpha, &Sample::w),
             median_scaled(half, rep.rates.alpha, &Sample::w), rep.rates.A);
  make_check("psi", median_scaled(win, rep.rates.gamma, &Sample::psi),
             median_scaled(half, rep.rates.gamma, &Sample::psi), rep.rates.C);
  make_check("u", u_slope(win, rep.rates), u_slope(half, rep.rates),
             rep.rates.u_rate_constant);
  return rep;
}

WholeSpaceRates whole_space_constants(double p, double q, int N) {
  if (!(p > 0.0) || !(q > 0.0))
    throw std::domain_error("whole_space_constants: requires p > 0 and q > 0");
  if (N < 2) throw std::domain_error("whole_space_constants: requires N >= 2");
  WholeSpaceRates ws;
  ws.p = p;
  ws.q = q;
  ws.N = N;
  const double d = 1.0 - p * q;
  ws.Y2 = (2.0 + q) / d;
  ws.Z2 = N + p * ws.Y2;
  ws.W2 = N - 2.0 + ws.Y2;
  ws.X_limit = 2.0 + p * ws.Y2;
  ws.u_exponent = ws.X_limit;
  ws.v_exponent = ws.Y2;

  const double prod = ws.Y2 * std::pow(ws.Z2, q) * ws.W2;
  if (prod > 0.0 && d != 0.0) {
    ws.v_const = std::pow(prod, -1.0 / d);
    // From Delta v = |u'|^q:  u_const u_exponent = (v_const Y2 W2)^{1/q}.
    ws.u_const = std::pow(ws.v_const * ws.Y2 * ws.W2, 1.0 / q) / ws.u_exponent;
  } else {
    ws.v_const = kNaN;
    ws.u_const = kNaN;
  }
  return ws;
}

WholeSpaceRates whole_space_rates(double p, double q, int N) {
  if (!(q >= 1.0) || !(p < 1.0))
    throw std::domain_error("whole_space_rates: requires q >= 1 > p");
  if (!(p * q < 1.0))
    throw std::domain_error("whole_space_rates: requires pq < 1");
  const double lhs = p * (q * q - 4.0) / (1.0 - p * q);
  if (!(lhs <= 2.0 * (N - 1)))
    throw std::domain_error(
        "whole_space_rates: requires p(q^2-4)/(1-pq) <= 2(N-1)");
  return whole_space_constants(p, q, N);
}

double exact_u(const WholeSpaceRates& ws, double r) {
  return ws.u_const * std::pow(r, ws.u_exponent);
}

double exact_v(const WholeSpaceRates& ws, double r) {
  return ws.v_const * std::pow(r, ws.v_exponent);
}

double exact_solution_residual(double p, double q, int N, double r) {
  if (!(p * q < 1.0))
    throw std::domain_error("exact_solution_residual: requires pq < 1");
  if (!(r > 0.0))
    throw std::domain_error("exact_solution_residual: requires r > 0");
  const WholeSpaceRates ws = whole_space_constants(p, q, N);
  const double h = 2.5e-3 * r;

  auto d1 = [h](auto&& f, double x) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) /
           (12 * h);
  };
  auto d2 = [h](auto&& f, double x) {
    return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) -
            f(x + 2 * h)) / (12 * h * h);
  };
  auto fu = [&](double x) { return exact_u(ws, x); };
  auto fv = [&](double x) { return exact_v(ws, x); };

  const double drift = double(N - 1) / r;
  const double lap_u = d2(fu, r) + drift * d1(fu, r);
  const double lap_v = d2(fv, r) + drift * d1(fv, r);
  const double rhs_u = std::pow(exact_v(ws, r), p);
  const double rhs_v = std::pow(std::abs(d1(fu, r)), q);

  const double res_u = std::abs(lap_u - rhs_u) / std::abs(rhs_u);
  const double res_v = std::abs(lap_v - rhs_v) / std::abs(rhs_v);
  return std::max(res_u, res_v);
}

double exact_solution_residual(double p, double q, int N,
                               const std::vector<double>& radii) {
  double worst = 0.0;
  for (double r : radii) {
    if (!(r > 0.0)) continue;  // the origin is degenerate for differences
    worst = std::max(worst, exact_solution_residual(p, q, N, r));
  }
  return worst;
}

WholeSpaceReport verify_whole_space(const RadialSolution& sol, double p,
                                    double q, int N) {
  if (sol.termination != Termination::GlobalHorizon)
    throw std::invalid_argument(
        "verify_whole_space: needs a global solution (integrated to the "
        "radius horizon)");
  WholeSpaceReport rep;
  rep.rates = whole_space_rates(p, q, N);
  const auto& S = sol.samples;
  const double r_hi = S.back().r;
  if (S.front().r > 1e-3 * r_hi)
    throw std::invalid_argument(
        "verify_whole_space: fewer than three sampled decades of radius");
  const double r_lo = r_hi / 100.0;

  std::vector<const Sample*> win, half;
  for (const Sample& s : S) {
    if (s.r >= r_lo) win.push_back(&s);
    if (s.r >= r_hi / std::sqrt(10.0)) half.push_back(&s);
  }

  auto slope_of = [&](double Sample::* field,
                      const std::vector<const Sample*>& w) {
    std::vector<double> lx, ly;
    lx.reserve(w.size());
    ly.reserve(w.size());
    for (const Sample* s : w) {
      lx.push_back(std::log(s->r));
      ly.push_back(std::log(s->*field));
    }
    return linear_fit(lx, ly).slope;
  };
  auto const_of = [&](double Sample::* field, double exponent,
                      const std::vector<const Sample*>& w) {
    std::vector<double> vals;
    vals.reserve(w.size());
    for (const Sample* s : w)
      vals.push_back(std::log(s->*field) - exponent * std::log(s->r));
    return std::exp(median(std::move(vals)));
  };

  auto push = [&](const char* name, double emp, double emp_half, double theo,
                  double lo, double hi) {
    RateCheck c;
    c.quantity = name;
    c.empirical = emp;
    c.theoretical = theo;
    c.rel_err = std::abs(emp - theo) / std::abs(theo);
    c.window_lo = lo;
    c.window_hi = hi;
    c.half_window_drift = std::abs(emp_half - emp) / std::abs(emp);
    rep.checks.push_back(std::move(c));
  };

  // Half window for the exponent/constant fits: the last single decade.
  std::vector<const Sample*> dec;
  for (const Sample* s : win)
    if (s->r >= r_hi / 10.0) dec.push_back(s);

  push("u_exponent", slope_of(&Sample::u, win), slope_of(&Sample::u, dec),
       rep.rates.u_exponent, r_lo, r_hi);
  push("v_exponent", slope_of(&Sample::v, win), slope_of(&Sample::v, dec),
       rep.rates.v_exponent, r_lo, r_hi);
  push("u_const", const_of(&Sample::u, rep.rates.u_exponent, win),
       const_of(&Sample::u, rep.rates.u_exponent, dec), rep.rates.u_const,
       r_lo, r_hi);
  push("v_const", const_of(&Sample::v, rep.rates.v_exponent, win),
       const_of(&Sample::v, rep.rates.v_exponent, dec), rep.rates.v_const,
       r_lo, r_hi);

  // Transformed limits over the last half decade of radius.
  auto limit_of = [&](auto&& value) {
    std::vector<double> vals, vals_half;
    for (const Sample* s : half) {
      vals.push_back(value(*s));
      if (s->r >= r_hi / std::pow(10.0, 0.25)) vals_half.push_back(value(*s));
    }
    return std::pair{median(std::move(vals)), median(std::move(vals_half))};
  };
  const double lo_half = r_hi / std::sqrt(10.0);
  auto [X, Xh] = limit_of([&](const Sample& s) { return s.r * s.w / s.u; });
  push("X", X, Xh, rep.rates.X_limit, lo_half, r_hi);
  auto [Y, Yh] = limit_of([&](const Sample& s) { return s.r * s.psi / s.v; });
  push("Y", Y, Yh, rep.rates.Y2, lo_half, r_hi);
  auto [Z, Zh] =
      limit_of([&](const Sample& s) { return s.r * std::pow(s.v, p) / s.w; });
  push("Z", Z, Zh, rep.rates.Z2, lo_half, r_hi);
  auto [W, Wh] =
      limit_of([&](const Sample& s) { return s.r * std::pow(s.w, q) / s.psi; });
  push("W", W, Wh, rep.rates.W2, lo_half, r_hi);
  return rep;
}

}  // namespace radial
