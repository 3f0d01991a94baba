#include "radial/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "radial/fit.hpp"
#include "radial/ode.hpp"
#include "radial/quadrature.hpp"

namespace radial {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate(const Params& params) {
  if (!(params.p > 0.0) || !std::isfinite(params.p))
    throw std::invalid_argument("radial: p must be positive");
  if (params.N < 2) throw std::invalid_argument("radial: need dimension N >= 2");
  if (!(params.m > 0.0) || !std::isfinite(params.m))
    throw std::invalid_argument("radial: need v(0) = m > 0");
  if (const auto* ball = std::get_if<BallDomain>(&params.domain))
    if (!(ball->R > 0.0) || !std::isfinite(ball->R))
      throw std::invalid_argument("radial: ball radius must be positive");
}

struct RadialRhs {
  double p;
  double drift;  // N - 1
  const Nonlinearity* nl;
  std::array<double, 4> operator()(double r,
                                   const std::array<double, 4>& y) const {
    const double w = y[1];
    const double v = y[2];
    const double psi = y[3];
    const double vp = std::pow(std::max(v, 0.0), p);
    return {w, vp - drift / r * w, psi,
            nl->f(std::abs(w)) - drift / r * psi};
  }
};

double interp_fraction(double a, double b, double x) {
  return b == a ? 0.0 : (x - a) / (b - a);
}

LevelPoint interp_between(const Sample& s0, const Sample& s1, double frac) {
  // Positive quantities interpolate in log space; u linearly.
  auto lg = [frac](double a, double b) {
    if (a > 0 && b > 0) return std::exp(std::log(a) + frac * (std::log(b) - std::log(a)));
    return a + frac * (b - a);
  };
  LevelPoint out;
  out.r = lg(s0.r, s1.r);
  out.u = s0.u + frac * (s1.u - s0.u);
  out.w = lg(s0.w, s1.w);
  out.v = lg(s0.v, s1.v);
  out.psi = lg(s0.psi, s1.psi);
  out.ok = true;
  return out;
}

// Internal blow-up fit used both by integrate() and the public wrapper.
// Returns nullopt when the terminal window does not look like an approach
// to a finite radius.
std::optional<BlowupFit> fit_blowup_window(const std::vector<Sample>& samples,
                                           std::optional<double> beta_hint,
                                           double window_decades,
                                           std::size_t min_points) {
  if (samples.size() < min_points + 2) return std::nullopt;
  const double v_end = samples.back().v;
  const double v_lo = v_end * std::pow(10.0, -window_decades);
  std::size_t begin = samples.size();
  while (begin > 0 && samples[begin - 1].v >= v_lo) --begin;
  std::vector<const Sample*> win;
  for (std::size_t i = begin; i < samples.size(); ++i) {
    if (!win.empty() && !(samples[i].v > win.back()->v)) continue;  // flat steps
    win.push_back(&samples[i]);
  }
  if (win.size() < min_points) return std::nullopt;
  // Thin very long windows; the fit does not need thousands of points.
  if (win.size() > 400) {
    std::vector<const Sample*> thin;
    const double stride = double(win.size() - 1) / 399.0;
    for (int i = 0; i < 400; ++i)
      thin.push_back(win[std::size_t(std::lround(i * stride))]);
    win = std::move(thin);
  }

  const double r_end = win.back()->r;
  const double eps_r = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, r_end);
  BlowupFit out;
  out.n_window = win.size();

  if (r_end - win.front()->r <= eps_r) {
    // The whole window sits inside the radius resolution limit: v gained a
    // decade while r was numerically frozen.  That certifies a singularity
    // at r_end but leaves the exponent unresolved.
    out.R_max = r_end;
    out.beta = kNaN;
    out.B = kNaN;
    return out;
  }

  // Three-point geometric estimate of R: radii at equally spaced ln v
  // levels approach R with geometrically shrinking increments.
  auto r_at = [&](double level) {
    for (std::size_t i = 1; i < win.size(); ++i) {
      if (win[i]->v >= level) {
        const double f = interp_fraction(std::log(win[i - 1]->v),
                                         std::log(win[i]->v), std::log(level));
        return interp_between(*win[i - 1], *win[i], f).r;
      }
    }
    return win.back()->r;
  };
  const double g = std::pow(v_end / win.front()->v, 1.0 / 3.0);
  const double r1 = r_at(win.front()->v * g);
  const double r2 = r_at(win.front()->v * g * g);
  const double r3 = r_end;
  const double d1 = r2 - r1;
  const double d2 = r3 - r2;
  if (!(d1 > 0.0) || !(d2 > 0.0)) return std::nullopt;
  const double rho = d2 / d1;
  if (!(rho < 1.0)) return std::nullopt;  // increments not shrinking: no finite radius
  const double R0 = r3 + d2 * rho / (1.0 - rho);

  // Refine R by minimizing the residual of the log-log regression.
  std::vector<double> lx(win.size()), ly(win.size());
  auto objective = [&](double z) {
    const double R = r_end + std::exp(z);
    std::size_t k = 0;
    for (const Sample* s : win) {
      const double gap = R - s->r;
      if (!(gap > 0.0)) continue;
      lx[k] = std::log(gap);
      ly[k] = std::log(s->v);
      ++k;
    }
    if (k < 4) return std::numeric_limits<double>::infinity();
    std::span<const double> sx(lx.data(), k), sy(ly.data(), k);
    const LinearFit f = beta_hint ? linear_fit_fixed_slope(sx, sy, -*beta_hint)
                                  : linear_fit(sx, sy);
    return f.sse;
  };
  const double gap0 = std::max(R0 - r_end, eps_r);
  const double z_hat =
      golden_min(objective, std::log(gap0 / 30.0), std::log(gap0 * 30.0));
  const double R_hat = r_end + std::exp(z_hat);

  // Final regression, excluding samples inside the radius resolution limit.
  std::size_t k = 0;
  for (const Sample* s : win) {
    const double gap = R_hat - s->r;
    if (!(gap > eps_r)) continue;
    lx[k] = std::log(gap);
    ly[k] = std::log(s->v);
    ++k;
  }
  if (k < 4) {
    out.R_max = r_end;
    out.beta = kNaN;
    out.B = kNaN;
    return out;
  }
  std::span<const double> sx(lx.data(), k), sy(ly.data(), k);
  const LinearFit f = beta_hint ? linear_fit_fixed_slope(sx, sy, -*beta_hint)
                                : linear_fit(sx, sy);
  out.R_max = R_hat;
  out.beta = -f.slope;
  out.B = std::exp(f.intercept);
  out.sse = f.sse;
  out.n_window = k;
  return out;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedRadius: return "reached_radius";
    case Termination::BlowUp: return "blow_up";
    case Termination::GlobalHorizon: return "global_horizon";
    case Termination::StepUnderflow: return "step_underflow";
    case Termination::NonFinite: return "non_finite";
    case Termination::MaxSteps: return "max_steps";
  }
  return "?";
}

Sample series_start(const Params& params, double r0) {
  validate(params);
  if (!(r0 > 0.0) || !std::isfinite(r0))
    throw std::invalid_argument("series_start: r0 must be positive");
  const double m = params.m;
  const double N = params.N;
  const double mp = std::pow(m, params.p);
  const double w0 = mp * r0 / N;

  Sample s;
  s.r = r0;
  s.w = w0;
  s.u = params.u0 + mp * r0 * r0 / (2.0 * N);

  if (params.nl.kind() == FKind::Power) {
    const double q = params.nl.power_exponent();
    const double c = std::pow(mp / N, q);
    s.psi = c * std::pow(r0, q + 1.0) / (N + q);
    s.v = m + c * std::pow(r0, q + 2.0) / ((q + 2.0) * (N + q));
  } else {
    // psi(r0) = r0^{1-N} int_0^{r0} s^{N-1} f(w(s)) ds with w(s) ~ w0 s/r0;
    // substituting s = r0 x removes the r0^N scale from the quadrature.
    const auto& nl = params.nl;
    const double tol = 1e-14 * std::max(1.0, nl.f(w0));
    auto inner = [&](double y) {
      if (y <= 0.0) return 0.0;
      const double integral = adaptive_simpson(
          [&](double x) { return std::pow(x, N - 1.0) * nl.f(w0 * x); }, 0.0,
          y, tol);
      return std::pow(y, 1.0 - N) * integral;
    };
    s.psi = r0 * inner(1.0);
    s.v = m + r0 * r0 * adaptive_simpson(inner, 0.0, 1.0, tol);
  }
  return s;
}

RadialSolution integrate(const Params& params, const StepControls& controls) {
  validate(params);
  const auto* ball = std::get_if<BallDomain>(&params.domain);
  const double scale = ball ? ball->R : 1.0;
  const double r0 = controls.r0_scale * scale;
  const double r_end = ball ? ball->R : controls.r_horizon;
  if (!(r0 < r_end))
    throw std::invalid_argument("radial: starting radius beyond the endpoint");

  RadialSolution sol;
  sol.u0 = params.u0;
  sol.R_max = kNaN;
  sol.fit_beta = kNaN;
  sol.fit_B = kNaN;

  const Sample start = series_start(params, r0);
  sol.samples.push_back(start);

  RadialRhs rhs{params.p, double(params.N - 1), &params.nl};
  OdeControls oc;
  oc.rtol = controls.rtol;
  oc.atol = controls.atol;
  oc.max_steps = controls.max_steps;
  oc.h_init = 0.1 * r0;

  double ceiling = controls.v_ceiling;
  double pending_R = kNaN;  // radius estimate from the previous ceiling probe

  auto observer = [&](double r, const std::array<double, 4>& y, double) {
    sol.samples.push_back({r, y[0], y[1], y[2], y[3]});
    if (y[2] < ceiling) return false;
    // Distinguish a finite-radius singularity from fast global growth:
    // radii at geometrically spaced v levels must approach a limit.
    const auto probe = fit_blowup_window(sol.samples, std::nullopt, 1.0, 8);
    if (probe) {
      if (std::isnan(probe->beta)) return true;  // radius numerically frozen
      if (probe->beta >= 0.1) {
        double r_lo = r;
        for (auto it = sol.samples.rbegin(); it != sol.samples.rend(); ++it) {
          if (it->v * 10.0 < y[2]) break;
          r_lo = it->r;
        }
        const double gap = probe->R_max - r;
        // A singularity within reach of the fitted window is trusted
        // directly.  A remote one (steep exponents put R many window-widths
        // out) is only trusted once the estimate stops moving between
        // ceilings: exponential growth also extrapolates to a finite R, but
        // that phantom radius recedes as the integration advances.
        if (gap <= 25.0 * (r - r_lo)) return true;
        if (!std::isnan(pending_R) &&
            std::abs(probe->R_max - pending_R) <= 0.05 * gap)
          return true;
        pending_R = probe->R_max;
      } else {
        pending_R = kNaN;
      }
    } else {
      pending_R = kNaN;
    }
    // Not confirmed: raise the bar and keep going.
    ceiling *= 100.0;
    return false;
  };

  const OdeStatus status =
      integrate_dopri5<4>(rhs, r0, r_end,
                          {start.u, start.w, start.v, start.psi}, oc, observer);
  sol.r_stop = sol.samples.back().r;

  auto finalize_blowup = [&]() {
    sol.termination = Termination::BlowUp;
    const auto fit = fit_blowup_window(sol.samples, std::nullopt, 1.0, 8);
    if (fit) {
      sol.R_max = fit->R_max;
      sol.fit_beta = fit->beta;
      sol.fit_B = fit->B;
    } else {
      sol.R_max = sol.r_stop;
    }
  };

  switch (status) {
    case OdeStatus::ObserverStop:
      finalize_blowup();
      break;
    case OdeStatus::ReachedEnd:
      sol.termination =
          ball ? Termination::ReachedRadius : Termination::GlobalHorizon;
      break;
    case OdeStatus::StepUnderflow: {
      // A step-size collapse while v is large and r is numerically frozen is
      // the stalled form of blow-up (the tail is too steep to resolve in r).
      const double v_end = sol.samples.back().v;
      const LevelPoint below = state_at_v(sol, v_end / 10.0);
      if (v_end >= 100.0 * std::max(params.m, 1.0) && below.ok &&
          sol.r_stop - below.r <= 1e-9 * sol.r_stop) {
        finalize_blowup();
      } else {
        sol.termination = Termination::StepUnderflow;
      }
      break;
    }
    case OdeStatus::NonFinite:
      sol.termination = Termination::NonFinite;
      break;
    case OdeStatus::MaxSteps:
      sol.termination = Termination::MaxSteps;
      break;
  }
  return sol;
}

BlowupFit fit_blowup_radius(const RadialSolution& sol,
                            std::optional<double> beta_hint) {
  if (sol.termination != Termination::BlowUp)
    throw std::invalid_argument(
        "fit_blowup_radius: solution did not terminate by blow-up");
  const auto fit = fit_blowup_window(sol.samples, beta_hint, 1.0, 20);
  if (!fit)
    throw std::runtime_error(
        "fit_blowup_radius: terminal window unusable (too few samples or "
        "non-geometric radii)");
  return *fit;
}

LevelPoint state_at_v(const RadialSolution& sol, double v_level) {
  LevelPoint out;
  const auto& s = sol.samples;
  if (s.empty() || v_level < s.front().v || v_level > s.back().v) return out;
  // v is nondecreasing along the solution; find the first sample >= level.
  auto it = std::lower_bound(s.begin(), s.end(), v_level,
                             [](const Sample& a, double x) { return a.v < x; });
  if (it == s.begin()) {
    out = interp_between(s.front(), s.front(), 0.0);
    return out;
  }
  const Sample& s1 = *it;
  const Sample& s0 = *(it - 1);
  const double f = interp_fraction(std::log(s0.v), std::log(s1.v), std::log(v_level));
  return interp_between(s0, s1, f);
}

LevelPoint state_at_r(const RadialSolution& sol, double r) {
  LevelPoint out;
  const auto& s = sol.samples;
  if (s.empty() || r < s.front().r || r > s.back().r) return out;
  auto it = std::lower_bound(s.begin(), s.end(), r,
                             [](const Sample& a, double x) { return a.r < x; });
  if (it == s.begin()) {
    out = interp_between(s.front(), s.front(), 0.0);
    return out;
  }
  const Sample& s1 = *it;
  const Sample& s0 = *(it - 1);
  const double f = interp_fraction(std::log(s0.r), std::log(s1.r), std::log(r));
  return interp_between(s0, s1, f);
}

namespace {

bool same_nonlinearity(const Nonlinearity& a, const Nonlinearity& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == FKind::Power)
    return a.power_exponent() == b.power_exponent();
  if (a.kind() == FKind::Custom) {
    if (a.table_end() != b.table_end() ||
        a.tail_loglog_slope() != b.tail_loglog_slope())
      return false;
    for (double t : {0.1, 1.0, 3.0, 7.0})
      if (a.f(t * a.table_end() / 7.0) != b.f(t * b.table_end() / 7.0))
        return false;
  }
  return true;
}

}  // namespace

ComparisonReport check_comparison(const Params& larger_m,
                                  const Params& smaller_m, double r_horizon) {
  if (larger_m.p != smaller_m.p || larger_m.N != smaller_m.N ||
      larger_m.u0 != smaller_m.u0 ||
      larger_m.domain.index() != smaller_m.domain.index() ||
      !same_nonlinearity(larger_m.nl, smaller_m.nl))
    throw std::invalid_argument(
        "check_comparison: parameter sets may differ only in m");
  if (!(larger_m.m >= smaller_m.m))
    throw std::invalid_argument(
        "check_comparison: first parameter set must have the larger m");

  StepControls controls;
  controls.r_horizon = r_horizon;
  const RadialSolution hi = integrate(larger_m, controls);
  const RadialSolution lo = integrate(smaller_m, controls);

  ComparisonReport rep;
  const double r_lo =
      std::max(hi.samples.front().r, lo.samples.front().r) * 1.01;
  const double r_hi =
      std::min({hi.r_stop, lo.r_stop, r_horizon}) * (1.0 - 1e-9);
  if (!(r_hi > r_lo))
    throw std::runtime_error("check_comparison: no common radius interval");

  const auto grid = log_spaced(r_lo, r_hi, 200);
  rep.points = grid.size();
  rep.min_gap_rel = std::numeric_limits<double>::infinity();

  if (larger_m.m == smaller_m.m) {
    rep.degenerate = true;
    double worst = 0.0;
    for (double r : grid) {
      const LevelPoint a = state_at_r(hi, r), b = state_at_r(lo, r);
      if (!a.ok || !b.ok) continue;
      worst = std::max({worst, std::abs(a.v - b.v) / b.v,
                        std::abs(a.w - b.w) / b.w});
    }
    rep.ordered = false;
    rep.min_gap_rel = worst;  // here: largest relative discrepancy
    return rep;
  }

  rep.ordered = true;
  for (double r : grid) {
    const LevelPoint a = state_at_r(hi, r), b = state_at_r(lo, r);
    if (!a.ok || !b.ok) continue;
    const std::pair<double, const char*> gaps[] = {
        {(a.u - b.u) / std::max(std::abs(b.u), 1e-300), "u"},
        {(a.w - b.w) / b.w, "w"},
        {(a.v - b.v) / b.v, "v"},
        {(a.psi - b.psi) / b.psi, "psi"}};
    for (const auto& [gap, name] : gaps) {
      rep.min_gap_rel = std::min(rep.min_gap_rel, gap);
      if (gap <= 0.0 && rep.ordered) {
        rep.ordered = false;
        rep.first_violation_r = r;
        rep.quantity = name;
      }
    }
  }
  return rep;
}

RadialSolution rescale_solution(const RadialSolution& sol, double sigma,
                                double p, double q) {
  if (!(sigma > 0.0) || sigma > 1.0)
    throw std::invalid_argument("rescale_solution: sigma must lie in (0, 1]");
  if (!(p > 0.0) || !(q > 0.0) || !(p * q > 1.0))
    throw std::invalid_argument("rescale_solution: requires pq > 1");
  const double pq1 = p * q - 1.0;
  const double a = (2.0 * p + 1.0) / pq1;
  const double b = (q + 2.0) / pq1;
  const double c = (p * q + q + 1.0) / pq1;
  const double fu = std::pow(sigma, a - 1.0);
  const double fw = std::pow(sigma, a);
  const double fv = std::pow(sigma, b);
  const double fp = std::pow(sigma, c);

  RadialSolution out = sol;
  out.u0 = fu * sol.u0;
  for (Sample& s : out.samples) {
    s.r /= sigma;
    s.u *= fu;
    s.w *= fw;
    s.v *= fv;
    s.psi *= fp;
  }
  out.r_stop = sol.r_stop / sigma;
  if (!std::isnan(sol.R_max)) out.R_max = sol.R_max / sigma;
  // v ~ B (R - r)^{-beta}  maps to  sigma^b B sigma^{-beta} (R/sigma - r)^{-beta}.
  if (!std::isnan(sol.fit_B) && !std::isnan(sol.fit_beta))
    out.fit_B = sol.fit_B * fv * std::pow(sigma, -sol.fit_beta);
  return out;
}

}  // namespace radial
