#include "radial/ko_criteria.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "radial/fit.hpp"

namespace radial {

namespace {

constexpr double kBand = 0.05;  // indeterminacy band around critical exponents

void validate_p(double p) {
  if (!(p > 0.0) || !std::isfinite(p))
    throw std::invalid_argument("ko: p must be positive and finite");
}

// Decades of t beyond the table end over which the log-log extrapolation of a
// custom table stays below the overflow guard.  Verdicts are refused when
// this span is shorter than 8 decades: the tail behaviour is then dominated
// by faster-than-power growth the table cannot resolve.
double usable_extrapolation_decades(const Nonlinearity& nl) {
  const double T = nl.table_end();
  if (!std::isfinite(T)) return std::numeric_limits<double>::infinity();
  const double kappa = nl.tail_loglog_slope();
  if (kappa <= 0.0) return std::numeric_limits<double>::infinity();
  const double lgf = std::log10(nl.f(T));
  return (280.0 - lgf) / kappa;
}

TailFit fit_exponent(const Nonlinearity& nl, double s_lo, double s_hi, int n,
                     double coeff, bool sqrtf_route) {
  TailFit out;
  if (nl.kind() == FKind::Custom) {
    const double T = nl.table_end();
    const double usable = usable_extrapolation_decades(nl);
    if (usable < 8.0) {
      out.why = "fewer than 8 decades of usable tail extrapolation";
      return out;
    }
    if (T < s_hi && std::log10(s_hi / T) > usable) {
      out.why = "fit window extends past the usable extrapolation range";
      return out;
    }
  }
  const auto grid = log_spaced(s_lo, s_hi, std::size_t(n));
  std::vector<double> lx(grid.size()), ly(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double l = sqrtf_route ? nl.log_sqrt_f_integral(grid[i])
                                 : nl.log_FF(grid[i]);
    if (!std::isfinite(l)) {
      out.why = "non-finite integrand in the fit window";
      return out;
    }
    lx[i] = std::log(grid[i]);
    ly[i] = -coeff * l;  // ln of the integrand
  }
  const LinearFit lf = linear_fit(lx, ly);
  out.sigma = -lf.slope;
  out.usable = true;
  return out;
}

ConvergenceVerdict verdict_from(double sigma, double critical, double delta) {
  if (sigma > critical + delta) return ConvergenceVerdict::Convergent;
  if (sigma < critical - delta) return ConvergenceVerdict::Divergent;
  return ConvergenceVerdict::Indeterminate;
}

}  // namespace

const char* to_string(ConvergenceVerdict v) {
  switch (v) {
    case ConvergenceVerdict::Convergent: return "convergent";
    case ConvergenceVerdict::Divergent: return "divergent";
    case ConvergenceVerdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

const char* to_string(BallVerdict v) {
  switch (v) {
    case BallVerdict::Bounded: return "bounded";
    case BallVerdict::VBlowsUp: return "v_blows_up";
    case BallVerdict::BothBlowUp: return "both_blow_up";
    case BallVerdict::GlobalOnRN: return "global_on_rn";
    case BallVerdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

const char* to_string(KOMethod m) {
  return m == KOMethod::ClosedForm ? "closed_form" : "tail_exponent";
}

const char* to_string(BiharmonicVerdict v) {
  switch (v) {
    case BiharmonicVerdict::BlowUpExists: return "blow_up_exists";
    case BiharmonicVerdict::NoBlowUp: return "no_blow_up";
    case BiharmonicVerdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

char region_letter(BallVerdict v) {
  switch (v) {
    case BallVerdict::Bounded: return 'A';
    case BallVerdict::VBlowsUp: return 'B';
    case BallVerdict::BothBlowUp: return 'C';
    case BallVerdict::GlobalOnRN: return 'G';
    case BallVerdict::Indeterminate: return '?';
  }
  return '?';
}

TailFit tail_exponent_ff_route(const Nonlinearity& nl, double p, double s_lo,
                               double s_hi, int n) {
  validate_p(p);
  return fit_exponent(nl, s_lo, s_hi, n, p / (2.0 * p + 1.0), false);
}

TailFit tail_exponent_sqrtf_route(const Nonlinearity& nl, double p,
                                  double s_lo, double s_hi, int n) {
  validate_p(p);
  return fit_exponent(nl, s_lo, s_hi, n, 2.0 * p / (2.0 * p + 1.0), true);
}

ConvergenceVerdict plain_verdict_from_sigma(const TailFit& fit, double delta) {
  if (!fit.usable) return ConvergenceVerdict::Indeterminate;
  return verdict_from(fit.sigma, 1.0, delta);
}

ConvergenceVerdict weighted_verdict_from_sigma(const TailFit& fit,
                                               double delta) {
  if (!fit.usable) return ConvergenceVerdict::Indeterminate;
  return verdict_from(fit.sigma, 2.0, delta);
}

KOReport ko_report(const Nonlinearity& nl, double p) {
  validate_p(p);
  KOReport rep;
  rep.p = p;
  rep.f_kind = nl.kind();
  rep.q = std::numeric_limits<double>::quiet_NaN();
  switch (nl.kind()) {
    case FKind::Power: {
      const double q = nl.power_exponent();
      rep.q = q;
      rep.method = KOMethod::ClosedForm;
      // FF(s) ~ s^{q+2}, so the plain integrand decays like s^{-sigma}.
      const double sigma = (q + 2.0) * p / (2.0 * p + 1.0);
      rep.tail_exponent = sigma;
      rep.plain = sigma > 1.0 ? ConvergenceVerdict::Convergent
                              : ConvergenceVerdict::Divergent;
      rep.weighted = sigma > 2.0 ? ConvergenceVerdict::Convergent
                                 : ConvergenceVerdict::Divergent;
      break;
    }
    case FKind::Exp:
      rep.method = KOMethod::ClosedForm;
      rep.tail_exponent = std::numeric_limits<double>::infinity();
      rep.plain = ConvergenceVerdict::Convergent;
      rep.weighted = ConvergenceVerdict::Convergent;
      rep.note =
          "superlinear f: the verdict describes the existence of the "
          "boundary blow-up branch; solutions with small initial data "
          "remain bounded";
      break;
    case FKind::Custom: {
      rep.method = KOMethod::TailExponent;
      const TailFit fit = tail_exponent_ff_route(nl, p);
      rep.tail_exponent =
          fit.usable ? fit.sigma : std::numeric_limits<double>::quiet_NaN();
      rep.plain = plain_verdict_from_sigma(fit, kBand);
      rep.weighted = weighted_verdict_from_sigma(fit, kBand);
      if (!fit.usable) rep.note = fit.why;
      break;
    }
  }
  return rep;
}

ConvergenceVerdict ko_plain(const Nonlinearity& nl, double p) {
  return ko_report(nl, p).plain;
}

ConvergenceVerdict ko_weighted(const Nonlinearity& nl, double p) {
  return ko_report(nl, p).weighted;
}

Classification classify_ball(const Nonlinearity& nl, double p) {
  Classification out;
  out.evidence = ko_report(nl, p);
  const auto plain = out.evidence.plain;
  const auto weighted = out.evidence.weighted;
  if (plain == ConvergenceVerdict::Divergent) {
    out.verdict = BallVerdict::Bounded;
  } else if (weighted == ConvergenceVerdict::Convergent) {
    out.verdict = BallVerdict::VBlowsUp;
  } else if (plain == ConvergenceVerdict::Convergent &&
             weighted == ConvergenceVerdict::Divergent) {
    out.verdict = BallVerdict::BothBlowUp;
  } else {
    out.verdict = BallVerdict::Indeterminate;
  }
  return out;
}

Classification classify_whole_space(const Nonlinearity& nl, double p) {
  Classification out = classify_ball(nl, p);
  if (out.evidence.plain == ConvergenceVerdict::Divergent)
    out.verdict = BallVerdict::GlobalOnRN;
  // Otherwise every positive radial solution stops existing at a finite
  // radius; the ball verdict already describes what blows up there.
  return out;
}

BiharmonicVerdict classify_biharmonic(const Nonlinearity& nl) {
  switch (classify_ball(nl, 1.0).verdict) {
    case BallVerdict::BothBlowUp: return BiharmonicVerdict::BlowUpExists;
    case BallVerdict::Bounded:
    case BallVerdict::VBlowsUp: return BiharmonicVerdict::NoBlowUp;
    default: return BiharmonicVerdict::Indeterminate;
  }
}

}  // namespace radial
