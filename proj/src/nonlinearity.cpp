#include "radial/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "radial/quadrature.hpp"

namespace radial {

namespace {

constexpr double kClamp = 1e300;   // stand-in for values beyond double range
constexpr double kLogSafe = 600.0; // e^x representable with headroom below this

// e^{la} - e^{lb} from logarithms, clamped to +-kClamp on overflow.
double exp_diff(double la, double lb) {
  if (la == lb) return 0.0;
  const double m = std::max(la, lb);
  if (m == -std::numeric_limits<double>::infinity()) return 0.0;
  const double mag = std::exp(std::min(la, lb) - m);  // in (0, 1]
  const double sign = la > lb ? 1.0 : -1.0;
  if (m > kLogSafe) {
    const double lmag = m + std::log1p(-mag);
    if (lmag > std::log(kClamp)) return sign * kClamp;
    return sign * std::exp(lmag);
  }
  return sign * std::exp(m) * (1.0 - mag);
}

// e^s - 1 - s without cancellation for small s.
double expm1m(double s) {
  if (std::abs(s) < 1e-2) {
    // s^2/2 * (1 + s/3 + s^2/12 + s^3/60 + s^4/360)
    const double s2 = s * s;
    return 0.5 * s2 *
           (1.0 + s / 3.0 + s2 / 12.0 + s2 * s / 60.0 + s2 * s2 / 360.0);
  }
  return std::expm1(s) - s;
}

void require_nonnegative(double t, const char* who) {
  if (!(t >= 0.0))
    throw std::domain_error(std::string(who) + ": argument must be >= 0");
}

}  // namespace

const char* to_string(FKind k) {
  switch (k) {
    case FKind::Power: return "power";
    case FKind::Exp: return "exp";
    case FKind::Custom: return "custom";
  }
  return "?";
}

Nonlinearity Nonlinearity::power(double q) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw std::invalid_argument("Nonlinearity::power: q must be positive");
  Nonlinearity nl;
  nl.kind_ = FKind::Power;
  nl.q_ = q;
  return nl;
}

Nonlinearity Nonlinearity::exponential() {
  Nonlinearity nl;
  nl.kind_ = FKind::Exp;
  return nl;
}

Nonlinearity Nonlinearity::custom(std::vector<double> t, std::vector<double> f) {
  if (t.size() != f.size())
    throw std::invalid_argument("custom table: t and f lengths differ");
  if (t.size() < 3)
    throw std::invalid_argument(
        "custom table: need at least 3 rows to define a tail slope");
  if (t.front() != 0.0)
    throw std::invalid_argument("custom table: t must start at 0");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(f[i]))
      throw std::invalid_argument("custom table: non-finite entry");
    if (i > 0 && !(t[i] > t[i - 1]))
      throw std::invalid_argument("custom table: t must be strictly increasing");
    if (f[i] < 0.0)
      throw std::invalid_argument("custom table: f must be nonnegative");
    if (i > 0 && f[i] < f[i - 1])
      throw std::invalid_argument("custom table: f must be nondecreasing");
    if (i > 0 && !(f[i] > 0.0))
      throw std::invalid_argument("custom table: f must be positive for t > 0");
  }

  Nonlinearity nl;
  nl.kind_ = FKind::Custom;
  nl.t_ = std::move(t);
  nl.fv_ = std::move(f);

  const std::size_t n = nl.t_.size();
  nl.Fv_.assign(n, 0.0);
  nl.FFv_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dt = nl.t_[i + 1] - nl.t_[i];
    const double slope = (nl.fv_[i + 1] - nl.fv_[i]) / dt;
    nl.Fv_[i + 1] = nl.Fv_[i] + dt * 0.5 * (nl.fv_[i] + nl.fv_[i + 1]);
    nl.FFv_[i + 1] = nl.FFv_[i] + nl.Fv_[i] * dt + 0.5 * nl.fv_[i] * dt * dt +
                     slope * dt * dt * dt / 6.0;
  }
  nl.tail_slope_ = std::log(nl.fv_[n - 1] / nl.fv_[n - 2]) /
                   std::log(nl.t_[n - 1] / nl.t_[n - 2]);
  return nl;
}

Nonlinearity Nonlinearity::custom_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open nonlinearity file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument(path + ": empty file");
  {
    // The first row must be a header, not data.
    std::istringstream probe(line);
    double x;
    if (probe >> x)
      throw std::invalid_argument(path + ": missing header row (expected 't,f')");
  }
  std::vector<double> t, f;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (!(row >> a >> b))
      throw std::invalid_argument(path + ": bad row at line " +
                                  std::to_string(lineno));
    std::string rest;
    if (row >> rest)
      throw std::invalid_argument(path + ": expected two columns at line " +
                                  std::to_string(lineno));
    t.push_back(a);
    f.push_back(b);
  }
  return custom(std::move(t), std::move(f));
}

double Nonlinearity::power_exponent() const {
  if (kind_ != FKind::Power)
    throw std::invalid_argument("power_exponent: not a power nonlinearity");
  return q_;
}

double Nonlinearity::f(double t) const {
  require_nonnegative(t, "f");
  switch (kind_) {
    case FKind::Power: return std::pow(t, q_);
    case FKind::Exp: return std::exp(t);
    case FKind::Custom: return custom_f(t);
  }
  return 0.0;
}

double Nonlinearity::custom_f(double t) const {
  const double T = t_.back();
  if (t >= T) {
    if (t == T) return fv_.back();
    return fv_.back() * std::pow(t / T, tail_slope_);
  }
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = std::size_t(it - t_.begin()) - 1;
  const double w = (t - t_[i]) / (t_[i + 1] - t_[i]);
  return fv_[i] + w * (fv_[i + 1] - fv_[i]);
}

double Nonlinearity::F(double s) const {
  require_nonnegative(s, "F");
  switch (kind_) {
    case FKind::Power: return std::pow(s, q_ + 1.0) / (q_ + 1.0);
    case FKind::Exp: return std::expm1(s);
    case FKind::Custom: return custom_F(s);
  }
  return 0.0;
}

double Nonlinearity::custom_F(double s) const {
  const double T = t_.back();
  if (s > T) {
    const double k1 = tail_slope_ + 1.0;
    return Fv_.back() +
           fv_.back() * T / k1 * (std::pow(s / T, k1) - 1.0);
  }
  const auto it = std::upper_bound(t_.begin(), t_.end(), s);
  const std::size_t i = std::min(std::size_t(it - t_.begin()) - 1, t_.size() - 2);
  const double d = s - t_[i];
  const double slope = (fv_[i + 1] - fv_[i]) / (t_[i + 1] - t_[i]);
  return Fv_[i] + fv_[i] * d + 0.5 * slope * d * d;
}

double Nonlinearity::FF(double s) const {
  require_nonnegative(s, "FF");
  switch (kind_) {
    case FKind::Power:
      return std::pow(s, q_ + 2.0) / ((q_ + 1.0) * (q_ + 2.0));
    case FKind::Exp: return expm1m(s);
    case FKind::Custom: return custom_FF(s);
  }
  return 0.0;
}

double Nonlinearity::custom_FF(double s) const {
  const double T = t_.back();
  if (s > T) {
    const double k1 = tail_slope_ + 1.0;
    const double k2 = tail_slope_ + 2.0;
    const double tail =
        fv_.back() * T / k1 *
        (T * (std::pow(s / T, k2) - 1.0) / k2 - (s - T));
    return FFv_.back() + Fv_.back() * (s - T) + tail;
  }
  const auto it = std::upper_bound(t_.begin(), t_.end(), s);
  const std::size_t i = std::min(std::size_t(it - t_.begin()) - 1, t_.size() - 2);
  const double d = s - t_[i];
  const double slope = (fv_[i + 1] - fv_[i]) / (t_[i + 1] - t_[i]);
  return FFv_[i] + Fv_[i] * d + 0.5 * fv_[i] * d * d + slope * d * d * d / 6.0;
}

double Nonlinearity::log_FF(double s) const {
  require_nonnegative(s, "log_FF");
  if (s == 0.0) return -std::numeric_limits<double>::infinity();
  switch (kind_) {
    case FKind::Power:
      return (q_ + 2.0) * std::log(s) - std::log((q_ + 1.0) * (q_ + 2.0));
    case FKind::Exp:
      if (s > 36.0) return s + std::log1p(-(1.0 + s) * std::exp(-s));
      return std::log(expm1m(s));
    case FKind::Custom: {
      const double T = t_.back();
      const double k2 = tail_slope_ + 2.0;
      if (s > T && k2 * std::log(s / T) > kLogSafe) {
        // Deep in the extrapolated regime FF is dominated by the power tail.
        return std::log(fv_.back()) + 2.0 * std::log(T) -
               std::log((tail_slope_ + 1.0) * k2) + k2 * std::log(s / T);
      }
      return std::log(custom_FF(s));
    }
  }
  return 0.0;
}

double Nonlinearity::log_sqrt_f_integral(double s) const {
  require_nonnegative(s, "log_sqrt_f_integral");
  if (s == 0.0) return -std::numeric_limits<double>::infinity();
  switch (kind_) {
    case FKind::Power:
      return std::log(2.0 / (q_ + 2.0)) + 0.5 * (q_ + 2.0) * std::log(s);
    case FKind::Exp:
      if (s > 72.0) return std::log(2.0) + 0.5 * s + std::log1p(-std::exp(-0.5 * s));
      return std::log(2.0 * std::expm1(0.5 * s));
    case FKind::Custom: {
      const double T = t_.back();
      const double k1 = 0.5 * tail_slope_ + 1.0;
      if (s > T && k1 * std::log(s / T) > kLogSafe) {
        return 0.5 * std::log(fv_.back()) + std::log(T / k1) +
               k1 * std::log(s / T);
      }
      return std::log(sqrt_f_integral(s));
    }
  }
  return 0.0;
}

double Nonlinearity::sqrt_f_integral(double s) const {
  require_nonnegative(s, "sqrt_f_integral");
  if (s == 0.0) return 0.0;
  // Log-magnitude estimate; for Custom a closed bound is used instead of
  // log_sqrt_f_integral, which defers to this function.
  double lest;
  if (kind_ == FKind::Custom) {
    const double T = t_.back();
    if (s <= T) {
      lest = std::log(s) + 0.5 * std::log(custom_f(s));
    } else {
      const double k1 = 0.5 * tail_slope_ + 1.0;
      lest = 0.5 * std::log(fv_.back()) + std::log(T / k1) +
             k1 * std::log(s / T);
    }
  } else {
    lest = log_sqrt_f_integral(s);
  }
  if (lest > 345.0)  // value beyond ~1e150: quadrature of f would overflow
    return std::exp(std::min(lest, std::log(kClamp)));
  // Absolute per-panel tolerance 1e-12, scaled up when the integral itself is
  // large so the subdivision terminates.
  const double tol = 1e-12 * std::max(1.0, std::exp(lest));
  if (kind_ == FKind::Custom && s > t_.back()) {
    const double T = t_.back();
    const double head =
        adaptive_simpson([this](double t) { return std::sqrt(custom_f(t)); },
                         0.0, T, tol);
    const double k1 = 0.5 * tail_slope_ + 1.0;
    const double tail =
        std::sqrt(fv_.back()) * T / k1 * (std::pow(s / T, k1) - 1.0);
    return head + tail;
  }
  return adaptive_simpson([this](double t) { return std::sqrt(f(t)); }, 0.0, s,
                          tol);
}

GapValues Nonlinearity::convexity_gap(double s) const {
  require_nonnegative(s, "convexity_gap");
  if (s == 0.0) return {0.0, 0.0};
  const double lq = log_sqrt_f_integral(s);
  double l2;
  if (lq <= 345.0) {
    l2 = 2.0 * std::log(sqrt_f_integral(s));  // quadrature route
  } else {
    l2 = 2.0 * lq;
  }
  const double l_2ff = std::log(2.0) + log_FF(s);
  const double l_ff2s = log_FF(2.0 * s);
  return {exp_diff(l_2ff, l2), exp_diff(l_ff2s, l2)};
}

double Nonlinearity::table_end() const {
  if (kind_ != FKind::Custom) return std::numeric_limits<double>::infinity();
  return t_.back();
}

double Nonlinearity::tail_loglog_slope() const {
  switch (kind_) {
    case FKind::Power: return q_;
    case FKind::Exp: return std::numeric_limits<double>::infinity();
    case FKind::Custom: return tail_slope_;
  }
  return 0.0;
}

}  // namespace radial
