#pragma once

#include <string>
#include <vector>

namespace radial {

enum class FKind { Power, Exp, Custom };

const char* to_string(FKind k);

// Convexity gap functions behind the integral growth tests:
//   H(s) = 2*int_0^s F  - (int_0^s sqrt(f))^2   (<= 0 for nondecreasing f)
//   h(s) = int_0^{2s} F - (int_0^s sqrt(f))^2   (>= 0 for nondecreasing f)
// Values whose magnitude overflows double are clamped to +-1e300 with the
// correct sign, decided in log space.
struct GapValues {
  double H;
  double h;
};

// A nondecreasing nonlinearity f : [0, inf) -> [0, inf) with f(t) > 0 for
// t > 0, together with its cumulative integrals F(s) = int_0^s f and
// FF(s) = int_0^s F.  Immutable after construction; safe to share across
// threads.
class Nonlinearity {
 public:
  // f(t) = t^q, q > 0.
  static Nonlinearity power(double q);
  // f(t) = exp(t).
  static Nonlinearity exponential();
  // Tabulated f: nodes t[0] = 0 < t[1] < ..., f nondecreasing, f[i] > 0 for
  // i >= 1.  Values between nodes are linearly interpolated (monotone
  // preserving); beyond the last node f follows the final log-log slope.
  static Nonlinearity custom(std::vector<double> t, std::vector<double> f);
  // Two-column CSV "t,f" with a header row, t strictly increasing from 0.
  static Nonlinearity custom_from_csv(const std::string& path);

  FKind kind() const noexcept { return kind_; }
  // Exponent q of a Power nonlinearity; throws for other kinds.
  double power_exponent() const;

  double f(double t) const;   // throws std::domain_error for t < 0
  double F(double s) const;   // int_0^s f
  double FF(double s) const;  // int_0^s F

  // ln FF(s), computed stably for arguments where FF overflows double.
  double log_FF(double s) const;

  // int_0^s sqrt(f(t)) dt via adaptive Simpson (per-panel tolerance
  // 1e-12 relative to the running magnitude).  For arguments where the
  // integrand overflows double the analytic log form is used instead.
  double sqrt_f_integral(double s) const;
  // ln int_0^s sqrt(f), always evaluated in a stable form.
  double log_sqrt_f_integral(double s) const;

  GapValues convexity_gap(double s) const;

  // Tail metadata used by the numeric convergence tests for Custom tables.
  // table_end() is the last tabulated abscissa (infinity for closed forms);
  // tail_loglog_slope() is d ln f / d ln t on the final table segment.
  double table_end() const;
  double tail_loglog_slope() const;

 private:
  Nonlinearity() = default;

  double custom_f(double t) const;
  double custom_F(double s) const;
  double custom_FF(double s) const;

  FKind kind_ = FKind::Power;
  double q_ = 1.0;

  // Custom tables: nodes with cumulative integrals of the interpolant.
  std::vector<double> t_;
  std::vector<double> fv_;
  std::vector<double> Fv_;   // F at nodes (exact for the interpolant)
  std::vector<double> FFv_;  // FF at nodes
  double tail_slope_ = 0.0;  // log-log slope of the final segment
};

}  // namespace radial
