#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace radial {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = 0.0;  // sum of squared residuals
  std::size_t n = 0;
};

// Ordinary least squares y ~ intercept + slope * x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Least squares with the slope pinned; only the intercept is free.
LinearFit linear_fit_fixed_slope(std::span<const double> x,
                                 std::span<const double> y, double slope);

// Golden-section search for the minimum of a unimodal function on [lo, hi].
template <typename F>
double golden_min(F&& f, double lo, double hi, int iters = 120) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && b - a > 0; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// n points geometrically spaced over [lo, hi], endpoints included.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

double median(std::vector<double> v);

}  // namespace radial
