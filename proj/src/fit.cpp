#include "radial/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radial {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need at least two points");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  LinearFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    out.sse += r * r;
  }
  return out;
}

LinearFit linear_fit_fixed_slope(std::span<const double> x,
                                 std::span<const double> y, double slope) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("linear_fit_fixed_slope: empty input");
  const std::size_t n = x.size();
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += y[i] - slope * x[i];
  LinearFit out;
  out.slope = slope;
  out.intercept = acc / double(n);
  out.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (out.intercept + slope * x[i]);
    out.sse += r * r;
  }
  return out;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("log_spaced: need 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(llo + (lhi - llo) * double(i) / double(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty input");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
  return 0.5 * (v[mid - 1] + hi);
}

}  // namespace radial
