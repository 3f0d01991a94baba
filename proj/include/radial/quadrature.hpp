#pragma once

#include <cmath>

namespace radial {

namespace detail {

template <typename F>
double simpson_rec(F& f, double a, double fa, double b, double fb, double m,
                   double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive composite Simpson on [a, b] with per-panel absolute tolerance.
// The tolerance is halved on each subdivision so the accepted-panel error
// estimates sum to roughly `tol` over the whole interval.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol,
                        int max_depth = 48) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace radial
