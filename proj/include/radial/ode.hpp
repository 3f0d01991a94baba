#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace radial {

struct OdeControls {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_init = 0.0;       // 0: pick from the interval
  double h_min_rel = 1e-14;  // underflow threshold relative to |t|
  long max_steps = 20'000'000;
};

enum class OdeStatus {
  ReachedEnd,    // integrated through t_end
  ObserverStop,  // the observer asked to stop
  StepUnderflow,
  NonFinite,
  MaxSteps,
};

// Explicit Dormand-Prince 5(4) pair with FSAL and a PI step-size controller
// (safety 0.9, beta 0.04, step-change factors in [0.1, 5]).
//
// The observer is called after every accepted step as
//     observer(t, y, h_used) -> bool
// and returns true to stop the integration.  The initial state is not
// reported; callers record it themselves.
template <std::size_t N, typename Rhs, typename Observer>
OdeStatus integrate_dopri5(Rhs&& rhs, double t0, double t_end,
                           std::array<double, N> y, const OdeControls& c,
                           Observer&& observer) {
  using V = std::array<double, N>;

  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  constexpr double safety = 0.9, beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  constexpr double fac_lo = 0.2, fac_hi = 10.0;  // h_new/h in [1/fac_hi, 1/fac_lo]

  double t = t0;
  double h = c.h_init > 0 ? c.h_init : (t_end - t0) * 1e-6;
  double facold = 1e-4;

  V k1 = rhs(t, y);
  V k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, ynew{};

  auto finite = [](const V& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!finite(k1) || !finite(y)) return OdeStatus::NonFinite;

  for (long step = 0; step < c.max_steps;) {
    if (t + h >= t_end) h = t_end - t;
    if (!(h > 0)) h = std::abs(t) * c.h_min_rel;
    if (h < c.h_min_rel * std::max({std::abs(t), std::abs(t0), 1e-300}))
      return OdeStatus::StepUnderflow;

    bool bad = false;
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    k2 = rhs(t + c2 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] =
          y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    k6 = rhs(t + h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    k7 = rhs(t + h, ynew);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (!std::isfinite(ynew[i]) || !std::isfinite(k7[i])) {
        bad = true;
        break;
      }
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc =
          c.atol + c.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / double(N));
    ++step;

    if (bad || !std::isfinite(err)) {
      h *= 0.25;
      continue;
    }

    if (err <= 1.0) {
      const double h_used = h;
      double fac = std::pow(err, expo1) / std::pow(facold, beta);
      fac = std::max(1.0 / fac_hi, std::min(1.0 / fac_lo, fac / safety));
      facold = std::max(err, 1e-4);
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      h = h_used / fac;
      if (observer(t, y, h_used)) return OdeStatus::ObserverStop;
      if (t >= t_end) return OdeStatus::ReachedEnd;
    } else {
      const double fac =
          std::min(1.0 / fac_lo, std::pow(err, expo1) / safety);
      h /= fac;
    }
  }
  return OdeStatus::MaxSteps;
}

}  // namespace radial
