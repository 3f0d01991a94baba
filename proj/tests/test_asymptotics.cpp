#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "radial/asymptotics.hpp"
#include "radial/radial_ode.hpp"

using namespace radial;

namespace {

Params whole_space_params(double p, double q, int N, double m) {
  Params par;
  par.p = p;
  par.nl = Nonlinearity::power(q);
  par.N = N;
  par.m = m;
  par.domain = WholeSpaceDomain{};
  return par;
}

const RateCheck& find_check(const std::vector<RateCheck>& checks,
                            const std::string& name) {
  for (const RateCheck& c : checks)
    if (c.quantity == name) return c;
  REQUIRE_MESSAGE(false, "missing check ", name);
  static RateCheck dummy;
  return dummy;
}

}  // namespace

TEST_CASE("blow-up exponents and constants satisfy the defining relations") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> up(0.1, 5.0), uq(0.1, 8.0);
  int tested = 0;
  while (tested < 50) {
    const double p = up(rng), q = uq(rng);
    if (p * q <= 1.05) continue;
    ++tested;
    const BallRates r = ball_rates(p, q);
    // exponent ladder
    CHECK(r.alpha + 1.0 == doctest::Approx(p * r.beta).epsilon(1e-12));
    CHECK(r.beta + 1.0 == doctest::Approx(r.gamma).epsilon(1e-12));
    CHECK(r.gamma + 1.0 == doctest::Approx(q * r.alpha).epsilon(1e-12));
    // constant ladder: w' = v^p, v' = psi, psi' = w^q on the pure rates
    CHECK(r.alpha * r.A == doctest::Approx(std::pow(r.B, p)).epsilon(1e-12));
    CHECK(r.beta * r.B == doctest::Approx(r.C).epsilon(1e-12));
    CHECK(r.gamma * r.C == doctest::Approx(std::pow(r.A, q)).epsilon(1e-12));
    CHECK(r.A > 0.0);
    CHECK(r.B > 0.0);
    CHECK(r.C > 0.0);
  }
}

TEST_CASE("pinned rate constants") {
  SUBCASE("p=2 q=3: the logarithmic border") {
    const BallRates r = ball_rates(2, 3);
    CHECK(r.alpha == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.beta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.gamma == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r.B == doctest::Approx(1.148698354997035).epsilon(1e-14));
    CHECK(r.C == doctest::Approx(r.B).epsilon(1e-14));
    CHECK(r.A == doctest::Approx(1.3195079107728942).epsilon(1e-14));
    CHECK(r.u_case == UCase::LogRate);
    CHECK(r.u_rate_constant == doctest::Approx(r.A).epsilon(1e-14));
    CHECK(r.note.empty());
  }
  SUBCASE("p=4 q=3: u reaches a finite boundary value") {
    const BallRates r = ball_rates(4, 3);
    CHECK(r.alpha == doctest::Approx(9.0 / 11.0).epsilon(1e-14));
    CHECK(r.A == doctest::Approx(0.8448).epsilon(5e-4));
    CHECK(r.u_case == UCase::FiniteLimit);
    // u(R) - u(r) ~ [A/(1-alpha)] (R-r)^{1-alpha}
    CHECK(r.u_rate_constant ==
          doctest::Approx(r.A * 11.0 / 2.0).epsilon(1e-14));
    CHECK(r.u_rate_constant == doctest::Approx(4.646).epsilon(1e-3));
  }
  SUBCASE("p=2 q=2: u blows up at a power rate") {
    const BallRates r = ball_rates(2, 2);
    CHECK(r.alpha == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(r.beta == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(r.B == doctest::Approx(std::cbrt(700.0 / 81.0)).epsilon(1e-13));
    CHECK(r.u_case == UCase::PowerRate);
    CHECK(r.u_rate_constant == doctest::Approx(1.5 * r.A).epsilon(1e-14));
    CHECK(r.u_rate_constant == doctest::Approx(3.79).epsilon(2e-3));
  }
  SUBCASE("the u-case boundary sits at q = 2(1 + 1/p)") {
    CHECK(ball_rates(4, 2.5).u_case == UCase::LogRate);
    CHECK(ball_rates(4, 2.51).u_case == UCase::FiniteLimit);
    CHECK(ball_rates(4, 2.49).u_case == UCase::PowerRate);
  }
  SUBCASE("rates outside p, q >= 1 carry a caveat") {
    CHECK_FALSE(ball_rates(0.5, 3).note.empty());
    CHECK_FALSE(ball_rates(3, 0.5).note.empty());
    CHECK(ball_rates(1, 1.2).note.empty());
  }
}

TEST_CASE("rate formulas reject nonpositive or sub-critical input") {
  CHECK_THROWS_AS(ball_rates(0, 2), std::domain_error);
  CHECK_THROWS_AS(ball_rates(2, -1), std::domain_error);
  CHECK_THROWS_AS(ball_rates(1, 1), std::domain_error);
  CHECK_THROWS_AS(ball_rates(0.5, 1.5), std::domain_error);
}

TEST_CASE("measured blow-up rates match theory for p=2 q=3") {
  const RadialSolution sol = integrate(whole_space_params(2, 3, 2, 1));
  REQUIRE(sol.termination == Termination::BlowUp);
  const BallRateReport rep = verify_ball_rates(sol, 2, 3);
  CHECK(rep.R_hat == doctest::Approx(sol.R_max).epsilon(1e-4));
  REQUIRE(rep.checks.size() == 4);
  for (const char* name : {"v", "w", "psi", "u"}) {
    const RateCheck& c = find_check(rep.checks, name);
    CHECK_MESSAGE(c.rel_err < 0.01, name, " rel_err=", c.rel_err);
    CHECK(c.window_lo < c.window_hi);
    CHECK(c.half_window_drift < 0.01);
  }
  CHECK(find_check(rep.checks, "v").theoretical ==
        doctest::Approx(std::pow(2.0, 0.2)).epsilon(1e-14));
  // u follows the log rate; its constant is A
  CHECK(find_check(rep.checks, "u").theoretical ==
        doctest::Approx(1.3195079107728942).epsilon(1e-14));
}

TEST_CASE("rate verification demands a blow-up solution") {
  const RadialSolution ball =
      integrate({2, Nonlinearity::power(3), 2, 1.0, BallDomain{1.0}});
  REQUIRE(ball.termination == Termination::ReachedRadius);
  CHECK_THROWS_AS(verify_ball_rates(ball, 2, 3), std::invalid_argument);

  const RadialSolution sol = integrate(whole_space_params(2, 3, 2, 1));
  CHECK_THROWS_AS(verify_ball_rates(sol, 2, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(verify_ball_rates(sol, 2, 3, -1.0), std::invalid_argument);
}

TEST_CASE("global power-law profile for p=1/2 q=1 N=3") {
  const WholeSpaceRates ws = whole_space_rates(0.5, 1, 3);
  CHECK(ws.Y2 == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(ws.Z2 == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(ws.W2 == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(ws.X_limit == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(ws.u_exponent == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(ws.v_exponent == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(ws.u_const == doctest::Approx(1.0 / 7560.0).epsilon(1e-12));
  CHECK(ws.v_const == doctest::Approx(1.0 / 63504.0).epsilon(1e-12));
  CHECK(exact_u(ws, 1.0) == doctest::Approx(ws.u_const).epsilon(1e-14));
  CHECK(exact_v(ws, 1.0) == doctest::Approx(ws.v_const).epsilon(1e-14));
  CHECK(exact_u(ws, 2.0) ==
        doctest::Approx(ws.u_const * 32.0).epsilon(1e-13));
}

TEST_CASE("closed-form constants without hypothesis checks") {
  // super-critical coupling: exponents negative, constants undefined
  const WholeSpaceRates ws = whole_space_constants(2, 3, 3);
  CHECK(ws.Y2 < 0.0);
  CHECK((std::isnan(ws.u_const) || std::isnan(ws.v_const)));
  CHECK_THROWS_AS(whole_space_constants(0, 1, 3), std::domain_error);
  CHECK_THROWS_AS(whole_space_constants(0.5, 1, 1), std::domain_error);
}

TEST_CASE("hypothesis gates are reported by name") {
  CHECK_THROWS_WITH_AS(whole_space_rates(2, 3, 3),
                       "whole_space_rates: requires q >= 1 > p",
                       std::domain_error);
  CHECK_THROWS_WITH_AS(whole_space_rates(0.5, 0.8, 3),
                       "whole_space_rates: requires q >= 1 > p",
                       std::domain_error);
  CHECK_THROWS_WITH_AS(whole_space_rates(0.9, 1.2, 3),
                       "whole_space_rates: requires pq < 1",
                       std::domain_error);
  CHECK_THROWS_WITH_AS(whole_space_rates(0.3, 3, 3),
                       "whole_space_rates: requires p(q^2-4)/(1-pq) <= 2(N-1)",
                       std::domain_error);
  // same coupling, more dimensions: the divergence condition relaxes
  CHECK_NOTHROW(whole_space_rates(0.3, 3, 9));
}

TEST_CASE("exact profiles satisfy the equations to finite-difference depth") {
  for (auto [p, q, N] : {std::tuple{0.5, 1.0, 3}, {0.3, 2.0, 4},
                         {0.2, 3.0, 5}}) {
    for (double r : {1.0, 10.0, 100.0}) {
      const double res = exact_solution_residual(p, q, N, r);
      CHECK_MESSAGE(res <= 1e-6, "p=", p, " q=", q, " N=", N, " r=", r,
                    " residual=", res);
    }
  }
  // the vector form skips nonpositive radii
  const double direct = exact_solution_residual(0.5, 1, 3, {1.0});
  const double mixed = exact_solution_residual(0.5, 1, 3, {-2.0, 0.0, 1.0});
  CHECK(mixed == doctest::Approx(direct).epsilon(1e-15));

  CHECK_THROWS_AS(exact_solution_residual(2, 3, 3, 1.0), std::domain_error);
  CHECK_THROWS_AS(exact_solution_residual(0.5, 1, 3, 0.0), std::domain_error);
  CHECK_THROWS_AS(exact_solution_residual(0.5, 1, 3, -1.0),
                  std::domain_error);
}

TEST_CASE("integrated global solution approaches the power profile") {
  StepControls sc;
  sc.r_horizon = 1e6;
  const RadialSolution sol = integrate(whole_space_params(0.5, 1, 3, 1), sc);
  REQUIRE(sol.termination == Termination::GlobalHorizon);
  const WholeSpaceReport rep = verify_whole_space(sol, 0.5, 1, 3);
  REQUIRE(rep.checks.size() == 8);
  for (const char* name :
       {"u_exponent", "v_exponent", "u_const", "v_const", "X", "Y", "Z", "W"}) {
    const RateCheck& c = find_check(rep.checks, name);
    CHECK_MESSAGE(c.rel_err < 1e-3, name, " rel_err=", c.rel_err);
    CHECK(c.half_window_drift < 1e-3);
  }
  CHECK(find_check(rep.checks, "X").theoretical == doctest::Approx(5.0));
  CHECK(find_check(rep.checks, "Y").theoretical == doctest::Approx(6.0));
  CHECK(find_check(rep.checks, "Z").theoretical == doctest::Approx(6.0));
  CHECK(find_check(rep.checks, "W").theoretical == doctest::Approx(7.0));

  // wrong terminations are rejected up front
  const RadialSolution bu = integrate(whole_space_params(2, 3, 2, 1));
  CHECK_THROWS_AS(verify_whole_space(bu, 2, 3, 2), std::invalid_argument);
}
