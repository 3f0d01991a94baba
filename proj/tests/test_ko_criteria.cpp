#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "radial/ko_criteria.hpp"

using namespace radial;

namespace {

Nonlinearity power_table(double q, double t_end = 1e7, int n = 400) {
  // Log-spaced samples of f(t) = t^q with a leading zero node.
  std::vector<double> t{0.0}, f{0.0};
  for (int i = 0; i <= n; ++i) {
    const double x = 1e-3 * std::pow(t_end / 1e-3, double(i) / n);
    t.push_back(x);
    f.push_back(std::pow(x, q));
  }
  return Nonlinearity::custom(t, f);
}

}  // namespace

TEST_CASE("closed-form verdicts for power nonlinearities") {
  // q = 3, p = 4: both integrals converge (q above 2(1+1/p) = 2.5)
  const KOReport r43 = ko_report(Nonlinearity::power(3.0), 4.0);
  CHECK(r43.plain == ConvergenceVerdict::Convergent);
  CHECK(r43.weighted == ConvergenceVerdict::Convergent);
  CHECK(r43.method == KOMethod::ClosedForm);
  CHECK(r43.tail_exponent == doctest::Approx((3.0 + 2.0) * 4.0 / 9.0));

  // q = 3, p = 2: the weighted test sits exactly on q = 2(1+1/p)
  const KOReport r23 = ko_report(Nonlinearity::power(3.0), 2.0);
  CHECK(r23.plain == ConvergenceVerdict::Convergent);
  CHECK(r23.weighted == ConvergenceVerdict::Divergent);

  // pq = 1 exactly: plain critical, divergent
  const KOReport r11 = ko_report(Nonlinearity::power(1.0), 1.0);
  CHECK(r11.plain == ConvergenceVerdict::Divergent);

  // pq < 1
  CHECK(ko_plain(Nonlinearity::power(1.0), 0.5) ==
        ConvergenceVerdict::Divergent);
}

TEST_CASE("exponential growth converges in both tests for every p") {
  for (double p : {0.1, 0.5, 1.0, 2.0, 7.0}) {
    const KOReport r = ko_report(Nonlinearity::exponential(), p);
    CHECK(r.plain == ConvergenceVerdict::Convergent);
    CHECK(r.weighted == ConvergenceVerdict::Convergent);
    CHECK(std::isinf(r.tail_exponent));
    CHECK(classify_ball(Nonlinearity::exponential(), p).verdict ==
          BallVerdict::VBlowsUp);
  }
}

TEST_CASE("ball trichotomy and region letters") {
  CHECK(classify_ball(Nonlinearity::power(3.0), 4.0).verdict ==
        BallVerdict::VBlowsUp);
  CHECK(classify_ball(Nonlinearity::power(3.0), 2.0).verdict ==
        BallVerdict::BothBlowUp);
  CHECK(classify_ball(Nonlinearity::power(1.0), 0.5).verdict ==
        BallVerdict::Bounded);
  CHECK(region_letter(BallVerdict::Bounded) == 'A');
  CHECK(region_letter(BallVerdict::VBlowsUp) == 'B');
  CHECK(region_letter(BallVerdict::BothBlowUp) == 'C');
  CHECK(region_letter(BallVerdict::GlobalOnRN) == 'G');
  CHECK(region_letter(BallVerdict::Indeterminate) == '?');
}

TEST_CASE("region partition follows the two closed-form boundaries") {
  // Every grid point lands in exactly one region, matching q = 1/p and
  // q = 2(1 + 1/p).
  for (int i = 1; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double p = 5.0 * i / 20.0;
      const double q = 1.0 + 7.0 * j / 20.0;
      const BallVerdict v = classify_ball(Nonlinearity::power(q), p).verdict;
      BallVerdict expect;
      if (p * q <= 1.0)
        expect = BallVerdict::Bounded;
      else if (q > 2.0 * (1.0 + 1.0 / p))
        expect = BallVerdict::VBlowsUp;
      else
        expect = BallVerdict::BothBlowUp;
      CHECK(v == expect);
    }
}

TEST_CASE("weighted convergence implies plain convergence") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ps(0.05, 6.0), qs(0.05, 9.0);
  for (int i = 0; i < 200; ++i) {
    const KOReport r = ko_report(Nonlinearity::power(qs(rng)), ps(rng));
    if (r.weighted == ConvergenceVerdict::Convergent)
      CHECK(r.plain == ConvergenceVerdict::Convergent);
  }
}

TEST_CASE("whole-space classification") {
  // Global solutions exist exactly when the plain integral diverges.
  CHECK(classify_whole_space(Nonlinearity::power(1.0), 0.5).verdict ==
        BallVerdict::GlobalOnRN);
  CHECK(classify_whole_space(Nonlinearity::power(1.0), 1.0).verdict ==
        BallVerdict::GlobalOnRN);
  const Classification c = classify_whole_space(Nonlinearity::power(3.0), 2.0);
  CHECK(c.verdict == BallVerdict::BothBlowUp);
  CHECK(c.evidence.plain == ConvergenceVerdict::Convergent);
  CHECK(classify_whole_space(Nonlinearity::exponential(), 1.0).verdict ==
        BallVerdict::VBlowsUp);
}

TEST_CASE("fourth-order problem through p = 1") {
  CHECK(classify_biharmonic(Nonlinearity::power(3.0)) ==
        BiharmonicVerdict::BlowUpExists);
  CHECK(classify_biharmonic(Nonlinearity::power(5.0)) ==
        BiharmonicVerdict::NoBlowUp);
  CHECK(classify_biharmonic(Nonlinearity::power(0.5)) ==
        BiharmonicVerdict::NoBlowUp);
  // Boundary of the existence range: q = 4 gives the critical weighted case
  CHECK(classify_biharmonic(Nonlinearity::power(4.0)) ==
        BiharmonicVerdict::BlowUpExists);
  CHECK(classify_biharmonic(Nonlinearity::exponential()) ==
        BiharmonicVerdict::NoBlowUp);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(ko_report(Nonlinearity::power(2.0), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ko_report(Nonlinearity::power(2.0), -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(classify_ball(Nonlinearity::power(2.0), 0.0),
                  std::invalid_argument);
}

TEST_CASE("numeric tail exponent matches the closed form on tables") {
  for (double q : {1.5, 3.0, 5.0}) {
    for (double p : {0.5, 2.0, 4.0}) {
      const TailFit fit = tail_exponent_ff_route(power_table(q), p);
      REQUIRE(fit.usable);
      const double sigma = (q + 2.0) * p / (2.0 * p + 1.0);
      CHECK(fit.sigma == doctest::Approx(sigma).epsilon(0.02));
    }
  }
}

TEST_CASE("both integrand routes give the same verdicts") {
  // The substitution bounds make (int_0^s F)^{p/(2p+1)} and
  // (int_0^s sqrt f)^{2p/(2p+1)} equivalent for the convergence question.
  std::vector<Nonlinearity> nls;
  for (double q : {1.0, 2.0, 3.0, 6.0}) nls.push_back(power_table(q));
  nls.push_back(Nonlinearity::exponential());
  nls.push_back(Nonlinearity::power(2.5));
  for (const Nonlinearity& nl : nls)
    for (double p : {0.4, 1.0, 3.0}) {
      const TailFit a = tail_exponent_ff_route(nl, p);
      const TailFit b = tail_exponent_sqrtf_route(nl, p);
      REQUIRE(a.usable);
      REQUIRE(b.usable);
      CHECK(plain_verdict_from_sigma(a) == plain_verdict_from_sigma(b));
      CHECK(weighted_verdict_from_sigma(a) == weighted_verdict_from_sigma(b));
    }
}

TEST_CASE("custom tables classify like their generating power law") {
  // Away from region boundaries the numeric route must agree with the
  // closed form.
  struct Case {
    double q, p;
  };
  for (const Case c : {Case{3.0, 4.0}, Case{3.0, 1.5}, Case{1.0, 0.5},
                       Case{5.0, 0.1}, Case{1.2, 4.0}}) {
    const Classification numeric = classify_ball(power_table(c.q), c.p);
    const Classification closed =
        classify_ball(Nonlinearity::power(c.q), c.p);
    CHECK(numeric.evidence.method == KOMethod::TailExponent);
    CHECK(closed.evidence.method == KOMethod::ClosedForm);
    CHECK(numeric.verdict == closed.verdict);
  }

  // Exactly on the critical line q = 2(1+1/p) the fitted exponent sits in
  // the indeterminacy band: the numeric route must refuse to decide rather
  // than guess, while the closed form resolves the equality.
  const Classification border = classify_ball(power_table(3.0), 2.0);
  CHECK(border.verdict == BallVerdict::Indeterminate);
  CHECK(classify_ball(Nonlinearity::power(3.0), 2.0).verdict ==
        BallVerdict::BothBlowUp);
}
