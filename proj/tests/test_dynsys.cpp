#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "radial/dynsys.hpp"

using namespace radial;

namespace {

const Equilibrium& at_point(const std::vector<Equilibrium>& eqs, Vec3 p,
                            double tol = 1e-6) {
  for (const Equilibrium& e : eqs) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(e.point[i] - p[i]));
    if (d <= tol) return e;
  }
  REQUIRE_MESSAGE(false, "no equilibrium near (", p[0], ",", p[1], ",", p[2],
                  ")");
  static Equilibrium dummy;
  return dummy;
}

double char_poly_at(const Equilibrium& e, double x) {
  return ((x + e.char_poly[0]) * x + e.char_poly[1]) * x + e.char_poly[2];
}

bool has_eigenvalue(const Equilibrium& e, std::complex<double> lambda,
                    double tol) {
  for (const auto& ev : e.eigenvalues)
    if (std::abs(ev - lambda) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("cubic roots") {
  SUBCASE("distinct real roots come back sorted") {
    // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
    const auto r = cubic_roots(-6, 11, -6);
    CHECK(std::abs(r[0] - 1.0) < 1e-12);
    CHECK(std::abs(r[1] - 2.0) < 1e-12);
    CHECK(std::abs(r[2] - 3.0) < 1e-12);
  }
  SUBCASE("conjugate pair") {
    // x^3 + x = x (x - i)(x + i)
    const auto r = cubic_roots(0, 1, 0);
    CHECK(std::abs(r[0] - std::complex<double>(0, -1)) < 1e-12);
    CHECK(std::abs(r[1]) < 1e-12);
    CHECK(std::abs(r[2] - std::complex<double>(0, 1)) < 1e-12);
  }
  SUBCASE("triple root") {
    // (x+1)^3
    const auto r = cubic_roots(3, 3, 1);
    for (const auto& z : r) CHECK(std::abs(z + 1.0) < 1e-5);
  }
  SUBCASE("random cubics are polished to small residuals") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 200; ++k) {
      const double c2 = u(rng), c1 = u(rng), c0 = u(rng);
      const auto r = cubic_roots(c2, c1, c0);
      for (const auto& z : r) {
        const std::complex<double> res = ((z + c2) * z + c1) * z + c0;
        const double scale =
            std::max({1.0, std::abs(c2), std::abs(c1), std::abs(c0)});
        CHECK(std::abs(res) < 1e-9 * scale * std::max(1.0, std::norm(z)));
      }
      // Vieta: sum of roots = -c2
      const auto sum = r[0] + r[1] + r[2];
      CHECK(std::abs(sum + c2) < 1e-8 * std::max(1.0, std::abs(c2)));
    }
  }
}

TEST_CASE("matrix eigenvalues via the characteristic cubic") {
  const Mat3 M{{{2, 1, 0}, {0, 3, 1}, {0, 0, 4}}};
  const auto ev = eigenvalues3(M);
  CHECK(std::abs(ev[0] - 2.0) < 1e-10);
  CHECK(std::abs(ev[1] - 3.0) < 1e-10);
  CHECK(std::abs(ev[2] - 4.0) < 1e-10);
}

TEST_CASE("ball field structure") {
  const BallField f(2, 3);
  CHECK(f.alpha == doctest::Approx(1.0));
  CHECK(f.beta == doctest::Approx(1.0));
  CHECK(f.gamma == doctest::Approx(2.0));

  // the three equilibria kill the field
  for (double s : {0.0, 1.0, -1.0}) {
    const Vec3 g = f(Vec3{s, s, s});
    for (double gi : g) CHECK(std::abs(gi) < 1e-14);
  }

  // cooperative: off-diagonal Jacobian entries nonnegative
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const Mat3 J = f.jacobian(Vec3{u(rng), u(rng), u(rng)});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(J[i][j] >= 0.0);
  }

  CHECK_THROWS_AS(BallField(0.5, 3), std::domain_error);
  CHECK_THROWS_AS(BallField(2, 0.9), std::domain_error);
  CHECK_THROWS_AS(BallField(1, 1), std::domain_error);  // pq = 1
}

TEST_CASE("ball equilibria for p=2 q=3") {
  const BallField f(2, 3);
  const auto eqs = equilibria(f);
  REQUIRE(eqs.size() == 3);

  const Equilibrium& origin = at_point(eqs, {0, 0, 0});
  CHECK(origin.stability == StabilityClass::AsymptoticallyStable);
  CHECK(origin.dim_stable == 3);
  // eigenvalues -alpha, -beta, -gamma (a double root splits in the cubic)
  CHECK(has_eigenvalue(origin, {-1, 0}, 1e-6));
  CHECK(has_eigenvalue(origin, {-2, 0}, 1e-6));
  CHECK(origin.residual < 1e-12);

  for (double sign : {1.0, -1.0}) {
    const Equilibrium& e = at_point(eqs, {sign, sign, sign});
    CHECK(e.stability == StabilityClass::Saddle);
    CHECK(e.dim_stable == 2);
    CHECK(e.residual < 1e-12);
    // char poly lambda^3 + 4 lambda^2 + 5 lambda - 10
    CHECK(e.char_poly[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(e.char_poly[1] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(e.char_poly[2] == doctest::Approx(-10.0).epsilon(1e-12));
    // lambda = 1 is always an eigenvalue on the blow-up ray
    CHECK(std::abs(char_poly_at(e, 1.0)) < 1e-12);
    CHECK(has_eigenvalue(e, {1, 0}, 1e-9));
    CHECK(has_eigenvalue(e, {-2.5, 1.9364916731037085}, 1e-9));
    CHECK(has_eigenvalue(e, {-2.5, -1.9364916731037085}, 1e-9));
  }
}

TEST_CASE("unit eigenvalue at the blow-up equilibrium for random couplings") {
  std::mt19937 rng(20240818);
  std::uniform_real_distribution<double> up(1.0, 5.0), uq(1.0, 8.0);
  int tested = 0;
  while (tested < 50) {
    const double p = up(rng), q = uq(rng);
    if (p * q <= 1.02) continue;
    ++tested;
    const BallField f(p, q);
    const auto eqs = equilibria(f);
    const Equilibrium& e = at_point(eqs, {1, 1, 1});
    const double scale = 1.0 + std::abs(e.char_poly[0]) +
                         std::abs(e.char_poly[1]) + std::abs(e.char_poly[2]);
    CHECK(std::abs(char_poly_at(e, 1.0)) < 1e-12 * scale);
    // Vieta against the Jacobian structure at +-1
    const double a = f.alpha, b = f.beta, g = f.gamma;
    CHECK(e.char_poly[0] == doctest::Approx(a + b + g).epsilon(1e-12));
    CHECK(e.char_poly[2] ==
          doctest::Approx(-(p * q - 1.0) * a * b * g).epsilon(1e-12));
    CHECK(e.stability == StabilityClass::Saddle);
    CHECK(e.dim_stable == 2);
  }
}

TEST_CASE("whole-space equilibria") {
  SUBCASE("sub-critical coupling has the interior equilibrium") {
    const WholeSpaceField f(0.5, 1, 3);
    const auto eqs = equilibria(f);
    REQUIRE(eqs.size() == 2);

    const Equilibrium& z1 = at_point(eqs, {0, 3, 4});
    CHECK(z1.stability == StabilityClass::Saddle);
    CHECK(z1.dim_stable == 2);
    CHECK(has_eigenvalue(z1, {3, 0}, 1e-9));
    CHECK(has_eigenvalue(z1, {-3, 0}, 1e-9));
    CHECK(has_eigenvalue(z1, {-4, 0}, 1e-9));

    const Equilibrium& z2 = at_point(eqs, {6, 6, 7});
    CHECK(z2.stability == StabilityClass::AsymptoticallyStable);
    CHECK(z2.dim_stable == 3);
    CHECK(z2.char_poly[0] == doctest::Approx(19.0).epsilon(1e-10));
    CHECK(z2.char_poly[1] == doctest::Approx(120.0).epsilon(1e-10));
    CHECK(z2.char_poly[2] == doctest::Approx(126.0).epsilon(1e-10));
    CHECK(has_eigenvalue(z2, {-1.298850534593718, 0}, 1e-6));
    CHECK(has_eigenvalue(z2, {-8.850574732703141, 4.321594550020924}, 1e-6));
  }
  SUBCASE("super-critical coupling keeps only the boundary equilibrium") {
    const WholeSpaceField f(2, 3, 3);
    const auto eqs = equilibria(f);
    REQUIRE(eqs.size() == 1);
    CHECK(eqs[0].point[0] == doctest::Approx(0.0));
    CHECK(eqs[0].point[1] == doctest::Approx(3.0));
    CHECK(eqs[0].point[2] == doctest::Approx(6.0));
  }
  SUBCASE("cooperative off the Y axis") {
    const WholeSpaceField f(0.5, 1, 3);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.1, 8.0);
    for (int k = 0; k < 200; ++k) {
      const Mat3 J = f.jacobian(Vec3{u(rng), u(rng), u(rng)});
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i != j) CHECK(J[i][j] >= 0.0);
    }
  }
  CHECK_THROWS_AS(WholeSpaceField(0, 1, 3), std::domain_error);
  CHECK_THROWS_AS(WholeSpaceField(0.5, 1, 1), std::domain_error);
}

TEST_CASE("stability certificate for the interior equilibrium") {
  const StabilityTrace tr = check_stability_zeta2(0.5, 1, 3);
  CHECK(tr.Y2 == doctest::Approx(6.0));
  CHECK(tr.Z2 == doctest::Approx(6.0));
  CHECK(tr.W2 == doctest::Approx(7.0));
  CHECK(tr.a == doctest::Approx(19.0));
  CHECK(tr.b == doctest::Approx(120.0));
  CHECK(tr.c == doctest::Approx(252.0));
  CHECK(tr.constant_term == doctest::Approx(126.0));
  CHECK(tr.ab == doctest::Approx(2280.0));
  CHECK(tr.am_gm_lower == doctest::Approx(9.0 * 252.0));
  CHECK(tr.ab > tr.am_gm_lower);
  CHECK(tr.routh_hurwitz);
  CHECK(tr.positive_on_grid);
  CHECK(tr.all_re_negative);

  CHECK_THROWS_AS(check_stability_zeta2(2, 3, 3), std::domain_error);

  // random sub-critical couplings: the certificate always closes
  std::mt19937 rng(20240819);
  std::uniform_real_distribution<double> up(0.02, 0.98), uq(1.0, 8.0);
  std::uniform_int_distribution<int> un(2, 8);
  int tested = 0;
  while (tested < 50) {
    const double p = up(rng), q = uq(rng);
    if (p * q >= 0.98) continue;
    ++tested;
    const StabilityTrace t = check_stability_zeta2(p, q, un(rng));
    CHECK(t.routh_hurwitz);
    CHECK(t.ab >= t.am_gm_lower);
    CHECK(t.all_re_negative);
    CHECK(t.positive_on_grid);
    for (const auto& ev : t.eigenvalues) CHECK(ev.real() < 0.0);
  }
}

TEST_CASE("divergence of the ball field is a negative constant") {
  const BallField f(2, 3);
  const DivergenceReport rep = check_divergence(f);
  CHECK(rep.max_divergence == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(rep.nonpositive);
  CHECK(rep.condition_lhs == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(rep.condition_rhs == 0.0);
  CHECK(rep.condition_holds);

  // any box gives the same constant
  const DivergenceReport wide =
      check_divergence(f, Vec3{-7, -7, -7}, Vec3{9, 9, 9});
  CHECK(wide.max_divergence == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("divergence sign over the invariant box matches the closed form") {
  {
    const WholeSpaceField f(0.5, 1, 3);
    const DivergenceReport rep = check_divergence(f);
    CHECK(rep.nonpositive);
    CHECK(rep.condition_holds);
    CHECK(rep.condition_lhs == doctest::Approx(-3.0));  // p(q^2-4)/(1-pq)
    CHECK(rep.condition_rhs == doctest::Approx(4.0));   // 2(N-1)
    CHECK(rep.max_divergence < 0.0);
  }
  {
    // condition violated: positive divergence appears inside the box
    const WholeSpaceField f(0.3, 3, 3);
    const DivergenceReport rep = check_divergence(f);
    CHECK_FALSE(rep.condition_holds);
    CHECK(rep.condition_lhs == doctest::Approx(15.0));
    CHECK(rep.condition_rhs == doctest::Approx(4.0));
    CHECK_FALSE(rep.nonpositive);
    CHECK(rep.max_divergence > 0.0);
  }
  {
    // same coupling in high dimension: the condition relaxes
    const WholeSpaceField f(0.3, 3, 9);
    const DivergenceReport rep = check_divergence(f);
    CHECK(rep.condition_holds);
    CHECK(rep.nonpositive);
  }

  // sign test and closed form agree on random sub-critical draws
  std::mt19937 rng(20240820);
  std::uniform_real_distribution<double> up(0.02, 0.98), uq(1.0, 8.0);
  std::uniform_int_distribution<int> un(2, 10);
  int tested = 0;
  while (tested < 50) {
    const double p = up(rng), q = uq(rng);
    if (p * q >= 0.98) continue;
    ++tested;
    const DivergenceReport rep = check_divergence(WholeSpaceField(p, q, un(rng)));
    CHECK(rep.nonpositive == rep.condition_holds);
  }

  // the default box needs the interior equilibrium
  CHECK_THROWS_AS(check_divergence(WholeSpaceField(2, 3, 3)),
                  std::domain_error);
  // an explicit box works regardless
  const DivergenceReport boxed =
      check_divergence(WholeSpaceField(2, 3, 3), Vec3{0, 3, 6}, Vec3{1, 4, 7});
  CHECK(std::isfinite(boxed.max_divergence));
}

TEST_CASE("autonomous flows") {
  SUBCASE("ball trajectories near the origin decay to it") {
    const BallField f(2, 3);
    const auto flow = integrate_autonomous(f, Vec3{0.1, 0.1, 0.1}, 0.0, 20.0);
    REQUIRE(!flow.empty());
    CHECK(flow.front().t == doctest::Approx(0.0));
    CHECK(flow.back().t == doctest::Approx(20.0));
    for (double si : flow.back().s) CHECK(std::abs(si) < 1e-6);
  }
  SUBCASE("whole-space heteroclinic runs from the boundary to the interior") {
    const WholeSpaceField f(0.5, 1, 3);
    const auto flow =
        integrate_autonomous(f, Vec3{0.05, 3.0, 4.0}, 0.0, 40.0);
    REQUIRE(!flow.empty());
    for (const FlowSample& s : flow) {
      CHECK(s.s[0] >= 0.0);  // positive orthant is invariant
      CHECK(s.s[1] > 0.0);
      CHECK(s.s[2] > 0.0);
    }
    CHECK(flow.back().s[0] == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(flow.back().s[1] == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(flow.back().s[2] == doctest::Approx(7.0).epsilon(1e-6));
  }
}

TEST_CASE("transformed ball runs classify the amplitude") {
  // p=2 q=3 N=2: critical v(0) = R_max(m=1) since the scaling exponent is 1
  const double m_crit = 3.3159583729630113;

  const TransformedBallRun low = integrate_transformed_ball(2, 3, 2, 2.0, 17);
  CHECK(low.outcome == BallOutcome::ConvergedToZero);
  CHECK_FALSE(low.note.empty());

  const TransformedBallRun high = integrate_transformed_ball(2, 3, 2, 4.0, 17);
  CHECK(high.outcome == BallOutcome::Departed);

  const TransformedBallRun critical =
      integrate_transformed_ball(2, 3, 2, m_crit, 12);
  REQUIRE(!critical.samples.empty());
  // Y starts at m/B and rides the connection toward (1,1,1)
  CHECK(critical.samples.front().s[1] ==
        doctest::Approx(m_crit / 1.148698354997035).epsilon(1e-3));
  double dev = 0.0;
  for (int i = 0; i < 3; ++i)
    dev = std::max(dev, std::abs(critical.samples.back().s[i] - 1.0));
  CHECK(dev < 0.05);

  CHECK(std::string(to_string(BallOutcome::ConvergedToPlusOne)) ==
        "converged_to_plus_one");
  CHECK(std::string(to_string(BallOutcome::ConvergedToZero)) ==
        "converged_to_zero");
  CHECK(std::string(to_string(BallOutcome::Departed)) == "departed");

  CHECK_THROWS_AS(integrate_transformed_ball(2, 3, 1, 1, 10),
                  std::domain_error);
  CHECK_THROWS_AS(integrate_transformed_ball(2, 3, 2, 0, 10),
                  std::domain_error);
  CHECK_THROWS_AS(integrate_transformed_ball(2, 3, 2, 1, 0),
                  std::domain_error);
}

TEST_CASE("transformed whole-space run approaches the interior equilibrium") {
  const auto run =
      integrate_transformed_whole_space(0.5, 1, 3, 1.0, std::log(1e6));
  REQUIRE(run.size() > 100);
  // near the center the ratios sit at the boundary equilibrium values
  CHECK(run.front().W == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(run.front().Z == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(run.front().Y == doctest::Approx(0.0).epsilon(1e-3));
  // by the horizon they have crossed to the interior one
  const WholeSpaceSample& last = run.back();
  CHECK(last.X == doctest::Approx(5.0).epsilon(1e-3));
  CHECK(last.Y == doctest::Approx(6.0).epsilon(1e-3));
  CHECK(last.Z == doctest::Approx(6.0).epsilon(1e-3));
  CHECK(last.W == doctest::Approx(7.0).epsilon(1e-3));
  // Z stays inside the transit corridor
  for (const auto& s : run) {
    CHECK(s.Z > 3.0 - 1e-6);
    CHECK(s.Z < 6.0 + 1e-3);
  }

  CHECK_THROWS_AS(integrate_transformed_whole_space(2, 3, 3, 1, 10),
                  std::domain_error);
  CHECK_THROWS_AS(integrate_transformed_whole_space(0.9, 1.2, 3, 1, 10),
                  std::domain_error);
  CHECK_THROWS_AS(integrate_transformed_whole_space(0.5, 1, 3, 1, 0),
                  std::domain_error);
  CHECK_THROWS_AS(integrate_transformed_whole_space(0.5, 1, 3, 1, 601),
                  std::domain_error);
}

TEST_CASE("shooting the boundary blow-up amplitude") {
  const ShootResult res = shoot_boundary_blowup_m(2, 3, 2);
  CHECK(res.m_star == doctest::Approx(3.3159583729630113).epsilon(1e-3));
  CHECK(res.t_probe == doctest::Approx(17.0));
  CHECK(res.deviation_at_12 < 0.05);
  CHECK(res.iterations > 10);

  const TransformedBallRun run =
      integrate_transformed_ball(2, 3, 2, res.m_star, 12);
  double dev = 0.0;
  for (int i = 0; i < 3; ++i)
    dev = std::max(dev, std::abs(run.samples.back().s[i] - 1.0));
  CHECK(dev == doctest::Approx(res.deviation_at_12).epsilon(1e-6));
}
