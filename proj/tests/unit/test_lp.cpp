#include "doctest.h"

#include "sdmaq/lp.hpp"

using namespace sdmaq::lp;

TEST_CASE("textbook optimum") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 (slacks s1..s3).
  LinearProgram p;
  p.A.resize(3, 5);
  p.A << 1, 0, 1, 0, 0,
         0, 2, 0, 1, 0,
         3, 2, 0, 0, 1;
  p.b.resize(3);
  p.b << 4, 12, 18;
  p.c.resize(5);
  p.c << -3, -5, 0, 0, 0;
  const auto s = solve(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(-36.0));
  CHECK(s.x(0) == doctest::Approx(2.0));
  CHECK(s.x(1) == doctest::Approx(6.0));
}

TEST_CASE("infeasible and unbounded") {
  LinearProgram inf;
  inf.A.resize(2, 2);
  inf.A << 1, 1,
           1, 1;
  inf.b.resize(2);
  inf.b << 1, 2;
  inf.c = Eigen::VectorXd::Zero(2);
  const auto s = solve(inf);
  CHECK(s.status == Status::kInfeasible);
  CHECK(s.infeasibility > 0.5);

  LinearProgram unb;
  unb.A.resize(1, 2);
  unb.A << 1, -1;
  unb.b.resize(1);
  unb.b << 0;
  unb.c.resize(2);
  unb.c << -1, 0;
  CHECK(solve(unb).status == Status::kUnbounded);
}

TEST_CASE("negative right-hand sides and redundant rows") {
  LinearProgram p;
  p.A.resize(3, 3);
  p.A << -1, -1, 0,
         -2, -2, 0,
          1,  0, 1;
  p.b.resize(3);
  p.b << -2, -4, 3;
  p.c.resize(3);
  p.c << 1, 2, 0;
  const auto s = solve(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(2.0));
  CHECK((p.A * s.x - p.b).norm() < 1e-9);
}

TEST_CASE("degenerate problem terminates under Bland's rule") {
  // Beale's cycling example in equality form.
  LinearProgram p;
  p.A.resize(3, 7);
  p.A << 0.25, -8, -1, 9, 1, 0, 0,
         0.5, -12, -0.5, 3, 0, 1, 0,
         0, 0, 1, 0, 0, 0, 1;
  p.b.resize(3);
  p.b << 0, 0, 1;
  p.c.resize(7);
  p.c << -0.75, 20, -0.5, 6, 0, 0, 0;
  const auto s = solve(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(-1.25));
}
