#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "support.hpp"

using namespace hkit;
using namespace hkit::testing;

namespace {

std::vector<double> at_nodes(const HammersteinSystem& sys, const std::function<double(double)>& f) {
  std::vector<double> u(sys.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(sys.nodes().nodes[i]);
  return u;
}

}  // namespace

TEST(ApplyT, ZeroNonlinearity) {
  Analysis an(parse_problem(std::string(scenarios::by_name("zero"))));
  HammersteinSystem sys(an, 64);
  for (double v : sys.apply_T(at_nodes(sys, [](double t) { return 1 + t; }))) EXPECT_EQ(v, 0.0);
}

TEST(ApplyT, ConstantForcing) {
  ProblemSpec ps = problem(Shift::minus, 1.0, 0.0, 1.0);
  ps.f.eval = [](double, double) { return 1.0; };
  Analysis an(std::move(ps));
  HammersteinSystem sys(an, 100);
  for (double v : sys.apply_T(std::vector<double>(sys.size(), 3.0))) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(ApplyT, WrongLength) {
  Analysis an(example3(0.25));
  HammersteinSystem sys(an, 32);
  EXPECT_THROW(sys.apply_T(std::vector<double>(5, 0.0)), DomainError);
  EXPECT_THROW(HammersteinSystem(an, 8), DomainError);
}

TEST(Functionals, PanelWeightsMatchDirectQuadrature) {
  ProblemSpec ps = parse_problem(std::string(scenarios::by_name("example2")));
  Analysis an(ps);
  HammersteinSystem sys(an, 200);
  for (auto u : std::vector<std::function<double(double)>>{[](double t) { return std::sin(2 * t) + t * t; },
                                                           [](double t) { return std::exp(-t) * std::cos(3 * t); }}) {
    const auto v = at_nodes(sys, u);
    EXPECT_NEAR(sys.alpha_of(v), apply_functional(ps.boundary.alpha, u), 1e-6);
    EXPECT_NEAR(sys.beta_of(v), apply_functional(ps.boundary.beta, u), 1e-6);
    for (double x : linspace(0, 1, 101)) EXPECT_NEAR(sys.interpolate(v, x), u(x), 1e-6);
  }
}

TEST(Solve, ExampleThreeLocalization) {
  const auto t0 = std::chrono::steady_clock::now();
  Analysis an(example3(0.25));
  HammersteinSystem sys(an, 200);
  const auto runs = solve(sys);
  const DiscreteSolution& u = best_solution(runs);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(u.status, SolveStatus::converged);
  EXPECT_LT(u.residual, 1e-8);
  EXPECT_GE(u.band_lo, 0.064);
  EXPECT_LE(u.band_hi, 0.16);
  EXPECT_TRUE(u.cone_check.in_cone);
  EXPECT_NEAR(u.cone_check.c_used, 0.6480542736638854, 1e-12);
  EXPECT_LT(secs, 5.0);
}

TEST(Solve, ZeroNonlinearityOneStep) {
  Analysis an(parse_problem(std::string(scenarios::by_name("zero"))));
  HammersteinSystem sys(an, 64);
  IterationOptions o;
  o.damping = 1.0;
  const DiscreteSolution u = solve_fixed_point(sys, std::vector<double>(sys.size(), 2.0), o);
  EXPECT_EQ(u.status, SolveStatus::converged);
  EXPECT_EQ(u.iterations, 1);
  EXPECT_EQ(u.residual, 0.0);
  for (double v : u.values) EXPECT_EQ(v, 0.0);
}

TEST(Solve, NonexistenceRegimeHasNoConeSolution) {
  Analysis an(example3(0.9));
  HammersteinSystem sys(an, 200);
  const auto runs = multi_start(sys, cone_starts(sys, 20), iteration_options(an.spec().solver));
  ASSERT_EQ(runs.size(), 20u);
  for (const auto& r : runs) EXPECT_FALSE(r.nontrivial_in_cone());
}

TEST(Solve, DivergenceDetected) {
  Analysis an(example3(0.9));
  HammersteinSystem sys(an, 64);
  IterationOptions o;
  o.damping = 1.0;
  const DiscreteSolution u = solve_fixed_point(sys, std::vector<double>(sys.size(), 5.0), o);
  EXPECT_EQ(u.status, SolveStatus::diverged);
}

TEST(Solve, StalledAtIterationCap) {
  Analysis an(example3(0.25));
  HammersteinSystem sys(an, 64);
  IterationOptions o;
  o.max_iter = 2;
  o.damping = 0.1;
  EXPECT_EQ(solve_fixed_point(sys, std::vector<double>(sys.size(), 0.0), o).status, SolveStatus::stalled);
  o.damping = 0.0;
  EXPECT_THROW(solve_fixed_point(sys, std::vector<double>(sys.size(), 0.0), o), DomainError);
}

TEST(Solve, AndersonAgreesWithPicard) {
  Analysis an(example3(0.25));
  HammersteinSystem sys(an, 100);
  IterationOptions plain, acc;
  plain.damping = acc.damping = 0.5;
  acc.anderson = true;
  const std::vector<double> u0(sys.size(), 0.0);
  const DiscreteSolution a = solve_fixed_point(sys, u0, plain), b = solve_fixed_point(sys, u0, acc);
  ASSERT_EQ(a.status, SolveStatus::converged);
  ASSERT_EQ(b.status, SolveStatus::converged);
  EXPECT_LT(max_abs_diff(a.values, b.values), 1e-9);
  EXPECT_LT(b.iterations, a.iterations);
}

TEST(Solve, GridRefinement) {
  Analysis an(example3(0.25));
  HammersteinSystem coarse(an, 100), fine(an, 200);
  const DiscreteSolution a = best_solution(solve(coarse)), b = best_solution(solve(fine));
  double gap = 0.0;
  for (double x : linspace(0, 1, 501)) gap = std::max(gap, std::abs(coarse.interpolate(a.values, x) - fine.interpolate(b.values, x)));
  EXPECT_LT(gap, 1e-5);
}

TEST(Solve, ExampleTwoFunctionalsNonnegative) {
  Analysis an(parse_problem(std::string(scenarios::by_name("example2"))));
  HammersteinSystem sys(an);
  const DiscreteSolution& u = best_solution(solve(sys));
  EXPECT_EQ(u.status, SolveStatus::converged);
  EXPECT_TRUE(u.nontrivial_in_cone());
  EXPECT_GE(u.cone_check.alpha_u, 0.0);
  EXPECT_GE(u.cone_check.beta_u, 0.0);
  EXPECT_TRUE(u.cone_check.alpha_nonneg);
  EXPECT_TRUE(u.cone_check.beta_nonneg);
  EXPECT_LT(s_residual(sys, u.values), 1e-6);
}

TEST(Membership, NegativeConstantNotInCone) {
  Analysis an(example3(0.25));
  HammersteinSystem sys(an, 64);
  const ConeCheck cc = verify_membership(sys, std::vector<double>(sys.size(), -1.0));
  EXPECT_FALSE(cc.in_cone);
  EXPECT_NEAR(cc.min_ab, -1.0, 1e-12);
}

TEST(Membership, TMapsConeIntoCone) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const char* name : {"example1", "example2", "example3"}) {
    Analysis an(parse_problem(std::string(scenarios::by_name(name))));
    HammersteinSystem sys(an, 100);
    const double c = an.cone_c();
    for (int k = 0; k < 15; ++k) {
      const double A = std::pow(10.0, -2 + 3 * U(rng)), p = 1 + 8 * U(rng), q = 6 * U(rng);
      const auto u = at_nodes(sys, [&](double t) { return A * (c + (1 - c) * 0.5 * (1 + std::sin(p * t + q))); });
      ASSERT_TRUE(verify_membership(sys, u).in_cone);
      EXPECT_TRUE(verify_membership(sys, sys.apply_T(u)).in_cone) << name << " " << k;
    }
  }
}

TEST(ConeStarts, AreInCone) {
  Analysis an(parse_problem(std::string(scenarios::by_name("example2"))));
  HammersteinSystem sys(an, 100);
  for (const auto& u : cone_starts(sys, 12)) EXPECT_TRUE(verify_membership(sys, u).in_cone);
}

TEST(BestSolution, Ranking) {
  DiscreteSolution a, b;
  a.status = SolveStatus::stalled;
  a.residual = 1e-3;
  b.status = SolveStatus::converged;
  b.residual = 1e-2;
  b.cone_check.in_cone = true;
  b.cone_check.norm = 1.0;
  const std::vector<DiscreteSolution> runs{a, b};
  EXPECT_EQ(&best_solution(runs), &runs[1]);
  EXPECT_THROW(best_solution({}), DomainError);
}
