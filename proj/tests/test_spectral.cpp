#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "support.hpp"

using namespace hkit;
using namespace hkit::testing;

TEST(Nystrom, ConstantKernelIsAveraging) {
  const NodeSet ns = make_panels(64);
  MatrixRecipe rc;
  rc.kernel = [](double, double) { return 1.0; };
  rc.diagonal_kink = false;
  const Eigen::MatrixXd W = nystrom_matrix(ns, rc, Weight::one());
  for (Eigen::Index i = 0; i < W.rows(); ++i) EXPECT_NEAR(W.row(i).sum(), 1.0, 1e-13);
  const SpectralEstimate est = power_iteration(W);
  EXPECT_NEAR(est.rho, 1.0, 1e-12);
  EXPECT_NEAR(est.mu, 1.0, 1e-12);
}

TEST(Nystrom, SeparableKernel) {
  // kappa = phi(t) psi(s), g(s) = s: rho = int phi psi g, here by Simpson.
  const NodeSet ns = make_panels(96);
  MatrixRecipe rc;
  rc.kernel = [](double t, double s) { return std::exp(t) * (1 + s * s); };
  rc.diagonal_kink = false;
  const SpectralEstimate est = power_iteration(nystrom_matrix(ns, rc, Weight::linear()));
  const double exact = simpson([](double s) { return std::exp(s) * (1 + s * s) * s; }, 0, 1, {}, 2000);
  EXPECT_NEAR(est.rho, exact, 1e-8);
}

TEST(PowerIteration, RankOne) {
  Eigen::VectorXd w(3), v(3);
  w << 1, 2, 3;
  v << 0.5, 0.25, 1;
  const SpectralEstimate est = power_iteration(w * v.transpose());
  EXPECT_NEAR(est.rho, v.dot(w), 1e-12);
  EXPECT_NEAR(est.rho * est.mu, 1.0, 1e-15);
}

TEST(PowerIteration, CollatzWielandtBrackets) {
  const AssembledKernel ak = assemble(ShiftedKernel(Shift::minus, 1.0).kernel(), BoundaryData::trivial(), 0.0, 1.0,
                                      c_of_interval(Shift::minus, 1.0, 0.0, 1.0));
  const NystromOperator op = discretize(OperatorKind::L, ak, Weight::one(), 0.0, 1.0, 64);
  PowerOptions o;
  o.record_history = true;
  o.refine = false;
  const SpectralEstimate est = principal_value(op, o);
  for (const auto& [lo, hi] : est.cw_history) {
    EXPECT_LE(lo, est.rho * (1 + 1e-12));
    EXPECT_GE(hi, est.rho * (1 - 1e-12));
  }
}

TEST(PowerIteration, ZeroMatrixFails) {
  EXPECT_THROW(power_iteration(Eigen::MatrixXd::Zero(4, 4)), ConvergenceFailure);
}

TEST(Discretize, RejectsTooFewNodes) {
  const AssembledKernel ak = assemble(ShiftedKernel(Shift::minus, 1.0).kernel(), BoundaryData::trivial(), 0.0, 1.0, 0.5);
  EXPECT_THROW(discretize(OperatorKind::L, ak, Weight::one(), 0.0, 1.0, 8), DomainError);
}

TEST(Discretize, EntriesNonnegative) {
  const AssembledKernel ak = assemble(ShiftedKernel(Shift::plus, 7 * kPi / 12).kernel(), BoundaryData::trivial(), 0.25,
                                      0.75, c_of_interval(Shift::plus, 7 * kPi / 12, 0.25, 0.75));
  for (OperatorKind k : {OperatorKind::L, OperatorKind::Ltilde, OperatorKind::Lplus}) {
    const NystromOperator op = discretize(k, ak, Weight::one(), 0.25, 0.75, 100);
    EXPECT_GE(op.matrix.minCoeff(), 0.0) << to_string(k);
  }
}

TEST(Spectral, PositiveKernelOperatorsCoincideOnUnitInterval) {
  // k = cosh form, g = 1: int k(t,s) ds = 1/omega^2, so mu = omega^2 exactly.
  const AssembledKernel ak = assemble(ShiftedKernel(Shift::minus, 1.0).kernel(), BoundaryData::trivial(), 0.0, 1.0,
                                      c_of_interval(Shift::minus, 1.0, 0.0, 1.0));
  double mus[3];
  int i = 0;
  for (OperatorKind k : {OperatorKind::L, OperatorKind::Ltilde, OperatorKind::Lplus})
    mus[i++] = principal_value(discretize(k, ak, Weight::one(), 0.0, 1.0, 200)).mu;
  EXPECT_NEAR(mus[0], 1.0, 1e-8);
  EXPECT_NEAR(mus[1], mus[0], 1e-8);
  EXPECT_NEAR(mus[2], mus[0], 1e-8);
}

TEST(Spectral, StrictInteriorGivesMuAboveM) {
  const AssembledKernel ak = assemble(ShiftedKernel(Shift::minus, 1.0).kernel(), BoundaryData::trivial(), 0.2, 0.8,
                                      c_of_interval(Shift::minus, 1.0, 0.2, 0.8));
  const double mu = principal_value(discretize(OperatorKind::Ltilde, ak, Weight::one(), 0.2, 0.8, 200)).mu;
  EXPECT_GT(mu, 1.0);
}

TEST(Spectral, OrderingExampleThree) {
  Analysis an(example3(0.25));
  const OrderingCheck oc = mu_ordering_check(an.kernel_s(), an.spec().g, 0.0, 1.0, 200);
  EXPECT_TRUE(oc.pass);
  EXPECT_NEAR(oc.M_S, (kE + 1) / (kE - 1), 1e-9);
  EXPECT_NEAR(oc.m_S, (kE + 1) / 2, 1e-9);
  EXPECT_GE(oc.mu_L, oc.m_S);
  EXPECT_LE(oc.mu_L, oc.M_S);
  EXPECT_LT(oc.gap_L, 1e-4);
  EXPECT_LT(oc.gap_Ltilde, 1e-4);
}

TEST(Spectral, OrderingExamplesOneAndTwo) {
  for (const char* name : {"example1", "example2"}) {
    Analysis an(parse_problem(std::string(scenarios::by_name(name))));
    const auto& sp = an.spec();
    const OrderingCheck oc = mu_ordering_check(an.kernel_s(), sp.g, sp.a, sp.b, 200);
    EXPECT_TRUE(oc.pass) << name << " " << oc.M_S << " " << oc.mu_Ltilde << " " << oc.mu_L << " " << oc.m_S;
    EXPECT_LT(oc.gap_L, 1e-4) << name;
    EXPECT_LT(oc.gap_Ltilde, 1e-4) << name;
  }
}

TEST(Spectral, EigenfunctionInCone) {
  for (const char* name : {"example1", "example2", "example3"}) {
    Analysis an(parse_problem(std::string(scenarios::by_name(name))));
    const auto& sp = an.spec();
    const NystromOperator op = discretize(OperatorKind::L, an.kernel_s(), sp.g, sp.a, sp.b, 200);
    const SpectralEstimate est = principal_value(op);
    double norm = 0.0, mn = 1e300;
    for (double x : linspace(0, 1, 2001)) norm = std::max(norm, op.nodes.interpolate(est.eigenfunction, x));
    for (double x : linspace(sp.a, sp.b, 2001)) mn = std::min(mn, op.nodes.interpolate(est.eigenfunction, x));
    for (double v : est.eigenfunction) EXPECT_GE(v, 0.0);
    EXPECT_GE(mn, an.cone_c() * norm - 1e-6 * norm) << name;
  }
}

TEST(Spectral, SignChangingKernelCanPutMuBelowMS) {
  // k changes sign for omega = 2.8; m_S (max of part integrals) then exceeds
  // mu(L) while 1/sup int |k| stays below it.
  const double w = 2.8, a = 0.475601, b = 0.524399;
  const AssembledKernel ak = assemble(ShiftedKernel(Shift::plus, w).kernel(), BoundaryData::trivial(), a, b,
                                      c_of_interval(Shift::plus, w, a, b));
  const OrderingCheck oc = mu_ordering_check(ak, Weight::one(), a, b, 200);

  const int n = 800;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = std::abs(oracle_kernel(1, w, (i + 0.5) / n, (j + 0.5) / n)) / n;
  const double r = A.eigenvalues().cwiseAbs().maxCoeff();

  EXPECT_NEAR(oc.mu_L, 1 / r, 1e-5 * oc.mu_L);
  EXPECT_NEAR(oc.m_S, oracle_m(1, w, [](double) { return 1.0; }), 1e-6 * oc.m_S);
  EXPECT_LT(oc.mu_L, oc.m_S);
  EXPECT_FALSE(oc.pass);
  EXPECT_TRUE(oc.pass_abs);
  EXPECT_LE(oc.m_abs, oc.mu_L);
}
