#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "netcpd/admm.hpp"
#include "netcpd/error.hpp"
#include "oracles.hpp"

using namespace netcpd;

namespace {

Eigen::MatrixXd gaussian(int rows, int cols, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

// Piecewise-constant target with noise: the regime where group lasso blocks are mixed.
Eigen::MatrixXd step_target(int tau, int p, std::mt19937_64& rng) {
  Eigen::MatrixXd m = gaussian(tau, p, 0.3, rng);
  const Eigen::RowVectorXd jump = gaussian(1, p, 2.0, rng);
  for (int r = tau / 2; r < tau; ++r) m.row(r) += jump;
  return m;
}

}  // namespace

TEST(PositionWeights, Examples) {
  EXPECT_NEAR(position_weights(2)(0), std::sqrt(2.0), 1e-15);
  const Eigen::VectorXd d = position_weights(4);
  EXPECT_NEAR(d(0), std::sqrt(4.0 / 3.0), 1e-15);
  EXPECT_NEAR(d(1), 1.0, 1e-15);
  EXPECT_NEAR(d(2), std::sqrt(4.0 / 3.0), 1e-15);
  EXPECT_THROW(position_weights(1), InputError);
  for (int tau : {5, 10, 11}) {
    const Eigen::VectorXd w = position_weights(tau);
    Eigen::Index arg = 0;
    w.minCoeff(&arg);
    EXPECT_TRUE(arg + 1 == tau / 2 || arg + 1 == (tau + 1) / 2);
    for (int i = 0; i < tau - 1; ++i) EXPECT_NEAR(w(i), w(tau - 2 - i), 1e-14);
  }
}

TEST(Fused, IncrementsEqualWeightedBeta) {
  std::mt19937_64 rng(1);
  const Eigen::VectorXd d = position_weights(7);
  const Eigen::MatrixXd beta = gaussian(6, 3, 1.0, rng);
  const Eigen::RowVectorXd gamma = gaussian(1, 3, 1.0, rng);
  const Eigen::MatrixXd z = assemble_fused(gamma, beta, d);
  EXPECT_LE((z - (Eigen::VectorXd::Ones(7) * gamma + oracle::design_matrix(d) * beta)).norm(), 1e-12);
  for (int i = 0; i < 6; ++i) EXPECT_LE((z.row(i + 1) - z.row(i) - d(i) * beta.row(i)).norm(), 1e-12);
}

TEST(ThetaUpdate, HugeAlphaReturnsTarget) {
  std::mt19937_64 rng(2);
  const StatisticSpec spec = StatisticSpec::parse("form=edges,mutual;diss=edges");
  const LikelihoodDesign design = LikelihoodDesign::from_series(oracle::random_series(5, 5, true, 0.3, rng), spec);
  AdmmState s = AdmmState::initial(4, 3, 1e12);
  s.gamma = gaussian(1, 3, 1.0, rng);
  s.beta = gaussian(3, 3, 1.0, rng);
  s.u = gaussian(4, 3, 1.0, rng);
  const ThetaUpdate tu = theta_update(s, design, SolverConfig{});
  EXPECT_LE((tu.theta - (s.z() - s.u)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(ThetaUpdate, AllOnesResponsesGivePositiveParameters) {
  Network full(4, false);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) full.set_edge(i, j, true);
  const NetworkSeries series({full, full, full});
  const LikelihoodDesign design = LikelihoodDesign::from_series(series, StatisticSpec::parse("form=edges;diss=edges"));
  const AdmmState s = AdmmState::initial(2, 2, 10.0);
  SolverConfig cfg;
  cfg.newton_iters = 100;
  cfg.newton_tol = 1e-14;
  const ThetaUpdate tu = theta_update(s, design, cfg);
  EXPECT_TRUE((tu.theta.array() > 0.0).all());
  const Eigen::MatrixXd sub_grad = -gradient(tu.theta, design) + 10.0 * tu.theta;
  EXPECT_LE(sub_grad.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ThetaUpdate, BlockSolveEqualsDenseSolve) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const int T = 3 + rep % 5;
    const StatisticSpec spec = rep % 2 ? StatisticSpec::parse("form=edges,mutual;diss=edges,triangles")
                                       : StatisticSpec::parse("form=edges;diss=edges,mutual");
    const NetworkSeries series = oracle::random_series(4, T, true, 0.4, rng);
    const ChangeStatBlocks blocks = build_change_stat_blocks(series, spec);
    const LikelihoodDesign design = LikelihoodDesign::from_blocks(blocks);
    AdmmState s = AdmmState::initial(T - 1, spec.size(), 0.5 + rep);
    s.theta = gaussian(T - 1, spec.size(), 0.5, rng);
    s.gamma = gaussian(1, spec.size(), 0.5, rng);
    s.beta = gaussian(T - 2, spec.size(), 0.5, rng);
    s.u = gaussian(T - 1, spec.size(), 0.5, rng);
    SolverConfig cfg;
    cfg.newton_iters = 1;
    const Eigen::MatrixXd block = theta_update(s, design, cfg).theta;
    const Eigen::MatrixXd dense = oracle::dense_newton_step(s.theta, s.z() - s.u, s.alpha, blocks);
    EXPECT_LE((block - dense).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(GroupLasso, FullShrinkageAboveLambdaMax) {
  std::mt19937_64 rng(4);
  const int tau = 8;
  const Eigen::MatrixXd target = gaussian(tau, 3, 1.0, rng);
  const Eigen::VectorXd d = position_weights(tau);
  const double alpha = 2.0;
  const Eigen::RowVectorXd mean = target.colwise().mean();
  const Eigen::MatrixXd X = oracle::design_matrix(d);
  double lambda_max = 0.0;
  for (int i = 0; i < tau - 1; ++i) {
    const Eigen::RowVectorXd s =
        alpha * X.col(i).transpose() * (target - Eigen::VectorXd::Ones(tau) * mean);
    lambda_max = std::max(lambda_max, s.norm());
  }
  const GroupLassoSolution sol = solve_group_lasso(target, d, alpha, lambda_max * 1.0001,
                                                   Eigen::RowVectorXd::Zero(3),
                                                   Eigen::MatrixXd::Zero(tau - 1, 3), 20, 1e-10);
  EXPECT_EQ(sol.beta.norm(), 0.0);
  EXPECT_LE((sol.gamma - mean).norm(), 1e-12);
}

TEST(GroupLasso, ZeroLambdaReproducesTarget) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd target = gaussian(9, 2, 1.0, rng);
  const Eigen::VectorXd d = position_weights(9);
  const GroupLassoSolution sol = solve_group_lasso(target, d, 1.0, 0.0, Eigen::RowVectorXd::Zero(2),
                                                   Eigen::MatrixXd::Zero(8, 2), 200, 1e-10, 2000);
  EXPECT_LE((assemble_fused(sol.gamma, sol.beta, d) - target).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(GroupLasso, MatchesProximalGradientReference) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd target = step_target(6, 3, rng);
  const Eigen::VectorXd d = position_weights(6);
  const GroupLassoSolution sol = solve_group_lasso(target, d, 1.0, 1.0, Eigen::RowVectorXd::Zero(3),
                                                   Eigen::MatrixXd::Zero(5, 3), 20, 1e-6, 2000);
  const oracle::GroupLassoReference ref = oracle::group_lasso_fista(target, d, 1.0, 1.0);
  const double ours = oracle::group_lasso_objective_dense(target, d, 1.0, 1.0, sol.gamma, sol.beta);
  EXPECT_LE(ours, ref.objective + 1e-8);
  EXPECT_NEAR(group_lasso_objective(target, d, 1.0, 1.0, sol.gamma, sol.beta), ours, 1e-10);
  EXPECT_LE(group_lasso_kkt(target, d, 1.0, 1.0, sol.gamma, sol.beta), 1e-6);
}

TEST(GroupLasso, KktResidualOfReferenceIsSmall) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd target = step_target(10, 2, rng);
  const Eigen::VectorXd d = position_weights(10);
  const oracle::GroupLassoReference ref = oracle::group_lasso_fista(target, d, 3.0, 0.7);
  EXPECT_LE(group_lasso_kkt(target, d, 3.0, 0.7, ref.gamma, ref.beta), 1e-5);
}

TEST(GroupLasso, PlainSweepsDecreaseObjective) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd target = step_target(15, 4, rng);
  const Eigen::VectorXd d = position_weights(15);
  Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(4);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(14, 4);
  double prev = group_lasso_objective(target, d, 1.0, 0.2, g, b);
  for (int k = 0; k < 30; ++k) {
    const GroupLassoSolution s = solve_group_lasso(target, d, 1.0, 0.2, g, b, 1, 0.0);
    const double obj = group_lasso_objective(target, d, 1.0, 0.2, s.gamma, s.beta);
    EXPECT_LE(obj, prev + 1e-12);
    prev = obj;
    g = s.gamma;
    b = s.beta;
  }
}

TEST(GroupLasso, InputValidation) {
  const Eigen::VectorXd d = position_weights(4);
  EXPECT_THROW(solve_group_lasso(Eigen::MatrixXd::Zero(4, 2), d, 1.0, 1.0, Eigen::RowVectorXd::Zero(3),
                                 Eigen::MatrixXd::Zero(3, 2), 5, 1e-6),
               InputError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 2);
  bad(1, 1) = std::nan("");
  EXPECT_THROW(solve_group_lasso(bad, d, 1.0, 1.0, Eigen::RowVectorXd::Zero(2), Eigen::MatrixXd::Zero(3, 2), 5,
                                 1e-6),
               NumericalError);
}

TEST(Dual, AffineIdentities) {
  std::mt19937_64 rng(9);
  AdmmState s = AdmmState::initial(5, 2, 10.0);
  s.gamma = gaussian(1, 2, 1.0, rng);
  s.beta = gaussian(4, 2, 1.0, rng);
  s.theta = s.z();
  EXPECT_LE(dual_update(s).norm(), 1e-14);
  const Eigen::MatrixXd delta = gaussian(5, 2, 1.0, rng);
  s.u = gaussian(5, 2, 1.0, rng);
  s.theta = s.z() + delta;
  EXPECT_LE((dual_update(s) - s.u - delta).norm(), 1e-12);
}

TEST(AlphaSchedule, Branches) {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd u = gaussian(3, 2, 1.0, rng);
  auto [a1, u1] = alpha_schedule(1.0, 0.05, 10.0, u);
  EXPECT_EQ(a1, 20.0);
  EXPECT_LE((u1 - 0.5 * u).norm(), 0.0);
  auto [a2, u2] = alpha_schedule(0.05, 1.0, 10.0, u);
  EXPECT_EQ(a2, 5.0);
  auto [a3, u3] = alpha_schedule(1.0, 1.0, 10.0, u);
  EXPECT_EQ(a3, 10.0);
  EXPECT_EQ(u3, u);
  EXPECT_LE((a1 * u1 - 10.0 * u).norm(), 1e-12);
  EXPECT_LE((a2 * u2 - 10.0 * u).norm(), 1e-12);
}

TEST(RunAdmm, ConstantSeriesFusesCompletely) {
  std::mt19937_64 rng(11);
  const Network y = oracle::random_network(12, true, 0.3, rng);
  const NetworkSeries series(std::vector<Network>(8, y));
  SolverConfig cfg;
  cfg.lambda = 100.0;
  const AdmmResult r = run_admm(series, StatisticSpec::parse("form=edges,mutual;diss=edges,mutual"), cfg);
  for (int i = 0; i + 1 < r.theta_hat.rows(); ++i)
    EXPECT_LE((r.theta_hat.row(i + 1) - r.theta_hat.row(i)).norm(), 1e-6);
}

TEST(RunAdmm, HistoryIsConsistent) {
  std::mt19937_64 rng(12);
  const NetworkSeries series = oracle::random_series(10, 12, true, 0.2, rng);
  SolverConfig cfg;
  cfg.lambda = 1.0;
  const AdmmResult r = run_admm(series, StatisticSpec::parse("form=edges,mutual;diss=edges,mutual"), cfg);
  ASSERT_EQ(static_cast<int>(r.state.history.size()), r.iterations);
  for (const auto& rec : r.state.history) {
    EXPECT_TRUE(std::isfinite(rec.objective));
    EXPECT_TRUE(std::isfinite(rec.loglik));
    EXPECT_LE(rec.kkt_residual, cfg.kkt_tol);
  }
  if (r.state.converged && r.iterations >= 2) {
    const double a = r.state.history[r.iterations - 2].loglik;
    const double b = r.state.history[r.iterations - 1].loglik;
    EXPECT_LE(std::abs((b - a) / a), cfg.admm_tol);
  }
  EXPECT_LE((r.theta_hat - r.state.z()).norm(), 0.0);
}

TEST(RunAdmm, HugeLambdaKeepsBetaZero) {
  std::mt19937_64 rng(13);
  const NetworkSeries series = oracle::random_series(8, 6, true, 0.3, rng);
  SolverConfig cfg;
  cfg.lambda = 1e9;
  const AdmmResult r = run_admm(series, StatisticSpec::parse("form=edges;diss=edges"), cfg);
  EXPECT_EQ(r.state.beta.norm(), 0.0);
  for (int i = 1; i < r.theta_hat.rows(); ++i) EXPECT_LE((r.theta_hat.row(i) - r.theta_hat.row(0)).norm(), 1e-4);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  c.alpha0 = 0.0;
  EXPECT_THROW(c.validate(), InputError);
  c = SolverConfig{};
  c.group_lasso_iters = 0;
  EXPECT_THROW(c.validate(), InputError);
  c = SolverConfig{};
  c.admm_tol = -1;
  EXPECT_THROW(c.validate(), InputError);
}
