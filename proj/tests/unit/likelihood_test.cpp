#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "netcpd/error.hpp"
#include "netcpd/likelihood.hpp"
#include "oracles.hpp"

using namespace netcpd;

namespace {

Eigen::MatrixXd random_theta(int rows, int cols, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

}  // namespace

TEST(Softplus, StableAtExtremes) {
  EXPECT_DOUBLE_EQ(softplus(0.0), std::log(2.0));
  EXPECT_DOUBLE_EQ(softplus(800.0), 800.0);
  EXPECT_GT(softplus(-800.0), -1.0);
  EXPECT_TRUE(std::isfinite(softplus(1e308)));
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
}

TEST(PseudoLoglik, ZeroThetaIdentity) {
  std::mt19937_64 rng(1);
  const NetworkSeries s = oracle::random_series(6, 5, true, 0.3, rng);
  const StatisticSpec spec = StatisticSpec::parse("form=edges,mutual;diss=edges,triangles");
  const ChangeStatBlocks b = build_change_stat_blocks(s, spec);
  const LikelihoodDesign d = LikelihoodDesign::from_blocks(b);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
  const double expect = -2.0 * 4 * 30 * std::log(2.0);
  EXPECT_NEAR(pseudo_loglik(zero, b), expect, 1e-9);
  EXPECT_NEAR(pseudo_loglik(zero, d), expect, 1e-9);
}

TEST(PseudoLoglik, MatchesScalarLoopOracle) {
  std::mt19937_64 rng(2);
  for (const char* text : {"form=edges;diss=edges", "form=edges,mutual,triangles;diss=edges,isolates"}) {
    const StatisticSpec spec = StatisticSpec::parse(text);
    const NetworkSeries s = oracle::random_series(4, 3, true, 0.4, rng);
    const Eigen::MatrixXd theta = random_theta(2, spec.size(), 1.0, rng);
    const double ref = oracle::naive_loglik(theta, s, spec);
    EXPECT_NEAR(pseudo_loglik(theta, build_change_stat_blocks(s, spec)), ref, 1e-9 * std::abs(ref));
    EXPECT_NEAR(pseudo_loglik(theta, LikelihoodDesign::from_series(s, spec)), ref, 1e-9 * std::abs(ref));
  }
}

TEST(PseudoLoglik, UndirectedWithAttributes) {
  std::mt19937_64 rng(4);
  const StatisticSpec spec = StatisticSpec::parse("form=edges,homophily,triangles;diss=edges,isolates");
  const NetworkSeries s = oracle::random_series(6, 4, false, 0.4, rng, true);
  const Eigen::MatrixXd theta = random_theta(3, spec.size(), 0.7, rng);
  const double ref = oracle::naive_loglik(theta, s, spec);
  EXPECT_NEAR(pseudo_loglik(theta, LikelihoodDesign::from_series(s, spec)), ref, 1e-9 * std::abs(ref));
}

TEST(PseudoLoglik, HugeParametersStayFinite) {
  std::mt19937_64 rng(5);
  const StatisticSpec spec = StatisticSpec::parse("form=edges;diss=edges");
  const NetworkSeries s = oracle::random_series(5, 3, true, 0.5, rng);
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(2, 2);
  theta(0, 0) = 1e6;
  theta(1, 1) = -1e6;
  EXPECT_TRUE(std::isfinite(pseudo_loglik(theta, build_change_stat_blocks(s, spec))));
  theta(0, 0) = std::nan("");
  EXPECT_THROW(pseudo_loglik(theta, build_change_stat_blocks(s, spec)), NumericalError);
  EXPECT_THROW(pseudo_loglik(Eigen::MatrixXd::Zero(3, 2), build_change_stat_blocks(s, spec)), InputError);
}

TEST(Gradient, ZeroThetaEdgesCountsHalf) {
  std::mt19937_64 rng(6);
  const NetworkSeries s = oracle::random_series(5, 4, true, 0.3, rng);
  const StatisticSpec spec = StatisticSpec::parse("form=edges;diss=edges");
  const Eigen::MatrixXd g = gradient(Eigen::MatrixXd::Zero(3, 2), LikelihoodDesign::from_series(s, spec));
  for (int r = 0; r < 3; ++r) {
    const double plus = static_cast<double>(derive_formation(s.at(r), s.at(r + 1)).edge_count());
    const double minus = static_cast<double>(derive_dissolution(s.at(r), s.at(r + 1)).edge_count());
    EXPECT_NEAR(g(r, 0), plus - 10.0, 1e-12);
    EXPECT_NEAR(g(r, 1), minus - 10.0, 1e-12);
  }
}

TEST(Gradient, FiniteDifferences) {
  std::mt19937_64 rng(7);
  const StatisticSpec spec = StatisticSpec::parse("form=edges,mutual;diss=edges,mutual");
  const NetworkSeries s = oracle::random_series(5, 4, true, 0.4, rng);
  const LikelihoodDesign d = LikelihoodDesign::from_series(s, spec);
  const Eigen::MatrixXd theta = random_theta(3, 4, 0.5, rng);
  const Eigen::MatrixXd fd = oracle::fd_gradient(
      [&](const Eigen::MatrixXd& x) { return pseudo_loglik(x, d); }, theta, 1e-5);
  const Eigen::MatrixXd g = gradient(theta, d);
  EXPECT_LE((g - fd).norm() / g.norm(), 1e-5);
  EXPECT_LE((gradient(theta, build_change_stat_blocks(s, spec)) - g).norm(), 1e-9);
}

TEST(Hessian, ZeroThetaEdgesIsQuarterE) {
  std::mt19937_64 rng(8);
  const NetworkSeries s = oracle::random_series(5, 3, false, 0.3, rng);
  const auto blocks = hessian_blocks(Eigen::MatrixXd::Zero(2, 2),
                                     LikelihoodDesign::from_series(s, StatisticSpec::parse("form=edges;diss=edges")));
  for (const auto& h : blocks) {
    EXPECT_NEAR(h(0, 0), 2.5, 1e-12);
    EXPECT_NEAR(h(1, 1), 2.5, 1e-12);
    EXPECT_EQ(h(0, 1), 0.0);
  }
}

TEST(Hessian, SymmetricPsdAndFormationDissolutionSeparate) {
  std::mt19937_64 rng(9);
  const StatisticSpec spec = StatisticSpec::parse("form=edges,triangles;diss=edges,mutual");
  const NetworkSeries s = oracle::random_series(6, 4, true, 0.4, rng);
  const auto blocks = hessian_blocks(random_theta(3, 4, 0.5, rng), LikelihoodDesign::from_series(s, spec));
  for (const auto& h : blocks) {
    EXPECT_LE((h - h.transpose()).norm(), 1e-12);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues().minCoeff(), -1e-10);
    EXPECT_EQ(h.block(0, 2, 2, 2).norm(), 0.0);
  }
}

TEST(Likelihood, ConcaveAlongChords) {
  std::mt19937_64 rng(10);
  const StatisticSpec spec = StatisticSpec::parse("form=edges,mutual;diss=edges,triangles");
  const NetworkSeries s = oracle::random_series(6, 4, true, 0.3, rng);
  const LikelihoodDesign d = LikelihoodDesign::from_series(s, spec);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const Eigen::MatrixXd a = random_theta(3, 4, 1.5, rng);
    const Eigen::MatrixXd b = random_theta(3, 4, 1.5, rng);
    const double w = u(rng);
    EXPECT_GE(pseudo_loglik(w * a + (1 - w) * b, d),
              w * pseudo_loglik(a, d) + (1 - w) * pseudo_loglik(b, d) - 1e-9);
  }
}

TEST(Likelihood, AdditiveOverModels) {
  std::mt19937_64 rng(12);
  const StatisticSpec spec = StatisticSpec::parse("form=edges,mutual;diss=edges");
  const NetworkSeries s = oracle::random_series(5, 4, true, 0.3, rng);
  const LikelihoodDesign d = LikelihoodDesign::from_series(s, spec);
  const Eigen::MatrixXd theta = random_theta(3, 3, 1.0, rng);
  Eigen::MatrixXd only_form = theta;
  only_form.col(2).setZero();
  Eigen::MatrixXd only_diss = theta;
  only_diss.leftCols(2).setZero();
  const double neutral = 2.0 * 3 * 20 * std::log(2.0);
  EXPECT_NEAR(pseudo_loglik(theta, d), pseudo_loglik(only_form, d) + pseudo_loglik(only_diss, d) + neutral,
              1e-9);
}

TEST(Design, CollapseIsExact) {
  std::mt19937_64 rng(13);
  const StatisticSpec spec = StatisticSpec::parse("form=edges,triangles;diss=edges,isolates");
  const NetworkSeries s = oracle::random_series(8, 3, true, 0.3, rng);
  const ChangeStatBlocks b = build_change_stat_blocks(s, spec);
  const LikelihoodDesign d = LikelihoodDesign::from_blocks(b);
  EXPECT_LT(d.row_count(), 2u * 2u * b.dyads);
  for (int r = 0; r < d.tau(); ++r) {
    EXPECT_DOUBLE_EQ(d.formation(r).total_weight(), static_cast<double>(b.dyads));
    EXPECT_DOUBLE_EQ(d.dissolution(r).total_weight(), static_cast<double>(b.dyads));
  }
  const Eigen::MatrixXd theta = random_theta(2, 4, 1.0, rng);
  EXPECT_NEAR(pseudo_loglik(theta, d), pseudo_loglik(theta, b), 1e-9);
  const auto hd = hessian_blocks(theta, d);
  const auto hb = hessian_blocks(theta, b);
  for (std::size_t r = 0; r < hd.size(); ++r) EXPECT_LE((hd[r] - hb[r]).norm(), 1e-9);
}
