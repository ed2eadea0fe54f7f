#pragma once

#include <vector>

#include <Eigen/Dense>

#include "netcpd/network.hpp"
#include "netcpd/statistics.hpp"

namespace netcpd {

/// tau x p parameter trajectory; row r holds (theta^{+,t}, theta^{-,t}) for t = r + 2.
using ParamTrajectory = Eigen::MatrixXd;

/// Logistic design of one model at one transition, as weighted distinct rows.
/// Dyads sharing both their change-statistic vector and their response contribute
/// identical terms to the pseudo-likelihood, so they are merged with a multiplicity.
struct WeightedRows {
  Eigen::MatrixXd x;   // k x p_m distinct change-statistic rows
  Eigen::VectorXd y;   // k responses (0 or 1)
  Eigen::VectorXd w;   // k multiplicities

  double total_weight() const { return w.sum(); }
};

/// The data side of the pseudo-likelihood: every transition's formation and
/// dissolution designs. Built once before optimization.
class LikelihoodDesign {
 public:
  LikelihoodDesign() = default;

  /// Collapses each dense block to its distinct rows (exact).
  static LikelihoodDesign from_blocks(const ChangeStatBlocks& blocks);

  /// Builds transition by transition without keeping the dense blocks alive.
  static LikelihoodDesign from_series(const NetworkSeries& series, const StatisticSpec& spec);

  int tau() const { return static_cast<int>(formation_.size()); }
  int formation_size() const { return p1_; }
  int dissolution_size() const { return p2_; }
  int p() const { return p1_ + p2_; }
  std::size_t dyads() const { return dyads_; }

  const WeightedRows& formation(int r) const { return formation_[static_cast<std::size_t>(r)]; }
  const WeightedRows& dissolution(int r) const {
    return dissolution_[static_cast<std::size_t>(r)];
  }

  /// Total number of distinct rows across all transitions and both models.
  std::size_t row_count() const;

 private:
  void append(const TransitionBlock& block);

  int p1_ = 0;
  int p2_ = 0;
  std::size_t dyads_ = 0;
  std::vector<WeightedRows> formation_;
  std::vector<WeightedRows> dissolution_;
};

/// Exact conversion of one dense block to weighted distinct rows.
WeightedRows collapse_rows(const ModelBlock& block);

/// log(1 + exp(x)) without overflow.
double softplus(double x);
double sigmoid(double x);

/// Log pseudo-likelihood of the time-heterogeneous STERGM.
double pseudo_loglik(const ParamTrajectory& theta, const LikelihoodDesign& design);
double pseudo_loglik(const ParamTrajectory& theta, const ChangeStatBlocks& blocks);

/// Gradient of the log pseudo-likelihood, tau x p.
Eigen::MatrixXd gradient(const ParamTrajectory& theta, const LikelihoodDesign& design);
Eigen::MatrixXd gradient(const ParamTrajectory& theta, const ChangeStatBlocks& blocks);

/// Per-transition p x p blocks of H^T W H (the negative Hessian of the log
/// pseudo-likelihood). Formation/dissolution cross terms are zero.
std::vector<Eigen::MatrixXd> hessian_blocks(const ParamTrajectory& theta,
                                            const LikelihoodDesign& design);
std::vector<Eigen::MatrixXd> hessian_blocks(const ParamTrajectory& theta,
                                            const ChangeStatBlocks& blocks);

/// Gradient row and negative-Hessian block of a single transition.
struct TransitionCurvature {
  Eigen::VectorXd gradient;
  Eigen::MatrixXd information;
};
TransitionCurvature transition_curvature(const Eigen::VectorXd& theta_row,
                                         const LikelihoodDesign& design, int r);

/// Log pseudo-likelihood contribution of a single transition.
double transition_loglik(const Eigen::VectorXd& theta_row, const LikelihoodDesign& design, int r);

}  // namespace netcpd
