#include "netcpd/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "netcpd/error.hpp"

namespace netcpd {

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

WeightedRows collapse_rows(const ModelBlock& block) {
  const Eigen::Index rows = block.change_stats.rows();
  const Eigen::Index cols = block.change_stats.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  auto less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double va = block.change_stats(a, c);
      const double vb = block.change_stats(b, c);
      if (va != vb) return va < vb;
    }
    return block.response[static_cast<std::size_t>(a)] <
           block.response[static_cast<std::size_t>(b)];
  };
  auto same = [&](Eigen::Index a, Eigen::Index b) { return !less(a, b) && !less(b, a); };
  std::sort(order.begin(), order.end(), less);

  std::vector<Eigen::Index> heads;
  std::vector<double> counts;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && same(order[k - 1], order[k])) {
      counts.back() += 1.0;
    } else {
      heads.push_back(order[k]);
      counts.push_back(1.0);
    }
  }

  WeightedRows out;
  const auto k = static_cast<Eigen::Index>(heads.size());
  out.x.resize(k, cols);
  out.y.resize(k);
  out.w.resize(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const Eigen::Index src = heads[static_cast<std::size_t>(r)];
    out.x.row(r) = block.change_stats.row(src);
    out.y(r) = block.response[static_cast<std::size_t>(src)];
    out.w(r) = counts[static_cast<std::size_t>(r)];
  }
  return out;
}

void LikelihoodDesign::append(const TransitionBlock& block) {
  formation_.push_back(collapse_rows(block.formation));
  dissolution_.push_back(collapse_rows(block.dissolution));
}

LikelihoodDesign LikelihoodDesign::from_blocks(const ChangeStatBlocks& blocks) {
  LikelihoodDesign design;
  design.p1_ = blocks.formation_size;
  design.p2_ = blocks.dissolution_size;
  design.dyads_ = blocks.dyads;
  for (const TransitionBlock& block : blocks.transitions) design.append(block);
  return design;
}

LikelihoodDesign LikelihoodDesign::from_series(const NetworkSeries& series,
                                               const StatisticSpec& spec) {
  spec.validate(series.directed(), series.attributes().has_value());
  LikelihoodDesign design;
  design.p1_ = spec.formation_size();
  design.p2_ = spec.dissolution_size();
  design.dyads_ = dyad_count(series.node_count(), series.directed());
  for (std::size_t t = 1; t < series.length(); ++t) {
    design.append(
        build_transition_block(series.at(t - 1), series.at(t), spec, series.attributes_ptr()));
  }
  return design;
}

std::size_t LikelihoodDesign::row_count() const {
  std::size_t total = 0;
  for (std::size_t r = 0; r < formation_.size(); ++r) {
    total += static_cast<std::size_t>(formation_[r].x.rows() + dissolution_[r].x.rows());
  }
  return total;
}

namespace {

void check_theta(const ParamTrajectory& theta, const LikelihoodDesign& design) {
  if (theta.rows() != design.tau() || theta.cols() != design.p()) {
    throw InputError("parameter trajectory is " + std::to_string(theta.rows()) + "x" +
                     std::to_string(theta.cols()) + ", design expects " +
                     std::to_string(design.tau()) + "x" + std::to_string(design.p()));
  }
  if (!theta.allFinite()) throw NumericalError("parameter trajectory has non-finite entries");
}

double rows_loglik(const WeightedRows& rows, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  const Eigen::VectorXd eta = rows.x * theta;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < eta.size(); ++k) {
    sum += rows.w(k) * (rows.y(k) * eta(k) - softplus(eta(k)));
  }
  return sum;
}

void rows_curvature(const WeightedRows& rows, const Eigen::Ref<const Eigen::VectorXd>& theta,
                    Eigen::Ref<Eigen::VectorXd> grad, Eigen::Ref<Eigen::MatrixXd> info) {
  const Eigen::VectorXd eta = rows.x * theta;
  Eigen::VectorXd resid(eta.size());
  Eigen::VectorXd weight(eta.size());
  for (Eigen::Index k = 0; k < eta.size(); ++k) {
    const double mu = sigmoid(eta(k));
    resid(k) = rows.w(k) * (rows.y(k) - mu);
    weight(k) = rows.w(k) * mu * (1.0 - mu);
  }
  grad = rows.x.transpose() * resid;
  info = rows.x.transpose() * weight.asDiagonal() * rows.x;
}

}  // namespace

double transition_loglik(const Eigen::VectorXd& theta_row, const LikelihoodDesign& design,
                         int r) {
  const int p1 = design.formation_size();
  const int p2 = design.dissolution_size();
  return rows_loglik(design.formation(r), theta_row.head(p1)) +
         rows_loglik(design.dissolution(r), theta_row.tail(p2));
}

TransitionCurvature transition_curvature(const Eigen::VectorXd& theta_row,
                                         const LikelihoodDesign& design, int r) {
  const int p1 = design.formation_size();
  const int p2 = design.dissolution_size();
  TransitionCurvature out;
  out.gradient = Eigen::VectorXd::Zero(p1 + p2);
  out.information = Eigen::MatrixXd::Zero(p1 + p2, p1 + p2);
  rows_curvature(design.formation(r), theta_row.head(p1), out.gradient.head(p1),
                 out.information.topLeftCorner(p1, p1));
  rows_curvature(design.dissolution(r), theta_row.tail(p2), out.gradient.tail(p2),
                 out.information.bottomRightCorner(p2, p2));
  return out;
}

double pseudo_loglik(const ParamTrajectory& theta, const LikelihoodDesign& design) {
  check_theta(theta, design);
  double total = 0.0;
  for (int r = 0; r < design.tau(); ++r) {
    total += transition_loglik(theta.row(r).transpose(), design, r);
  }
  return total;
}

Eigen::MatrixXd gradient(const ParamTrajectory& theta, const LikelihoodDesign& design) {
  check_theta(theta, design);
  Eigen::MatrixXd g(design.tau(), design.p());
  for (int r = 0; r < design.tau(); ++r) {
    g.row(r) = transition_curvature(theta.row(r).transpose(), design, r).gradient.transpose();
  }
  return g;
}

std::vector<Eigen::MatrixXd> hessian_blocks(const ParamTrajectory& theta,
                                            const LikelihoodDesign& design) {
  check_theta(theta, design);
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(static_cast<std::size_t>(design.tau()));
  for (int r = 0; r < design.tau(); ++r) {
    blocks.push_back(transition_curvature(theta.row(r).transpose(), design, r).information);
  }
  return blocks;
}

double pseudo_loglik(const ParamTrajectory& theta, const ChangeStatBlocks& blocks) {
  return pseudo_loglik(theta, LikelihoodDesign::from_blocks(blocks));
}

Eigen::MatrixXd gradient(const ParamTrajectory& theta, const ChangeStatBlocks& blocks) {
  return gradient(theta, LikelihoodDesign::from_blocks(blocks));
}

std::vector<Eigen::MatrixXd> hessian_blocks(const ParamTrajectory& theta,
                                            const ChangeStatBlocks& blocks) {
  return hessian_blocks(theta, LikelihoodDesign::from_blocks(blocks));
}

}  // namespace netcpd
