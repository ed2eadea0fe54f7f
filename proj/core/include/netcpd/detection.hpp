#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "netcpd/admm.hpp"
#include "netcpd/likelihood.hpp"
#include "netcpd/network.hpp"
#include "netcpd/statistics.hpp"

namespace netcpd {

/// Which log pseudo-likelihood enters the BIC of a candidate lambda.
enum class BicFit {
  Refit,      // piecewise-constant refit on the detected segments
  Penalized,  // the fused estimate itself
};

struct DetectionConfig {
  double quantile_level = 0.9;
  int delta_spc = 5;
  int delta_end = 5;
  std::vector<double> lambda_grid = default_lambda_grid();
  BicFit bic_fit = BicFit::Refit;
  int threads = 1;  // lambda values fitted concurrently

  /// 10^b for b = -2..7.
  static std::vector<double> default_lambda_grid();

  void validate() const;
};

/// Standard normal quantile function (Acklam's rational approximation with one
/// Halley refinement step; absolute error below 1e-12 in double precision).
double normal_quantile(double p);

/// ||theta_{r+1} - theta_r||_2 for consecutive rows.
Eigen::VectorXd param_diffs(const ParamTrajectory& theta_hat);

struct Standardized {
  Eigen::VectorXd values;
  bool degenerate = false;  // zero spread: no evidence of change anywhere
};

/// (x - median(x)) / sd(x), sample standard deviation.
Standardized standardize(const Eigen::VectorXd& delta_theta);

/// mean(x) + z_level * sd(x).
double threshold(const Eigen::VectorXd& delta_zeta, double quantile_level);

struct Localization {
  std::vector<int> raw;    // every exceedance, as 1-based times
  std::vector<int> final;  // after cluster pruning and end trimming
};

/// delta_zeta[k] (0-based) compares transitions into t = k+2 and t = k+3; an
/// exceedance is reported at t = k+3, the first time of the new regime.
Localization localize(const Eigen::VectorXd& delta_zeta, double eps_thr,
                      const DetectionConfig& cfg, int T);
Localization localize(const Eigen::VectorXd& delta_zeta, const DetectionConfig& cfg, int T);

/// Number of dyads that count toward the network size in the BIC penalty.
double network_size(int n, bool directed);

double bic(const ParamTrajectory& theta_hat, const LikelihoodDesign& design, int K, int n,
           bool directed, int T);
double bic(const ParamTrajectory& theta_hat, const ChangeStatBlocks& blocks, int K, int n,
           bool directed, int T);

/// Maximizes the log pseudo-likelihood with parameters held constant between the given
/// change points (1-based times). Row r of the result governs the transition into r + 2.
ParamTrajectory segment_refit(const LikelihoodDesign& design, const std::vector<int>& change_points);

struct LambdaFit {
  double lambda = 0.0;
  ParamTrajectory theta_hat;
  Eigen::VectorXd delta_theta;
  Eigen::VectorXd delta_zeta;
  double threshold = 0.0;
  bool degenerate = false;
  std::vector<int> raw_points;
  std::vector<int> change_points;
  double loglik = 0.0;      // at theta_hat
  double bic_loglik = 0.0;  // the value scored by the BIC
  double bic = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct DetectionResult {
  int T = 0;
  int node_count = 0;
  bool directed = true;
  std::vector<LambdaFit> fits;  // in grid order
  std::size_t selected = 0;

  const LambdaFit& best() const { return fits.at(selected); }
  bool any_converged() const;
};

DetectionResult detect_change_points(const NetworkSeries& series, const StatisticSpec& spec,
                                     const SolverConfig& solver_cfg,
                                     const DetectionConfig& det_cfg);

}  // namespace netcpd
