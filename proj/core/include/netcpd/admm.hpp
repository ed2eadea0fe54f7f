#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netcpd/likelihood.hpp"
#include "netcpd/network.hpp"
#include "netcpd/statistics.hpp"

namespace netcpd {

struct SolverConfig {
  double lambda = 1.0;         // group fused lasso weight
  double alpha0 = 10.0;        // initial augmentation penalty
  int max_admm_iters = 200;    // A
  int newton_iters = 20;       // C
  int group_lasso_iters = 20;  // D: full block sweeps
  int active_sweeps = 2000;    // extra sweeps over nonzero blocks after each full sweep
  double admm_tol = 1e-7;      // relative change of the log pseudo-likelihood
  double newton_tol = 1e-3;    // ||theta_{c+1} - theta_c||_2
  double kkt_tol = 1e-6;

  void validate() const;
};

/// d_i = sqrt(tau / (i (tau - i))), i = 1..tau-1 (stored 0-based).
Eigen::VectorXd position_weights(int tau);

/// z = 1 gamma + X beta, where X(r, i) = d_i for r > i (1-based), else 0.
Eigen::MatrixXd assemble_fused(const Eigen::RowVectorXd& gamma, const Eigen::MatrixXd& beta,
                               const Eigen::VectorXd& d);

struct IterationRecord {
  double loglik = 0.0;
  double objective = 0.0;  // -l(theta) + lambda * sum_i ||beta_i||
  double r_primal = 0.0;
  double r_dual = 0.0;
  double alpha = 0.0;
  int newton_iterations = 0;
  int group_lasso_sweeps = 0;
  double kkt_residual = 0.0;
};

struct AdmmState {
  ParamTrajectory theta;    // tau x p
  Eigen::RowVectorXd gamma; // 1 x p
  Eigen::MatrixXd beta;     // (tau-1) x p
  Eigen::MatrixXd u;        // tau x p scaled dual
  Eigen::VectorXd d;        // position weights
  double alpha = 10.0;
  std::vector<IterationRecord> history;
  bool converged = false;
  int guard_events = 0;     // Newton steps halved because of non-finite values

  /// Zero initialization with alpha = alpha0.
  static AdmmState initial(int tau, int p, double alpha0);

  int tau() const { return static_cast<int>(theta.rows()); }
  int p() const { return static_cast<int>(theta.cols()); }
  Eigen::MatrixXd z() const { return assemble_fused(gamma, beta, d); }
};

struct ThetaUpdate {
  ParamTrajectory theta;
  int iterations = 0;
  int guard_events = 0;
};

/// Newton-Raphson minimization of -l(theta) + alpha/2 ||theta - z + u||_F^2,
/// solved as tau independent p x p systems.
ThetaUpdate theta_update(const AdmmState& state, const LikelihoodDesign& design,
                         const SolverConfig& cfg);

struct GroupLassoSolution {
  Eigen::RowVectorXd gamma;
  Eigen::MatrixXd beta;
  int sweeps = 0;
  double kkt_residual = 0.0;
};

/// Minimizes lambda * sum_i ||beta_i||_2 + alpha/2 ||target - 1 gamma - X beta||_F^2 by
/// block coordinate descent, warm-started from (gamma, beta). Each of the max_sweeps
/// passes updates every block once, then keeps sweeping the nonzero blocks alone (up to
/// active_sweeps times) until they are optimal; gamma is refreshed after every sweep.
/// Stops once the KKT residual is at most kkt_tol.
GroupLassoSolution solve_group_lasso(const Eigen::MatrixXd& target, const Eigen::VectorXd& d,
                                     double alpha, double lambda, Eigen::RowVectorXd gamma,
                                     Eigen::MatrixXd beta, int max_sweeps, double kkt_tol,
                                     int active_sweeps = 0);

/// Largest violation of the group lasso optimality conditions at (gamma, beta).
double group_lasso_kkt(const Eigen::MatrixXd& target, const Eigen::VectorXd& d, double alpha,
                       double lambda, const Eigen::RowVectorXd& gamma,
                       const Eigen::MatrixXd& beta);

double group_lasso_objective(const Eigen::MatrixXd& target, const Eigen::VectorXd& d,
                             double alpha, double lambda, const Eigen::RowVectorXd& gamma,
                             const Eigen::MatrixXd& beta);

/// (gamma, beta) update with target theta + u.
GroupLassoSolution group_lasso_update(const AdmmState& state, const SolverConfig& cfg);

/// u + theta - z.
Eigen::MatrixXd dual_update(const AdmmState& state);

/// Residual balancing: doubles alpha and halves u when the primal residual dominates
/// by 10x, the reverse when the dual residual does. alpha * u is preserved.
std::pair<double, Eigen::MatrixXd> alpha_schedule(double r_primal, double r_dual, double alpha,
                                                  const Eigen::MatrixXd& u);

/// Root mean square of a matrix's entries.
double rms(const Eigen::MatrixXd& m);

struct AdmmResult {
  ParamTrajectory theta_hat;  // fused estimate z = 1 gamma + X beta
  AdmmState state;
  int iterations = 0;
};

AdmmResult run_admm(const LikelihoodDesign& design, const SolverConfig& cfg);
AdmmResult run_admm(const NetworkSeries& series, const StatisticSpec& spec,
                    const SolverConfig& cfg);

}  // namespace netcpd
