#include "netcpd/admm.hpp"

#include <cmath>
#include <string>

#include "netcpd/error.hpp"

namespace netcpd {

void SolverConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be >= 0");
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw InputError("alpha0 must be positive");
  if (max_admm_iters < 1 || newton_iters < 1 || group_lasso_iters < 1) {
    throw InputError("iteration counts must be positive");
  }
  if (active_sweeps < 0) throw InputError("active_sweeps must be non-negative");
  if (!(admm_tol > 0.0) || !(newton_tol > 0.0) || !(kkt_tol > 0.0)) {
    throw InputError("tolerances must be positive");
  }
}

Eigen::VectorXd position_weights(int tau) {
  if (tau < 2) throw InputError("position_weights: tau must be >= 2, got " + std::to_string(tau));
  Eigen::VectorXd d(tau - 1);
  for (int i = 1; i < tau; ++i) {
    d(i - 1) = std::sqrt(static_cast<double>(tau) / (static_cast<double>(i) * (tau - i)));
  }
  return d;
}

Eigen::MatrixXd assemble_fused(const Eigen::RowVectorXd& gamma, const Eigen::MatrixXd& beta,
                               const Eigen::VectorXd& d) {
  const Eigen::Index tau = beta.rows() + 1;
  Eigen::MatrixXd z(tau, gamma.cols());
  z.row(0) = gamma;
  for (Eigen::Index r = 1; r < tau; ++r) z.row(r) = z.row(r - 1) + d(r - 1) * beta.row(r - 1);
  return z;
}

AdmmState AdmmState::initial(int tau, int p, double alpha0) {
  AdmmState s;
  s.theta = Eigen::MatrixXd::Zero(tau, p);
  s.gamma = Eigen::RowVectorXd::Zero(p);
  s.beta = Eigen::MatrixXd::Zero(tau - 1, p);
  s.u = Eigen::MatrixXd::Zero(tau, p);
  s.d = position_weights(tau);
  s.alpha = alpha0;
  return s;
}

double rms(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return std::sqrt(m.squaredNorm() / static_cast<double>(m.size()));
}

namespace {

Eigen::VectorXd solve_regularized(Eigen::MatrixXd a, const Eigen::VectorXd& rhs) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-8 * (1.0 + a.trace() / static_cast<double>(a.rows()));
    a.diagonal().array() += jitter;
    llt.compute(a);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("Newton system is not positive definite after jitter");
    }
  }
  return llt.solve(rhs);
}

}  // namespace

ThetaUpdate theta_update(const AdmmState& state, const LikelihoodDesign& design,
                         const SolverConfig& cfg) {
  const int tau = state.tau();
  const int p = state.p();
  if (design.tau() != tau || design.p() != p) {
    throw InputError("theta_update: state and design shapes disagree");
  }
  const Eigen::MatrixXd target = state.z() - state.u;
  const double alpha = state.alpha;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(p, p);

  ThetaUpdate out;
  out.theta = state.theta;
  Eigen::MatrixXd step(tau, p);
  for (int c = 0; c < cfg.newton_iters; ++c) {
    for (int r = 0; r < tau; ++r) {
      const Eigen::VectorXd row = out.theta.row(r).transpose();
      const TransitionCurvature curv = transition_curvature(row, design, r);
      const Eigen::VectorXd rhs =
          -curv.gradient + alpha * (row - target.row(r).transpose());
      step.row(r) = solve_regularized(curv.information + alpha * identity, rhs).transpose();
    }
    Eigen::MatrixXd next = out.theta - step;
    if (!next.allFinite()) {
      ++out.guard_events;
      next = out.theta - 0.5 * step;
      if (!next.allFinite()) throw NumericalError("Newton step produced non-finite parameters");
    }
    const double moved = (next - out.theta).norm();
    out.theta = std::move(next);
    out.iterations = c + 1;
    if (moved < cfg.newton_tol) break;
  }
  return out;
}

namespace {

// target - 1 gamma - X beta
Eigen::MatrixXd group_residual(const Eigen::MatrixXd& target, const Eigen::VectorXd& d,
                               const Eigen::RowVectorXd& gamma, const Eigen::MatrixXd& beta) {
  return target - assemble_fused(gamma, beta, d);
}

// Rows b..tau-1 summed, for every b; extra trailing zero row.
Eigen::MatrixXd suffix_sums(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m.rows() + 1, m.cols());
  for (Eigen::Index r = m.rows() - 1; r >= 0; --r) s.row(r) = s.row(r + 1) + m.row(r);
  return s;
}

void check_group_inputs(const Eigen::MatrixXd& target, const Eigen::VectorXd& d, double alpha,
                        double lambda, const Eigen::RowVectorXd& gamma,
                        const Eigen::MatrixXd& beta) {
  const Eigen::Index tau = target.rows();
  if (tau < 2 || d.size() != tau - 1 || beta.rows() != tau - 1 || beta.cols() != target.cols() ||
      gamma.cols() != target.cols()) {
    throw InputError("group lasso: inconsistent shapes");
  }
  if (!target.allFinite() || !beta.allFinite() || !gamma.allFinite() || !std::isfinite(alpha) ||
      !std::isfinite(lambda)) {
    throw NumericalError("group lasso: non-finite inputs");
  }
  if (!(alpha > 0.0) || lambda < 0.0) throw InputError("group lasso: need alpha > 0, lambda >= 0");
}

}  // namespace

namespace {

// One coordinate pass over the blocks flagged in `which` (every block when empty),
// followed by the exact gamma refresh. `resid` is kept equal to target - z.
void bcd_sweep(const Eigen::VectorXd& d, double alpha, double lambda, Eigen::RowVectorXd& gamma,
               Eigen::MatrixXd& beta, Eigen::MatrixXd& resid, const std::vector<char>& which) {
  const Eigen::Index tau = resid.rows();
  const Eigen::Index p = resid.cols();
  const Eigen::MatrixXd suffix = suffix_sums(resid);
  // Updating block k shifts rows > k of the residual by -d_k * delta_k, so the
  // suffix sum seen by a later block b loses (tau - b - 1) times the running total.
  Eigen::RowVectorXd shift = Eigen::RowVectorXd::Zero(p);
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(tau - 1, p);
  for (Eigen::Index b = 0; b < tau - 1; ++b) {
    if (!which.empty() && !which[static_cast<std::size_t>(b)]) continue;
    const double rows_below = static_cast<double>(tau - b - 1);
    const double xtx = d(b) * d(b) * rows_below;
    const Eigen::RowVectorXd xtr = d(b) * (suffix.row(b + 1) - rows_below * shift);
    const Eigen::RowVectorXd s = alpha * (xtr + xtx * beta.row(b));
    const double ns = s.norm();
    Eigen::RowVectorXd next = Eigen::RowVectorXd::Zero(p);
    if (ns > lambda) next = (1.0 - lambda / ns) / (alpha * xtx) * s;
    delta.row(b) = d(b) * (next - beta.row(b));
    shift += delta.row(b);
    beta.row(b) = next;
  }
  Eigen::RowVectorXd moved = Eigen::RowVectorXd::Zero(p);
  for (Eigen::Index r = 1; r < tau; ++r) {
    moved += delta.row(r - 1);
    resid.row(r) -= moved;
  }
  const Eigen::RowVectorXd mean_resid = resid.colwise().mean();
  gamma += mean_resid;
  resid.rowwise() -= mean_resid;
}

double kkt_from_residual(const Eigen::MatrixXd& resid, const Eigen::VectorXd& d, double alpha,
                         double lambda, const Eigen::MatrixXd& beta, bool nonzero_only) {
  const Eigen::MatrixXd suffix = suffix_sums(resid);
  double worst = alpha * suffix.row(0).norm();  // stationarity in gamma
  for (Eigen::Index b = 0; b < beta.rows(); ++b) {
    const double nb = beta.row(b).norm();
    if (nonzero_only && nb == 0.0) continue;
    const Eigen::RowVectorXd g = alpha * d(b) * suffix.row(b + 1);
    const double violation =
        nb > 0.0 ? (lambda * beta.row(b) / nb - g).norm() : std::max(0.0, g.norm() - lambda);
    worst = std::max(worst, violation);
  }
  return worst;
}

}  // namespace

GroupLassoSolution solve_group_lasso(const Eigen::MatrixXd& target, const Eigen::VectorXd& d,
                                     double alpha, double lambda, Eigen::RowVectorXd gamma,
                                     Eigen::MatrixXd beta, int max_sweeps, double kkt_tol,
                                     int active_sweeps) {
  check_group_inputs(target, d, alpha, lambda, gamma, beta);
  if (max_sweeps < 1 || active_sweeps < 0) throw InputError("group lasso: invalid sweep counts");

  GroupLassoSolution out;
  Eigen::MatrixXd resid = group_residual(target, d, gamma, beta);
  const std::vector<char> all;
  std::vector<char> active(static_cast<std::size_t>(beta.rows()));
  for (int pass = 0; pass < max_sweeps; ++pass) {
    bcd_sweep(d, alpha, lambda, gamma, beta, resid, all);
    ++out.sweeps;
    bool any = false;
    for (Eigen::Index b = 0; b < beta.rows(); ++b) {
      active[static_cast<std::size_t>(b)] = beta.row(b).squaredNorm() > 0.0;
      any = any || active[static_cast<std::size_t>(b)];
    }
    for (int k = 0; any && k < active_sweeps; ++k) {
      if (kkt_from_residual(resid, d, alpha, lambda, beta, true) <= kkt_tol) break;
      bcd_sweep(d, alpha, lambda, gamma, beta, resid, active);
      ++out.sweeps;
    }
    // Recompute from scratch so rounding in the running residual cannot accumulate.
    resid = group_residual(target, d, gamma, beta);
    out.kkt_residual = kkt_from_residual(resid, d, alpha, lambda, beta, false);
    if (out.kkt_residual <= kkt_tol) break;
  }
  out.gamma = std::move(gamma);
  out.beta = std::move(beta);
  return out;
}

double group_lasso_kkt(const Eigen::MatrixXd& target, const Eigen::VectorXd& d, double alpha,
                       double lambda, const Eigen::RowVectorXd& gamma,
                       const Eigen::MatrixXd& beta) {
  check_group_inputs(target, d, alpha, lambda, gamma, beta);
  return kkt_from_residual(group_residual(target, d, gamma, beta), d, alpha, lambda, beta, false);
}

double group_lasso_objective(const Eigen::MatrixXd& target, const Eigen::VectorXd& d,
                             double alpha, double lambda, const Eigen::RowVectorXd& gamma,
                             const Eigen::MatrixXd& beta) {
  double penalty = 0.0;
  for (Eigen::Index b = 0; b < beta.rows(); ++b) penalty += beta.row(b).norm();
  return lambda * penalty + 0.5 * alpha * group_residual(target, d, gamma, beta).squaredNorm();
}

GroupLassoSolution group_lasso_update(const AdmmState& state, const SolverConfig& cfg) {
  return solve_group_lasso(state.theta + state.u, state.d, state.alpha, cfg.lambda, state.gamma,
                           state.beta, cfg.group_lasso_iters, cfg.kkt_tol, cfg.active_sweeps);
}

Eigen::MatrixXd dual_update(const AdmmState& state) {
  const Eigen::MatrixXd z = state.z();
  if (z.rows() != state.theta.rows() || z.cols() != state.theta.cols() ||
      state.u.rows() != z.rows() || state.u.cols() != z.cols()) {
    throw InputError("dual_update: shape mismatch");
  }
  return state.u + state.theta - z;
}

std::pair<double, Eigen::MatrixXd> alpha_schedule(double r_primal, double r_dual, double alpha,
                                                  const Eigen::MatrixXd& u) {
  if (r_primal > 10.0 * r_dual) return {2.0 * alpha, 0.5 * u};
  if (r_dual > 10.0 * r_primal) return {0.5 * alpha, 2.0 * u};
  return {alpha, u};
}

AdmmResult run_admm(const LikelihoodDesign& design, const SolverConfig& cfg) {
  cfg.validate();
  if (design.tau() < 2) {
    throw InputError("change point estimation needs at least 3 snapshots (2 transitions)");
  }
  AdmmResult out;
  AdmmState& state = out.state;
  state = AdmmState::initial(design.tau(), design.p(), cfg.alpha0);

  double loglik_prev = pseudo_loglik(state.theta, design);
  for (int a = 0; a < cfg.max_admm_iters; ++a) {
    const ThetaUpdate tu = theta_update(state, design, cfg);
    state.theta = tu.theta;
    state.guard_events += tu.guard_events;

    const Eigen::MatrixXd z_old = state.z();
    const GroupLassoSolution gl = group_lasso_update(state, cfg);
    state.gamma = gl.gamma;
    state.beta = gl.beta;
    const Eigen::MatrixXd z_new = state.z();
    state.u = state.u + state.theta - z_new;

    IterationRecord rec;
    rec.loglik = pseudo_loglik(state.theta, design);
    double penalty = 0.0;
    for (Eigen::Index b = 0; b < state.beta.rows(); ++b) penalty += state.beta.row(b).norm();
    rec.objective = -rec.loglik + cfg.lambda * penalty;
    rec.r_primal = rms(state.theta - z_new);
    rec.r_dual = rms(z_new - z_old);
    rec.alpha = state.alpha;
    rec.newton_iterations = tu.iterations;
    rec.group_lasso_sweeps = gl.sweeps;
    rec.kkt_residual = gl.kkt_residual;
    state.history.push_back(rec);

    auto [alpha, u] = alpha_schedule(rec.r_primal, rec.r_dual, state.alpha, state.u);
    state.alpha = alpha;
    state.u = std::move(u);

    out.iterations = a + 1;
    const double change = loglik_prev == 0.0
                              ? 0.0
                              : std::abs((rec.loglik - loglik_prev) / loglik_prev);
    loglik_prev = rec.loglik;
    if (change <= cfg.admm_tol) {
      state.converged = true;
      break;
    }
  }
  out.theta_hat = state.z();
  return out;
}

AdmmResult run_admm(const NetworkSeries& series, const StatisticSpec& spec,
                    const SolverConfig& cfg) {
  if (series.length() < 3) {
    throw InputError("change point estimation needs at least 3 snapshots");
  }
  return run_admm(LikelihoodDesign::from_series(series, spec), cfg);
}

}  // namespace netcpd
