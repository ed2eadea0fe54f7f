#include "netcpd/detection.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "netcpd/error.hpp"

namespace netcpd {

std::vector<double> DetectionConfig::default_lambda_grid() {
  std::vector<double> grid;
  for (int b = -2; b <= 7; ++b) grid.push_back(std::pow(10.0, b));
  return grid;
}

void DetectionConfig::validate() const {
  if (!(quantile_level > 0.0 && quantile_level < 1.0)) {
    throw InputError("quantile level must be in (0, 1)");
  }
  if (delta_spc < 1 || delta_end < 1) throw InputError("delta_spc and delta_end must be positive");
  if (lambda_grid.empty()) throw InputError("lambda grid is empty");
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] > 0.0) || !std::isfinite(lambda_grid[k])) {
      throw InputError("lambda grid values must be positive");
    }
    if (k > 0 && !(lambda_grid[k] > lambda_grid[k - 1])) {
      throw InputError("lambda grid must be strictly increasing");
    }
  }
  if (threads < 1) throw InputError("threads must be positive");
}

Eigen::VectorXd param_diffs(const ParamTrajectory& theta_hat) {
  if (theta_hat.rows() < 2) throw InputError("param_diffs: need at least two rows");
  Eigen::VectorXd out(theta_hat.rows() - 1);
  for (Eigen::Index r = 0; r + 1 < theta_hat.rows(); ++r) {
    out(r) = (theta_hat.row(r + 1) - theta_hat.row(r)).norm();
  }
  return out;
}

namespace {

double median(Eigen::VectorXd v) {
  std::sort(v.begin(), v.end());
  const Eigen::Index n = v.size();
  return n % 2 == 1 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

double sample_sd(const Eigen::VectorXd& v) {
  if (v.size() < 2) return 0.0;
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

}  // namespace

Standardized standardize(const Eigen::VectorXd& delta_theta) {
  if (delta_theta.size() < 2) throw InputError("standardize: need at least two differences");
  if (!delta_theta.allFinite()) throw NumericalError("standardize: non-finite differences");
  Standardized out;
  const double sd = sample_sd(delta_theta);
  // Rounding noise on an exactly flat trajectory should not count as spread.
  const double scale = std::max(1.0, delta_theta.cwiseAbs().maxCoeff());
  if (!(sd > 1e-12 * scale)) {
    out.values = Eigen::VectorXd::Zero(delta_theta.size());
    out.degenerate = true;
    return out;
  }
  out.values = (delta_theta.array() - median(delta_theta)) / sd;
  return out;
}

double threshold(const Eigen::VectorXd& delta_zeta, double quantile_level) {
  if (delta_zeta.size() < 2) throw InputError("threshold: need at least two values");
  return delta_zeta.mean() + normal_quantile(quantile_level) * sample_sd(delta_zeta);
}

Localization localize(const Eigen::VectorXd& delta_zeta, double eps_thr,
                      const DetectionConfig& cfg, int T) {
  Localization out;
  std::vector<double> score;
  for (Eigen::Index k = 0; k < delta_zeta.size(); ++k) {
    if (delta_zeta(k) > eps_thr) {
      out.raw.push_back(static_cast<int>(k) + 3);
      score.push_back(delta_zeta(k));
    }
  }
  std::vector<int> kept;
  std::vector<double> kept_score;
  for (std::size_t m = 0; m < out.raw.size(); ++m) {
    if (!kept.empty() && out.raw[m] - kept.back() < cfg.delta_spc) {
      if (score[m] > kept_score.back()) {
        kept.back() = out.raw[m];
        kept_score.back() = score[m];
      }
      continue;
    }
    kept.push_back(out.raw[m]);
    kept_score.push_back(score[m]);
  }
  for (int t : kept) {
    if (t > cfg.delta_end && t <= T - cfg.delta_end) out.final.push_back(t);
  }
  return out;
}

Localization localize(const Eigen::VectorXd& delta_zeta, const DetectionConfig& cfg, int T) {
  return localize(delta_zeta, threshold(delta_zeta, cfg.quantile_level), cfg, T);
}

double network_size(int n, bool directed) {
  const double nn = static_cast<double>(n) * (n - 1);
  return directed ? nn : nn / 2.0;
}

namespace {

double bic_from_loglik(double loglik, int p, int K, int n, bool directed, int T) {
  if (K < 0) throw InputError("bic: K must be non-negative");
  return -2.0 * loglik +
         std::log(static_cast<double>(T) * network_size(n, directed)) * p * (K + 1);
}

}  // namespace

double bic(const ParamTrajectory& theta_hat, const LikelihoodDesign& design, int K, int n,
           bool directed, int T) {
  return bic_from_loglik(pseudo_loglik(theta_hat, design), design.p(), K, n, directed, T);
}

double bic(const ParamTrajectory& theta_hat, const ChangeStatBlocks& blocks, int K, int n,
           bool directed, int T) {
  return bic_from_loglik(pseudo_loglik(theta_hat, blocks), blocks.p(), K, n, directed, T);
}

ParamTrajectory segment_refit(const LikelihoodDesign& design,
                              const std::vector<int>& change_points) {
  const int tau = design.tau();
  const int p = design.p();
  std::vector<int> starts{0};
  for (int c : change_points) {
    const int row = c - 2;
    if (row <= starts.back() || row >= tau) {
      throw InputError("segment_refit: change points must be increasing within (2, T]");
    }
    starts.push_back(row);
  }
  starts.push_back(tau);

  ParamTrajectory theta = ParamTrajectory::Zero(tau, p);
  for (std::size_t s = 0; s + 1 < starts.size(); ++s) {
    const int lo = starts[s];
    const int hi = starts[s + 1];
    auto loglik = [&](const Eigen::VectorXd& v) {
      double total = 0.0;
      for (int r = lo; r < hi; ++r) total += transition_loglik(v, design, r);
      return total;
    };
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
    double current = loglik(x);
    for (int it = 0; it < 100; ++it) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(p);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(p, p);
      for (int r = lo; r < hi; ++r) {
        const TransitionCurvature c = transition_curvature(x, design, r);
        g += c.gradient;
        h += c.information;
      }
      h.diagonal().array() += 1e-10 * (1.0 + h.trace() / p);
      const Eigen::VectorXd step = h.ldlt().solve(g);
      if (!step.allFinite()) break;
      // Backtrack: the pooled problem is concave but full Newton steps can overshoot.
      double t = 1.0;
      Eigen::VectorXd next = x + step;
      double value = loglik(next);
      while (value < current && t > 1e-6) {
        t *= 0.5;
        next = x + t * step;
        value = loglik(next);
      }
      if (value < current) break;
      const double gain = value - current;
      x = next;
      current = value;
      if (gain <= 1e-12 * std::max(1.0, std::abs(current))) break;
    }
    for (int r = lo; r < hi; ++r) theta.row(r) = x.transpose();
  }
  return theta;
}

bool DetectionResult::any_converged() const {
  return std::any_of(fits.begin(), fits.end(), [](const LambdaFit& f) { return f.converged; });
}

namespace {

LambdaFit fit_one(const LikelihoodDesign& design, double lambda, const SolverConfig& solver_cfg,
                  const DetectionConfig& det_cfg, int n, bool directed, int T) {
  SolverConfig cfg = solver_cfg;
  cfg.lambda = lambda;
  AdmmResult res = run_admm(design, cfg);

  LambdaFit fit;
  fit.lambda = lambda;
  fit.theta_hat = std::move(res.theta_hat);
  fit.converged = res.state.converged;
  fit.iterations = res.iterations;
  fit.delta_theta = param_diffs(fit.theta_hat);
  const Standardized st = standardize(fit.delta_theta);
  fit.delta_zeta = st.values;
  fit.degenerate = st.degenerate;
  if (st.degenerate) {
    fit.threshold = std::numeric_limits<double>::infinity();
  } else {
    fit.threshold = threshold(fit.delta_zeta, det_cfg.quantile_level);
    Localization loc = localize(fit.delta_zeta, fit.threshold, det_cfg, T);
    fit.raw_points = std::move(loc.raw);
    fit.change_points = std::move(loc.final);
  }
  fit.loglik = pseudo_loglik(fit.theta_hat, design);
  fit.bic_loglik = det_cfg.bic_fit == BicFit::Refit
                       ? pseudo_loglik(segment_refit(design, fit.change_points), design)
                       : fit.loglik;
  fit.bic = bic_from_loglik(fit.bic_loglik, design.p(),
                            static_cast<int>(fit.change_points.size()), n, directed, T);
  return fit;
}

}  // namespace

DetectionResult detect_change_points(const NetworkSeries& series, const StatisticSpec& spec,
                                     const SolverConfig& solver_cfg,
                                     const DetectionConfig& det_cfg) {
  det_cfg.validate();
  solver_cfg.validate();
  if (series.length() < 3) throw InputError("detection needs at least 3 snapshots");
  spec.validate(series.directed(), series.attributes().has_value());

  const LikelihoodDesign design = LikelihoodDesign::from_series(series, spec);
  DetectionResult out;
  out.T = static_cast<int>(series.length());
  out.node_count = series.node_count();
  out.directed = series.directed();
  const std::size_t m = det_cfg.lambda_grid.size();
  out.fits.resize(m);

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(det_cfg.threads), m);
  if (workers <= 1) {
    for (std::size_t k = 0; k < m; ++k) {
      out.fits[k] = fit_one(design, det_cfg.lambda_grid[k], solver_cfg, det_cfg,
                            out.node_count, out.directed, out.T);
    }
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::exception_ptr failure;
    auto work = [&] {
      for (;;) {
        std::size_t k;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= m || failure) return;
          k = next++;
        }
        try {
          out.fits[k] = fit_one(design, det_cfg.lambda_grid[k], solver_cfg, det_cfg,
                                out.node_count, out.directed, out.T);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Strict comparison in grid order keeps the smaller lambda on ties.
  for (std::size_t k = 1; k < m; ++k) {
    if (out.fits[k].bic < out.fits[out.selected].bic) out.selected = k;
  }
  return out;
}

}  // namespace netcpd
