#include "netcpd/cli/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "netcpd/detection.hpp"
#include "netcpd/simulation.hpp"

namespace netcpd::cli {

SimulatedSeries simulate_scenario(const RunManifest& m, std::uint64_t seed) {
  if (m.scenario == "stergm") {
    StergmScenario sc = StergmScenario::preset(m.psim, m.n, m.T, seed);
    sc.change_points = m.change_points;
    sc.mh_sweeps = m.mh_sweeps;
    return {simulate_stergm_series(sc), sc.change_points,
            m.spec_given ? m.spec : sc.spec.to_string()};
  }
  SbmScenario sc;
  sc.n = m.n;
  sc.T = m.T;
  sc.rho = m.rho;
  sc.seed = seed;
  if (m.scenario == "constant") {
    sc.change_points.clear();
    sc.T = 2;
    const Network first = simulate_sbm_series(sc).at(0);
    return {NetworkSeries(std::vector<Network>(static_cast<std::size_t>(m.T), first)), {},
            m.spec};
  }
  sc.change_points = m.change_points;
  return {simulate_sbm_series(sc), sc.change_points, m.spec};
}

namespace {

ReplicateRow run_replicate(const RunManifest& m, int r, int detection_threads) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  ReplicateRow row;
  row.replicate = r + 1;
  row.seed = m.seed + static_cast<std::uint64_t>(r);
  const SimulatedSeries sim = simulate_scenario(m, row.seed);
  DetectionConfig det = m.detection;
  det.delta_end = m.effective_delta_end();
  det.threads = detection_threads;
  const DetectionResult res =
      detect_change_points(sim.series, StatisticSpec::parse(sim.spec), m.solver, det);
  const int T = static_cast<int>(sim.series.length());
  row.detected = res.best().change_points;
  row.selected_lambda = res.best().lambda;
  row.K_truth = static_cast<int>(sim.truth.size());
  row.metrics = evaluate_points(ChangePointSet(row.detected, T), ChangePointSet(sim.truth, T));
  row.seconds = std::chrono::duration<double>(clock::now() - start).count();
  return row;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

BenchResult run_bench(const RunManifest& m) {
  const int R = m.replicates;
  const int threads = std::max(1, m.detection.threads);
  BenchResult out;
  out.rows.resize(static_cast<std::size_t>(R));

  if (threads == 1 || R == 1) {
    for (int r = 0; r < R; ++r) out.rows[static_cast<std::size_t>(r)] = run_replicate(m, r, threads);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min(threads, R); ++w) {
      pool.emplace_back([&] {
        for (int r = next++; r < R; r = next++) {
          try {
            out.rows[static_cast<std::size_t>(r)] = run_replicate(m, r, 1);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (const ReplicateRow& row : out.rows) {
    out.mean_abs_error += row.metrics.abs_error;
    out.mean.hausdorff_detected_truth += row.metrics.hausdorff_detected_truth;
    out.mean.hausdorff_truth_detected += row.metrics.hausdorff_truth_detected;
    out.mean.covering += row.metrics.covering;
    out.total_seconds += row.seconds;
  }
  out.mean_abs_error /= R;
  out.mean.hausdorff_detected_truth /= R;
  out.mean.hausdorff_truth_detected /= R;
  out.mean.covering /= R;
  return out;
}

std::string bench_csv(const BenchResult& r) {
  std::ostringstream os;
  os << "replicate,seed,K_detected,K_truth,abs_error,d_detected_truth,d_truth_detected,"
        "covering,selected_lambda,change_points\n";
  for (const ReplicateRow& row : r.rows) {
    os << row.replicate << ',' << row.seed << ',' << row.detected.size() << ',' << row.K_truth
       << ',' << row.metrics.abs_error << ','
       << format_number(row.metrics.hausdorff_detected_truth) << ','
       << format_number(row.metrics.hausdorff_truth_detected) << ','
       << format_number(row.metrics.covering) << ',' << format_number(row.selected_lambda)
       << ',' << join(row.detected) << '\n';
  }
  os << "mean,,,," << format_number(r.mean_abs_error) << ','
     << format_number(r.mean.hausdorff_detected_truth) << ','
     << format_number(r.mean.hausdorff_truth_detected) << ','
     << format_number(r.mean.covering) << ",,\n";
  return os.str();
}

std::string timing_csv(const BenchResult& r) {
  std::ostringstream os;
  os << "replicate,seconds\n";
  for (const ReplicateRow& row : r.rows) {
    os << row.replicate << ',' << format_number(row.seconds) << '\n';
  }
  os << "mean," << format_number(r.total_seconds / static_cast<double>(r.rows.size())) << '\n';
  return os.str();
}

}  // namespace netcpd::cli
