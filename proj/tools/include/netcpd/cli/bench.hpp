#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netcpd/cli/manifest.hpp"
#include "netcpd/cli/report.hpp"
#include "netcpd/network.hpp"

namespace netcpd::cli {

struct SimulatedSeries {
  NetworkSeries series;
  std::vector<int> truth;
  std::string spec;  // statistic spec used for detection
};

/// Draws one series for the manifest's scenario with the given seed.
SimulatedSeries simulate_scenario(const RunManifest& m, std::uint64_t seed);

struct ReplicateRow {
  int replicate = 0;
  std::uint64_t seed = 0;
  std::vector<int> detected;
  int K_truth = 0;
  double selected_lambda = 0.0;
  MetricValues metrics;
  double seconds = 0.0;
};

struct BenchResult {
  std::vector<ReplicateRow> rows;
  MetricValues mean;
  double mean_abs_error = 0.0;
  double total_seconds = 0.0;
};

/// simulate -> detect -> evaluate for seeds seed, seed + 1, ..., seed + replicates - 1.
/// With threads > 1 the replicates run concurrently.
BenchResult run_bench(const RunManifest& m);

/// Per-replicate rows followed by a "mean" row. Runtimes are kept out so the table is
/// reproducible byte for byte.
std::string bench_csv(const BenchResult& r);
std::string timing_csv(const BenchResult& r);

}  // namespace netcpd::cli
