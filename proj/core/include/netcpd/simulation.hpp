#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "netcpd/network.hpp"
#include "netcpd/statistics.hpp"

namespace netcpd {

/// SplitMix64 finalizer; the building block of every random stream here.
std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based stream key for (seed, a, b): splitmix64 chained over the three words.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

/// Uniform in [0, 1) with 53 random bits, a pure function of its arguments.
double counter_uniform(std::uint64_t seed, std::uint64_t t, std::uint64_t dyad);

/// Index of the segment containing time t (0 before the first change point).
int segment_of(int t, const std::vector<int>& change_points);

struct SbmScenario {
  int n = 50;
  int T = 100;
  std::vector<int> change_points{26, 51, 76};
  double rho = 0.5;
  int block_count = 3;
  double p_within = 0.5;   // regime P, segments 0, 2, ...
  double p_between = 0.3;
  double q_within = 0.45;  // regime Q, segments 1, 3, ...
  double q_between = 0.2;
  std::uint64_t seed = 1;

  void validate() const;
  int block_of(NodeId i) const { return i * block_count / n; }
  /// Edge probability E^t_ij.
  double edge_probability(int t, NodeId i, NodeId j) const;
};

/// Directed SBM series with Markov persistence rho between consecutive snapshots.
NetworkSeries simulate_sbm_series(const SbmScenario& sc);

struct StergmScenario {
  int n = 50;
  int T = 100;
  bool directed = true;
  std::vector<int> change_points{26, 51, 76};
  std::uint64_t seed = 1;
  StatisticSpec spec;
  /// Parameter vectors (formation terms, then dissolution terms); segment s uses
  /// regimes[s % regimes.size()].
  std::vector<Eigen::VectorXd> regimes;
  std::optional<NodalAttributes> attributes;
  int mh_sweeps = 10;
  double initial_density = 0.1;

  void validate() const;

  /// The p_sim = 4, 6, 8 configurations: edges, mutual[, triangles][, homophily] in
  /// both models with two alternating regimes.
  static StergmScenario preset(int p_sim, int n = 50, int T = 100, std::uint64_t seed = 1);
};

enum class Constraint {
  Superset,  // only edges absent from the anchor may toggle (formation)
  Subset,    // only edges present in the anchor may toggle (dissolution)
};

/// Metropolis single-dyad toggles from the anchor, targeting
/// P(y) proportional to exp(theta . g(y)) restricted by the constraint.
/// Runs sweeps * (number of free dyads) proposals.
Network sample_constrained_ergm(const Network& anchor, Constraint constraint,
                                const std::vector<Term>& terms, const Eigen::VectorXd& theta,
                                const NodalAttributes* attributes, int sweeps,
                                std::mt19937_64& engine);

NetworkSeries simulate_stergm_series(const StergmScenario& sc);

}  // namespace netcpd
