#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "netcpd/network.hpp"

namespace netcpd {

enum class TermKind { Edges, Mutual, Triangles, Homophily, Isolates };

/// One network-statistic term. Homophily refers to the series' nodal attribute.
struct Term {
  TermKind kind = TermKind::Edges;

  bool operator==(const Term&) const = default;
};

std::string_view term_name(TermKind kind);

/// Parses "edges", "mutual", "triangles"/"triangle", "homophily"/"nodematch", "isolates".
Term parse_term(std::string_view name);

struct StatisticSpec {
  std::vector<Term> formation;
  std::vector<Term> dissolution;

  int formation_size() const { return static_cast<int>(formation.size()); }
  int dissolution_size() const { return static_cast<int>(dissolution.size()); }
  int size() const { return formation_size() + dissolution_size(); }

  /// Parses "form=edges,mutual;diss=edges,isolates".
  static StatisticSpec parse(std::string_view text);
  std::string to_string() const;

  /// Throws InputError when a term is invalid for the network type or attributes are missing.
  void validate(bool directed, bool has_attributes) const;

  bool operator==(const StatisticSpec&) const = default;
};

/// g(y) for a single term.
double network_statistic(const Network& y, Term term, const NodalAttributes* attributes);

/// g(y with (i,j) = 1) - g(y with (i,j) = 0), computed from local counts in O(n).
double change_statistic(const Network& y, NodeId i, NodeId j, Term term,
                        const NodalAttributes* attributes);

/// Change statistics of one model (formation or dissolution) for a single transition.
struct ModelBlock {
  Eigen::MatrixXd change_stats;         // E x p_m, rows in canonical dyad order
  std::vector<std::uint8_t> response;   // bits of y^{+,t} or y^{-,t}
};

struct TransitionBlock {
  ModelBlock formation;
  ModelBlock dissolution;
};

/// Per-transition change-statistic blocks; transitions[r] covers t = r + 2 (1-based time).
struct ChangeStatBlocks {
  int node_count = 0;
  bool directed = true;
  std::size_t dyads = 0;
  int formation_size = 0;
  int dissolution_size = 0;
  std::vector<TransitionBlock> transitions;

  int tau() const { return static_cast<int>(transitions.size()); }
  int p() const { return formation_size + dissolution_size; }
};

/// Blocks for the single transition previous -> current.
TransitionBlock build_transition_block(const Network& previous, const Network& current,
                                       const StatisticSpec& spec,
                                       const NodalAttributes* attributes);

ChangeStatBlocks build_change_stat_blocks(const NetworkSeries& series, const StatisticSpec& spec);

}  // namespace netcpd
