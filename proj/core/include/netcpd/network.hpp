#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace netcpd {

using NodeId = int;

/// A dyad in canonical order. Ordinals are 0-based; node ids are 0-based internally.
struct Dyad {
  std::size_t ordinal = 0;
  NodeId i = 0;
  NodeId j = 0;

  bool operator==(const Dyad&) const = default;
};

/// E = n(n-1) for directed networks, n(n-1)/2 for undirected ones.
std::size_t dyad_count(int n, bool directed);

/// Canonical dyad order: row-major over (i, j), i != j when directed; i < j when undirected.
std::vector<Dyad> enumerate_dyads(int n, bool directed);

/// Binary network on a fixed node set, stored one bit per ordered pair.
/// Undirected networks keep both (i, j) and (j, i) bits in sync.
class Network {
 public:
  Network(int n, bool directed);

  /// Validates the zero diagonal and, for undirected input, symmetry. Asymmetric
  /// undirected input is rejected rather than repaired.
  static Network from_adjacency(const std::vector<std::vector<int>>& adjacency, bool directed);

  int size() const { return n_; }
  bool directed() const { return directed_; }
  std::size_t dyads() const { return dyad_count(n_, directed_); }

  bool has_edge(NodeId i, NodeId j) const {
    const std::size_t k = static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                          static_cast<std::size_t>(j);
    return (bits_[k >> 6] >> (k & 63)) & 1U;
  }

  /// Sets the dyad (i, j); for undirected networks also (j, i).
  void set_edge(NodeId i, NodeId j, bool present);

  /// Number of present dyads (unordered pairs when undirected).
  std::size_t edge_count() const;

  /// True when every edge of `other` is also an edge of this network.
  bool contains(const Network& other) const;

  std::vector<std::vector<int>> to_adjacency() const;

  bool operator==(const Network& other) const = default;

 private:
  void set_bit(std::size_t k, bool value);

  int n_;
  bool directed_;
  std::vector<std::uint64_t> bits_;
};

/// Categorical node labels, fixed over time. Labels are interned to integer codes.
class NodalAttributes {
 public:
  NodalAttributes() = default;
  explicit NodalAttributes(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  int code(NodeId i) const { return codes_[static_cast<std::size_t>(i)]; }
  bool same(NodeId i, NodeId j) const { return code(i) == code(j); }

  bool operator==(const NodalAttributes& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::vector<int> codes_;
};

/// Ordered snapshots sharing node count and directedness.
class NetworkSeries {
 public:
  NetworkSeries(std::vector<Network> snapshots,
                std::optional<NodalAttributes> attributes = std::nullopt);

  std::size_t length() const { return snapshots_.size(); }
  int node_count() const { return snapshots_.front().size(); }
  bool directed() const { return snapshots_.front().directed(); }
  const Network& at(std::size_t t) const { return snapshots_.at(t); }
  const std::vector<Network>& snapshots() const { return snapshots_; }
  const std::optional<NodalAttributes>& attributes() const { return attributes_; }
  const NodalAttributes* attributes_ptr() const {
    return attributes_ ? &*attributes_ : nullptr;
  }

  bool operator==(const NetworkSeries&) const = default;

 private:
  std::vector<Network> snapshots_;
  std::optional<NodalAttributes> attributes_;
};

/// Formation network: elementwise max of consecutive snapshots.
Network derive_formation(const Network& previous, const Network& current);

/// Dissolution network: elementwise min of consecutive snapshots.
Network derive_dissolution(const Network& previous, const Network& current);

/// Recovers the current snapshot from the previous one and its formation and
/// dissolution networks. Requires formation ⊇ previous ⊇ dissolution.
Network reconstruct_current(const Network& previous, const Network& formation,
                            const Network& dissolution);

}  // namespace netcpd
