#include "netcpd/network.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "netcpd/error.hpp"

namespace netcpd {

std::size_t dyad_count(int n, bool directed) {
  if (n < 2) return 0;
  const auto m = static_cast<std::size_t>(n);
  return directed ? m * (m - 1) : m * (m - 1) / 2;
}

std::vector<Dyad> enumerate_dyads(int n, bool directed) {
  if (n < 2) throw InputError("enumerate_dyads: need at least 2 nodes, got " + std::to_string(n));
  std::vector<Dyad> out;
  out.reserve(dyad_count(n, directed));
  std::size_t ordinal = 0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      out.push_back({ordinal++, i, j});
    }
  }
  return out;
}

Network::Network(int n, bool directed) : n_(n), directed_(directed) {
  if (n < 1) throw InputError("Network: node count must be positive");
  const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  bits_.assign((cells + 63) / 64, 0);
}

Network Network::from_adjacency(const std::vector<std::vector<int>>& adjacency, bool directed) {
  const int n = static_cast<int>(adjacency.size());
  Network net(n, directed);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(adjacency[static_cast<std::size_t>(i)].size()) != n) {
      throw InputError("adjacency matrix is not square at row " + std::to_string(i + 1));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int v = adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (v != 0 && v != 1) {
        throw InputError("adjacency entry (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ") is not binary");
      }
      if (i == j) {
        if (v != 0) throw InputError("self-edge at node " + std::to_string(i + 1));
        continue;
      }
      if (!directed && v != adjacency[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
        throw InputError("undirected adjacency is asymmetric at (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ")");
      }
      if (v) net.set_bit(static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                             static_cast<std::size_t>(j),
                         true);
    }
  }
  return net;
}

void Network::set_bit(std::size_t k, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (k & 63);
  if (value) {
    bits_[k >> 6] |= mask;
  } else {
    bits_[k >> 6] &= ~mask;
  }
}

void Network::set_edge(NodeId i, NodeId j, bool present) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw InputError("set_edge: node out of range");
  if (i == j) throw InputError("set_edge: self-edges are not allowed");
  const auto n = static_cast<std::size_t>(n_);
  set_bit(static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j), present);
  if (!directed_) set_bit(static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i), present);
}

std::size_t Network::edge_count() const {
  std::size_t total = 0;
  for (std::uint64_t w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return directed_ ? total : total / 2;
}

bool Network::contains(const Network& other) const {
  if (other.n_ != n_ || other.directed_ != directed_) return false;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if ((other.bits_[k] & ~bits_[k]) != 0) return false;
  }
  return true;
}

std::vector<std::vector<int>> Network::to_adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_),
                                    std::vector<int>(static_cast<std::size_t>(n_), 0));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = has_edge(i, j) ? 1 : 0;
    }
  }
  return adj;
}

NodalAttributes::NodalAttributes(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::map<std::string, int> dictionary;
  codes_.reserve(labels_.size());
  for (const auto& label : labels_) {
    auto [it, inserted] = dictionary.emplace(label, static_cast<int>(dictionary.size()));
    codes_.push_back(it->second);
  }
}

NetworkSeries::NetworkSeries(std::vector<Network> snapshots,
                             std::optional<NodalAttributes> attributes)
    : snapshots_(std::move(snapshots)), attributes_(std::move(attributes)) {
  if (snapshots_.size() < 2) {
    throw InputError("a network series needs at least 2 snapshots, got " +
                     std::to_string(snapshots_.size()));
  }
  const int n = snapshots_.front().size();
  const bool directed = snapshots_.front().directed();
  for (std::size_t t = 0; t < snapshots_.size(); ++t) {
    if (snapshots_[t].size() != n || snapshots_[t].directed() != directed) {
      throw InputError("snapshot " + std::to_string(t + 1) +
                       " disagrees on node count or directedness");
    }
  }
  if (attributes_ && static_cast<int>(attributes_->size()) != n) {
    throw InputError("nodal attributes have " + std::to_string(attributes_->size()) +
                     " labels for " + std::to_string(n) + " nodes");
  }
}

namespace {

void require_compatible(const Network& a, const Network& b, const char* what) {
  if (a.size() != b.size() || a.directed() != b.directed()) {
    throw InputError(std::string(what) + ": networks differ in size or directedness");
  }
}

template <class Combine>
Network combine(const Network& a, const Network& b, Combine op) {
  Network out(a.size(), a.directed());
  for (const Dyad& d : enumerate_dyads(a.size(), a.directed())) {
    if (op(a.has_edge(d.i, d.j), b.has_edge(d.i, d.j))) out.set_edge(d.i, d.j, true);
  }
  return out;
}

}  // namespace

Network derive_formation(const Network& previous, const Network& current) {
  require_compatible(previous, current, "derive_formation");
  return combine(previous, current, [](bool a, bool b) { return a || b; });
}

Network derive_dissolution(const Network& previous, const Network& current) {
  require_compatible(previous, current, "derive_dissolution");
  return combine(previous, current, [](bool a, bool b) { return a && b; });
}

Network reconstruct_current(const Network& previous, const Network& formation,
                            const Network& dissolution) {
  require_compatible(previous, formation, "reconstruct_current");
  require_compatible(previous, dissolution, "reconstruct_current");
  if (!formation.contains(previous)) {
    throw InputError("reconstruct_current: formation network does not contain the previous one");
  }
  if (!previous.contains(dissolution)) {
    throw InputError("reconstruct_current: dissolution network is not contained in the previous one");
  }
  Network out(previous.size(), previous.directed());
  for (const Dyad& d : enumerate_dyads(previous.size(), previous.directed())) {
    const bool value = previous.has_edge(d.i, d.j) ? dissolution.has_edge(d.i, d.j)
                                                   : formation.has_edge(d.i, d.j);
    if (value) out.set_edge(d.i, d.j, true);
  }
  return out;
}

}  // namespace netcpd
