#include "netcpd/simulation.hpp"

#include <cmath>
#include <string>

#include "netcpd/error.hpp"

namespace netcpd {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

double counter_uniform(std::uint64_t seed, std::uint64_t t, std::uint64_t dyad) {
  return static_cast<double>(stream_key(seed, t, dyad) >> 11) * 0x1.0p-53;
}

int segment_of(int t, const std::vector<int>& change_points) {
  int s = 0;
  for (int c : change_points) {
    if (t >= c) ++s;
  }
  return s;
}

namespace {

void check_change_points(const std::vector<int>& cps, int T) {
  for (std::size_t k = 0; k < cps.size(); ++k) {
    if (cps[k] <= 1 || cps[k] > T) {
      throw InputError("change point " + std::to_string(cps[k]) + " outside (1, T]");
    }
    if (k > 0 && cps[k] <= cps[k - 1]) throw InputError("change points must be increasing");
  }
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void SbmScenario::validate() const {
  if (n < 2) throw InputError("SBM needs at least 2 nodes");
  if (T < 2) throw InputError("SBM needs T >= 2");
  if (block_count < 1 || block_count > n) throw InputError("invalid block count");
  if (!(rho >= 0.0 && rho < 1.0)) throw InputError("rho must be in [0, 1)");
  if (!is_probability(p_within) || !is_probability(p_between) || !is_probability(q_within) ||
      !is_probability(q_between)) {
    throw InputError("SBM probabilities must lie in [0, 1]");
  }
  check_change_points(change_points, T);
}

double SbmScenario::edge_probability(int t, NodeId i, NodeId j) const {
  const bool within = block_of(i) == block_of(j);
  if (segment_of(t, change_points) % 2 == 0) return within ? p_within : p_between;
  return within ? q_within : q_between;
}

NetworkSeries simulate_sbm_series(const SbmScenario& sc) {
  sc.validate();
  const std::vector<Dyad> dyads = enumerate_dyads(sc.n, true);
  std::vector<Network> snaps;
  snaps.reserve(static_cast<std::size_t>(sc.T));
  for (int t = 1; t <= sc.T; ++t) {
    Network y(sc.n, true);
    for (const Dyad& d : dyads) {
      const double e = sc.edge_probability(t, d.i, d.j);
      double prob = e;
      if (t > 1) {
        prob = snaps.back().has_edge(d.i, d.j) ? sc.rho * (1.0 - e) + e : (1.0 - sc.rho) * e;
      }
      if (counter_uniform(sc.seed, static_cast<std::uint64_t>(t), d.ordinal) < prob) {
        y.set_edge(d.i, d.j, true);
      }
    }
    snaps.push_back(std::move(y));
  }
  return NetworkSeries(std::move(snaps));
}

void StergmScenario::validate() const {
  if (n < 2) throw InputError("STERGM scenario needs at least 2 nodes");
  if (T < 2) throw InputError("STERGM scenario needs T >= 2");
  if (mh_sweeps < 1) throw InputError("mh_sweeps must be positive");
  if (!is_probability(initial_density)) throw InputError("initial density must lie in [0, 1]");
  check_change_points(change_points, T);
  spec.validate(directed, attributes.has_value());
  if (attributes && attributes->size() != static_cast<std::size_t>(n)) {
    throw InputError("attribute count does not match node count");
  }
  if (regimes.empty()) throw InputError("STERGM scenario has no parameter regimes");
  for (const auto& theta : regimes) {
    if (theta.size() != spec.size()) {
      throw InputError("regime parameter length " + std::to_string(theta.size()) +
                       " does not match the statistic spec (" + std::to_string(spec.size()) +
                       ")");
    }
    if (!theta.allFinite()) throw InputError("regime parameters must be finite");
  }
}

StergmScenario StergmScenario::preset(int p_sim, int n, int T, std::uint64_t seed) {
  StergmScenario sc;
  sc.n = n;
  sc.T = T;
  sc.seed = seed;
  std::vector<Term> terms{{TermKind::Edges}, {TermKind::Mutual}};
  auto vec = [](std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) out(k++) = x;
    return out;
  };
  switch (p_sim) {
    case 4:
      sc.regimes = {vec({-1, -2, -1, -2}), vec({-1, 1, -1, -1})};
      break;
    case 6:
      terms.push_back({TermKind::Triangles});
      sc.regimes = {vec({-2, 2, -2, -1, 2, 1}), vec({-1.5, 1, -1, 2, 1, 1.5})};
      break;
    case 8: {
      terms.push_back({TermKind::Triangles});
      terms.push_back({TermKind::Homophily});
      sc.regimes = {vec({-2, 2, -2, -1, -1, 2, 1, 1}), vec({-1.5, 1, -1, 1, 2, 1, 1.5, 2})};
      std::vector<std::string> labels;
      for (int i = 0; i < n; ++i) labels.push_back(i % 2 == 0 ? "Female" : "Male");
      sc.attributes = NodalAttributes(std::move(labels));
      break;
    }
    default:
      throw InputError("p_sim must be 4, 6 or 8");
  }
  sc.spec.formation = terms;
  sc.spec.dissolution = terms;
  return sc;
}

Network sample_constrained_ergm(const Network& anchor, Constraint constraint,
                                const std::vector<Term>& terms, const Eigen::VectorXd& theta,
                                const NodalAttributes* attributes, int sweeps,
                                std::mt19937_64& engine) {
  if (theta.size() != static_cast<Eigen::Index>(terms.size())) {
    throw InputError("sampler: parameter length does not match terms");
  }
  const bool want_present = constraint == Constraint::Subset;
  std::vector<Dyad> free;
  for (const Dyad& d : enumerate_dyads(anchor.size(), anchor.directed())) {
    if (anchor.has_edge(d.i, d.j) == want_present) free.push_back(d);
  }
  Network y = anchor;
  if (free.empty()) return y;

  // Explicit conversions instead of <random> distributions, whose output is
  // implementation-defined: multiply-shift index, 53-bit uniform.
  __extension__ using wide = unsigned __int128;
  const auto pick = [&] {
    return static_cast<std::size_t>((static_cast<wide>(engine()) * free.size()) >> 64);
  };
  const auto unif = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  const std::size_t proposals = static_cast<std::size_t>(sweeps) * free.size();
  for (std::size_t s = 0; s < proposals; ++s) {
    const Dyad& d = free[pick()];
    const bool present = y.has_edge(d.i, d.j);
    if (present) y.set_edge(d.i, d.j, false);
    double eta = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      eta += theta(static_cast<Eigen::Index>(k)) *
             change_statistic(y, d.i, d.j, terms[k], attributes);
    }
    const double log_ratio = present ? -eta : eta;
    const bool accept = log_ratio >= 0.0 || unif() < std::exp(log_ratio);
    y.set_edge(d.i, d.j, accept ? !present : present);
  }
  return y;
}

NetworkSeries simulate_stergm_series(const StergmScenario& sc) {
  sc.validate();
  const NodalAttributes* attrs = sc.attributes ? &*sc.attributes : nullptr;
  const int p1 = sc.spec.formation_size();
  const int p2 = sc.spec.dissolution_size();

  std::vector<Network> snaps;
  snaps.reserve(static_cast<std::size_t>(sc.T));
  Network first(sc.n, sc.directed);
  for (const Dyad& d : enumerate_dyads(sc.n, sc.directed)) {
    if (counter_uniform(sc.seed, 1, d.ordinal) < sc.initial_density) first.set_edge(d.i, d.j, true);
  }
  snaps.push_back(std::move(first));

  for (int t = 2; t <= sc.T; ++t) {
    const Eigen::VectorXd& theta =
        sc.regimes[static_cast<std::size_t>(segment_of(t, sc.change_points)) % sc.regimes.size()];
    const Network& prev = snaps.back();
    std::mt19937_64 form_engine(stream_key(sc.seed, static_cast<std::uint64_t>(t), 1));
    std::mt19937_64 diss_engine(stream_key(sc.seed, static_cast<std::uint64_t>(t), 2));
    const Network formation = sample_constrained_ergm(
        prev, Constraint::Superset, sc.spec.formation, theta.head(p1), attrs, sc.mh_sweeps,
        form_engine);
    const Network dissolution = sample_constrained_ergm(
        prev, Constraint::Subset, sc.spec.dissolution, theta.tail(p2), attrs, sc.mh_sweeps,
        diss_engine);
    snaps.push_back(reconstruct_current(prev, formation, dissolution));
  }
  return NetworkSeries(std::move(snaps), sc.attributes);
}

}  // namespace netcpd
