#include "netcpd/statistics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "netcpd/error.hpp"

namespace netcpd {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int total_degree_without(const Network& y, NodeId node, NodeId skip_out, NodeId skip_in) {
  // Degree of `node` ignoring the arc node->skip_out and the arc skip_in->node.
  const int n = y.size();
  int deg = 0;
  for (NodeId k = 0; k < n; ++k) {
    if (k == node) continue;
    if (k != skip_out && y.has_edge(node, k)) ++deg;
    if (y.directed() && k != skip_in && y.has_edge(k, node)) ++deg;
  }
  return deg;
}

}  // namespace

std::string_view term_name(TermKind kind) {
  switch (kind) {
    case TermKind::Edges: return "edges";
    case TermKind::Mutual: return "mutual";
    case TermKind::Triangles: return "triangles";
    case TermKind::Homophily: return "homophily";
    case TermKind::Isolates: return "isolates";
  }
  return "?";
}

Term parse_term(std::string_view name) {
  std::string key = trim(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "edges" || key == "edge") return {TermKind::Edges};
  if (key == "mutual" || key == "mutuality") return {TermKind::Mutual};
  if (key == "triangles" || key == "triangle") return {TermKind::Triangles};
  if (key == "homophily" || key == "nodematch") return {TermKind::Homophily};
  if (key == "isolates") return {TermKind::Isolates};
  throw InputError("unknown network statistic '" + key + "'");
}

StatisticSpec StatisticSpec::parse(std::string_view text) {
  StatisticSpec spec;
  bool have_form = false;
  bool have_diss = false;
  for (const std::string& part : split(text, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw InputError("spec section '" + part + "' lacks '='");
    const std::string model = trim(std::string_view(part).substr(0, eq));
    std::vector<Term> terms;
    for (const std::string& name : split(std::string_view(part).substr(eq + 1), ',')) {
      if (!name.empty()) terms.push_back(parse_term(name));
    }
    if (model == "form" || model == "formation") {
      spec.formation = std::move(terms);
      have_form = true;
    } else if (model == "diss" || model == "dissolution") {
      spec.dissolution = std::move(terms);
      have_diss = true;
    } else {
      throw InputError("unknown model '" + model + "' in spec (expected form/diss)");
    }
  }
  if (!have_form || !have_diss || spec.formation.empty() || spec.dissolution.empty()) {
    throw InputError("spec needs non-empty form= and diss= term lists");
  }
  return spec;
}

std::string StatisticSpec::to_string() const {
  std::ostringstream os;
  auto list = [&os](const std::vector<Term>& terms) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      if (k) os << ',';
      os << term_name(terms[k].kind);
    }
  };
  os << "form=";
  list(formation);
  os << ";diss=";
  list(dissolution);
  return os.str();
}

void StatisticSpec::validate(bool directed, bool has_attributes) const {
  if (formation.empty() || dissolution.empty()) {
    throw InputError("both formation and dissolution models need at least one term");
  }
  for (const auto* terms : {&formation, &dissolution}) {
    for (const Term& t : *terms) {
      if (t.kind == TermKind::Mutual && !directed) {
        throw InputError("mutual is only defined for directed networks");
      }
      if (t.kind == TermKind::Homophily && !has_attributes) {
        throw InputError("homophily requires nodal attributes");
      }
    }
  }
}

namespace {

void check_term(const Network& y, Term term, const NodalAttributes* attributes) {
  if (term.kind == TermKind::Mutual && !y.directed()) {
    throw InputError("mutual is only defined for directed networks");
  }
  if (term.kind == TermKind::Homophily) {
    if (attributes == nullptr) throw InputError("homophily requires nodal attributes");
    if (static_cast<int>(attributes->size()) != y.size()) {
      throw InputError("nodal attribute count does not match node count");
    }
  }
}

}  // namespace

double network_statistic(const Network& y, Term term, const NodalAttributes* attributes) {
  check_term(y, term, attributes);
  const int n = y.size();
  double total = 0.0;
  switch (term.kind) {
    case TermKind::Edges:
      return static_cast<double>(y.edge_count());
    case TermKind::Mutual:
      for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
          if (y.has_edge(i, j) && y.has_edge(j, i)) total += 1.0;
      return total;
    case TermKind::Triangles:
      if (!y.directed()) {
        for (NodeId i = 0; i < n; ++i)
          for (NodeId j = i + 1; j < n; ++j) {
            if (!y.has_edge(i, j)) continue;
            for (NodeId k = j + 1; k < n; ++k)
              if (y.has_edge(j, k) && y.has_edge(i, k)) total += 1.0;
          }
        return total;
      }
      // transitive triples plus cyclic triples (each cycle once, anchored at its smallest node)
      for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j) {
          if (j == i || !y.has_edge(i, j)) continue;
          for (NodeId k = 0; k < n; ++k) {
            if (k == i || k == j || !y.has_edge(j, k)) continue;
            if (y.has_edge(i, k)) total += 1.0;
            if (i < j && i < k && y.has_edge(k, i)) total += 1.0;
          }
        }
      return total;
    case TermKind::Homophily:
      for (const Dyad& d : enumerate_dyads(n, y.directed()))
        if (y.has_edge(d.i, d.j) && attributes->same(d.i, d.j)) total += 1.0;
      return total;
    case TermKind::Isolates:
      for (NodeId i = 0; i < n; ++i)
        if (total_degree_without(y, i, -1, -1) == 0) total += 1.0;
      return total;
  }
  return total;
}

double change_statistic(const Network& y, NodeId i, NodeId j, Term term,
                        const NodalAttributes* attributes) {
  check_term(y, term, attributes);
  const int n = y.size();
  switch (term.kind) {
    case TermKind::Edges:
      return 1.0;
    case TermKind::Mutual:
      return y.has_edge(j, i) ? 1.0 : 0.0;
    case TermKind::Triangles: {
      double delta = 0.0;
      for (NodeId k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const bool ik = y.has_edge(i, k);
        const bool jk = y.has_edge(j, k);
        if (!y.directed()) {
          if (ik && jk) delta += 1.0;
          continue;
        }
        const bool ki = y.has_edge(k, i);
        const bool kj = y.has_edge(k, j);
        if (jk && ik) delta += 1.0;  // i->j->k, i->k
        if (ki && kj) delta += 1.0;  // k->i->j, k->j
        if (ik && kj) delta += 1.0;  // i->k->j, i->j
        if (jk && ki) delta += 1.0;  // cycle i->j->k->i
      }
      return delta;
    }
    case TermKind::Homophily:
      return attributes->same(i, j) ? 1.0 : 0.0;
    case TermKind::Isolates: {
      // degrees with the toggled dyad held at zero
      const int deg_i = total_degree_without(y, i, j, -1);
      const int deg_j = total_degree_without(y, j, y.directed() ? -1 : i, i);
      return -static_cast<double>(deg_i == 0) - static_cast<double>(deg_j == 0);
    }
  }
  return 0.0;
}

namespace {

ModelBlock model_block(const Network& y, const std::vector<Term>& terms,
                       const std::vector<Dyad>& dyads, const NodalAttributes* attributes) {
  ModelBlock block;
  block.change_stats.resize(static_cast<Eigen::Index>(dyads.size()),
                            static_cast<Eigen::Index>(terms.size()));
  block.response.resize(dyads.size());
  for (const Dyad& d : dyads) {
    const auto row = static_cast<Eigen::Index>(d.ordinal);
    for (std::size_t c = 0; c < terms.size(); ++c) {
      block.change_stats(row, static_cast<Eigen::Index>(c)) =
          change_statistic(y, d.i, d.j, terms[c], attributes);
    }
    block.response[d.ordinal] = y.has_edge(d.i, d.j) ? 1 : 0;
  }
  return block;
}

}  // namespace

TransitionBlock build_transition_block(const Network& previous, const Network& current,
                                       const StatisticSpec& spec,
                                       const NodalAttributes* attributes) {
  spec.validate(previous.directed(), attributes != nullptr);
  const auto dyads = enumerate_dyads(previous.size(), previous.directed());
  const Network formation = derive_formation(previous, current);
  const Network dissolution = derive_dissolution(previous, current);
  return {model_block(formation, spec.formation, dyads, attributes),
          model_block(dissolution, spec.dissolution, dyads, attributes)};
}

ChangeStatBlocks build_change_stat_blocks(const NetworkSeries& series, const StatisticSpec& spec) {
  spec.validate(series.directed(), series.attributes().has_value());
  ChangeStatBlocks blocks;
  blocks.node_count = series.node_count();
  blocks.directed = series.directed();
  blocks.dyads = dyad_count(series.node_count(), series.directed());
  blocks.formation_size = spec.formation_size();
  blocks.dissolution_size = spec.dissolution_size();
  blocks.transitions.reserve(series.length() - 1);
  for (std::size_t t = 1; t < series.length(); ++t) {
    blocks.transitions.push_back(
        build_transition_block(series.at(t - 1), series.at(t), spec, series.attributes_ptr()));
  }
  return blocks;
}

}  // namespace netcpd
