#include "netcpd/cli/series_io.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "netcpd/error.hpp"

namespace netcpd::cli {

SeriesFormat parse_series_format(std::string_view name) {
  if (name == "dense") return SeriesFormat::Dense;
  if (name == "edgelist") return SeriesFormat::Edgelist;
  throw InputError("unknown series format '" + std::string(name) + "' (dense|edgelist)");
}

std::string_view format_name(SeriesFormat format) {
  return format == SeriesFormat::Dense ? "dense" : "edgelist";
}

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    for (std::string tok; ss >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

int to_int(const std::string& tok, const std::string& source, int line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) fail(source, line, "expected an integer, got '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(source, line, "expected an integer, got '" + tok + "'");
  }
}

bool to_bool(const std::string& tok, const std::string& source, int line) {
  if (tok == "1" || tok == "true" || tok == "yes") return true;
  if (tok == "0" || tok == "false" || tok == "no") return false;
  fail(source, line, "expected a boolean, got '" + tok + "'");
}

}  // namespace

NetworkSeries read_series(std::istream& in, SeriesFormat format, const std::string& source) {
  const std::vector<Line> lines = tokenize(in);
  std::optional<int> n;
  std::optional<int> T;
  std::optional<bool> directed;
  std::optional<NodalAttributes> attributes;

  std::size_t k = 0;
  for (; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const std::string& key = line.tokens[0];
    if (key == "n" || key == "T" || key == "directed") {
      if (line.tokens.size() != 2) fail(source, line.number, "header '" + key + "' takes one value");
      if (key == "n") n = to_int(line.tokens[1], source, line.number);
      if (key == "T") T = to_int(line.tokens[1], source, line.number);
      if (key == "directed") directed = to_bool(line.tokens[1], source, line.number);
    } else if (key == "attributes") {
      attributes = NodalAttributes(std::vector<std::string>(line.tokens.begin() + 1, line.tokens.end()));
    } else {
      break;
    }
  }
  const int header_line = k < lines.size() ? lines[k].number : 1;
  if (!n || !T || !directed) fail(source, header_line, "header needs n, T and directed");
  if (*n < 2) fail(source, header_line, "n must be at least 2");
  if (*T < 1) fail(source, header_line, "T must be positive");
  if (attributes && attributes->size() != static_cast<std::size_t>(*n)) {
    fail(source, header_line, "expected " + std::to_string(*n) + " attribute labels");
  }

  std::vector<Network> snaps(static_cast<std::size_t>(*T), Network(*n, *directed));
  if (format == SeriesFormat::Dense) {
    const std::size_t needed = static_cast<std::size_t>(*T) * static_cast<std::size_t>(*n);
    if (lines.size() - k != needed) {
      fail(source, lines.empty() ? 1 : lines.back().number,
           "dense body needs " + std::to_string(needed) + " rows, found " +
               std::to_string(lines.size() - k));
    }
    for (int t = 0; t < *T; ++t) {
      std::vector<std::vector<int>> adj;
      for (int i = 0; i < *n; ++i, ++k) {
        const Line& line = lines[k];
        if (line.tokens.size() != static_cast<std::size_t>(*n)) {
          fail(source, line.number, "expected " + std::to_string(*n) + " entries");
        }
        std::vector<int> row;
        for (int j = 0; j < *n; ++j) {
          const std::string& tok = line.tokens[static_cast<std::size_t>(j)];
          if (tok != "0" && tok != "1") fail(source, line.number, "entries must be 0 or 1");
          if (i == j && tok == "1") fail(source, line.number, "diagonal entry is 1");
          if (!*directed && j < i && (tok == "1") != (adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] == 1)) {
            fail(source, line.number, "asymmetric entry in an undirected network");
          }
          row.push_back(tok == "1" ? 1 : 0);
        }
        adj.push_back(std::move(row));
      }
      snaps[static_cast<std::size_t>(t)] = Network::from_adjacency(adj, *directed);
    }
  } else {
    for (; k < lines.size(); ++k) {
      const Line& line = lines[k];
      if (line.tokens.size() != 3) fail(source, line.number, "expected 't i j'");
      const int t = to_int(line.tokens[0], source, line.number);
      const int i = to_int(line.tokens[1], source, line.number);
      const int j = to_int(line.tokens[2], source, line.number);
      if (t < 1 || t > *T) fail(source, line.number, "time " + std::to_string(t) + " out of range");
      if (i < 1 || i > *n || j < 1 || j > *n) fail(source, line.number, "node index out of range");
      if (i == j) fail(source, line.number, "self-loop");
      snaps[static_cast<std::size_t>(t - 1)].set_edge(i - 1, j - 1, true);
    }
  }
  return NetworkSeries(std::move(snaps), std::move(attributes));
}

NetworkSeries read_series_file(const std::string& path, SeriesFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_series(in, format, path);
}

void write_series(std::ostream& out, const NetworkSeries& series, SeriesFormat format) {
  const int n = series.node_count();
  out << "n " << n << "\nT " << series.length() << "\ndirected " << (series.directed() ? 1 : 0)
      << "\n";
  if (const NodalAttributes* attrs = series.attributes_ptr()) {
    out << "attributes";
    for (const auto& label : attrs->labels()) out << ' ' << label;
    out << "\n";
  }
  for (std::size_t t = 0; t < series.length(); ++t) {
    const Network& y = series.at(t);
    if (format == SeriesFormat::Dense) {
      out << "# t = " << t + 1 << "\n";
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out << (j ? " " : "") << (y.has_edge(i, j) ? 1 : 0);
        out << "\n";
      }
    } else {
      for (const Dyad& d : enumerate_dyads(n, series.directed())) {
        if (y.has_edge(d.i, d.j)) out << t + 1 << ' ' << d.i + 1 << ' ' << d.j + 1 << "\n";
      }
    }
  }
}

void write_series_file(const std::string& path, const NetworkSeries& series, SeriesFormat format) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_series(out, series, format);
  if (!out) throw InputError("failed writing " + path);
}

}  // namespace netcpd::cli
