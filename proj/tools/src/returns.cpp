#include "netcpd/cli/returns.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "netcpd/error.hpp"

namespace netcpd::cli {

ReturnsNetworks returns_to_networks(const Eigen::MatrixXd& returns, int window) {
  const Eigen::Index t_raw = returns.rows();
  const Eigen::Index m = returns.cols();
  if (window < 2) throw InputError("window must be at least 2");
  if (m < 2) throw InputError("need at least two return series");
  if (t_raw < window) throw InputError("fewer rows than the window width");
  if (!returns.allFinite()) throw InputError("returns contain non-finite values");

  std::vector<std::string> warnings;
  std::vector<Network> snaps;
  for (Eigen::Index end = window; end <= t_raw; ++end) {
    const Eigen::MatrixXd block = returns.middleRows(end - window, window);
    const Eigen::MatrixXd centered = block.rowwise() - block.colwise().mean();
    const Eigen::VectorXd norms = centered.colwise().norm().transpose();
    Network y(static_cast<int>(m), false);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (norms(i) == 0.0) {
        warnings.push_back("series " + std::to_string(i + 1) +
                           " is constant in the window ending at row " + std::to_string(end) +
                           "; its pairs are left unlinked");
      }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = i + 1; j < m; ++j) {
        if (norms(i) == 0.0 || norms(j) == 0.0) continue;
        const double corr = centered.col(i).dot(centered.col(j)) / (norms(i) * norms(j));
        if (corr < 0.0) y.set_edge(static_cast<NodeId>(i), static_cast<NodeId>(j), true);
      }
    }
    snaps.push_back(std::move(y));
  }
  if (snaps.size() < 2) throw InputError("returns give fewer than two networks");
  return {NetworkSeries(std::move(snaps)), std::move(warnings)};
}

Eigen::MatrixXd read_returns(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string raw;
  int number = 0;
  bool first_content = true;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    for (char& c : raw) {
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    }
    std::istringstream ss(raw);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    std::vector<double> row;
    bool numeric = true;
    for (const auto& tok : tokens) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first_content) {
        first_content = false;
        continue;
      }
      throw InputError(source + ":" + std::to_string(number) + ": non-numeric value");
    }
    first_content = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError(source + ":" + std::to_string(number) + ": expected " +
                       std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(source + ": no data rows");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return out;
}

Eigen::MatrixXd read_returns_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_returns(in, path);
}

}  // namespace netcpd::cli
