#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netcpd/network.hpp"

namespace netcpd::cli {

struct ReturnsNetworks {
  NetworkSeries series;
  std::vector<std::string> warnings;
};

/// One undirected network per window end: an edge joins i and j when the Pearson
/// correlation of their returns over the window is negative. Pairs with a constant
/// column in the window have no defined correlation and get no edge.
ReturnsNetworks returns_to_networks(const Eigen::MatrixXd& returns, int window = 4);

/// Whitespace- or comma-separated numeric table, one row per day; a first line with
/// non-numeric tokens is taken as a header, '#' starts a comment.
Eigen::MatrixXd read_returns(std::istream& in, const std::string& source = "<input>");
Eigen::MatrixXd read_returns_file(const std::string& path);

}  // namespace netcpd::cli
