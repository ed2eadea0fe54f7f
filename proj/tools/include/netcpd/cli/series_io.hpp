#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "netcpd/network.hpp"

namespace netcpd::cli {

enum class SeriesFormat { Dense, Edgelist };

SeriesFormat parse_series_format(std::string_view name);
std::string_view format_name(SeriesFormat format);

// Header lines "n <int>", "T <int>", "directed <0|1|true|false>" and optionally
// "attributes <label> ..." come first; '#' starts a comment. Dense bodies hold T blocks
// of n rows of 0/1 tokens, edgelist bodies hold "t i j" lines with 1-based indices.
NetworkSeries read_series(std::istream& in, SeriesFormat format,
                          const std::string& source = "<input>");
NetworkSeries read_series_file(const std::string& path, SeriesFormat format);

void write_series(std::ostream& out, const NetworkSeries& series, SeriesFormat format);
void write_series_file(const std::string& path, const NetworkSeries& series, SeriesFormat format);

}  // namespace netcpd::cli
