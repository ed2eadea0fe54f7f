#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "netcpd/admm.hpp"
#include "netcpd/detection.hpp"

namespace netcpd::cli {

/// Every knob of a run. Loaded from a JSON file, then overridden by command-line flags.
struct RunManifest {
  std::string command;  // detect | simulate | evaluate | bench

  std::string input;
  std::string format = "dense";  // dense | edgelist | returns
  int window = 4;
  std::string spec = "form=edges,mutual;diss=edges,mutual";
  bool spec_given = false;  // simulated STERGM runs default to the generating spec

  SolverConfig solver;
  DetectionConfig detection;
  bool delta_end_given = false;

  std::string scenario = "sbm";  // sbm | stergm | constant
  int n = 50;
  int T = 100;
  double rho = 0.5;
  int psim = 4;
  int mh_sweeps = 10;
  std::vector<int> change_points{26, 51, 76};

  std::uint64_t seed = 1;
  int replicates = 10;

  std::string truth;     // change points: comma list or file
  std::string detected;  // evaluate only
  std::string out = "out";

  /// delta_end as used: 10 for ingested data, 5 for simulations unless set explicitly.
  int effective_delta_end() const;
  void validate() const;
};

RunManifest parse_manifest(std::string_view json_text, const std::string& source = "<manifest>");
RunManifest load_manifest(const std::string& path);

/// Canonical JSON rendering (sorted keys), written next to every run's outputs.
std::string manifest_json(const RunManifest& m);

std::vector<double> parse_real_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);

/// Change points given inline ("26,51,76", "" for none) or as a path to a file of integers.
std::vector<int> resolve_change_points(const std::string& text);

std::string bic_fit_name(BicFit fit);
BicFit parse_bic_fit(std::string_view name);

}  // namespace netcpd::cli
