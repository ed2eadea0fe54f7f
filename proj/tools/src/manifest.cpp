#include "netcpd/cli/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "netcpd/error.hpp"
#include "netcpd/statistics.hpp"

namespace netcpd::cli {

using nlohmann::json;

int RunManifest::effective_delta_end() const {
  if (delta_end_given) return detection.delta_end;
  return command == "detect" ? 10 : 5;
}

void RunManifest::validate() const {
  if (command != "detect" && command != "simulate" && command != "evaluate" &&
      command != "bench") {
    throw InputError("unknown command '" + command + "'");
  }
  if (format != "dense" && format != "edgelist" && format != "returns") {
    throw InputError("format must be dense, edgelist or returns");
  }
  if (scenario != "sbm" && scenario != "stergm" && scenario != "constant") {
    throw InputError("scenario must be sbm, stergm or constant");
  }
  if (window < 2) throw InputError("window must be at least 2");
  if (replicates < 1) throw InputError("replicates must be positive");
  if (n < 2 || T < 3) throw InputError("simulations need n >= 2 and T >= 3");
  solver.validate();
  detection.validate();
  StatisticSpec::parse(spec);
  if (command == "detect" && input.empty()) throw InputError("detect needs an input file");
  if (command == "detect" && !std::filesystem::exists(input)) {
    throw InputError("input file not found: " + input);
  }
  if (command == "evaluate" && (truth.empty() && detected.empty())) {
    throw InputError("evaluate needs truth and detected change points");
  }
}

std::string bic_fit_name(BicFit fit) { return fit == BicFit::Refit ? "refit" : "penalized"; }

BicFit parse_bic_fit(std::string_view name) {
  if (name == "refit") return BicFit::Refit;
  if (name == "penalized") return BicFit::Penalized;
  throw InputError("bic must be refit or penalized");
}

namespace {

template <class T>
T get(const json& j, const char* key, const std::string& source) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(source + ": bad value for '" + key + "'");
  }
}

}  // namespace

RunManifest parse_manifest(std::string_view json_text, const std::string& source) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
  if (!j.is_object()) throw InputError(source + ": manifest must be a JSON object");

  RunManifest m;
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "command") m.command = get<std::string>(j, k, source);
    else if (key == "input") m.input = get<std::string>(j, k, source);
    else if (key == "format") m.format = get<std::string>(j, k, source);
    else if (key == "window") m.window = get<int>(j, k, source);
    else if (key == "spec") {
      m.spec = get<std::string>(j, k, source);
      m.spec_given = true;
    }
    else if (key == "lambda_grid") m.detection.lambda_grid = get<std::vector<double>>(j, k, source);
    else if (key == "alpha0") m.solver.alpha0 = get<double>(j, k, source);
    else if (key == "admm_iters") m.solver.max_admm_iters = get<int>(j, k, source);
    else if (key == "newton_iters") m.solver.newton_iters = get<int>(j, k, source);
    else if (key == "gl_iters") m.solver.group_lasso_iters = get<int>(j, k, source);
    else if (key == "active_sweeps") m.solver.active_sweeps = get<int>(j, k, source);
    else if (key == "tol") m.solver.admm_tol = get<double>(j, k, source);
    else if (key == "newton_tol") m.solver.newton_tol = get<double>(j, k, source);
    else if (key == "kkt_tol") m.solver.kkt_tol = get<double>(j, k, source);
    else if (key == "quantile") m.detection.quantile_level = get<double>(j, k, source);
    else if (key == "delta_spc") m.detection.delta_spc = get<int>(j, k, source);
    else if (key == "delta_end") {
      m.detection.delta_end = get<int>(j, k, source);
      m.delta_end_given = true;
    }
    else if (key == "bic") m.detection.bic_fit = parse_bic_fit(get<std::string>(j, k, source));
    else if (key == "threads") m.detection.threads = get<int>(j, k, source);
    else if (key == "scenario") m.scenario = get<std::string>(j, k, source);
    else if (key == "n") m.n = get<int>(j, k, source);
    else if (key == "T") m.T = get<int>(j, k, source);
    else if (key == "rho") m.rho = get<double>(j, k, source);
    else if (key == "psim") m.psim = get<int>(j, k, source);
    else if (key == "mh_sweeps") m.mh_sweeps = get<int>(j, k, source);
    else if (key == "change_points") m.change_points = get<std::vector<int>>(j, k, source);
    else if (key == "seed") m.seed = get<std::uint64_t>(j, k, source);
    else if (key == "replicates") m.replicates = get<int>(j, k, source);
    else if (key == "truth") m.truth = get<std::string>(j, k, source);
    else if (key == "detected") m.detected = get<std::string>(j, k, source);
    else if (key == "out") m.out = get<std::string>(j, k, source);
    else throw InputError(source + ": unknown key '" + key + "'");
  }
  return m;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path);
}

std::string manifest_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["input"] = m.input;
  j["format"] = m.format;
  j["window"] = m.window;
  j["spec"] = m.spec;
  j["lambda_grid"] = m.detection.lambda_grid;
  j["alpha0"] = m.solver.alpha0;
  j["admm_iters"] = m.solver.max_admm_iters;
  j["newton_iters"] = m.solver.newton_iters;
  j["gl_iters"] = m.solver.group_lasso_iters;
  j["active_sweeps"] = m.solver.active_sweeps;
  j["tol"] = m.solver.admm_tol;
  j["newton_tol"] = m.solver.newton_tol;
  j["kkt_tol"] = m.solver.kkt_tol;
  j["quantile"] = m.detection.quantile_level;
  j["delta_spc"] = m.detection.delta_spc;
  j["delta_end"] = m.effective_delta_end();
  j["bic"] = bic_fit_name(m.detection.bic_fit);
  j["threads"] = m.detection.threads;
  j["scenario"] = m.scenario;
  j["n"] = m.n;
  j["T"] = m.T;
  j["rho"] = m.rho;
  j["psim"] = m.psim;
  j["mh_sweeps"] = m.mh_sweeps;
  j["change_points"] = m.change_points;
  j["seed"] = m.seed;
  j["replicates"] = m.replicates;
  j["truth"] = m.truth;
  j["detected"] = m.detected;
  j["out"] = m.out;
  return j.dump(2) + "\n";
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::string s(text);
  for (char& c : s) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream ss(s);
  for (std::string tok; ss >> tok;) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) throw InputError("not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (double v : parse_real_list(text)) {
    if (v != static_cast<double>(static_cast<int>(v))) {
      throw InputError("not an integer: " + std::to_string(v));
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<int> resolve_change_points(const std::string& text) {
  if (!text.empty() && std::filesystem::is_regular_file(text)) {
    std::ifstream in(text);
    std::stringstream ss;
    for (std::string line; std::getline(in, line);) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      ss << line << ' ';
    }
    return parse_int_list(ss.str());
  }
  return parse_int_list(text);
}

}  // namespace netcpd::cli
