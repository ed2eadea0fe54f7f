#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netcpd/cli/bench.hpp"
#include "netcpd/cli/manifest.hpp"
#include "netcpd/cli/report.hpp"
#include "netcpd/cli/returns.hpp"
#include "netcpd/cli/series_io.hpp"
#include "netcpd/detection.hpp"
#include "netcpd/error.hpp"

namespace fs = std::filesystem;
using namespace netcpd;
using namespace netcpd::cli;

namespace {

using Override = std::function<void(RunManifest&)>;

template <class T, class Setter>
void flag(CLI::App* app, std::vector<Override>& overrides, const std::string& name,
          const std::string& help, Setter set) {
  auto value = std::make_shared<T>();
  CLI::Option* opt = app->add_option(name, *value, help);
  overrides.push_back([opt, value, set](RunManifest& m) {
    if (opt->count() > 0) set(m, *value);
  });
}

void add_run_flags(CLI::App* app, std::vector<Override>& o) {
  flag<std::string>(app, o, "--input", "Input series file",
                    [](RunManifest& m, const std::string& v) { m.input = v; });
  flag<std::string>(app, o, "--format", "dense, edgelist or returns",
                    [](RunManifest& m, const std::string& v) { m.format = v; });
  flag<int>(app, o, "--window", "Sliding window for returns input",
            [](RunManifest& m, int v) { m.window = v; });
  flag<std::string>(app, o, "--spec", "Terms per model, e.g. form=edges,mutual;diss=edges",
                    [](RunManifest& m, const std::string& v) {
                      m.spec = v;
                      m.spec_given = true;
                    });
  flag<std::string>(app, o, "--lambda-grid", "Comma-separated penalty values",
                    [](RunManifest& m, const std::string& v) {
                      m.detection.lambda_grid = parse_real_list(v);
                    });
  flag<double>(app, o, "--alpha0", "Initial ADMM step",
               [](RunManifest& m, double v) { m.solver.alpha0 = v; });
  flag<int>(app, o, "--admm-iters", "Maximum ADMM iterations",
            [](RunManifest& m, int v) { m.solver.max_admm_iters = v; });
  flag<int>(app, o, "--newton-iters", "Newton steps per theta update",
            [](RunManifest& m, int v) { m.solver.newton_iters = v; });
  flag<int>(app, o, "--gl-iters", "Block coordinate sweeps per group lasso update",
            [](RunManifest& m, int v) { m.solver.group_lasso_iters = v; });
  flag<double>(app, o, "--tol", "Relative log-likelihood change for convergence",
               [](RunManifest& m, double v) { m.solver.admm_tol = v; });
  flag<double>(app, o, "--quantile", "Threshold quantile level",
               [](RunManifest& m, double v) { m.detection.quantile_level = v; });
  flag<int>(app, o, "--delta-spc", "Minimum spacing between change points",
            [](RunManifest& m, int v) { m.detection.delta_spc = v; });
  flag<int>(app, o, "--delta-end", "Trimmed margin at both ends",
            [](RunManifest& m, int v) {
              m.detection.delta_end = v;
              m.delta_end_given = true;
            });
  flag<std::string>(app, o, "--bic", "refit or penalized",
                    [](RunManifest& m, const std::string& v) {
                      m.detection.bic_fit = parse_bic_fit(v);
                    });
  flag<int>(app, o, "--threads", "Worker threads",
            [](RunManifest& m, int v) { m.detection.threads = v; });
  flag<std::uint64_t>(app, o, "--seed", "Random seed",
                      [](RunManifest& m, std::uint64_t v) { m.seed = v; });
  flag<int>(app, o, "--replicates", "Bench replicates",
            [](RunManifest& m, int v) { m.replicates = v; });
  flag<std::string>(app, o, "--out", "Output directory",
                    [](RunManifest& m, const std::string& v) { m.out = v; });
  flag<std::string>(app, o, "--truth", "True change points: comma list or file",
                    [](RunManifest& m, const std::string& v) { m.truth = v; });
  flag<std::string>(app, o, "--detected", "Detected change points: comma list or file",
                    [](RunManifest& m, const std::string& v) { m.detected = v; });
  flag<std::string>(app, o, "--scenario", "sbm, stergm or constant",
                    [](RunManifest& m, const std::string& v) { m.scenario = v; });
  flag<int>(app, o, "--n", "Nodes", [](RunManifest& m, int v) { m.n = v; });
  flag<int>(app, o, "--T", "Time points", [](RunManifest& m, int v) { m.T = v; });
  flag<double>(app, o, "--rho", "SBM persistence", [](RunManifest& m, double v) { m.rho = v; });
  flag<int>(app, o, "--psim", "STERGM preset: 4, 6 or 8",
            [](RunManifest& m, int v) { m.psim = v; });
  flag<int>(app, o, "--mh-sweeps", "Metropolis sweeps per sampled network",
            [](RunManifest& m, int v) { m.mh_sweeps = v; });
  flag<std::string>(app, o, "--change-points", "Simulated change points, comma list",
                    [](RunManifest& m, const std::string& v) {
                      m.change_points = parse_int_list(v);
                    });
}

NetworkSeries load_input(const RunManifest& m) {
  if (m.format == "returns") {
    ReturnsNetworks r = returns_to_networks(read_returns_file(m.input), m.window);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    return std::move(r.series);
  }
  return read_series_file(m.input, parse_series_format(m.format));
}

void prepare_out(const RunManifest& m) {
  std::error_code ec;
  fs::create_directories(m.out, ec);
  if (ec) throw InputError("cannot create " + m.out + ": " + ec.message());
  write_text_file((fs::path(m.out) / "manifest.json").string(), manifest_json(m));
}

void print_points(const std::vector<int>& v) {
  std::cout << '[';
  for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? ", " : "") << v[i];
  std::cout << "]\n";
}

int run_detect(const RunManifest& m) {
  const NetworkSeries series = load_input(m);
  const StatisticSpec spec = StatisticSpec::parse(m.spec);
  spec.validate(series.directed(), series.attributes().has_value());
  DetectionConfig det = m.detection;
  det.delta_end = m.effective_delta_end();
  prepare_out(m);
  const DetectionResult res = detect_change_points(series, spec, m.solver, det);
  std::optional<ChangePointSet> truth;
  if (!m.truth.empty()) truth.emplace(resolve_change_points(m.truth), res.T);
  emit_results(res, spec.to_string(), det.bic_fit, m.out, truth);
  std::cout << "lambda " << format_number(res.best().lambda) << ", K = "
            << res.best().change_points.size() << ", change points ";
  print_points(res.best().change_points);
  if (!res.any_converged()) std::cerr << "warning: no lambda reached the ADMM tolerance\n";
  return 0;
}

int run_simulate(const RunManifest& m) {
  if (m.format == "returns") throw InputError("simulate writes dense or edgelist series");
  const SeriesFormat format = parse_series_format(m.format);
  const SimulatedSeries sim = simulate_scenario(m, m.seed);
  prepare_out(m);
  const fs::path dir(m.out);
  write_series_file((dir / ("series." + std::string(format_name(format)))).string(), sim.series,
                    format);
  std::string truth;
  for (int c : sim.truth) truth += std::to_string(c) + '\n';
  write_text_file((dir / "truth.txt").string(), truth);
  std::cout << "wrote " << sim.series.length() << " networks on " << sim.series.node_count()
            << " nodes to " << m.out << '\n';
  return 0;
}

int run_evaluate(const RunManifest& m) {
  const std::vector<int> t = resolve_change_points(m.truth);
  const std::vector<int> d = resolve_change_points(m.detected);
  const ChangePointSet truth(t, m.T);
  const ChangePointSet detected(d, m.T);
  const std::string table = metrics_csv(evaluate_points(detected, truth),
                                        static_cast<int>(detected.size()),
                                        static_cast<int>(truth.size()));
  prepare_out(m);
  write_text_file((fs::path(m.out) / "metrics.csv").string(), table);
  std::cout << table;
  return 0;
}

int run_bench_command(const RunManifest& m, bool timing) {
  prepare_out(m);
  const BenchResult r = run_bench(m);
  const std::string table = bench_csv(r);
  write_text_file((fs::path(m.out) / "bench.csv").string(), table);
  if (timing) write_text_file((fs::path(m.out) / "timing.csv").string(), timing_csv(r));
  std::cout << table;
  std::cout << "runtime " << format_number(r.total_seconds) << " s total, "
            << format_number(r.total_seconds / m.replicates) << " s per replicate\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Change point detection for time series of binary networks"};
  app.require_subcommand(1);
  std::string manifest_path;
  bool timing = false;

  std::vector<Override> overrides;
  std::vector<CLI::App*> subs;
  for (const char* name : {"detect", "simulate", "evaluate", "bench"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--manifest", manifest_path, "JSON run manifest; flags override it");
    add_run_flags(sub, overrides);
    subs.push_back(sub);
  }
  subs[0]->description("Detect change points in a network series");
  subs[1]->description("Simulate a network series with known change points");
  subs[2]->description("Score detected change points against the truth");
  subs[3]->description("Repeat simulate, detect and evaluate over seeded replicates");
  subs[3]->add_flag("--timing", timing, "Also write per-replicate runtimes to timing.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunManifest m;
  try {
    if (!manifest_path.empty()) m = load_manifest(manifest_path);
    for (const auto& apply : overrides) apply(m);
    m.command = app.get_subcommands().front()->get_name();
    m.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  return run_guarded(
      [&] {
        if (m.command == "detect") return run_detect(m);
        if (m.command == "simulate") return run_simulate(m);
        if (m.command == "evaluate") return run_evaluate(m);
        return run_bench_command(m, timing);
      },
      m.out, std::cerr);
}
