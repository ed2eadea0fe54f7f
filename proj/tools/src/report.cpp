#include "netcpd/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "netcpd/error.hpp"

namespace netcpd::cli {

namespace fs = std::filesystem;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

MetricValues evaluate_points(const ChangePointSet& detected, const ChangePointSet& truth) {
  MetricValues m;
  m.abs_error = abs_error(detected, truth);
  m.hausdorff_detected_truth = hausdorff_one_sided(detected, truth);
  m.hausdorff_truth_detected = hausdorff_one_sided(truth, detected);
  m.covering = covering(truth, detected);
  return m;
}

namespace {

// JSON number or, for non-finite values, a string.
std::string json_number(double x) {
  const std::string s = format_number(x);
  return std::isfinite(x) ? s : "\"" + s + "\"";
}

std::string int_list(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string summary_json(const DetectionResult& result, const std::string& spec, BicFit bic_fit) {
  const LambdaFit& best = result.best();
  std::ostringstream os;
  os << "{\n";
  os << "  \"spec\": \"" << escape(spec) << "\",\n";
  os << "  \"T\": " << result.T << ",\n";
  os << "  \"n\": " << result.node_count << ",\n";
  os << "  \"directed\": " << (result.directed ? "true" : "false") << ",\n";
  os << "  \"bic_fit\": \"" << (bic_fit == BicFit::Refit ? "refit" : "penalized") << "\",\n";
  os << "  \"selected_lambda\": " << json_number(best.lambda) << ",\n";
  os << "  \"K\": " << best.change_points.size() << ",\n";
  os << "  \"change_points\": " << int_list(best.change_points) << ",\n";
  os << "  \"degenerate\": " << (best.degenerate ? "true" : "false") << ",\n";
  os << "  \"any_converged\": " << (result.any_converged() ? "true" : "false") << ",\n";
  os << "  \"fits\": [\n";
  for (std::size_t i = 0; i < result.fits.size(); ++i) {
    const LambdaFit& f = result.fits[i];
    os << "    {\"lambda\": " << json_number(f.lambda) << ", \"bic\": " << json_number(f.bic)
       << ", \"loglik\": " << json_number(f.loglik)
       << ", \"bic_loglik\": " << json_number(f.bic_loglik)
       << ", \"threshold\": " << json_number(f.threshold)
       << ", \"K\": " << f.change_points.size()
       << ", \"change_points\": " << int_list(f.change_points)
       << ", \"raw_points\": " << int_list(f.raw_points)
       << ", \"degenerate\": " << (f.degenerate ? "true" : "false")
       << ", \"converged\": " << (f.converged ? "true" : "false")
       << ", \"iterations\": " << f.iterations
       << ", \"selected\": " << (i == result.selected ? "true" : "false") << "}"
       << (i + 1 < result.fits.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string delta_zeta_csv(const DetectionResult& result) {
  std::ostringstream os;
  os << "lambda,i,t,delta_theta,delta_zeta,threshold\n";
  for (const LambdaFit& f : result.fits) {
    for (Eigen::Index k = 0; k < f.delta_zeta.size(); ++k) {
      os << format_number(f.lambda) << ',' << k + 1 << ',' << k + 3 << ','
         << format_number(f.delta_theta[k]) << ',' << format_number(f.delta_zeta[k]) << ','
         << format_number(f.threshold) << '\n';
    }
  }
  return os.str();
}

std::string metrics_csv(const MetricValues& m, int K_detected, int K_truth) {
  std::ostringstream os;
  os << "K_detected,K_truth,abs_error,d_detected_truth,d_truth_detected,covering\n";
  os << K_detected << ',' << K_truth << ',' << m.abs_error << ','
     << format_number(m.hausdorff_detected_truth) << ','
     << format_number(m.hausdorff_truth_detected) << ',' << format_number(m.covering) << '\n';
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed: " + path);
}

void emit_results(const DetectionResult& result, const std::string& spec, BicFit bic_fit,
                  const std::string& outdir, const std::optional<ChangePointSet>& truth) {
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw InputError("cannot create " + outdir + ": " + ec.message());
  const fs::path dir(outdir);
  write_text_file((dir / "summary.json").string(), summary_json(result, spec, bic_fit));
  write_text_file((dir / "delta_zeta.csv").string(), delta_zeta_csv(result));
  if (truth) {
    const ChangePointSet detected(result.best().change_points, result.T);
    write_text_file((dir / "metrics.csv").string(),
                    metrics_csv(evaluate_points(detected, *truth),
                                static_cast<int>(detected.size()),
                                static_cast<int>(truth->size())));
  }
}

int run_guarded(const std::function<int()>& command, const std::string& outdir, std::ostream& err) {
  try {
    return command();
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    try {
      fs::create_directories(outdir);
      write_text_file((fs::path(outdir) / "error.txt").string(),
                      std::string("numerical failure: ") + e.what() + "\n");
    } catch (const std::exception&) {
    }
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace netcpd::cli
