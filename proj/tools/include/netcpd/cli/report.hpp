#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "netcpd/detection.hpp"
#include "netcpd/metrics.hpp"

namespace netcpd::cli {

/// 10 significant digits; non-finite values print as inf, -inf, nan.
std::string format_number(double x);

struct MetricValues {
  int abs_error = 0;
  double hausdorff_detected_truth = 0.0;  // d(detected | truth)
  double hausdorff_truth_detected = 0.0;  // d(truth | detected)
  double covering = 0.0;
};

MetricValues evaluate_points(const ChangePointSet& detected, const ChangePointSet& truth);

/// Structured-text summary: selected lambda, change points, one record per lambda.
std::string summary_json(const DetectionResult& result, const std::string& spec, BicFit bic_fit);

/// Long table lambda,i,t,delta_theta,delta_zeta,threshold with T - 2 rows per lambda.
std::string delta_zeta_csv(const DetectionResult& result);

std::string metrics_csv(const MetricValues& m, int K_detected, int K_truth);

/// Writes summary.json, delta_zeta.csv and, when truth is given, metrics.csv into outdir.
void emit_results(const DetectionResult& result, const std::string& spec, BicFit bic_fit,
                  const std::string& outdir, const std::optional<ChangePointSet>& truth);

void write_text_file(const std::string& path, const std::string& text);

/// Runs a command and maps failures to exit codes: 2 for input errors, 3 for numerical
/// failures, which also leave error.txt in outdir.
int run_guarded(const std::function<int()>& command, const std::string& outdir, std::ostream& err);

}  // namespace netcpd::cli
