#include "netcpd/metrics.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "netcpd/error.hpp"

namespace netcpd {

ChangePointSet::ChangePointSet(std::vector<int> points, int T) : points_(std::move(points)), T_(T) {
  if (T < 1) throw InputError("change point horizon must be positive");
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  for (int c : points_) {
    if (c <= 1 || c > T) {
      throw InputError("change point " + std::to_string(c) + " outside (1, " + std::to_string(T) +
                       "]");
    }
  }
}

std::vector<Segment> partition(const ChangePointSet& cps) {
  std::vector<Segment> out;
  int start = 1;
  for (int c : cps.points()) {
    out.push_back({start, c - 1});
    start = c;
  }
  out.push_back({start, cps.horizon()});
  return out;
}

namespace {

void same_horizon(const ChangePointSet& a, const ChangePointSet& b) {
  if (a.horizon() != b.horizon()) throw InputError("change point sets have different horizons");
}

}  // namespace

int abs_error(const ChangePointSet& detected, const ChangePointSet& truth) {
  same_horizon(detected, truth);
  return std::abs(static_cast<int>(detected.size()) - static_cast<int>(truth.size()));
}

double hausdorff_one_sided(const ChangePointSet& a, const ChangePointSet& b) {
  same_horizon(a, b);
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty()) return std::numeric_limits<double>::infinity();
  if (b.empty()) return -std::numeric_limits<double>::infinity();
  int worst = 0;
  for (int y : b.points()) {
    int best = std::numeric_limits<int>::max();
    for (int x : a.points()) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

double covering(const ChangePointSet& truth, const ChangePointSet& detected) {
  same_horizon(truth, detected);
  const std::vector<Segment> g = partition(truth);
  const std::vector<Segment> h = partition(detected);
  double total = 0.0;
  for (const Segment& s : g) {
    double best = 0.0;
    for (const Segment& r : h) {
      const int inter = std::min(s.last, r.last) - std::max(s.first, r.first) + 1;
      if (inter <= 0) continue;
      const int uni = s.length() + r.length() - inter;
      best = std::max(best, static_cast<double>(inter) / uni);
    }
    total += s.length() * best;
  }
  return total / truth.horizon();
}

}  // namespace netcpd
