#pragma once

#include <vector>

namespace netcpd {

/// Change points on the time axis 1..T, sorted and unique, each in (1, T].
class ChangePointSet {
 public:
  ChangePointSet(std::vector<int> points, int T);

  const std::vector<int>& points() const { return points_; }
  int horizon() const { return T_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

 private:
  std::vector<int> points_;
  int T_;
};

/// Closed integer interval [first, last].
struct Segment {
  int first = 1;
  int last = 1;
  int length() const { return last - first + 1; }
};

/// Segments [1, c_1 - 1], [c_1, c_2 - 1], ..., [c_K, T].
std::vector<Segment> partition(const ChangePointSet& cps);

/// | |detected| - |truth| |.
int abs_error(const ChangePointSet& detected, const ChangePointSet& truth);

/// max over b of min over a of |a - b|. +inf when a is empty and b is not,
/// -inf when b is empty and a is not, 0 when both are empty.
double hausdorff_one_sided(const ChangePointSet& a, const ChangePointSet& b);

/// Size-weighted best Jaccard overlap of the truth partition by the detected one.
double covering(const ChangePointSet& truth, const ChangePointSet& detected);

}  // namespace netcpd
