#pragma once

#include <vector>

#include "screwgrasp/contact_pairs.hpp"
#include "screwgrasp/metric.hpp"

namespace screwgrasp {

// One grasp interval: segments [first, last] share a single grasp.
struct SegmentRange {
  int first = 0;
  int last = 0;

  int length() const { return last - first + 1; }
  bool operator==(const SegmentRange&) const = default;
};

struct GroupScore {
  double gamma = 0.0;
  std::vector<double> per_region;   // |I| / |region_i| for each member
  std::vector<int> intersection;    // sorted common point indices
};

// Sequential partition of the motion segments into grasp intervals.
struct RegraspPlan {
  std::vector<SegmentRange> groups;
  std::vector<GroupScore> scores;  // parallel to groups
  int alpha() const { return static_cast<int>(groups.size()); }
};

// Intersection of the given regions and the per-region coverage ratios
// gamma_i = |I| / |region_i|; gamma is their minimum. Every input set must
// be nonempty and sorted ascending.
GroupScore compute_score(const std::vector<const std::vector<int>*>& regions);
GroupScore compute_score(const std::vector<GraspRegion>& regions, int first,
                         int last);

// Left-to-right partition: each group absorbs following regions while the
// group score stays at or above gamma_th; an empty region always forms its
// own group with gamma 0.
RegraspPlan greedy_partition(const std::vector<GraspRegion>& regions,
                             double gamma_th);

// Exhaustive minimum over all sequential partitions, for validation. Ties
// prefer a longer first group, then lexicographically longer prefixes.
// Refuses more than 17 regions.
RegraspPlan optimal_partition_bruteforce(const std::vector<GraspRegion>& regions,
                                         double gamma_th);

// Best antipodal pair with both endpoints inside the group intersection:
// maximizes the worst endpoint eta across the group's regions, ties broken
// by (index_a, index_b). Throws no_feasible_pair when no pair qualifies.
ContactPair grasp_contact_selection(const std::vector<int>& intersection,
                                    const std::vector<ContactPair>& pairs,
                                    const std::vector<GraspRegion>& group_regions);

}  // namespace screwgrasp
