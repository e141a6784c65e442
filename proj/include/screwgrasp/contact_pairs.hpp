#pragma once

#include <vector>

#include "screwgrasp/point_cloud.hpp"

namespace screwgrasp {

// Candidate parallel-jaw grasp: two cloud indices whose normals oppose each
// other along the connecting line.  `defect` is the worse of the two angular
// deviations from perfect antipodality, in radians.
struct ContactPair {
  int index_a = -1;  // always < index_b
  int index_b = -1;
  double defect = 0.0;
};

struct PairParams {
  double max_gripper_width = 0.08;          // m
  double antipodal_tolerance = 0.2617993877991494;  // 15 degrees
};

// For every point, its best partner (minimum defect) within gripper reach;
// deduplicated and sorted by index pair.  Pair geometry is rigid-invariant,
// so pairs computed on the canonical cloud remain valid for every transformed
// copy of it.
std::vector<ContactPair> antipodal_pairs(const PointCloud& cloud, const PairParams& params = {});

}  // namespace screwgrasp
