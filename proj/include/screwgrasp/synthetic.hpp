#pragma once

#include "screwgrasp/point_cloud.hpp"

namespace screwgrasp {

// Grid-sampled axis-aligned box surface centered at the origin, with exact
// face normals.  extents are full side lengths.  Per-face grid counts are
// rounded to odd so each face carries exact center rows and columns; mirror
// faces share the same grid, so every sample has an exact antipodal partner.
// The seed only shuffles point order, never geometry, which makes results
// reproducible per seed while exercising index-independence across seeds.
PointCloud generate_box_cloud(const Vec3& extents, double samples_per_unit_area,
                              unsigned seed = 0);

// Grid-sampled cylinder surface (axis +z, centered at the origin) with exact
// normals: rings of even angular count on the wall (so diametrically opposed
// samples exist) and polar grids plus a center point on each cap.
PointCloud generate_cylinder_cloud(double radius, double height,
                                   double samples_per_unit_area,
                                   unsigned seed = 0);

}  // namespace screwgrasp
