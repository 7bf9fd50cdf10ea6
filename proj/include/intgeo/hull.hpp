#pragma once

#include <vector>

#include <Eigen/Core>

namespace intgeo {

/// Length of the smallest interval containing all points.
double hull_length_1d(const std::vector<double>& points);

/// Area of the convex hull (monotone chain + shoelace). Collinear sets give 0.
double hull_area_2d(const std::vector<Eigen::Vector2d>& points);

/// Volume of the 3-d convex hull (incremental construction). Coplanar sets
/// give 0. Near-coplanar expansions below the relative tolerance are skipped,
/// so the result is a slightly inscribed volume, never an inflated one.
double hull_volume_3d(const std::vector<Eigen::Vector3d>& points);

}  // namespace intgeo
