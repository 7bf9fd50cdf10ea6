#pragma once

#include <cstdint>
#include <vector>

#include "intgeo/ellipsoid.hpp"

namespace intgeo {

enum class MixedVolumeMethod { gaussian_mc, polarization_oracle };

struct MixedVolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;  // exactly 0 for the polarization oracle
  std::int64_t samples = 0;
  MixedVolumeMethod method = MixedVolumeMethod::gaussian_mc;
};

/// E|det G| for an m x m matrix of independent standard normals:
/// 2^{m/2} Gamma((m+1)/2) / sqrt(pi).
double expected_abs_gaussian_det(int m);

/// Mixed volume V(E_1, ..., E_m) of m centered ellipsoids in R^m by the
/// random-determinant estimator:
///   kappa_m * mean|det(A_1 g_1, ..., A_m g_m)| / E|det(g_1, ..., g_m)|,
/// A_i = Q_i^{1/2}, g_i independent standard Gaussian vectors. The constant
/// is pinned by V(B, ..., B) = kappa_m. Per-trial streams derive from
/// (seed, trial), so identical seeds reproduce bit-for-bit at any thread
/// count.
MixedVolumeEstimate mixed_volume_mc(const std::vector<CenteredEllipsoid>& bodies,
                                    std::int64_t trials, std::uint64_t seed,
                                    int threads = 1);

/// Brute-force oracle for m <= 3: polarization over Minkowski-sum volumes,
///   V = (1/m!) sum_{S nonempty} (-1)^{m-|S|} vol(sum_{i in S} E_i),
/// each volume taken as the convex hull of boundary points along a fixed
/// quasi-uniform direction set. Inscribed hulls make the per-subset volumes
/// monotone nondecreasing under direction refinement.
MixedVolumeEstimate mixed_volume_oracle(const std::vector<CenteredEllipsoid>& bodies,
                                        int directions);

/// The quasi-uniform direction set the oracle uses (m in {1, 2, 3}).
std::vector<Eigen::VectorXd> oracle_directions(int m, int count);

/// Hull volume of the boundary samples of a Minkowski sum over the given
/// directions (dimension 1, 2 or 3).
double minkowski_sum_volume(const MinkowskiSum& body,
                            const std::vector<Eigen::VectorXd>& directions);

}  // namespace intgeo
