#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "intgeo/ellipsoid.hpp"

namespace intgeo {

// Value of an m-density evaluated on a frame of m covectors.
struct DensityValue {
  double value = 0.0;
  int order = 0;
};

// How mixed densities evaluate the underlying mixed volume.  The exact
// polarization route is available for order <= 3; higher orders fall back
// to the Gaussian Monte Carlo estimator.
struct DensityOptions {
  bool exact = true;
  int directions = 720;
  std::int64_t trials = 200000;
  std::uint64_t seed = 0;
  int threads = 1;
};

// d1(A)(xi) = h(xi) - h(-xi) = 2 h(xi) for a centered body.
DensityValue d1(const CenteredEllipsoid& body, const Eigen::VectorXd& xi);

// Mixed m-density: mixed volume of the bodies projected onto the frame,
// measured in frame coordinates.  A linearly dependent frame gives 0.
DensityValue mixed_density(const std::vector<CenteredEllipsoid>& bodies,
                           const Frame& frame, const DensityOptions& opts = {});

// Product of the 1-densities d1(A_1) ... d1(A_m) evaluated on a frame,
// computed as m! times the mixed m-density.
DensityValue product_d1(const std::vector<CenteredEllipsoid>& bodies,
                        const Frame& frame, const DensityOptions& opts = {});

// Direct-sum decomposition of a coordinate space into consecutive factors.
class ProductStructure {
 public:
  explicit ProductStructure(std::vector<int> factor_dims);

  int factor_count() const { return static_cast<int>(dims_.size()); }
  int ambient_dim() const { return ambient_; }
  int factor_dim(int i) const;
  int factor_offset(int i) const;

  // Component of xi along the i-th factor, as a vector in that factor.
  Eigen::VectorXd component(int i, const Eigen::VectorXd& xi) const;

  // Unit ball of the i-th factor as a degenerate ellipsoid in the full space.
  CenteredEllipsoid embedded_unit_ball(int i) const;

 private:
  void check_index(int i) const;

  std::vector<int> dims_;
  std::vector<int> offsets_;
  int ambient_ = 0;
};

// vol_{1,i}(xi): Euclidean norm of the i-th component of xi.  Coincides
// with (1/2) d1(embedded unit ball of factor i)(xi).
DensityValue vol1_factor(const ProductStructure& product, int factor_index,
                         const Eigen::VectorXd& xi);

}  // namespace intgeo
