#include "intgeo/density.hpp"

#include <stdexcept>
#include <utility>

#include "intgeo/mixed_volume.hpp"

namespace intgeo {

DensityValue d1(const CenteredEllipsoid& body, const Eigen::VectorXd& xi) {
  if (xi.size() != body.dim())
    throw std::invalid_argument("d1: covector dimension mismatch");
  return DensityValue{2.0 * body.support(xi), 1};
}

DensityValue mixed_density(const std::vector<CenteredEllipsoid>& bodies,
                           const Frame& frame, const DensityOptions& opts) {
  const int m = frame.size();
  if (static_cast<int>(bodies.size()) != m)
    throw std::invalid_argument("mixed_density: body count must match frame size");
  for (const auto& b : bodies)
    if (b.dim() != frame.ambient_dim())
      throw std::invalid_argument("mixed_density: body/frame dimension mismatch");

  if (frame.degenerate()) return DensityValue{0.0, m};

  std::vector<CenteredEllipsoid> projected;
  projected.reserve(bodies.size());
  for (const auto& b : bodies) projected.push_back(b.project(frame));

  MixedVolumeEstimate est;
  if (opts.exact && m <= 3) {
    est = mixed_volume_oracle(projected, std::max(opts.directions, 20 * m));
  } else {
    est = mixed_volume_mc(projected, opts.trials, opts.seed, opts.threads);
  }
  return DensityValue{est.value, m};
}

DensityValue product_d1(const std::vector<CenteredEllipsoid>& bodies,
                        const Frame& frame, const DensityOptions& opts) {
  DensityValue dm = mixed_density(bodies, frame, opts);
  double factorial = 1.0;
  for (int i = 2; i <= dm.order; ++i) factorial *= i;
  dm.value *= factorial;
  return dm;
}

ProductStructure::ProductStructure(std::vector<int> factor_dims)
    : dims_(std::move(factor_dims)) {
  if (dims_.empty())
    throw std::invalid_argument("ProductStructure: need at least one factor");
  offsets_.reserve(dims_.size());
  for (int d : dims_) {
    if (d < 1) throw std::invalid_argument("ProductStructure: factor dim must be >= 1");
    offsets_.push_back(ambient_);
    ambient_ += d;
  }
}

void ProductStructure::check_index(int i) const {
  if (i < 0 || i >= factor_count())
    throw std::invalid_argument("ProductStructure: factor index out of range");
}

int ProductStructure::factor_dim(int i) const {
  check_index(i);
  return dims_[static_cast<std::size_t>(i)];
}

int ProductStructure::factor_offset(int i) const {
  check_index(i);
  return offsets_[static_cast<std::size_t>(i)];
}

Eigen::VectorXd ProductStructure::component(int i, const Eigen::VectorXd& xi) const {
  check_index(i);
  if (xi.size() != ambient_)
    throw std::invalid_argument("ProductStructure: vector dimension mismatch");
  return xi.segment(factor_offset(i), factor_dim(i));
}

CenteredEllipsoid ProductStructure::embedded_unit_ball(int i) const {
  check_index(i);
  Eigen::MatrixXd form = Eigen::MatrixXd::Zero(ambient_, ambient_);
  const int off = factor_offset(i);
  const int d = factor_dim(i);
  form.block(off, off, d, d).setIdentity();
  return CenteredEllipsoid(std::move(form));
}

DensityValue vol1_factor(const ProductStructure& product, int factor_index,
                         const Eigen::VectorXd& xi) {
  return DensityValue{product.component(factor_index, xi).norm(), 1};
}

}  // namespace intgeo
