#include "intgeo/ellipsoid.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace intgeo {

double unit_ball_volume(int m) {
  if (m < 0) throw std::invalid_argument("unit_ball_volume: negative dimension");
  return std::pow(3.14159265358979323846, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

CenteredEllipsoid::CenteredEllipsoid(Eigen::MatrixXd form) : form_(std::move(form)) {
  if (form_.rows() < 1 || form_.rows() != form_.cols())
    throw std::invalid_argument("CenteredEllipsoid: form must be square with dim >= 1");

  const double scale = form_.cwiseAbs().maxCoeff();
  if ((form_ - form_.transpose()).cwiseAbs().maxCoeff() > kSymTol * std::max(scale, 1.0))
    throw std::invalid_argument("CenteredEllipsoid: form is not symmetric");
  form_ = 0.5 * (form_ + form_.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(form_);
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double lambda_max = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -kPsdTol * std::max(lambda_max, 1.0))
    throw std::invalid_argument("CenteredEllipsoid: form is not positive semidefinite");
  if (ev.minCoeff() < 0.0) {
    form_ = solver.eigenvectors() * ev.cwiseMax(0.0).asDiagonal() *
            solver.eigenvectors().transpose();
    form_ = 0.5 * (form_ + form_.transpose());
  }
}

CenteredEllipsoid CenteredEllipsoid::unit_ball(int dim) {
  return CenteredEllipsoid(Eigen::MatrixXd::Identity(dim, dim));
}

CenteredEllipsoid CenteredEllipsoid::point(int dim) {
  return CenteredEllipsoid(Eigen::MatrixXd::Zero(dim, dim));
}

CenteredEllipsoid CenteredEllipsoid::segment(const Eigen::VectorXd& half_axis) {
  return CenteredEllipsoid(half_axis * half_axis.transpose());
}

double CenteredEllipsoid::support(const Eigen::VectorXd& xi) const {
  if (xi.size() != form_.rows())
    throw std::invalid_argument("support: direction dimension mismatch");
  return std::sqrt(std::max(xi.dot(form_ * xi), 0.0));
}

Eigen::MatrixXd CenteredEllipsoid::sqrt_form() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(form_);
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().transpose();
}

double CenteredEllipsoid::volume() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(form_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>::RealVectorType ev =
      solver.eigenvalues().cwiseMax(0.0);
  double det = 1.0;
  for (int i = 0; i < ev.size(); ++i) det *= ev[i];
  return unit_ball_volume(dim()) * std::sqrt(det);
}

CenteredEllipsoid CenteredEllipsoid::project(const Frame& frame) const {
  if (frame.ambient_dim() != dim())
    throw std::invalid_argument("project: frame ambient dimension mismatch");
  const Eigen::MatrixXd& b = frame.matrix();
  return CenteredEllipsoid(b.transpose() * form_ * b);
}

Frame::Frame(Eigen::MatrixXd vectors) : matrix_(std::move(vectors)) {
  if (matrix_.rows() < 1)
    throw std::invalid_argument("Frame: ambient dimension must be >= 1");
  if (matrix_.cols() < 1 || matrix_.cols() > matrix_.rows())
    throw std::invalid_argument("Frame: need 1 <= m <= ambient_dim vectors");
}

Frame::Frame(int ambient_dim, const std::vector<Eigen::VectorXd>& vectors)
    : Frame([&] {
        Eigen::MatrixXd m(ambient_dim, static_cast<int>(vectors.size()));
        for (std::size_t j = 0; j < vectors.size(); ++j) {
          if (vectors[j].size() != ambient_dim)
            throw std::invalid_argument("Frame: vector dimension mismatch");
          m.col(static_cast<int>(j)) = vectors[j];
        }
        return m;
      }()) {}

Frame Frame::standard(int ambient_dim, int m) {
  return Frame(Eigen::MatrixXd::Identity(ambient_dim, ambient_dim).leftCols(m));
}

double Frame::singular_value_ratio() const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0.0;
  return sv[sv.size() - 1] / sv[0];
}

bool Frame::degenerate(double tol) const { return singular_value_ratio() < tol; }

MinkowskiSum::MinkowskiSum(std::vector<CenteredEllipsoid> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("MinkowskiSum: no terms");
  for (const auto& t : terms_)
    if (t.dim() != terms_.front().dim())
      throw std::invalid_argument("MinkowskiSum: dimension mismatch");
}

int MinkowskiSum::dim() const { return terms_.front().dim(); }

double MinkowskiSum::support(const Eigen::VectorXd& xi) const {
  double h = 0.0;
  for (const auto& t : terms_) h += t.support(xi);
  return h;
}

Eigen::VectorXd MinkowskiSum::boundary_point(const Eigen::VectorXd& u) const {
  if (u.size() != dim())
    throw std::invalid_argument("boundary_point: direction dimension mismatch");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim());
  for (const auto& t : terms_) {
    const Eigen::VectorXd qu = t.form() * u;
    const double quad = u.dot(qu);
    const double floor = kPsdTol * std::max(t.form().cwiseAbs().maxCoeff(), 1e-300) *
                         u.squaredNorm();
    if (quad > floor) x += qu / std::sqrt(quad);
  }
  return x;
}

MinkowskiSum sum(const CenteredEllipsoid& a, const CenteredEllipsoid& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("sum: dimension mismatch");
  return MinkowskiSum({a, b});
}

}  // namespace intgeo
