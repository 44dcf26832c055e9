#include "srcv/regression.hpp"

#include <cmath>

#include <Eigen/QR>

#include "srcv/error.hpp"
#include "srcv/path_set.hpp"

namespace srcv {

LeastSquares::LeastSquares(const Matrix& design, double rcond)
    : n_samples_(static_cast<std::size_t>(design.rows())) {
  if (design.rows() == 0) throw Error(ErrorKind::EmptySample, "least squares on an empty sample");
  if (!design.allFinite()) throw Error(ErrorKind::InvalidArgument, "design matrix has non-finite entries");
  column_scale_ = design.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < column_scale_.size(); ++c) {
    if (column_scale_[c] == 0.0) column_scale_[c] = 1.0;
  }
  const Matrix scaled = design * column_scale_.cwiseInverse().asDiagonal();
  svd_.compute(scaled, Eigen::ComputeThinU | Eigen::ComputeFullV);
  svd_.setThreshold(rcond);
  rank_ = static_cast<std::size_t>(svd_.rank());
  const auto& sv = svd_.singularValues();
  condition_ = rank_ > 0 ? sv[0] / sv[static_cast<Eigen::Index>(rank_) - 1] : 0.0;

  // The scaled solve is minimal-norm in scaled coordinates only. Projecting
  // onto the row space of the design, spanned by D V_r, makes it minimal in
  // the original coordinates.
  const Eigen::Index k = design.cols();
  const auto r = static_cast<Eigen::Index>(rank_);
  if (r > 0 && r < k) {
    const Matrix row_space = column_scale_.asDiagonal() * svd_.matrixV().leftCols(r);
    const Eigen::HouseholderQR<Matrix> qr(row_space);
    const Matrix q = qr.householderQ() * Matrix::Identity(k, r);
    row_projector_ = q * q.transpose();
  }
}

Vector LeastSquares::solve(const Vector& targets) const {
  if (targets.size() != static_cast<Eigen::Index>(n_samples_)) {
    throw Error(ErrorKind::InvalidArgument, "target length differs from design rows");
  }
  if (rank_ == 0) return Vector::Zero(column_scale_.size());
  Vector beta = svd_.solve(targets).cwiseQuotient(column_scale_);
  if (row_projector_.size() > 0) beta = row_projector_ * beta;
  return beta;
}

Matrix LeastSquares::solve(const Matrix& targets) const {
  if (targets.rows() != static_cast<Eigen::Index>(n_samples_)) {
    throw Error(ErrorKind::InvalidArgument, "target rows differ from design rows");
  }
  if (rank_ == 0) return Matrix::Zero(column_scale_.size(), targets.cols());
  Matrix beta = column_scale_.cwiseInverse().asDiagonal() * svd_.solve(targets);
  if (row_projector_.size() > 0) beta = row_projector_ * beta;
  return beta;
}

double RegressionFit::predict(std::span<const double> basis_values) const {
  const double value = Eigen::Map<const Vector>(basis_values.data(), coefficients.size()).dot(coefficients);
  return truncation_bound ? truncate_estimate(value, *truncation_bound) : value;
}

RegressionFit fit_least_squares(const Matrix& design, const Vector& targets, double rcond) {
  if (!targets.allFinite()) throw Error(ErrorKind::InvalidArgument, "regression targets are not finite");
  const LeastSquares ls(design, rcond);
  return RegressionFit{ls.solve(targets), ls.n_samples(), ls.rank(), ls.condition(), std::nullopt};
}

double truncate_estimate(double value, double bound) {
  if (!(bound > 0.0)) throw Error(ErrorKind::InvalidArgument, "truncation bound must be positive");
  if (std::abs(value) <= bound) return value;
  return std::copysign(bound, value);
}

std::map<std::size_t, std::vector<std::size_t>> stratify_by_innovation(const PathSet& paths, std::size_t step) {
  if (step < 1 || step > paths.n_steps()) throw Error(ErrorKind::InvalidArgument, "step out of range");
  std::map<std::size_t, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < paths.n_paths(); ++i) strata[paths.scenario(i, step)].push_back(i);
  return strata;
}

}  // namespace srcv
