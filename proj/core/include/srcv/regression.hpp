#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/SVD>

#include "srcv/model.hpp"

namespace srcv {

class PathSet;

inline constexpr double kDefaultRcond = 1e-10;

/// Minimal-norm least squares via SVD of the column-equilibrated design.
/// Singular values below rcond * (largest) count as zero. The factorisation
/// is reused across right-hand sides.
class LeastSquares {
 public:
  explicit LeastSquares(const Matrix& design, double rcond = kDefaultRcond);

  Vector solve(const Vector& targets) const;
  Matrix solve(const Matrix& targets) const;

  std::size_t n_samples() const noexcept { return n_samples_; }
  std::size_t rank() const noexcept { return rank_; }
  /// Ratio of the largest to the smallest retained singular value
  /// of the equilibrated design.
  double condition() const noexcept { return condition_; }

 private:
  std::size_t n_samples_;
  std::size_t rank_ = 0;
  double condition_ = 0.0;
  Vector column_scale_;
  Matrix row_projector_;  // empty unless rank-deficient
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd_;
};

struct RegressionFit {
  Vector coefficients;
  std::size_t n_samples = 0;
  std::size_t rank = 0;
  double condition = 0.0;
  std::optional<double> truncation_bound;

  /// Inner product with basis values, clipped to [-A, A] when a bound is set.
  double predict(std::span<const double> basis_values) const;
};

/// Throws EmptySample when the design has no rows.
RegressionFit fit_least_squares(const Matrix& design, const Vector& targets, double rcond = kDefaultRcond);

/// T_A: value if |value| <= A, else A sign(value).
double truncate_estimate(double value, double bound);

/// Partition of path indices by the scenario id of the step-j innovation
/// (1 <= j <= J). Only nonempty strata appear; keys ascend.
std::map<std::size_t, std::vector<std::size_t>> stratify_by_innovation(const PathSet& paths, std::size_t step);

}  // namespace srcv
