#include <cmath>

#include "srcv/error.hpp"
#include "srcv/model.hpp"

namespace srcv {
namespace {

constexpr double kInputTol = 1e-12;
constexpr double kNegativePivotTol = 1e-10;
constexpr double kZeroPivot = 1e-14;

}  // namespace

Matrix correlation_factor(const Matrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "correlation matrix must be square and nonempty");
  }
  const Eigen::Index n = rho.rows();
  if ((rho - rho.transpose()).cwiseAbs().maxCoeff() > kInputTol) {
    throw Error(ErrorKind::AsymmetricInput, "correlation matrix is not symmetric");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(rho(i, i) - 1.0) > kInputTol) {
      throw Error(ErrorKind::InvalidArgument, "correlation matrix must have unit diagonal");
    }
  }

  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double pivot = rho(k, k) - a.row(k).head(k).squaredNorm();
    if (pivot < -kNegativePivotTol) {
      throw Error(ErrorKind::NotPSD, "correlation matrix is not positive semi-definite (pivot " +
                                         std::to_string(pivot) + " at " + std::to_string(k) + ")");
    }
    if (pivot <= kZeroPivot) continue;  // column k stays zero
    const double diag = std::sqrt(pivot);
    a(k, k) = diag;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      a(i, k) = (rho(i, k) - a.row(i).head(k).dot(a.row(k).head(k))) / diag;
    }
  }
  return a;
}

CorrelationSpec CorrelationSpec::from_matrix(const Matrix& rho) {
  return CorrelationSpec{rho, correlation_factor(rho)};
}

}  // namespace srcv
