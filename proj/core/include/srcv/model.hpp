#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace srcv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Terminal payoff f : R^d -> R. `name` is a registry spec that
/// make_payoff() can parse back (e.g. "square", "call_on_max:1:10").
struct Payoff {
  std::string name;
  std::function<double(std::span<const double>)> eval;

  double operator()(std::span<const double> x) const { return eval(x); }
};

/// max(max_{i < active_count} x_i - strike, 0)
double payoff_call_on_max(std::span<const double> x, double strike, std::size_t active_count);

/// Builds a payoff from its registry spec:
///   square               f(x) = x_0^2
///   constant:<c>         f(x) = c
///   call_on_max:<K>:<n>  f(x) = max(max_{i<n} x_i - K, 0)
///   coordinate:<i>       f(x) = x_i
Payoff make_payoff(std::string_view spec);

/// Lower-triangular A with A A^T = rho. Columns whose pivot vanishes
/// (singular but PSD input) are zero.
Matrix correlation_factor(const Matrix& rho);

struct CorrelationSpec {
  Matrix rho;
  Matrix factor;

  static CorrelationSpec from_matrix(const Matrix& rho);
};

/// Spatial derivatives needed by the order-2 weak Taylor step.
/// Hessian callbacks may be left empty, meaning the second derivatives
/// vanish identically (true for every model linear in the state).
struct ModelDerivatives {
  /// out(k, l) = d mu_k / d x_l, shape d x d
  std::function<void(std::span<const double> x, Eigen::Ref<Matrix> out)> drift_jacobian;
  /// out[j](k, l) = d sigma_{k,j} / d x_l, m matrices of shape d x d
  std::function<void(std::span<const double> x, std::span<Matrix> out)> diffusion_jacobian;
  /// out[k](l, n) = d^2 mu_k / d x_l d x_n
  std::function<void(std::span<const double> x, std::span<Matrix> out)> drift_hessian;
  /// out[j * d + k](l, n) = d^2 sigma_{k,j} / d x_l d x_n
  std::function<void(std::span<const double> x, std::span<Matrix> out)> diffusion_hessian;
};

/// Parameters of the truncated Heston-type basket; the last state
/// coordinate is the variance.
struct HestonParams {
  double rate = 0.0;
  std::vector<double> asset_vols;  // sigma^i, one per asset coordinate
  double kappa = 0.0;              // mean-reversion speed (lambda)
  double long_run_variance = 0.0;  // v-bar
  double vol_of_variance = 0.0;    // eta
  Matrix factor;                   // A, shape d x m
};

/// Time-homogeneous SDE dX = mu(X) dt + sigma(X) dW on [0, T].
struct ModelSpec {
  std::string name;
  std::size_t dim_state = 0;
  std::size_t dim_noise = 0;
  Vector x0;
  double horizon = 1.0;
  std::function<void(std::span<const double> x, Eigen::Ref<Vector> out)> drift;
  /// out has shape d x m
  std::function<void(std::span<const double> x, Eigen::Ref<Matrix> out)> diffusion;
  std::optional<ModelDerivatives> derivatives;
  std::optional<HestonParams> heston;

  Vector drift_at(std::span<const double> x) const;
  Matrix diffusion_at(std::span<const double> x) const;
  /// Throws InvalidArgument when dimensions disagree.
  void validate() const;
};

struct BuiltinModel {
  ModelSpec model;
  Payoff payoff;
};

/// "gbm1d_highvol", "gbm10d" or "heston9d"; throws UnknownModel otherwise.
BuiltinModel builtin_model(std::string_view name);
std::vector<std::string> builtin_model_names();

/// dX^i = r X^i dt + sigma_i X^i A^i dW with A = correlation_factor(rho).
ModelSpec make_gbm(std::string name, double rate, std::vector<double> vols, const Matrix& rho,
                   Vector x0, double horizon);

/// Scalar GBM dX = r X dt + sigma X dW.
ModelSpec make_gbm1d(std::string name, double rate, double vol, double x0, double horizon);

ModelSpec make_heston(std::string name, HestonParams params, Vector x0, double horizon);

Matrix gbm10d_correlation();
Matrix heston9d_correlation();

}  // namespace srcv
