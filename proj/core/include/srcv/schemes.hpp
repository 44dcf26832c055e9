#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "srcv/innovation.hpp"
#include "srcv/model.hpp"

namespace srcv {

enum class Scheme : std::uint32_t {
  euler1 = 1,        ///< simplified weak Euler, xi in {-1, +1}^m
  taylor2 = 2,       ///< simplified order-2 weak Taylor, three-point xi plus V
  heston_trunc = 3,  ///< weak Euler for the truncated Heston basket
};

int scheme_order(Scheme scheme) noexcept;
std::string_view to_string(Scheme scheme) noexcept;
/// Throws InvalidArgument for unknown names.
Scheme parse_scheme(std::string_view name);

/// x + mu(x) delta + sigma(x) xi sqrt(delta)
Vector step_weak_euler(const ModelSpec& model, std::span<const double> x, std::span<const double> xi,
                       double delta);

/// Simplified order-2 weak Taylor step:
///
///   x + mu D + 1/2 L0 mu D^2
///     + sum_j [ sigma_j + D/2 (L0 sigma_j + Lj mu) ] dW_j
///     + 1/2 sum_{j1,j2} Lj1 sigma_j2 (dW_j1 dW_j2 + V_j1j2)
///
/// with dW_j = sqrt(D) xi_j, V_jj = -D, V_kl = D v_kl for k < l and
/// V_lk = -V_kl. L0 = mu.grad + 1/2 (sigma sigma^T) : Hess, Lj = sigma_j.grad.
/// Throws DerivativeUnavailable when the model has no derivatives.
Vector step_weak_taylor2(const ModelSpec& model, std::span<const double> x, std::span<const double> xi,
                         std::span<const double> v, double delta);

/// Truncated Heston step; asset i:
///   x_i (1 + r D + sigma_i sqrt(x_v^+) A^i xi sqrt(D))
/// variance:
///   x_v + lambda (vbar - x_v^+) D + eta sqrt(x_v^+) A^v xi sqrt(D)
Vector step_heston_truncated(const ModelSpec& model, std::span<const double> x,
                             std::span<const double> xi, double delta);

/// Reusable stepper with scratch buffers; not thread-safe, use one per worker.
/// Holds a reference to `model`, which must outlive it.
class Stepper {
 public:
  Stepper(const ModelSpec& model, Scheme scheme, double delta);

  const InnovationLaw& law() const noexcept { return law_; }
  Scheme scheme() const noexcept { return scheme_; }
  double delta() const noexcept { return delta_; }

  void step_codes(std::span<const double> x, std::span<const std::int8_t> codes, std::span<double> out);
  void step_values(std::span<const double> x, std::span<const double> xi, std::span<const double> v,
                   std::span<double> out);

 private:
  void euler(std::span<const double> x, std::span<const double> xi, std::span<double> out);
  void taylor2(std::span<const double> x, std::span<const double> xi, std::span<const double> v,
               std::span<double> out);
  void heston(std::span<const double> x, std::span<const double> xi, std::span<double> out);

  const ModelSpec& model_;
  Scheme scheme_;
  double delta_;
  double sqrt_delta_;
  InnovationLaw law_;
  Vector mu_;
  Matrix sigma_;
  Matrix drift_jac_;
  std::vector<Matrix> diff_jac_;
  std::vector<Matrix> drift_hess_;
  std::vector<Matrix> diff_hess_;
  std::vector<double> xi_buf_;
  std::vector<double> v_buf_;
};

}  // namespace srcv
