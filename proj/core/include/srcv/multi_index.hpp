#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "srcv/innovation.hpp"
#include "srcv/schemes.hpp"

namespace srcv {

/// H_0 = 1, H_1(x) = x, H_2(x) = (x^2 - 1) / sqrt 2; orthonormal under the
/// three-point law.
double hermite_H(int order, double x);

/// P(xi = y, V = z) for the order-2 law with m = y.size(), any z:
///   4^{#{i : y_i = 0}} / (6^m 2^{m(m-1)/2}).
/// Throws InvalidCoordinate unless every y_i is in {-sqrt3, 0, sqrt3}.
double p_m(std::span<const double> y);

/// Order 1: o holds the bits k (r is empty). Order 2: o in {0,1,2}^m and r
/// in {0,1}^{m(m-1)/2}, in the pair order of InnovationLaw.
struct MultiIndex {
  std::vector<std::uint8_t> o;
  std::vector<std::uint8_t> r;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// The multi-indices carried by a control variate: either every
/// non-zero index (2^m - 1 or c_m - 1 of them), or only the m unit
/// indices (k(r) = e_r; for order 2, o = e_r and r = 0).
class IndexSet {
 public:
  static IndexSet full(const InnovationLaw& law);
  static IndexSet simplified(const InnovationLaw& law);

  const InnovationLaw& law() const noexcept { return law_; }
  bool is_simplified() const noexcept { return simplified_; }
  std::size_t size() const noexcept { return items_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<MultiIndex>& items() const noexcept { return items_; }

  /// prod_i (xi_i)^{k_i} (order 1) or prod_i H_{o_i}(xi_i) prod_p v_p^{r_p} (order 2).
  double weight(std::size_t index, std::span<const double> xi, std::span<const double> v) const;
  /// All weights for one innovation given by codes.
  void weights(std::span<const std::int8_t> codes, std::span<double> out) const;

 private:
  IndexSet(InnovationLaw law, bool simplified, std::vector<MultiIndex> items)
      : law_(law), simplified_(simplified), items_(std::move(items)) {}

  InnovationLaw law_;
  bool simplified_;
  std::vector<MultiIndex> items_;
};

/// Innovation codes identifying one scenario (xi codes then V codes).
using ScenarioKey = std::vector<std::int8_t>;

/// sum_s P(s) w_index(s) h(s) over every scenario of the law.
/// Throws MissingScenario if some scenario has no entry in h.
double a_from_h(const InnovationLaw& law, const std::map<ScenarioKey, double>& h, const MultiIndex& index);
/// Order-1 form: 2^{-m} sum_y [prod y_i^{k_i}] h(y).
double a_from_h_first(const std::map<ScenarioKey, double>& h, const MultiIndex& k);
/// Order-2 form: sum_{y,z} p_m(y) prod H_{o_i}(y_i) prod z^{r} h(y, z).
double a_from_h_second(const std::map<ScenarioKey, double>& h, const MultiIndex& index);

/// q_{j-1}(x) = sum_s P(s) q_j(Phi(x, s)), exact over all scenarios.
double q_backward(const std::function<double(std::span<const double>)>& q_next, std::span<const double> x,
                  Stepper& stepper);
double q_backward_first(const std::function<double(std::span<const double>)>& q_next, std::span<const double> x,
                        const ModelSpec& model, double delta);

}  // namespace srcv
