#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "srcv/rng.hpp"

namespace srcv {

/// Law of the discrete innovation driving one scheme step.
///
/// Order 1: xi in {-1, +1}^m, uniform.
/// Order 2: xi in {-sqrt3, 0, +sqrt3}^m with weights (1/6, 2/3, 1/6), and
///          V in {-1, +1}^{m(m-1)/2} uniform, indexed by pairs k < l in
///          row-major order (0,1), (0,2), ..., (m-2, m-1).
///
/// An innovation is stored as signed byte codes: the m xi codes followed by
/// the V codes. For order 1 a code is the value itself; for order 2 a xi
/// code c in {-1, 0, 1} stands for c * sqrt3.
///
/// Scenarios (points of the finite support) are numbered 0..c_m-1:
///   order 1: s = sum_i [xi_i = +1] 2^i
///   order 2: s = sum_i (c_i + 1) 3^i + 3^m * sum_p [V_p = +1] 2^p
class InnovationLaw {
 public:
  InnovationLaw(int order, std::size_t m);

  int order() const noexcept { return order_; }
  std::size_t dim_noise() const noexcept { return m_; }
  std::size_t pair_count() const noexcept { return order_ == 2 ? m_ * (m_ - 1) / 2 : 0; }
  /// Codes per innovation: m (+ m(m-1)/2 for order 2).
  std::size_t width() const noexcept { return m_ + pair_count(); }
  /// c_m = 2^m (order 1) or 3^m 2^{m(m-1)/2} (order 2).
  std::size_t scenario_count() const noexcept { return scenario_count_; }

  void decode(std::size_t scenario, std::span<std::int8_t> codes) const;
  std::size_t encode(std::span<const std::int8_t> codes) const;
  /// P(xi = y, V = z) for the scenario; equals p_m(y) for order 2.
  double probability(std::size_t scenario) const;
  /// Maps codes to xi values (length m) and V values (length pair_count).
  void values(std::span<const std::int8_t> codes, std::span<double> xi, std::span<double> v) const;
  /// Draws one innovation into `codes`.
  void sample(CounterRng& rng, std::span<std::int8_t> codes) const;

  /// Index of pair (k, l), k < l, in the V block.
  std::size_t pair_index(std::size_t k, std::size_t l) const;

 private:
  int order_;
  std::size_t m_;
  std::size_t scenario_count_;
};

/// Decoded innovation values.
struct Innovation {
  std::vector<double> xi;
  std::vector<double> v;
};

Innovation sample_innovation_first(CounterRng& rng, std::size_t m);
Innovation sample_innovation_second(CounterRng& rng, std::size_t m);

/// Maximum number of scenarios a law may have before enumeration helpers
/// refuse to build per-scenario tables.
inline constexpr std::size_t kMaxScenarioCount = std::size_t{1} << 20;

}  // namespace srcv
