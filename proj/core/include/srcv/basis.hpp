#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "srcv/model.hpp"

namespace srcv {

/// Binomial coefficient C(n, k); throws InvalidArgument on overflow.
std::size_t binomial(std::size_t n, std::size_t k);

/// Regression basis: all monomials prod_i x_i^{l_i} with sum l_i <= degree,
/// optionally followed by the payoff.
///
/// Order: the constant first, then monomials grouped by total degree
/// (1, 2, ..., degree); inside a degree group exponent vectors are in
/// descending lexicographic order, e.g. for d = 2, degree 2:
///   1, x1, x2, x1^2, x1 x2, x2^2 [, f(x)]
class BasisSet {
 public:
  BasisSet(std::size_t dim, unsigned degree, std::optional<Payoff> payoff = std::nullopt);

  std::size_t dim() const noexcept { return dim_; }
  unsigned degree() const noexcept { return degree_; }
  bool include_payoff() const noexcept { return payoff_.has_value(); }
  const std::optional<Payoff>& payoff() const noexcept { return payoff_; }
  /// K = C(degree + dim, dim) (+ 1 with payoff)
  std::size_t size() const noexcept { return exponents_.size() + (payoff_ ? 1 : 0); }
  const std::vector<std::vector<unsigned>>& exponents() const noexcept { return exponents_; }

  void eval(std::span<const double> x, std::span<double> out) const;
  Vector eval(std::span<const double> x) const;

 private:
  std::size_t dim_;
  unsigned degree_;
  std::optional<Payoff> payoff_;
  std::vector<std::vector<unsigned>> exponents_;
};

}  // namespace srcv
