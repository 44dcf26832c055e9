#include "srcv/basis.hpp"

#include <limits>

#include "srcv/error.hpp"

namespace srcv {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t factor = n - k + i;
    if (result > std::numeric_limits<std::size_t>::max() / factor) {
      throw Error(ErrorKind::InvalidArgument, "binomial coefficient overflows");
    }
    result = result * factor / i;  // exact: result * factor is divisible by i
  }
  return result;
}

namespace {

// exponent vectors of total degree `remaining` over coordinates [pos, d), descending lex
void emit_degree(std::vector<unsigned>& current, std::size_t pos, unsigned remaining,
                 std::vector<std::vector<unsigned>>& out) {
  const std::size_t d = current.size();
  if (pos + 1 == d) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    current[pos] = e;
    emit_degree(current, pos + 1, remaining - e, out);
  }
  current[pos] = 0;
}

}  // namespace

BasisSet::BasisSet(std::size_t dim, unsigned degree, std::optional<Payoff> payoff)
    : dim_(dim), degree_(degree), payoff_(std::move(payoff)) {
  if (dim == 0) throw Error(ErrorKind::InvalidArgument, "basis dimension must be positive");
  const std::size_t count = binomial(degree + dim, dim);
  exponents_.reserve(count);
  std::vector<unsigned> current(dim, 0);
  for (unsigned g = 0; g <= degree; ++g) emit_degree(current, 0, g, exponents_);
}

void BasisSet::eval(std::span<const double> x, std::span<double> out) const {
  if (degree_ <= 1) {
    out[0] = 1.0;
    if (degree_ == 1) {
      for (std::size_t i = 0; i < dim_; ++i) out[i + 1] = x[i];
    }
  } else {
    thread_local std::vector<double> powers;
    const std::size_t stride = degree_ + 1;
    powers.resize(dim_ * stride);
    for (std::size_t i = 0; i < dim_; ++i) {
      powers[i * stride] = 1.0;
      for (unsigned e = 1; e <= degree_; ++e) powers[i * stride + e] = powers[i * stride + e - 1] * x[i];
    }
    for (std::size_t b = 0; b < exponents_.size(); ++b) {
      double value = 1.0;
      const auto& ex = exponents_[b];
      for (std::size_t i = 0; i < dim_; ++i) {
        if (ex[i] != 0) value *= powers[i * stride + ex[i]];
      }
      out[b] = value;
    }
  }
  if (payoff_) out[exponents_.size()] = (*payoff_)(x);
}

Vector BasisSet::eval(std::span<const double> x) const {
  Vector out(static_cast<Eigen::Index>(size()));
  eval(x, {out.data(), size()});
  return out;
}

}  // namespace srcv
