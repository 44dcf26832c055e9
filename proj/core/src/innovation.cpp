#include "srcv/innovation.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "srcv/error.hpp"

namespace srcv {
namespace {

std::size_t checked_scenario_count(int order, std::size_t m) {
  if (order != 1 && order != 2) {
    throw Error(ErrorKind::InvalidArgument, "innovation order must be 1 or 2");
  }
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "noise dimension must be positive");
  const double log2_count = order == 1 ? static_cast<double>(m)
                                       : static_cast<double>(m) * std::log2(3.0) +
                                             static_cast<double>(m * (m - 1) / 2);
  if (log2_count > 62.0) {
    throw Error(ErrorKind::InvalidArgument,
                "innovation law with m=" + std::to_string(m) + " has too many scenarios");
  }
  std::size_t count = 1;
  if (order == 1) {
    count <<= m;
  } else {
    for (std::size_t i = 0; i < m; ++i) count *= 3;
    count <<= m * (m - 1) / 2;
  }
  return count;
}

}  // namespace

InnovationLaw::InnovationLaw(int order, std::size_t m)
    : order_(order), m_(m), scenario_count_(checked_scenario_count(order, m)) {}

void InnovationLaw::decode(std::size_t s, std::span<std::int8_t> codes) const {
  if (codes.size() != width()) throw Error(ErrorKind::InvalidArgument, "code buffer width");
  if (order_ == 1) {
    for (std::size_t i = 0; i < m_; ++i) codes[i] = ((s >> i) & 1u) ? 1 : -1;
    return;
  }
  for (std::size_t i = 0; i < m_; ++i) {
    codes[i] = static_cast<std::int8_t>(static_cast<int>(s % 3) - 1);
    s /= 3;
  }
  for (std::size_t p = 0; p < pair_count(); ++p) codes[m_ + p] = ((s >> p) & 1u) ? 1 : -1;
}

std::size_t InnovationLaw::encode(std::span<const std::int8_t> codes) const {
  std::size_t s = 0;
  if (order_ == 1) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (codes[i] > 0) s |= std::size_t{1} << i;
    }
    return s;
  }
  std::size_t weight = 1;
  for (std::size_t i = 0; i < m_; ++i) {
    s += static_cast<std::size_t>(codes[i] + 1) * weight;
    weight *= 3;
  }
  for (std::size_t p = 0; p < pair_count(); ++p) {
    if (codes[m_ + p] > 0) s += weight << p;
  }
  return s;
}

double InnovationLaw::probability(std::size_t s) const {
  if (order_ == 1) return std::ldexp(1.0, -static_cast<int>(m_));
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (s % 3 == 1) ++zeros;
    s /= 3;
  }
  // 4^{#zeros} / (6^m 2^{m(m-1)/2}) = (2/3)^{#zeros} (1/6)^{m - #zeros} 2^{-m(m-1)/2}
  return std::pow(2.0 / 3.0, static_cast<double>(zeros)) *
         std::pow(1.0 / 6.0, static_cast<double>(m_ - zeros)) *
         std::ldexp(1.0, -static_cast<int>(pair_count()));
}

void InnovationLaw::values(std::span<const std::int8_t> codes, std::span<double> xi,
                           std::span<double> v) const {
  const double scale = order_ == 1 ? 1.0 : std::numbers::sqrt3;
  for (std::size_t i = 0; i < m_; ++i) xi[i] = scale * codes[i];
  for (std::size_t p = 0; p < pair_count(); ++p) v[p] = codes[m_ + p];
}

void InnovationLaw::sample(CounterRng& rng, std::span<std::int8_t> codes) const {
  if (order_ == 1) {
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i % 32 == 0) bits = rng.next_u32();
      codes[i] = (bits & 1u) ? 1 : -1;
      bits >>= 1;
    }
    return;
  }
  for (std::size_t i = 0; i < m_; ++i) {
    const std::uint32_t u = rng.uniform_below(6);
    codes[i] = u == 0 ? -1 : (u == 5 ? 1 : 0);
  }
  std::uint32_t bits = 0;
  for (std::size_t p = 0; p < pair_count(); ++p) {
    if (p % 32 == 0) bits = rng.next_u32();
    codes[m_ + p] = (bits & 1u) ? 1 : -1;
    bits >>= 1;
  }
}

std::size_t InnovationLaw::pair_index(std::size_t k, std::size_t l) const {
  if (!(k < l && l < m_)) throw Error(ErrorKind::InvalidArgument, "pair index requires k < l < m");
  // pairs (0,1..m-1), (1,2..m-1), ...
  return k * m_ - k * (k + 1) / 2 + (l - k - 1);
}

namespace {

Innovation sample_decoded(int order, CounterRng& rng, std::size_t m) {
  const InnovationLaw law(order, m);
  std::vector<std::int8_t> codes(law.width());
  law.sample(rng, codes);
  Innovation out{std::vector<double>(m), std::vector<double>(law.pair_count())};
  law.values(codes, out.xi, out.v);
  return out;
}

}  // namespace

Innovation sample_innovation_first(CounterRng& rng, std::size_t m) {
  return sample_decoded(1, rng, m);
}

Innovation sample_innovation_second(CounterRng& rng, std::size_t m) {
  return sample_decoded(2, rng, m);
}

}  // namespace srcv
