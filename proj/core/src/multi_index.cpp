#include "srcv/multi_index.hpp"

#include <cmath>
#include <numbers>

#include "srcv/error.hpp"

namespace srcv {

double hermite_H(int order, double x) {
  switch (order) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return (x * x - 1.0) / std::numbers::sqrt2;
    default: throw Error(ErrorKind::InvalidArgument, "Hermite order must be 0, 1 or 2");
  }
}

double p_m(std::span<const double> y) {
  const std::size_t m = y.size();
  if (m == 0) throw Error(ErrorKind::InvalidCoordinate, "p_m needs at least one coordinate");
  std::size_t zeros = 0;
  for (double yi : y) {
    if (yi == 0.0) {
      ++zeros;
    } else if (std::abs(std::abs(yi) - std::numbers::sqrt3) > 1e-12) {
      throw Error(ErrorKind::InvalidCoordinate, "coordinate " + std::to_string(yi) + " is not in {-sqrt3, 0, sqrt3}");
    }
  }
  return std::pow(4.0, static_cast<double>(zeros)) / std::pow(6.0, static_cast<double>(m)) /
         std::ldexp(1.0, static_cast<int>(m * (m - 1) / 2));
}

IndexSet IndexSet::full(const InnovationLaw& law) {
  const std::size_t m = law.dim_noise();
  const std::size_t pairs = law.pair_count();
  const int base = law.order() == 1 ? 2 : 3;
  // every (o, r) except the zero index, enumerated with o_0 fastest
  std::size_t count = 1;
  for (std::size_t i = 0; i < m; ++i) count *= static_cast<std::size_t>(base);
  count <<= pairs;
  if (count - 1 > kMaxScenarioCount) {
    throw Error(ErrorKind::InvalidArgument, "full index set too large; use the simplified control variate");
  }
  std::vector<MultiIndex> items;
  items.reserve(count - 1);
  for (std::size_t code = 1; code < count; ++code) {
    MultiIndex idx{std::vector<std::uint8_t>(m), std::vector<std::uint8_t>(pairs)};
    std::size_t rest = code;
    for (std::size_t i = 0; i < m; ++i) {
      idx.o[i] = static_cast<std::uint8_t>(rest % static_cast<std::size_t>(base));
      rest /= static_cast<std::size_t>(base);
    }
    for (std::size_t p = 0; p < pairs; ++p) idx.r[p] = static_cast<std::uint8_t>((rest >> p) & 1u);
    items.push_back(std::move(idx));
  }
  return IndexSet(law, false, std::move(items));
}

IndexSet IndexSet::simplified(const InnovationLaw& law) {
  const std::size_t m = law.dim_noise();
  std::vector<MultiIndex> items;
  items.reserve(m);
  for (std::size_t r = 0; r < m; ++r) {
    MultiIndex idx{std::vector<std::uint8_t>(m), std::vector<std::uint8_t>(law.pair_count())};
    idx.o[r] = 1;
    items.push_back(std::move(idx));
  }
  return IndexSet(law, true, std::move(items));
}

double IndexSet::weight(std::size_t index, std::span<const double> xi, std::span<const double> v) const {
  const MultiIndex& idx = items_[index];
  double w = 1.0;
  if (law_.order() == 1) {
    for (std::size_t i = 0; i < idx.o.size(); ++i) {
      if (idx.o[i]) w *= xi[i];
    }
    return w;
  }
  for (std::size_t i = 0; i < idx.o.size(); ++i) {
    if (idx.o[i]) w *= hermite_H(idx.o[i], xi[i]);
  }
  for (std::size_t p = 0; p < idx.r.size(); ++p) {
    if (idx.r[p]) w *= v[p];
  }
  return w;
}

void IndexSet::weights(std::span<const std::int8_t> codes, std::span<double> out) const {
  thread_local std::vector<double> xi;
  thread_local std::vector<double> v;
  xi.resize(law_.dim_noise());
  v.resize(law_.pair_count());
  law_.values(codes, xi, v);
  for (std::size_t k = 0; k < items_.size(); ++k) out[k] = weight(k, xi, v);
}

double a_from_h(const InnovationLaw& law, const std::map<ScenarioKey, double>& h, const MultiIndex& index) {
  if (index.o.size() != law.dim_noise() || index.r.size() != law.pair_count()) {
    throw Error(ErrorKind::InvalidArgument, "multi-index shape does not match the innovation law");
  }
  std::vector<double> xi(law.dim_noise());
  std::vector<double> v(law.pair_count());
  ScenarioKey key(law.width());
  double total = 0.0;
  for (std::size_t s = 0; s < law.scenario_count(); ++s) {
    law.decode(s, key);
    const auto it = h.find(key);
    if (it == h.end()) throw Error(ErrorKind::MissingScenario, "no h value for scenario " + std::to_string(s));
    law.values(key, xi, v);
    double w = 1.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      if (index.o[i]) w *= law.order() == 1 ? xi[i] : hermite_H(index.o[i], xi[i]);
    }
    for (std::size_t p = 0; p < v.size(); ++p) {
      if (index.r[p]) w *= v[p];
    }
    total += law.probability(s) * w * it->second;
  }
  return total;
}

double a_from_h_first(const std::map<ScenarioKey, double>& h, const MultiIndex& k) {
  return a_from_h(InnovationLaw(1, k.o.size()), h, k);
}

double a_from_h_second(const std::map<ScenarioKey, double>& h, const MultiIndex& index) {
  return a_from_h(InnovationLaw(2, index.o.size()), h, index);
}

double q_backward(const std::function<double(std::span<const double>)>& q_next, std::span<const double> x,
                  Stepper& stepper) {
  const InnovationLaw& law = stepper.law();
  std::vector<std::int8_t> codes(law.width());
  std::vector<double> next(x.size());
  double total = 0.0;
  for (std::size_t s = 0; s < law.scenario_count(); ++s) {
    law.decode(s, codes);
    stepper.step_codes(x, codes, next);
    total += law.probability(s) * q_next(next);
  }
  return total;
}

double q_backward_first(const std::function<double(std::span<const double>)>& q_next, std::span<const double> x,
                        const ModelSpec& model, double delta) {
  Stepper stepper(model, Scheme::euler1, delta);
  return q_backward(q_next, x, stepper);
}

}  // namespace srcv
