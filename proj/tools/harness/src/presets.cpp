#include "srcv/harness/presets.hpp"

#include <cmath>

#include "srcv/error.hpp"

namespace srcv::harness {
namespace {

ExperimentConfig full_size(std::string model, Scheme scheme) {
  ExperimentConfig c;
  c.model = std::move(model);
  c.scheme = scheme;
  c.J = 100;
  c.N = 100'000;
  c.N0 = 10'000'000;
  c.p = 1;
  c.include_payoff_basis = true;
  return c;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  {
    auto c = full_size("gbm1d_highvol", Scheme::euler1);
    c.methods = {"smc", "rcv", "rrcv", "srcv"};
    out.push_back({"gbm1d_highvol",
                   "1d GBM, r = -1, sigma = 4, f(x) = x^2, weak Euler; all four estimators", c});
  }
  {
    auto c = full_size("gbm10d", Scheme::euler1);
    c.methods = {"smc", "rcv", "srcv"};
    c.simplified_cv = true;
    out.push_back({"gbm10d_callmax",
                   "10d correlated GBM, call on max, weak Euler; simplified control variate, no RRCV", c});
  }
  {
    auto c = full_size("heston9d", Scheme::heston_trunc);
    c.methods = {"smc", "rcv", "srcv"};
    c.simplified_cv = true;
    out.push_back({"heston9d_callmax",
                   "8 assets with a common truncated Heston variance, call on max; simplified, no RRCV", c});
  }
  return out;
}

std::size_t divide(std::size_t value, double factor) {
  const double scaled = std::round(static_cast<double>(value) / factor);
  return scaled < 1.0 ? 1 : static_cast<std::size_t>(scaled);
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown preset '" + std::string(name) + "'");
}

ExperimentConfig scaled(ExperimentConfig config, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw Error(ErrorKind::InvalidArgument, "scale factor must be positive");
  config.J = divide(config.J, factor);
  config.N = divide(config.N, factor);
  config.N0 = std::max<std::size_t>(2, divide(config.N0, factor));
  return config;
}

}  // namespace srcv::harness
