#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "srcv/harness/config.hpp"

namespace srcv::harness {

struct Preset {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

/// gbm1d_highvol, gbm10d_callmax and heston9d_callmax at full size
/// (J = 100, N = 1e5, N0 = 1e7, p = 1).
const std::vector<Preset>& presets();
/// Throws InvalidArgument for unknown names.
const Preset& find_preset(std::string_view name);

/// Divides J, N and N0 by `factor` (rounded, at least 1). Throws
/// InvalidArgument unless factor > 0.
ExperimentConfig scaled(ExperimentConfig config, double factor);

}  // namespace srcv::harness
