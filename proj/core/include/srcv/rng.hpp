#pragma once

#include <array>
#include <cstdint>

namespace srcv {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based stream keyed by (seed, path, step). Two streams with
/// different keys are statistically independent, and a stream's output
/// does not depend on which thread draws it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t path, std::uint64_t step) noexcept;

  std::uint32_t next_u32() noexcept;
  /// Uniform on {0, ..., n-1}, exact (rejection on the top bucket).
  std::uint32_t uniform_below(std::uint32_t n) noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  unsigned used_ = 4;
};

}  // namespace srcv
