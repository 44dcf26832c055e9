#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "srcv/innovation.hpp"
#include "srcv/model.hpp"
#include "srcv/schemes.hpp"

namespace srcv {

/// Simulated discretised paths with every state and every innovation.
///
/// Steps are numbered as in the scheme: state(i, 0) = x0 and
/// state(i, j) = Phi(state(i, j-1), innovation j) for j = 1..J, where
/// innovation j is codes(i, j).
class PathSet {
 public:
  PathSet(ModelSpec model, Scheme scheme, std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
          std::uint64_t first_path = 0);

  std::size_t n_paths() const noexcept { return n_paths_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t dim_state() const noexcept { return dim_; }
  double delta() const noexcept { return delta_; }
  Scheme scheme() const noexcept { return scheme_; }
  std::uint64_t seed() const noexcept { return seed_; }
  /// Global index of path 0; paths are keyed by first_path + i in the RNG.
  std::uint64_t first_path() const noexcept { return first_path_; }
  const ModelSpec& model() const noexcept { return model_; }
  const InnovationLaw& law() const noexcept { return law_; }

  std::span<const double> state(std::size_t path, std::size_t step) const noexcept {
    return {states_.data() + (path * (n_steps_ + 1) + step) * dim_, dim_};
  }
  std::span<double> state(std::size_t path, std::size_t step) noexcept {
    return {states_.data() + (path * (n_steps_ + 1) + step) * dim_, dim_};
  }
  std::span<const double> terminal(std::size_t path) const noexcept { return state(path, n_steps_); }

  /// Innovation driving step `step` in 1..J.
  std::span<const std::int8_t> codes(std::size_t path, std::size_t step) const noexcept {
    return {codes_.data() + (path * n_steps_ + step - 1) * law_.width(), law_.width()};
  }
  std::span<std::int8_t> codes(std::size_t path, std::size_t step) noexcept {
    return {codes_.data() + (path * n_steps_ + step - 1) * law_.width(), law_.width()};
  }
  std::size_t scenario(std::size_t path, std::size_t step) const { return law_.encode(codes(path, step)); }

  const std::vector<double>& raw_states() const noexcept { return states_; }
  const std::vector<std::int8_t>& raw_codes() const noexcept { return codes_; }

 private:
  ModelSpec model_;
  Scheme scheme_;
  InnovationLaw law_;
  std::size_t n_steps_;
  std::size_t n_paths_;
  std::size_t dim_;
  double delta_;
  std::uint64_t seed_;
  std::uint64_t first_path_;
  std::vector<double> states_;
  std::vector<std::int8_t> codes_;
};

struct SimulationOptions {
  std::size_t workers = 1;
  /// Global index of the first simulated path (for chunked simulation).
  std::uint64_t first_path = 0;
};

/// Deterministic in (seed, global path index): the same seed gives
/// bit-identical paths for any worker count or chunking.
PathSet simulate_paths(const ModelSpec& model, Scheme scheme, std::size_t n_steps, std::size_t n_paths,
                       std::uint64_t seed, const SimulationOptions& options = {});

/// Binary dump: "SRCVPATH", u32 version, u32 d, u32 m, u32 J, u64 n_paths,
/// u64 seed, u32 scheme id, then little-endian f64 states and i8 codes.
void write_pathset(std::ostream& out, const PathSet& paths);
PathSet read_pathset(std::istream& in, const ModelSpec& model);

}  // namespace srcv
