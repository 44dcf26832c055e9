#include "srcv/path_set.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "srcv/error.hpp"
#include "srcv/parallel.hpp"
#include "srcv/rng.hpp"

namespace srcv {

PathSet::PathSet(ModelSpec model, Scheme scheme, std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                 std::uint64_t first_path)
    : model_(std::move(model)),
      scheme_(scheme),
      law_(scheme_order(scheme), model_.dim_noise),
      n_steps_(n_steps),
      n_paths_(n_paths),
      dim_(model_.dim_state),
      delta_(model_.horizon / static_cast<double>(n_steps)),
      seed_(seed),
      first_path_(first_path),
      states_(n_paths * (n_steps + 1) * model_.dim_state),
      codes_(n_paths * n_steps * law_.width()) {
  if (n_steps == 0) throw Error(ErrorKind::InvalidArgument, "number of steps must be at least 1");
}

PathSet simulate_paths(const ModelSpec& model, Scheme scheme, std::size_t n_steps, std::size_t n_paths,
                       std::uint64_t seed, const SimulationOptions& options) {
  model.validate();
  if (n_paths == 0) throw Error(ErrorKind::InvalidArgument, "number of paths must be at least 1");
  PathSet paths(model, scheme, n_steps, n_paths, seed, options.first_path);
  // construct once up front so configuration errors surface before threads start
  { Stepper probe(paths.model(), scheme, paths.delta()); }

  parallel_for(n_paths, options.workers, [&](std::size_t begin, std::size_t end) {
    Stepper stepper(paths.model(), scheme, paths.delta());
    const std::size_t d = model.dim_state;
    for (std::size_t i = begin; i < end; ++i) {
      auto x0 = paths.state(i, 0);
      std::copy_n(model.x0.data(), d, x0.begin());
      for (std::size_t j = 1; j <= n_steps; ++j) {
        CounterRng rng(seed, options.first_path + i, j);
        auto codes = paths.codes(i, j);
        stepper.law().sample(rng, codes);
        stepper.step_codes(paths.state(i, j - 1), codes, paths.state(i, j));
      }
    }
  });
  return paths;
}

namespace {

constexpr char kMagic[8] = {'S', 'R', 'C', 'V', 'P', 'A', 'T', 'H'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void write_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(ErrorKind::Io, "truncated path dump");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_pathset(std::ostream& out, const PathSet& paths) {
  out.write(kMagic, sizeof kMagic);
  write_le<std::uint32_t>(out, kVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(paths.dim_state()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(paths.law().dim_noise()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(paths.n_steps()));
  write_le<std::uint64_t>(out, paths.n_paths());
  write_le<std::uint64_t>(out, paths.seed());
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(paths.scheme()));
  for (double s : paths.raw_states()) write_le<double>(out, s);
  for (std::int8_t c : paths.raw_codes()) write_le<std::int8_t>(out, c);
  if (!out) throw Error(ErrorKind::Io, "failed to write path dump");
}

PathSet read_pathset(std::istream& in, const ModelSpec& model) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw Error(ErrorKind::Io, "not a path dump (bad magic)");
  }
  if (read_le<std::uint32_t>(in) != kVersion) throw Error(ErrorKind::Io, "unsupported path dump version");
  const auto d = read_le<std::uint32_t>(in);
  const auto m = read_le<std::uint32_t>(in);
  const auto n_steps = read_le<std::uint32_t>(in);
  const auto n_paths = read_le<std::uint64_t>(in);
  const auto seed = read_le<std::uint64_t>(in);
  const auto scheme_id = read_le<std::uint32_t>(in);
  if (d != model.dim_state || m != model.dim_noise) {
    throw Error(ErrorKind::Io, "path dump dimensions do not match model '" + model.name + "'");
  }
  if (scheme_id < 1 || scheme_id > 3) throw Error(ErrorKind::Io, "unknown scheme id in path dump");
  PathSet paths(model, static_cast<Scheme>(scheme_id), n_steps, n_paths, seed);
  for (std::size_t i = 0; i < n_paths; ++i) {
    for (std::size_t j = 0; j <= n_steps; ++j) {
      for (double& s : paths.state(i, j)) s = read_le<double>(in);
    }
  }
  for (std::size_t i = 0; i < n_paths; ++i) {
    for (std::size_t j = 1; j <= n_steps; ++j) {
      for (std::int8_t& c : paths.codes(i, j)) c = read_le<std::int8_t>(in);
    }
  }
  return paths;
}

}  // namespace srcv
