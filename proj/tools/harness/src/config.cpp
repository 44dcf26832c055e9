#include "srcv/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "srcv/error.hpp"
#include "srcv/estimators.hpp"
#include "srcv/model.hpp"

namespace srcv::harness {
namespace {

[[noreturn]] void fail(std::size_t line, std::string_view key, const std::string& what) {
  std::string msg;
  if (line > 0) msg += "line " + std::to_string(line) + ": ";
  if (!key.empty()) msg += "'" + std::string(key) + "': ";
  throw Error(ErrorKind::InvalidConfig, msg + what);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_count(std::string_view value, std::size_t line, std::string_view key) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec == std::errc() && ptr == value.data() + value.size()) return out;
  // allow 1e5 style
  double d = 0.0;
  auto [dptr, dec] = std::from_chars(value.data(), value.data() + value.size(), d);
  if (dec == std::errc() && dptr == value.data() + value.size() && d >= 0.0 && d < 1.8e19 && std::floor(d) == d) {
    return static_cast<std::uint64_t>(d);
  }
  fail(line, key, "expected a non-negative integer, got '" + std::string(value) + "'");
}

double parse_real(std::string_view value, std::size_t line, std::string_view key) {
  double d = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(d)) {
    fail(line, key, "expected a real number, got '" + std::string(value) + "'");
  }
  return d;
}

bool parse_flag(std::string_view value, std::size_t line, std::string_view key) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  fail(line, key, "expected true or false, got '" + std::string(value) + "'");
}

std::vector<std::string> parse_methods(std::string_view value, std::size_t line, std::string_view key) {
  static const std::set<std::string, std::less<>> known{"smc", "rcv", "rrcv", "srcv"};
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto item = trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (item.empty()) fail(line, key, "empty method name");
    if (!known.contains(item)) fail(line, key, "unknown method '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), item) != out.end()) fail(line, key, "duplicate method '" + std::string(item) + "'");
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::map<std::string, std::size_t, std::less<>> seen;
  bool scheme_given = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, {}, "expected 'key = value', got '" + std::string(line) + "'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, {}, "missing key before '='");
    if (value.empty()) fail(line_no, key, "missing value");
    if (auto it = seen.find(key); it != seen.end()) {
      fail(line_no, key, "duplicate key (first set on line " + std::to_string(it->second) + ")");
    }
    seen.emplace(std::string(key), line_no);

    if (key == "model") {
      config.model = value;
    } else if (key == "scheme") {
      try {
        config.scheme = parse_scheme(value);
      } catch (const Error& e) {
        fail(line_no, key, e.what());
      }
      scheme_given = true;
    } else if (key == "J") {
      config.J = parse_count(value, line_no, key);
    } else if (key == "N") {
      config.N = parse_count(value, line_no, key);
    } else if (key == "N0") {
      config.N0 = parse_count(value, line_no, key);
    } else if (key == "p") {
      const auto p = parse_count(value, line_no, key);
      if (p > 64) fail(line_no, key, "degree too large");
      config.p = static_cast<unsigned>(p);
    } else if (key == "include_payoff_basis") {
      config.include_payoff_basis = parse_flag(value, line_no, key);
    } else if (key == "methods") {
      config.methods = parse_methods(value, line_no, key);
    } else if (key == "simplified_cv") {
      config.simplified_cv = parse_flag(value, line_no, key);
    } else if (key == "truncation") {
      if (value == "none") {
        config.truncation.reset();
      } else {
        const double a = parse_real(value, line_no, key);
        if (!(a > 0.0)) fail(line_no, key, "truncation bound must be positive");
        config.truncation = a;
      }
    } else if (key == "seed_train") {
      config.seed_train = parse_count(value, line_no, key);
    } else if (key == "seed_test") {
      config.seed_test = parse_count(value, line_no, key);
    } else if (key == "common_random_numbers") {
      config.common_random_numbers = parse_flag(value, line_no, key);
    } else if (key == "payoff") {
      try {
        make_payoff(value);
      } catch (const Error& e) {
        fail(line_no, key, e.what());
      }
      config.payoff = std::string(value);
    } else if (key == "output_dir") {
      config.output_dir = std::string(value);
    } else if (key == "workers") {
      config.workers = parse_count(value, line_no, key);
    } else if (key == "record_timing") {
      config.record_timing = parse_flag(value, line_no, key);
    } else if (key == "ecdf_points") {
      config.ecdf_points = parse_count(value, line_no, key);
    } else if (key == "test_chunk") {
      config.test_chunk = parse_count(value, line_no, key);
    } else if (key == "rcond") {
      config.rcond = parse_real(value, line_no, key);
    } else {
      fail(line_no, key, "unknown key");
    }
  }
  for (const char* required : {"model", "J", "N", "N0"}) {
    if (!seen.contains(required)) fail(0, required, "required key is missing");
  }
  if (!scheme_given && config.model == "heston9d") config.scheme = Scheme::heston_trunc;
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void validate(const ExperimentConfig& config) {
  const auto names = builtin_model_names();
  if (std::find(names.begin(), names.end(), config.model) == names.end()) {
    fail(0, "model", "unknown model '" + config.model + "'");
  }
  if (config.J < 1) fail(0, "J", "must be at least 1");
  if (config.N < 1) fail(0, "N", "must be at least 1");
  if (config.N0 < 2) fail(0, "N0", "must be at least 2");
  if (config.p < 1) fail(0, "p", "must be at least 1");
  if (config.methods.empty()) fail(0, "methods", "no methods selected");
  if (config.seed_train == config.seed_test) {
    fail(0, "seed_test", "training and testing seeds must differ");
  }
  if (config.ecdf_points < 2) fail(0, "ecdf_points", "must be at least 2");
  if (config.test_chunk < 1) fail(0, "test_chunk", "must be at least 1");
  if (!(config.rcond >= 0.0 && config.rcond < 1.0)) fail(0, "rcond", "must lie in [0, 1)");
  const bool heston = config.model == "heston9d";
  if (heston != (config.scheme == Scheme::heston_trunc)) {
    fail(0, "scheme", heston ? "heston9d requires scheme heston_trunc"
                             : "scheme heston_trunc requires model heston9d");
  }
}

std::uint64_t method_seed(std::uint64_t base, std::string_view method, bool common_random_numbers) {
  if (common_random_numbers) return base;
  std::uint64_t id = 0;
  if (method == "rcv") id = 1;
  else if (method == "rrcv") id = 2;
  else if (method == "srcv") id = 3;
  // splitmix64 finaliser: a bijection on 64-bit words
  std::uint64_t z = base ^ (0x9E3779B97F4A7C15ULL * (id + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string to_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "model = " << config.model << '\n'
      << "scheme = " << to_string(config.scheme) << '\n'
      << "J = " << config.J << '\n'
      << "N = " << config.N << '\n'
      << "N0 = " << config.N0 << '\n'
      << "p = " << config.p << '\n'
      << "include_payoff_basis = " << (config.include_payoff_basis ? "true" : "false") << '\n'
      << "methods = ";
  for (std::size_t i = 0; i < config.methods.size(); ++i) out << (i ? "," : "") << config.methods[i];
  out << '\n'
      << "simplified_cv = " << (config.simplified_cv ? "true" : "false") << '\n'
      << "truncation = " << (config.truncation ? format_double(*config.truncation) : "none") << '\n'
      << "seed_train = " << config.seed_train << '\n'
      << "seed_test = " << config.seed_test << '\n'
      << "common_random_numbers = " << (config.common_random_numbers ? "true" : "false") << '\n';
  if (config.payoff) out << "payoff = " << *config.payoff << '\n';
  if (config.output_dir) out << "output_dir = " << *config.output_dir << '\n';
  out << "workers = " << config.workers << '\n'
      << "record_timing = " << (config.record_timing ? "true" : "false") << '\n'
      << "ecdf_points = " << config.ecdf_points << '\n'
      << "test_chunk = " << config.test_chunk << '\n'
      << "rcond = " << format_double(config.rcond) << '\n';
  return out.str();
}

}  // namespace srcv::harness
