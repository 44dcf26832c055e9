#include "srcv/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "srcv/error.hpp"
#include "srcv/path_set.hpp"

namespace srcv::harness {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_file(const fs::path& path, const std::string& content, std::vector<fs::path>& files) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
  files.push_back(path);
}

struct MethodState {
  std::string name;
  std::optional<CvModel> cv;
  std::vector<double> summands;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

}  // namespace

fs::path resolve_output_dir(const ExperimentConfig& config, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (config.output_dir) return *config.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "srcv_output";
}

ExperimentResult run_experiment(const ExperimentConfig& config, const fs::path& output_dir, std::ostream* log) {
  validate(config);
  auto builtin = builtin_model(config.model);
  const ModelSpec& model = builtin.model;
  const Payoff payoff = config.payoff ? make_payoff(*config.payoff) : builtin.payoff;
  const std::size_t workers =
      config.workers > 0 ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  const BasisSet basis(model.dim_state, config.p,
                       config.include_payoff_basis ? std::optional<Payoff>(payoff) : std::nullopt);

  std::vector<MethodState> methods;
  for (const auto& name : config.methods) methods.push_back({name, std::nullopt, {}, 0.0, 0.0});

  // training: one path set per distinct seed
  std::map<std::uint64_t, std::pair<PathSet, double>> training_sets;
  for (auto& m : methods) {
    if (m.name == "smc") continue;
    const auto seed = method_seed(config.seed_train, m.name, config.common_random_numbers);
    auto it = training_sets.find(seed);
    if (it == training_sets.end()) {
      const auto start = Clock::now();
      auto paths = simulate_paths(model, config.scheme, config.J, config.N, seed, {.workers = workers, .first_path = 0});
      it = training_sets.emplace(seed, std::make_pair(std::move(paths), seconds_since(start))).first;
      if (log) *log << "simulated " << config.N << " training paths (seed " << seed << ")\n";
    }
    const TrainingOptions options{.truncation = config.truncation,
                                  .simplified = config.simplified_cv,
                                  .workers = workers,
                                  .rcond = config.rcond};
    const auto start = Clock::now();
    m.cv = train(parse_cv_method(m.name), it->second.first, basis, payoff, options);
    m.train_seconds = it->second.second + seconds_since(start);
    if (log) *log << "trained " << m.name << '\n';
  }
  training_sets.clear();

  // testing: chunks keyed by global path index, shared between methods with equal seeds
  for (auto& m : methods) m.summands.reserve(config.N0);
  for (std::size_t first = 0; first < config.N0; first += config.test_chunk) {
    const std::size_t count = std::min(config.test_chunk, config.N0 - first);
    std::map<std::uint64_t, std::pair<PathSet, double>> chunk;
    for (auto& m : methods) {
      const auto seed = method_seed(config.seed_test, m.name, config.common_random_numbers);
      auto it = chunk.find(seed);
      if (it == chunk.end()) {
        const auto start = Clock::now();
        auto paths = simulate_paths(model, config.scheme, config.J, count, seed, {.workers = workers, .first_path = first});
        it = chunk.emplace(seed, std::make_pair(std::move(paths), seconds_since(start))).first;
      }
      const auto start = Clock::now();
      const PathSet& testing = it->second.first;
      const auto values = m.cv ? cv_summands(testing, payoff, *m.cv, workers) : smc_summands(testing, payoff, workers);
      m.test_seconds += it->second.second + seconds_since(start);
      m.summands.insert(m.summands.end(), values.begin(), values.end());
    }
  }
  if (log) *log << "evaluated " << config.N0 << " testing paths\n";

  ExperimentResult result;
  for (auto& m : methods) {
    auto report = summarize(m.name, m.summands, config.ecdf_points);
    report.n_training = m.cv ? config.N : 0;
    report.train_seconds = m.train_seconds;
    report.test_seconds = m.test_seconds;
    result.reports.push_back(std::move(report));
    m.summands = {};
  }
  const auto smc = std::find_if(result.reports.begin(), result.reports.end(),
                                [](const auto& r) { return r.method == "smc"; });
  if (config.record_timing && smc != result.reports.end()) {
    const double smc_time = smc->train_seconds + smc->test_seconds;
    for (auto& r : result.reports) {
      if (smc->sample_variance > 0.0 && smc_time > 0.0) {
        r.theta = theta_metric(r.sample_variance, r.train_seconds + r.test_seconds, smc->sample_variance, smc_time);
      }
    }
  }

  fs::create_directories(output_dir);
  const nlohmann::json config_json = {
      {"model", config.model},   {"scheme", to_string(config.scheme)},
      {"payoff", payoff.name},   {"J", config.J},
      {"N", config.N},           {"N0", config.N0},
      {"p", config.p},           {"include_payoff_basis", config.include_payoff_basis},
      {"simplified_cv", config.simplified_cv},
      {"truncation", config.truncation ? nlohmann::json(*config.truncation) : nlohmann::json(nullptr)},
      {"seed_train", config.seed_train},
      {"seed_test", config.seed_test},
      {"common_random_numbers", config.common_random_numbers},
  };
  std::string summary = std::string(kSummaryHeader) + '\n';
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const auto& r = result.reports[i];
    auto doc = to_json(r);
    if (!config.record_timing) {
      doc["train_seconds"] = nullptr;
      doc["test_seconds"] = nullptr;
    }
    doc["config"] = config_json;
    doc["seeds"] = {{"train", method_seed(config.seed_train, r.method, config.common_random_numbers)},
                    {"test", method_seed(config.seed_test, r.method, config.common_random_numbers)}};
    write_file(output_dir / (r.method + "_report.json"), doc.dump(2) + '\n', result.files);

    std::ostringstream ecdf_csv;
    write_ecdf_csv(ecdf_csv, r.ecdf);
    write_file(output_dir / (r.method + "_ecdf.csv"), ecdf_csv.str(), result.files);

    if (methods[i].cv) {
      write_file(output_dir / (r.method + "_cvmodel.json"), to_json(*methods[i].cv).dump(2) + '\n', result.files);
    }

    const std::string time = config.record_timing ? format_double(r.train_seconds + r.test_seconds) : "NA";
    const std::string theta = r.theta ? format_double(*r.theta) : "NA";
    summary += r.method + ',' + format_double(r.log_min) + ',' + format_double(r.log_max) + ',' +
               format_double(r.sample_variance) + ',' + time + ',' + theta + '\n';
  }
  write_file(output_dir / "summary.csv", summary, result.files);
  return result;
}

}  // namespace srcv::harness
