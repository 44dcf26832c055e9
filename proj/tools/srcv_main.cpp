// srcv: batch runner for control-variate experiments.
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "srcv/error.hpp"
#include "srcv/harness/experiment.hpp"
#include "srcv/harness/presets.hpp"
#include "srcv/planner.hpp"

namespace {

using namespace srcv;
using namespace srcv::harness;

struct CommonFlags {
  std::optional<std::uint64_t> seed_train;
  std::optional<std::uint64_t> seed_test;
  std::string out;
  std::size_t workers = 0;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed-train", flags.seed_train, "Seed for the training paths");
  cmd->add_option("--seed-test", flags.seed_test, "Seed for the testing paths");
  cmd->add_option("--out", flags.out, std::string("Output directory (default: $") + kOutputDirEnv + " or ./srcv_output)");
  cmd->add_option("--workers", flags.workers, "Worker threads, 0 = all cores");
  cmd->add_flag("--quiet,-q", flags.quiet, "Only print the summary table");
}

int execute(ExperimentConfig config, const CommonFlags& flags) {
  if (flags.seed_train) config.seed_train = *flags.seed_train;
  if (flags.seed_test) config.seed_test = *flags.seed_test;
  if (flags.workers > 0) config.workers = flags.workers;
  validate(config);
  const auto dir = resolve_output_dir(config, flags.out);
  const auto result = run_experiment(config, dir, flags.quiet ? nullptr : &std::cerr);
  std::cout << kSummaryHeader << '\n';
  std::ifstream summary(dir / "summary.csv");
  std::string line;
  std::getline(summary, line);
  while (std::getline(summary, line)) std::cout << line << '\n';
  if (!flags.quiet) std::cerr << "wrote " << result.files.size() << " files to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regression-based control variates for weak SDE schemes"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file (key = value lines)")->required()->check(CLI::ExistingFile);
  add_common(run, run_flags);

  CommonFlags preset_flags;
  std::string preset_name;
  double scale = 1.0;
  bool print_config = false;
  auto* preset = app.add_subcommand("preset", "Run a built-in experiment");
  preset->add_option("name", preset_name, "Preset name (see list-presets)")->required();
  preset->add_option("--scale", scale, "Divide J, N and N0 by this factor")->check(CLI::PositiveNumber);
  preset->add_flag("--print-config", print_config, "Print the resulting config instead of running it");
  add_common(preset, preset_flags);

  auto* list = app.add_subcommand("list-presets", "List the built-in experiments");

  double epsilon = 0.01;
  std::string kappa_text = "2";
  unsigned m = 1;
  int order = 1;
  double c_kappa = 1.0;
  auto* plan = app.add_subcommand("plan", "Complexity-optimal J, K, N, N0 for a target accuracy");
  plan->add_option("--epsilon", epsilon, "Target accuracy in (0, 1)");
  plan->add_option("--kappa", kappa_text, "Approximation order, a rational such as 3 or 19/2");
  plan->add_option("--m", m, "Noise dimension")->check(CLI::PositiveNumber);
  plan->add_option("--order", order, "Scheme order (1 or 2)")->check(CLI::IsMember({1, 2}));
  plan->add_option("--c-kappa", c_kappa, "Approximation constant");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return execute(load_config(config_path), run_flags);
    if (*preset) {
      auto config = scaled(find_preset(preset_name).config, scale);
      if (print_config) {
        std::cout << to_text(config);
        return 0;
      }
      return execute(config, preset_flags);
    }
    if (*list) {
      for (const auto& p : presets()) std::cout << p.name << "\t" << p.description << '\n';
      return 0;
    }
    if (*plan) {
      Rational kappa;
      const auto slash = kappa_text.find('/');
      kappa = slash == std::string::npos
                  ? Rational(std::stoll(kappa_text))
                  : Rational(std::stoll(kappa_text.substr(0, slash)), std::stoll(kappa_text.substr(slash + 1)));
      const InnovationLaw law(order, m);
      const double c_m = static_cast<double>(law.scenario_count());
      const auto out = plan_parameters({.epsilon = epsilon,
                                        .kappa = kappa,
                                        .c_m = c_m,
                                        .C_kappa = c_kappa,
                                        .tilde_c_m = tilde_c_m(c_m, m)});
      std::cout << "J = " << out.J << "\nK = " << out.K << "\nN = " << out.N << "\nN0 = " << out.N0
                << "\ncomplexity exponent = " << out.complexity_exponent.numerator() << '/'
                << out.complexity_exponent.denominator() << '\n';
      return 0;
    }
  } catch (const srcv::Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
