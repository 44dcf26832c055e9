#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "srcv/basis.hpp"
#include "srcv/multi_index.hpp"
#include "srcv/regression.hpp"
#include "srcv/schemes.hpp"

namespace srcv {

class PathSet;

enum class CvMethod { rcv, rrcv, srcv };

std::string_view to_string(CvMethod method) noexcept;
CvMethod parse_cv_method(std::string_view name);

/// Trained quantities for one time step j (stored at index j - 1).
struct CvStep {
  /// RCV / SRCV: row r holds the basis coefficients of a~_{j, index r}.
  Matrix a;
  /// SRCV with truncation: row t holds the coefficients of h~_{j, s} for
  /// s = h_scenarios[t]; a~ is then evaluated through T_A(h~).
  Matrix h;
  std::vector<std::size_t> h_scenarios;
  /// RRCV: coefficients of q~_j (empty for j = J, where q~_J = f).
  Vector q;
};

struct StratumDiagnostics {
  std::size_t step = 0;
  std::size_t scenario = 0;  ///< scenario id, or SIZE_MAX for unstratified fits
  std::size_t n_samples = 0;
  std::size_t rank = 0;
  double condition = 0.0;
};

struct TrainingReport {
  std::vector<StratumDiagnostics> fits;
  /// Strata with no training path (fitted as the zero function); SRCV only.
  std::size_t empty_strata = 0;
  /// Nonempty strata with fewer samples than basis functions.
  std::size_t undersized_strata = 0;
};

/// A trained control variate: the coefficient functions a~_{j,index}.
/// Immutable after training; evaluate through CvEvaluator.
struct CvModel {
  CvMethod method = CvMethod::srcv;
  Scheme scheme = Scheme::euler1;
  ModelSpec model;
  Payoff payoff;
  double delta = 0.0;
  std::size_t n_steps = 0;
  BasisSet basis;
  IndexSet indices;
  std::optional<double> truncation;
  std::vector<CvStep> steps;
  TrainingReport report;

  int order() const noexcept { return scheme_order(scheme); }
};

/// Per-thread evaluation scratch for a CvModel (which must outlive it).
class CvEvaluator {
 public:
  explicit CvEvaluator(const CvModel& cv);

  /// a~_{j, .}(x) for every index of the model, written to `out`.
  void coefficients(std::size_t step, std::span<const double> x, std::span<double> out);
  /// M~ = sum_j sum_index a~_{j,index}(X_{j-1}) w_index(innovation j).
  /// Throws OrderMismatch if the paths were produced by another scheme or
  /// noise dimension.
  double martingale(const PathSet& paths, std::size_t path);

 private:
  const CvModel& cv_;
  Stepper stepper_;
  std::vector<double> psi_;
  std::vector<double> h_values_;
  std::vector<double> next_state_;
  std::vector<std::int8_t> codes_;
  std::vector<double> coeffs_;
  std::vector<double> weights_;
  Matrix scenario_weights_;           // RRCV: P(s) w_index(s) over all scenarios
  std::vector<Matrix> step_weights_;  // truncated SRCV: same, over each step's strata
};

double evaluate_cv(const CvModel& cv, const PathSet& paths, std::size_t path);

/// Model with all coefficients zero (M~ = 0); useful as a baseline.
CvModel zero_cv_model(const ModelSpec& model, const Payoff& payoff, Scheme scheme, std::size_t n_steps,
                      const BasisSet& basis, bool simplified);

struct TrainingOptions {
  std::optional<double> truncation;
  /// Only the m unit multi-indices (the simplified control variate).
  bool simplified = false;
  std::size_t workers = 1;
  double rcond = kDefaultRcond;
};

/// Stratified regression: per step and innovation scenario, regress
/// q~_j(X_j) on the basis at X_{j-1} over the paths of that stratum; a~ and
/// q~_{j-1} follow from the exact scenario averages.
CvModel train_srcv(const PathSet& training, const BasisSet& basis, const Payoff& payoff,
                   const TrainingOptions& options = {});
/// Recursive regression of q~_{j-1} on all paths; a~ is assembled at
/// evaluation time from q~_j at the c_m successor states.
CvModel train_rrcv(const PathSet& training, const BasisSet& basis, const Payoff& payoff,
                   const TrainingOptions& options = {});
/// Direct regression of f(X_T) w_index(xi_j) on the basis at X_{j-1}.
CvModel train_rcv(const PathSet& training, const BasisSet& basis, const Payoff& payoff,
                  const TrainingOptions& options = {});
CvModel train(CvMethod method, const PathSet& training, const BasisSet& basis, const Payoff& payoff,
              const TrainingOptions& options = {});

/// Versioned JSON document ("srcv-cvmodel", version 1). Doubles are written
/// in shortest round-trip form, so reading back is bit-faithful.
nlohmann::json to_json(const CvModel& cv);
/// Payoffs are rebuilt from their registry names; `model` supplies the SDE.
CvModel cv_model_from_json(const nlohmann::json& doc, const ModelSpec& model);

}  // namespace srcv
