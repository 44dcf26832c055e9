#include "srcv/cv_model.hpp"

#include <nlohmann/json.hpp>

#include "srcv/error.hpp"
#include "srcv/path_set.hpp"
#include "srcv/regression.hpp"

namespace srcv {

std::string_view to_string(CvMethod method) noexcept {
  switch (method) {
    case CvMethod::rcv: return "rcv";
    case CvMethod::rrcv: return "rrcv";
    case CvMethod::srcv: return "srcv";
  }
  return "unknown";
}

CvMethod parse_cv_method(std::string_view name) {
  if (name == "rcv") return CvMethod::rcv;
  if (name == "rrcv") return CvMethod::rrcv;
  if (name == "srcv") return CvMethod::srcv;
  throw Error(ErrorKind::InvalidArgument, "unknown control-variate method '" + std::string(name) + "'");
}

namespace {

Matrix scenario_weight_matrix(const IndexSet& indices, std::span<const std::size_t> scenarios) {
  const InnovationLaw& law = indices.law();
  Matrix out(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(scenarios.size()));
  std::vector<std::int8_t> codes(law.width());
  std::vector<double> w(indices.size());
  for (std::size_t t = 0; t < scenarios.size(); ++t) {
    law.decode(scenarios[t], codes);
    indices.weights(codes, w);
    const double p = law.probability(scenarios[t]);
    for (std::size_t r = 0; r < indices.size(); ++r) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) = p * w[r];
    }
  }
  return out;
}

}  // namespace

CvEvaluator::CvEvaluator(const CvModel& cv)
    : cv_(cv),
      stepper_(cv.model, cv.scheme, cv.delta),
      psi_(cv.basis.size()),
      next_state_(cv.model.dim_state),
      codes_(cv.indices.law().width()),
      coeffs_(cv.indices.size()),
      weights_(cv.indices.size()) {
  if (cv.method == CvMethod::rrcv) {
    const std::size_t count = cv.indices.law().scenario_count();
    std::vector<std::size_t> all(count);
    for (std::size_t s = 0; s < count; ++s) all[s] = s;
    scenario_weights_ = scenario_weight_matrix(cv.indices, all);
    h_values_.resize(count);
  }
  if (cv.method == CvMethod::srcv && cv.truncation) {
    step_weights_.reserve(cv.steps.size());
    for (const auto& step : cv.steps) step_weights_.push_back(scenario_weight_matrix(cv.indices, step.h_scenarios));
  }
}

void CvEvaluator::coefficients(std::size_t j, std::span<const double> x, std::span<double> out) {
  const CvStep& step = cv_.steps[j - 1];
  Eigen::Map<Vector> result(out.data(), static_cast<Eigen::Index>(out.size()));

  if (cv_.method == CvMethod::rrcv) {
    const InnovationLaw& law = cv_.indices.law();
    const bool terminal = j == cv_.n_steps;
    for (std::size_t s = 0; s < law.scenario_count(); ++s) {
      law.decode(s, codes_);
      stepper_.step_codes(x, codes_, next_state_);
      double value;
      if (terminal) {
        value = cv_.payoff(next_state_);
      } else {
        cv_.basis.eval(next_state_, psi_);
        value = Eigen::Map<const Vector>(psi_.data(), step.q.size()).dot(step.q);
        if (cv_.truncation) value = truncate_estimate(value, *cv_.truncation);
      }
      h_values_[s] = value;
    }
    result = scenario_weights_ * Eigen::Map<const Vector>(h_values_.data(), static_cast<Eigen::Index>(h_values_.size()));
    return;
  }

  cv_.basis.eval(x, psi_);
  const Eigen::Map<const Vector> psi(psi_.data(), static_cast<Eigen::Index>(psi_.size()));
  if (cv_.method == CvMethod::srcv && cv_.truncation) {
    // a~ = sum_s P(s) w(s) T_A(h~_s(x))
    const Matrix& weights = step_weights_[j - 1];
    Vector clipped = step.h * psi;
    for (auto& v : clipped) v = truncate_estimate(v, *cv_.truncation);
    result = weights * clipped;
    return;
  }
  result = step.a * psi;
  if (cv_.truncation) {
    for (auto& v : result) v = truncate_estimate(v, *cv_.truncation);
  }
}

double CvEvaluator::martingale(const PathSet& paths, std::size_t path) {
  if (paths.scheme() != cv_.scheme || paths.law().dim_noise() != cv_.indices.law().dim_noise() ||
      paths.n_steps() != cv_.n_steps) {
    throw Error(ErrorKind::OrderMismatch, "testing paths do not match the control variate's scheme");
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= cv_.n_steps; ++j) {
    coefficients(j, paths.state(path, j - 1), coeffs_);
    cv_.indices.weights(paths.codes(path, j), weights_);
    double step_sum = 0.0;
    for (std::size_t r = 0; r < coeffs_.size(); ++r) step_sum += coeffs_[r] * weights_[r];
    total += step_sum;
  }
  return total;
}

double evaluate_cv(const CvModel& cv, const PathSet& paths, std::size_t path) {
  CvEvaluator evaluator(cv);
  return evaluator.martingale(paths, path);
}

CvModel zero_cv_model(const ModelSpec& model, const Payoff& payoff, Scheme scheme, std::size_t n_steps,
                      const BasisSet& basis, bool simplified) {
  const InnovationLaw law(scheme_order(scheme), model.dim_noise);
  IndexSet indices = simplified ? IndexSet::simplified(law) : IndexSet::full(law);
  std::vector<CvStep> steps(n_steps);
  for (auto& s : steps) s.a = Matrix::Zero(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(basis.size()));
  return CvModel{.method = CvMethod::srcv,
                 .scheme = scheme,
                 .model = model,
                 .payoff = payoff,
                 .delta = model.horizon / static_cast<double>(n_steps),
                 .n_steps = n_steps,
                 .basis = basis,
                 .indices = std::move(indices),
                 .truncation = std::nullopt,
                 .steps = std::move(steps),
                 .report = {}};
}

// --- JSON ---------------------------------------------------------------

namespace {

constexpr const char* kFormat = "srcv-cvmodel";
constexpr int kVersion = 1;

nlohmann::json matrix_json(const Matrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& rows, Eigen::Index cols) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw Error(ErrorKind::Io, "coefficient row has wrong length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

}  // namespace

nlohmann::json to_json(const CvModel& cv) {
  nlohmann::json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["method"] = to_string(cv.method);
  doc["scheme"] = to_string(cv.scheme);
  doc["order"] = cv.order();
  doc["model"] = cv.model.name;
  doc["payoff"] = cv.payoff.name;
  doc["n_steps"] = cv.n_steps;
  doc["delta"] = cv.delta;
  doc["basis"] = {{"dim", cv.basis.dim()},
                  {"degree", cv.basis.degree()},
                  {"payoff", cv.basis.payoff() ? nlohmann::json(cv.basis.payoff()->name) : nlohmann::json()},
                  {"size", cv.basis.size()}};
  doc["indices"] = {{"simplified", cv.indices.is_simplified()}, {"count", cv.indices.size()}};
  doc["truncation"] = cv.truncation ? nlohmann::json(*cv.truncation) : nlohmann::json();

  auto steps = nlohmann::json::array();
  for (std::size_t j = 1; j <= cv.steps.size(); ++j) {
    const CvStep& s = cv.steps[j - 1];
    nlohmann::json step{{"j", j}};
    if (s.a.size() > 0) step["a"] = matrix_json(s.a);
    if (!s.h_scenarios.empty()) {
      step["h"] = matrix_json(s.h);
      step["h_scenarios"] = s.h_scenarios;
    }
    if (s.q.size() > 0) step["q"] = std::vector<double>(s.q.data(), s.q.data() + s.q.size());
    steps.push_back(std::move(step));
  }
  doc["steps"] = std::move(steps);

  auto fits = nlohmann::json::array();
  for (const auto& f : cv.report.fits) {
    fits.push_back({f.step, f.scenario == static_cast<std::size_t>(-1) ? nlohmann::json() : nlohmann::json(f.scenario),
                    f.n_samples, f.rank, f.condition});
  }
  doc["report"] = {{"empty_strata", cv.report.empty_strata},
                   {"undersized_strata", cv.report.undersized_strata},
                   {"fit_columns", {"step", "scenario", "n_samples", "rank", "condition"}},
                   {"fits", std::move(fits)}};
  return doc;
}

CvModel cv_model_from_json(const nlohmann::json& doc, const ModelSpec& model) {
  try {
    if (doc.at("format") != kFormat) throw Error(ErrorKind::Io, "not a control-variate document");
    if (doc.at("version").get<int>() != kVersion) throw Error(ErrorKind::Io, "unsupported control-variate version");
    const CvMethod method = parse_cv_method(doc.at("method").get<std::string>());
    const Scheme scheme = parse_scheme(doc.at("scheme").get<std::string>());
    const auto& b = doc.at("basis");
    std::optional<Payoff> basis_payoff;
    if (!b.at("payoff").is_null()) basis_payoff = make_payoff(b.at("payoff").get<std::string>());
    BasisSet basis(b.at("dim").get<std::size_t>(), b.at("degree").get<unsigned>(), std::move(basis_payoff));
    const InnovationLaw law(scheme_order(scheme), model.dim_noise);
    IndexSet indices = doc.at("indices").at("simplified").get<bool>() ? IndexSet::simplified(law) : IndexSet::full(law);
    if (indices.size() != doc.at("indices").at("count").get<std::size_t>()) {
      throw Error(ErrorKind::Io, "index count does not match the model's noise dimension");
    }
    std::optional<double> truncation;
    if (!doc.at("truncation").is_null()) truncation = doc.at("truncation").get<double>();

    const auto K = static_cast<Eigen::Index>(basis.size());
    const std::size_t n_steps = doc.at("n_steps").get<std::size_t>();
    std::vector<CvStep> steps(n_steps);
    for (const auto& s : doc.at("steps")) {
      const std::size_t j = s.at("j").get<std::size_t>();
      if (j < 1 || j > n_steps) throw Error(ErrorKind::Io, "step index out of range");
      CvStep& step = steps[j - 1];
      if (s.contains("a")) step.a = matrix_from_json(s.at("a"), K);
      if (s.contains("h")) {
        step.h = matrix_from_json(s.at("h"), K);
        step.h_scenarios = s.at("h_scenarios").get<std::vector<std::size_t>>();
      }
      if (s.contains("q")) {
        const auto q = s.at("q").get<std::vector<double>>();
        step.q = Eigen::Map<const Vector>(q.data(), static_cast<Eigen::Index>(q.size()));
      }
    }
    TrainingReport report;
    if (doc.contains("report")) {
      const auto& r = doc.at("report");
      report.empty_strata = r.at("empty_strata").get<std::size_t>();
      report.undersized_strata = r.at("undersized_strata").get<std::size_t>();
      for (const auto& f : r.at("fits")) {
        report.fits.push_back({f.at(0).get<std::size_t>(),
                               f.at(1).is_null() ? static_cast<std::size_t>(-1) : f.at(1).get<std::size_t>(),
                               f.at(2).get<std::size_t>(), f.at(3).get<std::size_t>(), f.at(4).get<double>()});
      }
    }
    return CvModel{.method = method,
                   .scheme = scheme,
                   .model = model,
                   .payoff = make_payoff(doc.at("payoff").get<std::string>()),
                   .delta = doc.at("delta").get<double>(),
                   .n_steps = n_steps,
                   .basis = std::move(basis),
                   .indices = std::move(indices),
                   .truncation = truncation,
                   .steps = std::move(steps),
                   .report = std::move(report)};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed control-variate document: ") + e.what());
  }
}

}  // namespace srcv
