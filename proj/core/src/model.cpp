#include "srcv/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "srcv/error.hpp"

namespace srcv {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::AsymmetricInput: return "AsymmetricInput";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::UnknownPayoff: return "UnknownPayoff";
    case ErrorKind::DerivativeUnavailable: return "DerivativeUnavailable";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::MissingScenario: return "MissingScenario";
    case ErrorKind::InvalidCoordinate: return "InvalidCoordinate";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::TreeTooLarge: return "TreeTooLarge";
    case ErrorKind::DegenerateBaseline: return "DegenerateBaseline";
    case ErrorKind::KappaOutOfRange: return "KappaOutOfRange";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

double payoff_call_on_max(std::span<const double> x, double strike, std::size_t active_count) {
  if (active_count == 0 || active_count > x.size()) {
    throw Error(ErrorKind::InvalidArgument, "call-on-max active count out of range");
  }
  const double best = *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(active_count));
  return std::max(best - strike, 0.0);
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view s, std::string_view context) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::UnknownPayoff, "bad number '" + std::string(s) + "' in payoff " + std::string(context));
  }
  return value;
}

std::size_t parse_count(std::string_view s, std::string_view context) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::UnknownPayoff, "bad integer '" + std::string(s) + "' in payoff " + std::string(context));
  }
  return value;
}

}  // namespace

Payoff make_payoff(std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string name(spec);
  if (parts[0] == "square" && parts.size() == 1) {
    return {name, [](std::span<const double> x) { return x[0] * x[0]; }};
  }
  if (parts[0] == "constant" && parts.size() == 2) {
    const double c = parse_double(parts[1], spec);
    return {name, [c](std::span<const double>) { return c; }};
  }
  if (parts[0] == "coordinate" && parts.size() == 2) {
    const std::size_t i = parse_count(parts[1], spec);
    return {name, [i](std::span<const double> x) { return x[i]; }};
  }
  if (parts[0] == "call_on_max" && parts.size() == 3) {
    const double strike = parse_double(parts[1], spec);
    const std::size_t count = parse_count(parts[2], spec);
    if (count == 0) throw Error(ErrorKind::UnknownPayoff, "call_on_max needs a positive count");
    return {name, [strike, count](std::span<const double> x) {
              return payoff_call_on_max(x, strike, count);
            }};
  }
  throw Error(ErrorKind::UnknownPayoff, "unknown payoff '" + name + "'");
}

Vector ModelSpec::drift_at(std::span<const double> x) const {
  Vector out(static_cast<Eigen::Index>(dim_state));
  drift(x, out);
  return out;
}

Matrix ModelSpec::diffusion_at(std::span<const double> x) const {
  Matrix out(static_cast<Eigen::Index>(dim_state), static_cast<Eigen::Index>(dim_noise));
  diffusion(x, out);
  return out;
}

void ModelSpec::validate() const {
  if (dim_state == 0 || dim_noise == 0) throw Error(ErrorKind::InvalidArgument, "model dimensions must be positive");
  if (static_cast<std::size_t>(x0.size()) != dim_state) {
    throw Error(ErrorKind::InvalidArgument, "initial state length differs from state dimension");
  }
  if (!(horizon > 0.0)) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
  if (!drift || !diffusion) throw Error(ErrorKind::InvalidArgument, "model lacks drift or diffusion");
}

ModelSpec make_gbm(std::string name, double rate, std::vector<double> vols, const Matrix& rho,
                   Vector x0, double horizon) {
  const std::size_t d = vols.size();
  if (static_cast<std::size_t>(rho.rows()) != d || static_cast<std::size_t>(x0.size()) != d) {
    throw Error(ErrorKind::InvalidArgument, "GBM dimensions disagree");
  }
  const Matrix factor = correlation_factor(rho);
  // row i of the diffusion is sigma_i x_i A^i
  Matrix scaled = factor;
  for (std::size_t i = 0; i < d; ++i) scaled.row(static_cast<Eigen::Index>(i)) *= vols[i];

  ModelSpec model;
  model.name = std::move(name);
  model.dim_state = d;
  model.dim_noise = d;
  model.x0 = std::move(x0);
  model.horizon = horizon;
  model.drift = [rate](std::span<const double> x, Eigen::Ref<Vector> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[static_cast<Eigen::Index>(i)] = rate * x[i];
  };
  model.diffusion = [scaled](std::span<const double> x, Eigen::Ref<Matrix> out) {
    for (Eigen::Index i = 0; i < scaled.rows(); ++i) out.row(i) = x[static_cast<std::size_t>(i)] * scaled.row(i);
  };

  ModelDerivatives deriv;
  deriv.drift_jacobian = [rate, d](std::span<const double>, Eigen::Ref<Matrix> out) {
    out.setZero();
    for (std::size_t i = 0; i < d; ++i) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = rate;
  };
  deriv.diffusion_jacobian = [scaled](std::span<const double>, std::span<Matrix> out) {
    // d sigma_{k,j} / d x_l = delta_{kl} sigma_k A_{k,j}
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
      Matrix& jac = out[static_cast<std::size_t>(j)];
      jac.setZero();
      for (Eigen::Index k = 0; k < scaled.rows(); ++k) jac(k, k) = scaled(k, j);
    }
  };
  model.derivatives = std::move(deriv);
  return model;
}

ModelSpec make_gbm1d(std::string name, double rate, double vol, double x0, double horizon) {
  return make_gbm(std::move(name), rate, {vol}, Matrix::Identity(1, 1), Vector::Constant(1, x0), horizon);
}

ModelSpec make_heston(std::string name, HestonParams params, Vector x0, double horizon) {
  const std::size_t d = params.asset_vols.size() + 1;
  if (static_cast<std::size_t>(params.factor.rows()) != d || static_cast<std::size_t>(x0.size()) != d) {
    throw Error(ErrorKind::InvalidArgument, "Heston dimensions disagree");
  }
  ModelSpec model;
  model.name = std::move(name);
  model.dim_state = d;
  model.dim_noise = static_cast<std::size_t>(params.factor.cols());
  model.x0 = std::move(x0);
  model.horizon = horizon;
  model.drift = [p = params](std::span<const double> x, Eigen::Ref<Vector> out) {
    const std::size_t v = x.size() - 1;
    for (std::size_t i = 0; i < v; ++i) out[static_cast<Eigen::Index>(i)] = p.rate * x[i];
    out[static_cast<Eigen::Index>(v)] = p.kappa * (p.long_run_variance - std::max(x[v], 0.0));
  };
  model.diffusion = [p = params](std::span<const double> x, Eigen::Ref<Matrix> out) {
    const std::size_t v = x.size() - 1;
    const double root = std::sqrt(std::max(x[v], 0.0));
    for (std::size_t i = 0; i < v; ++i) {
      out.row(static_cast<Eigen::Index>(i)) = p.asset_vols[i] * x[i] * root * p.factor.row(static_cast<Eigen::Index>(i));
    }
    out.row(static_cast<Eigen::Index>(v)) = p.vol_of_variance * root * p.factor.row(static_cast<Eigen::Index>(v));
  };
  model.heston = std::move(params);
  return model;
}

Matrix gbm10d_correlation() {
  Matrix rho = Matrix::Identity(10, 10);
  const auto set = [&rho](int i, int k, double value) {
    rho(i - 1, k - 1) = value;
    rho(k - 1, i - 1) = value;
  };
  set(1, 2, 0.9);
  set(3, 4, -0.95);
  set(5, 6, 0.5);
  set(7, 8, -0.9);
  set(9, 10, 0.8);
  return rho;
}

Matrix heston9d_correlation() {
  Matrix rho = Matrix::Identity(9, 9);
  const auto set = [&rho](int i, int k, double value) {
    rho(i - 1, k - 1) = value;
    rho(k - 1, i - 1) = value;
  };
  set(1, 2, 0.9);
  set(3, 4, -0.95);
  set(5, 6, 0.5);
  set(7, 8, -0.9);
  for (int i : {1, 2, 3, 5, 6, 7}) set(i, 9, -0.2);
  for (int i : {4, 8}) set(i, 9, 0.2);
  return rho;
}

std::vector<std::string> builtin_model_names() { return {"gbm1d_highvol", "gbm10d", "heston9d"}; }

BuiltinModel builtin_model(std::string_view name) {
  if (name == "gbm1d_highvol") {
    return {make_gbm1d("gbm1d_highvol", -1.0, 4.0, 1.0, 1.0), make_payoff("square")};
  }
  if (name == "gbm10d") {
    return {make_gbm("gbm10d", 0.05, std::vector<double>(10, 2.0), gbm10d_correlation(), Vector::Ones(10), 1.0),
            make_payoff("call_on_max:1:10")};
  }
  if (name == "heston9d") {
    HestonParams params;
    params.rate = 0.05;
    params.asset_vols.assign(8, 1.0);
    params.kappa = 0.1;
    params.long_run_variance = 4.0;
    params.vol_of_variance = 1.0;
    params.factor = correlation_factor(heston9d_correlation());
    Vector x0 = Vector::Ones(9);
    x0[8] = 4.0;
    return {make_heston("heston9d", std::move(params), std::move(x0), 1.0), make_payoff("call_on_max:1:8")};
  }
  throw Error(ErrorKind::UnknownModel, "unknown model '" + std::string(name) + "'");
}

}  // namespace srcv
