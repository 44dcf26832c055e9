#include "srcv/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srcv/error.hpp"

namespace srcv {

int scheme_order(Scheme scheme) noexcept { return scheme == Scheme::taylor2 ? 2 : 1; }

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::euler1: return "euler1";
    case Scheme::taylor2: return "taylor2";
    case Scheme::heston_trunc: return "heston_trunc";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "euler1") return Scheme::euler1;
  if (name == "taylor2") return Scheme::taylor2;
  if (name == "heston_trunc") return Scheme::heston_trunc;
  throw Error(ErrorKind::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

Stepper::Stepper(const ModelSpec& model, Scheme scheme, double delta)
    : model_(model),
      scheme_(scheme),
      delta_(delta),
      sqrt_delta_(std::sqrt(delta)),
      law_(scheme_order(scheme), model.dim_noise) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "time step must be positive");
  const auto d = static_cast<Eigen::Index>(model.dim_state);
  const auto m = static_cast<Eigen::Index>(model.dim_noise);
  mu_.resize(d);
  sigma_.resize(d, m);
  xi_buf_.resize(model.dim_noise);
  v_buf_.resize(law_.pair_count());
  if (scheme == Scheme::taylor2) {
    if (!model.derivatives || !model.derivatives->drift_jacobian || !model.derivatives->diffusion_jacobian) {
      throw Error(ErrorKind::DerivativeUnavailable,
                  "model '" + model.name + "' has no derivatives for the order-2 scheme");
    }
    drift_jac_.resize(d, d);
    diff_jac_.assign(model.dim_noise, Matrix(d, d));
    if (model.derivatives->drift_hessian) drift_hess_.assign(model.dim_state, Matrix(d, d));
    if (model.derivatives->diffusion_hessian) diff_hess_.assign(model.dim_state * model.dim_noise, Matrix(d, d));
  }
  if (scheme == Scheme::heston_trunc && !model.heston) {
    throw Error(ErrorKind::InvalidArgument, "heston_trunc requires a Heston model");
  }
}

void Stepper::step_codes(std::span<const double> x, std::span<const std::int8_t> codes, std::span<double> out) {
  law_.values(codes, xi_buf_, v_buf_);
  step_values(x, xi_buf_, v_buf_, out);
}

void Stepper::step_values(std::span<const double> x, std::span<const double> xi, std::span<const double> v,
                          std::span<double> out) {
  switch (scheme_) {
    case Scheme::euler1: euler(x, xi, out); return;
    case Scheme::taylor2: taylor2(x, xi, v, out); return;
    case Scheme::heston_trunc: heston(x, xi, out); return;
  }
}

void Stepper::euler(std::span<const double> x, std::span<const double> xi, std::span<double> out) {
  model_.drift(x, mu_);
  model_.diffusion(x, sigma_);
  const Eigen::Map<const Vector> xiv(xi.data(), static_cast<Eigen::Index>(xi.size()));
  const Eigen::Map<const Vector> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<Vector> o(out.data(), static_cast<Eigen::Index>(out.size()));
  o = xv + mu_ * delta_ + (sigma_ * xiv) * sqrt_delta_;
}

void Stepper::taylor2(std::span<const double> x, std::span<const double> xi, std::span<const double> v,
                      std::span<double> out) {
  const auto& deriv = *model_.derivatives;
  const auto d = static_cast<Eigen::Index>(model_.dim_state);
  const auto m = static_cast<Eigen::Index>(model_.dim_noise);
  model_.drift(x, mu_);
  model_.diffusion(x, sigma_);
  deriv.drift_jacobian(x, drift_jac_);
  deriv.diffusion_jacobian(x, diff_jac_);
  if (!drift_hess_.empty()) deriv.drift_hessian(x, drift_hess_);
  if (!diff_hess_.empty()) deriv.diffusion_hessian(x, diff_hess_);

  const Matrix cov = sigma_ * sigma_.transpose();
  const auto second_order = [&](const std::vector<Matrix>& hess, Eigen::Index offset) {
    Vector r = Vector::Zero(d);
    if (hess.empty()) return r;
    for (Eigen::Index k = 0; k < d; ++k) r[k] = 0.5 * cov.cwiseProduct(hess[static_cast<std::size_t>(offset + k)]).sum();
    return r;
  };

  const Vector l0_mu = drift_jac_ * mu_ + second_order(drift_hess_, 0);

  Vector dw(m);
  for (Eigen::Index j = 0; j < m; ++j) dw[j] = sqrt_delta_ * xi[static_cast<std::size_t>(j)];

  Matrix vmat = Matrix::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    vmat(k, k) = -delta_;
    for (Eigen::Index l = k + 1; l < m; ++l) {
      const double val = delta_ * v[law_.pair_index(static_cast<std::size_t>(k), static_cast<std::size_t>(l))];
      vmat(k, l) = val;
      vmat(l, k) = -val;
    }
  }

  const Eigen::Map<const Vector> xv(x.data(), d);
  Vector result = xv + mu_ * delta_ + 0.5 * l0_mu * delta_ * delta_;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Matrix& jb = diff_jac_[static_cast<std::size_t>(j)];
    const Vector l0_sigma = jb * mu_ + second_order(diff_hess_, j * d);
    const Vector lj_mu = drift_jac_ * sigma_.col(j);
    result += (sigma_.col(j) + 0.5 * delta_ * (l0_sigma + lj_mu)) * dw[j];
  }
  for (Eigen::Index j1 = 0; j1 < m; ++j1) {
    for (Eigen::Index j2 = 0; j2 < m; ++j2) {
      // L^{j1} sigma_{j2} = (d sigma_{j2}) sigma_{j1}
      const Vector lj1_sigma_j2 = diff_jac_[static_cast<std::size_t>(j2)] * sigma_.col(j1);
      result += 0.5 * lj1_sigma_j2 * (dw[j1] * dw[j2] + vmat(j1, j2));
    }
  }
  Eigen::Map<Vector>(out.data(), d) = result;
}

void Stepper::heston(std::span<const double> x, std::span<const double> xi, std::span<double> out) {
  const HestonParams& p = *model_.heston;
  const std::size_t v = x.size() - 1;
  const double root = std::sqrt(std::max(x[v], 0.0));
  const Eigen::Map<const Vector> xiv(xi.data(), static_cast<Eigen::Index>(xi.size()));
  const Vector shock = p.factor * xiv;  // A^i xi for every row i
  for (std::size_t i = 0; i < v; ++i) {
    out[i] = x[i] * (1.0 + p.rate * delta_ +
                     p.asset_vols[i] * root * shock[static_cast<Eigen::Index>(i)] * sqrt_delta_);
  }
  out[v] = x[v] + p.kappa * (p.long_run_variance - std::max(x[v], 0.0)) * delta_ +
           p.vol_of_variance * root * shock[static_cast<Eigen::Index>(v)] * sqrt_delta_;
}

namespace {

void check_state(const ModelSpec& model, std::span<const double> x, std::span<const double> xi) {
  if (x.size() != model.dim_state || xi.size() != model.dim_noise) {
    throw Error(ErrorKind::InvalidArgument, "state or innovation length does not match the model");
  }
}

}  // namespace

Vector step_weak_euler(const ModelSpec& model, std::span<const double> x, std::span<const double> xi,
                       double delta) {
  check_state(model, x, xi);
  Stepper stepper(model, Scheme::euler1, delta);
  Vector out(static_cast<Eigen::Index>(model.dim_state));
  stepper.step_values(x, xi, {}, {out.data(), model.dim_state});
  return out;
}

Vector step_weak_taylor2(const ModelSpec& model, std::span<const double> x, std::span<const double> xi,
                         std::span<const double> v, double delta) {
  check_state(model, x, xi);
  Stepper stepper(model, Scheme::taylor2, delta);
  if (v.size() != stepper.law().pair_count()) {
    throw Error(ErrorKind::InvalidArgument, "V length must be m(m-1)/2");
  }
  Vector out(static_cast<Eigen::Index>(model.dim_state));
  stepper.step_values(x, xi, v, {out.data(), model.dim_state});
  return out;
}

Vector step_heston_truncated(const ModelSpec& model, std::span<const double> x, std::span<const double> xi,
                             double delta) {
  check_state(model, x, xi);
  Stepper stepper(model, Scheme::heston_trunc, delta);
  Vector out(static_cast<Eigen::Index>(model.dim_state));
  stepper.step_values(x, xi, {}, {out.data(), model.dim_state});
  return out;
}

}  // namespace srcv
