#include <cmath>
#include <limits>
#include <string>

#include "srcv/cv_model.hpp"
#include "srcv/error.hpp"
#include "srcv/parallel.hpp"
#include "srcv/path_set.hpp"
#include "srcv/regression.hpp"

namespace srcv {
namespace {

constexpr std::size_t kUnstratified = std::numeric_limits<std::size_t>::max();

void check_inputs(const PathSet& training, const BasisSet& basis, const TrainingOptions& options) {
  if (training.n_paths() == 0) throw Error(ErrorKind::EmptySample, "no training paths");
  if (basis.dim() != training.dim_state()) {
    throw Error(ErrorKind::InvalidArgument, "basis dimension differs from the state dimension");
  }
  if (options.truncation && !(*options.truncation > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "truncation bound must be positive");
  }
}

CvModel make_model(CvMethod method, const PathSet& training, const BasisSet& basis, const Payoff& payoff,
                   const TrainingOptions& options) {
  const IndexSet indices =
      options.simplified ? IndexSet::simplified(training.law()) : IndexSet::full(training.law());
  return CvModel{.method = method,
                 .scheme = training.scheme(),
                 .model = training.model(),
                 .payoff = payoff,
                 .delta = training.delta(),
                 .n_steps = training.n_steps(),
                 .basis = basis,
                 .indices = indices,
                 .truncation = options.truncation,
                 .steps = std::vector<CvStep>(training.n_steps()),
                 .report = {}};
}

/// Basis values at X_{step} for every path, one row per path.
Matrix basis_matrix(const PathSet& paths, const BasisSet& basis, std::size_t step, std::size_t workers) {
  Matrix psi(static_cast<Eigen::Index>(paths.n_paths()), static_cast<Eigen::Index>(basis.size()));
  parallel_for(paths.n_paths(), workers, [&](std::size_t begin, std::size_t end) {
    Vector row(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = begin; i < end; ++i) {
      basis.eval(paths.state(i, step), {row.data(), basis.size()});
      psi.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
  });
  return psi;
}

Vector payoff_values(const PathSet& paths, const Payoff& payoff) {
  Vector values(static_cast<Eigen::Index>(paths.n_paths()));
  for (std::size_t i = 0; i < paths.n_paths(); ++i) values[static_cast<Eigen::Index>(i)] = payoff(paths.terminal(i));
  return values;
}

void note_fit(TrainingReport& report, std::size_t step, std::size_t scenario, const LeastSquares& ls,
              std::size_t basis_size) {
  report.fits.push_back({step, scenario, ls.n_samples(), ls.rank(), ls.condition()});
  if (ls.n_samples() < basis_size) ++report.undersized_strata;
}

}  // namespace

CvModel train_srcv(const PathSet& training, const BasisSet& basis, const Payoff& payoff,
                   const TrainingOptions& options) {
  check_inputs(training, basis, options);
  CvModel cv = make_model(CvMethod::srcv, training, basis, payoff, options);
  const InnovationLaw& law = training.law();
  const std::size_t n_index = cv.indices.size();
  const auto K = static_cast<Eigen::Index>(basis.size());

  Vector q_values = payoff_values(training, payoff);
  std::vector<std::int8_t> codes(law.width());
  std::vector<double> w(n_index);

  for (std::size_t j = training.n_steps(); j >= 1; --j) {
    const Matrix psi = basis_matrix(training, basis, j - 1, options.workers);
    const auto strata = stratify_by_innovation(training, j);
    const std::vector<std::pair<std::size_t, std::vector<std::size_t>>> groups(strata.begin(), strata.end());

    // h~_{j,s}: one regression per nonempty stratum
    Matrix h(static_cast<Eigen::Index>(groups.size()), K);
    std::vector<std::optional<LeastSquares>> solvers(groups.size());
    parallel_for(groups.size(), options.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t g = begin; g < end; ++g) {
        const auto& members = groups[g].second;
        Matrix design(static_cast<Eigen::Index>(members.size()), K);
        Vector targets(static_cast<Eigen::Index>(members.size()));
        for (std::size_t r = 0; r < members.size(); ++r) {
          design.row(static_cast<Eigen::Index>(r)) = psi.row(static_cast<Eigen::Index>(members[r]));
          targets[static_cast<Eigen::Index>(r)] = q_values[static_cast<Eigen::Index>(members[r])];
        }
        solvers[g].emplace(design, options.rcond);
        h.row(static_cast<Eigen::Index>(g)) = solvers[g]->solve(targets).transpose();
      }
    });
    for (std::size_t g = 0; g < groups.size(); ++g) note_fit(cv.report, j, groups[g].first, *solvers[g], basis.size());
    cv.report.empty_strata += law.scenario_count() - groups.size();

    // a~_{j,index} = sum_s P(s) w_index(s) h~_{j,s}; empty strata contribute zero
    CvStep& step = cv.steps[j - 1];
    step.a = Matrix::Zero(static_cast<Eigen::Index>(n_index), K);
    Vector probs(static_cast<Eigen::Index>(groups.size()));
    for (std::size_t g = 0; g < groups.size(); ++g) {
      law.decode(groups[g].first, codes);
      cv.indices.weights(codes, w);
      const double p = law.probability(groups[g].first);
      probs[static_cast<Eigen::Index>(g)] = p;
      for (std::size_t r = 0; r < n_index; ++r) step.a.row(static_cast<Eigen::Index>(r)) += p * w[r] * h.row(static_cast<Eigen::Index>(g));
    }
    if (options.truncation) {
      step.h = h;
      step.h_scenarios.reserve(groups.size());
      for (const auto& g : groups) step.h_scenarios.push_back(g.first);
    }

    // q~_{j-1}(X_{j-1}) = sum_s P(s) h~_{j,s}(X_{j-1})
    if (j > 1) {
      if (!options.truncation) {
        const Vector q_coeffs = h.transpose() * probs;
        q_values = psi * q_coeffs;
      } else {
        const double bound = *options.truncation;
        const Matrix fitted = psi * h.transpose();  // N x strata
        for (Eigen::Index i = 0; i < fitted.rows(); ++i) {
          double total = 0.0;
          for (Eigen::Index g = 0; g < fitted.cols(); ++g) total += probs[g] * truncate_estimate(fitted(i, g), bound);
          q_values[i] = total;
        }
      }
    }
  }
  return cv;
}

CvModel train_rrcv(const PathSet& training, const BasisSet& basis, const Payoff& payoff,
                   const TrainingOptions& options) {
  check_inputs(training, basis, options);
  CvModel cv = make_model(CvMethod::rrcv, training, basis, payoff, options);
  if (training.law().scenario_count() > kMaxScenarioCount) {
    throw Error(ErrorKind::InvalidArgument, "RRCV needs every scenario at evaluation; the law is too large");
  }
  Vector q_values = payoff_values(training, payoff);
  for (std::size_t j = training.n_steps(); j >= 2; --j) {
    const Matrix psi = basis_matrix(training, basis, j - 1, options.workers);
    const LeastSquares ls(psi, options.rcond);
    note_fit(cv.report, j - 1, kUnstratified, ls, basis.size());
    CvStep& step = cv.steps[j - 2];
    step.q = ls.solve(q_values);
    q_values = psi * step.q;
    if (options.truncation) {
      for (auto& v : q_values) v = truncate_estimate(v, *options.truncation);
    }
  }
  return cv;
}

CvModel train_rcv(const PathSet& training, const BasisSet& basis, const Payoff& payoff,
                  const TrainingOptions& options) {
  check_inputs(training, basis, options);
  CvModel cv = make_model(CvMethod::rcv, training, basis, payoff, options);
  const std::size_t n_index = cv.indices.size();
  const Vector f = payoff_values(training, payoff);
  std::vector<double> w(n_index);
  for (std::size_t j = 1; j <= training.n_steps(); ++j) {
    const Matrix psi = basis_matrix(training, basis, j - 1, options.workers);
    Matrix targets(psi.rows(), static_cast<Eigen::Index>(n_index));
    for (std::size_t i = 0; i < training.n_paths(); ++i) {
      cv.indices.weights(training.codes(i, j), w);
      for (std::size_t r = 0; r < n_index; ++r) {
        targets(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) = f[static_cast<Eigen::Index>(i)] * w[r];
      }
    }
    const LeastSquares ls(psi, options.rcond);
    note_fit(cv.report, j, kUnstratified, ls, basis.size());
    cv.steps[j - 1].a = ls.solve(targets).transpose();
  }
  return cv;
}

CvModel train(CvMethod method, const PathSet& training, const BasisSet& basis, const Payoff& payoff,
              const TrainingOptions& options) {
  switch (method) {
    case CvMethod::rcv: return train_rcv(training, basis, payoff, options);
    case CvMethod::rrcv: return train_rrcv(training, basis, payoff, options);
    case CvMethod::srcv: return train_srcv(training, basis, payoff, options);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown control-variate method");
}

}  // namespace srcv
