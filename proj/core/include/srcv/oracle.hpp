#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "srcv/multi_index.hpp"
#include "srcv/schemes.hpp"

namespace srcv {

/// Largest scenario tree (c_m^J leaves) the oracle will build.
inline constexpr std::size_t kMaxTreeLeaves = 1'000'000;

struct TreeNode {
  std::size_t depth = 0;
  std::size_t parent = 0;    ///< index of the parent node (root: itself)
  std::size_t scenario = 0;  ///< innovation scenario leading into this node
  double probability = 1.0;  ///< probability of reaching this node
  std::vector<double> state;
  double q = 0.0;            ///< q_depth(state); f(state) at the leaves
  /// a_{depth+1, index}(state) for every index; empty at the leaves
  std::vector<double> a;
};

/// Exhaustive scenario tree of a weak scheme with exact q_j and a_{j,index}.
class ScenarioTree {
 public:
  ScenarioTree(InnovationLaw law, IndexSet indices, std::size_t n_steps);

  const InnovationLaw& law() const noexcept { return law_; }
  const IndexSet& indices() const noexcept { return indices_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  /// Nodes at `depth` occupy [level_begin(depth), level_begin(depth + 1)).
  std::size_t level_begin(std::size_t depth) const { return level_offsets_.at(depth); }

  /// Exact E f(X_T) and Var f(X_T).
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }

  /// Exact a_{j, .}(x) for a state reachable at depth j - 1 (matched by its
  /// exact bit pattern). Throws MissingScenario for unreachable states.
  const std::vector<double>& coefficients(std::size_t step, std::span<const double> x) const;

 private:
  friend ScenarioTree exact_coefficients_enumeration(const ModelSpec&, const Payoff&, Scheme, std::size_t,
                                                     std::optional<IndexSet>);
  InnovationLaw law_;
  IndexSet indices_;
  std::size_t n_steps_;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> level_offsets_;
  std::vector<std::unordered_map<std::string, std::size_t>> lookup_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

/// Builds the full tree by forward stepping and backward exact averaging.
/// `indices` defaults to the full index set. Throws TreeTooLarge when
/// c_m^J exceeds kMaxTreeLeaves.
ScenarioTree exact_coefficients_enumeration(const ModelSpec& model, const Payoff& payoff, Scheme scheme,
                                            std::size_t n_steps, std::optional<IndexSet> indices = std::nullopt);

/// Coefficient functions a~_{j, .}(x) to test against the tree.
using CoefficientFn = std::function<void(std::size_t step, std::span<const double> x, std::span<double> out)>;

struct ExactMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact mean and variance of f(X_T) - M~ over all leaves, where M~ is
/// built from `coefficients`.
ExactMoments exact_residual_moments(const ScenarioTree& tree, const CoefficientFn& coefficients);

/// Exact mean and variance of M~ alone.
ExactMoments exact_martingale_moments(const ScenarioTree& tree, const CoefficientFn& coefficients);

/// sum_j sum_index E[(a~_{j,index} - a_{j,index})(X_{j-1})^2] under the scheme law.
double exact_l2_error(const ScenarioTree& tree, const CoefficientFn& coefficients);

/// The tree's own exact coefficients as a CoefficientFn.
CoefficientFn exact_coefficient_fn(const ScenarioTree& tree);

}  // namespace srcv
