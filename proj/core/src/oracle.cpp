#include "srcv/oracle.hpp"

#include <cmath>
#include <cstring>

#include "srcv/error.hpp"

namespace srcv {
namespace {

std::string state_key(std::span<const double> x) {
  std::string key(x.size() * sizeof(double), '\0');
  std::memcpy(key.data(), x.data(), key.size());
  return key;
}

}  // namespace

ScenarioTree::ScenarioTree(InnovationLaw law, IndexSet indices, std::size_t n_steps)
    : law_(law), indices_(std::move(indices)), n_steps_(n_steps) {}

const std::vector<double>& ScenarioTree::coefficients(std::size_t step, std::span<const double> x) const {
  if (step < 1 || step > n_steps_) throw Error(ErrorKind::InvalidArgument, "step out of range");
  const auto& table = lookup_[step - 1];
  const auto it = table.find(state_key(x));
  if (it == table.end()) throw Error(ErrorKind::MissingScenario, "state is not reachable in the scenario tree");
  return nodes_[it->second].a;
}

ScenarioTree exact_coefficients_enumeration(const ModelSpec& model, const Payoff& payoff, Scheme scheme,
                                            std::size_t n_steps, std::optional<IndexSet> indices) {
  model.validate();
  if (n_steps == 0) throw Error(ErrorKind::InvalidArgument, "number of steps must be at least 1");
  const InnovationLaw law(scheme_order(scheme), model.dim_noise);
  const std::size_t c = law.scenario_count();
  std::size_t leaves = 1;
  for (std::size_t j = 0; j < n_steps; ++j) {
    if (leaves > kMaxTreeLeaves / c) {
      throw Error(ErrorKind::TreeTooLarge, "scenario tree exceeds " + std::to_string(kMaxTreeLeaves) + " leaves");
    }
    leaves *= c;
  }

  ScenarioTree tree(law, indices ? std::move(*indices) : IndexSet::full(law), n_steps);
  const double delta = model.horizon / static_cast<double>(n_steps);
  Stepper stepper(model, scheme, delta);
  std::vector<std::int8_t> codes(law.width());

  auto& nodes = tree.nodes_;
  nodes.push_back(TreeNode{0, 0, 0, 1.0, std::vector<double>(model.x0.data(), model.x0.data() + model.x0.size()), 0.0, {}});
  tree.level_offsets_.push_back(0);
  for (std::size_t depth = 1; depth <= n_steps; ++depth) {
    const std::size_t begin = tree.level_offsets_.back();
    const std::size_t end = nodes.size();
    tree.level_offsets_.push_back(end);
    for (std::size_t p = begin; p < end; ++p) {
      for (std::size_t s = 0; s < c; ++s) {
        law.decode(s, codes);
        TreeNode child{depth, p, s, nodes[p].probability * law.probability(s),
                       std::vector<double>(model.dim_state), 0.0, {}};
        stepper.step_codes(nodes[p].state, codes, child.state);
        nodes.push_back(std::move(child));
      }
    }
  }
  tree.level_offsets_.push_back(nodes.size());

  // backward pass: children of node p are contiguous, in scenario order
  std::vector<double> weights(tree.indices_.size());
  for (std::size_t i = tree.level_offsets_[n_steps]; i < nodes.size(); ++i) nodes[i].q = payoff(nodes[i].state);
  for (std::size_t depth = n_steps; depth-- > 0;) {
    const std::size_t child_begin = tree.level_offsets_[depth + 1];
    for (std::size_t p = tree.level_offsets_[depth]; p < tree.level_offsets_[depth + 1]; ++p) {
      TreeNode& node = nodes[p];
      node.a.assign(tree.indices_.size(), 0.0);
      node.q = 0.0;
      const std::size_t first_child = child_begin + (p - tree.level_offsets_[depth]) * c;
      for (std::size_t s = 0; s < c; ++s) {
        const double p_s = law.probability(s);
        const double q_child = nodes[first_child + s].q;
        law.decode(s, codes);
        tree.indices_.weights(codes, weights);
        node.q += p_s * q_child;
        for (std::size_t r = 0; r < weights.size(); ++r) node.a[r] += p_s * weights[r] * q_child;
      }
    }
  }

  tree.lookup_.resize(n_steps);
  for (std::size_t depth = 0; depth < n_steps; ++depth) {
    for (std::size_t i = tree.level_offsets_[depth]; i < tree.level_offsets_[depth + 1]; ++i) {
      tree.lookup_[depth].emplace(state_key(nodes[i].state), i);
    }
  }

  tree.mean_ = nodes[0].q;
  double second = 0.0;
  for (std::size_t i = tree.level_offsets_[n_steps]; i < nodes.size(); ++i) {
    const double dev = nodes[i].q - tree.mean_;
    second += nodes[i].probability * dev * dev;
  }
  tree.variance_ = second;
  return tree;
}

namespace {

// Exact moments of leaf_value(leaf) - scale * M~(leaf).
ExactMoments leaf_moments(const ScenarioTree& tree, const CoefficientFn& coefficients, bool include_payoff) {
  const auto& nodes = tree.nodes();
  const std::size_t n_index = tree.indices().size();
  std::vector<double> martingale(nodes.size(), 0.0);
  std::vector<double> coeffs(n_index);
  std::vector<double> weights(n_index);
  std::vector<std::int8_t> codes(tree.law().width());
  const std::size_t c = tree.law().scenario_count();
  for (std::size_t depth = 0; depth < tree.n_steps(); ++depth) {
    const std::size_t child_begin = tree.level_begin(depth + 1);
    for (std::size_t p = tree.level_begin(depth); p < tree.level_begin(depth + 1); ++p) {
      coefficients(depth + 1, nodes[p].state, coeffs);
      const std::size_t first_child = child_begin + (p - tree.level_begin(depth)) * c;
      for (std::size_t s = 0; s < c; ++s) {
        tree.law().decode(s, codes);
        tree.indices().weights(codes, weights);
        double increment = 0.0;
        for (std::size_t r = 0; r < n_index; ++r) increment += coeffs[r] * weights[r];
        martingale[first_child + s] = martingale[p] + increment;
      }
    }
  }
  const std::size_t leaf_begin = tree.level_begin(tree.n_steps());
  double mean = 0.0;
  for (std::size_t i = leaf_begin; i < nodes.size(); ++i) {
    const double value = (include_payoff ? nodes[i].q : 0.0) - martingale[i];
    mean += nodes[i].probability * value;
  }
  double variance = 0.0;
  for (std::size_t i = leaf_begin; i < nodes.size(); ++i) {
    const double dev = (include_payoff ? nodes[i].q : 0.0) - martingale[i] - mean;
    variance += nodes[i].probability * dev * dev;
  }
  return {include_payoff ? mean : -mean, variance};
}

}  // namespace

ExactMoments exact_residual_moments(const ScenarioTree& tree, const CoefficientFn& coefficients) {
  return leaf_moments(tree, coefficients, true);
}

ExactMoments exact_martingale_moments(const ScenarioTree& tree, const CoefficientFn& coefficients) {
  return leaf_moments(tree, coefficients, false);
}

double exact_l2_error(const ScenarioTree& tree, const CoefficientFn& coefficients) {
  const auto& nodes = tree.nodes();
  std::vector<double> coeffs(tree.indices().size());
  double total = 0.0;
  for (std::size_t depth = 0; depth < tree.n_steps(); ++depth) {
    for (std::size_t p = tree.level_begin(depth); p < tree.level_begin(depth + 1); ++p) {
      coefficients(depth + 1, nodes[p].state, coeffs);
      for (std::size_t r = 0; r < coeffs.size(); ++r) {
        const double err = coeffs[r] - nodes[p].a[r];
        total += nodes[p].probability * err * err;
      }
    }
  }
  return total;
}

CoefficientFn exact_coefficient_fn(const ScenarioTree& tree) {
  return [&tree](std::size_t step, std::span<const double> x, std::span<double> out) {
    const auto& a = tree.coefficients(step, x);
    std::copy(a.begin(), a.end(), out.begin());
  };
}

}  // namespace srcv
