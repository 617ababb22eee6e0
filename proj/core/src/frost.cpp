#include "adbb/frost.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "adbb/algorithm.hpp"
#include "adbb/error.hpp"

namespace adbb {

void FrostConfig::validate(int agents) const {
  if (static_cast<int>(alphas.size()) != agents) {
    throw Error(ErrorCode::kInvalidConfig, "FROST needs one step-size per agent");
  }
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw Error(ErrorCode::kInvalidConfig, "FROST step-sizes must be positive");
    }
  }
  if (max_iters < 0) throw Error(ErrorCode::kInvalidConfig, "max_iters must be non-negative");
  if (!(residual_tol >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "residual_tol must be >= 0");
}

double frost_stability_bound(const ObjectiveInfo& info, int agents) {
  return 1.0 / (agents * info.L);
}

FrostConfig default_frost_config(const ObjectiveInfo& info, int agents) {
  FrostConfig config;
  config.alphas.assign(static_cast<std::size_t>(agents), 0.9 * frost_stability_bound(info, agents));
  return config;
}

std::vector<AgentState> frost_iterate(std::span<const AgentState> states, const WeightMatrix& a,
                                      std::span<const LocalObjective> objectives) {
  const std::size_t m = states.size();
  if (objectives.size() != m || static_cast<std::size_t>(a.agents()) != m) {
    throw Error(ErrorCode::kDimensionMismatch, "states, objectives and weights disagree on m");
  }
  std::vector<Vector> buffer(m);
  for (std::size_t i = 0; i < m; ++i) buffer[i] = states[i].x;
  std::vector<Vector> mixed_x = multi_consensus(buffer, a, 1);
  for (std::size_t i = 0; i < m; ++i) buffer[i] = states[i].y;
  std::vector<Vector> mixed_y = multi_consensus(buffer, a, 1);
  for (std::size_t i = 0; i < m; ++i) buffer[i] = states[i].z;
  std::vector<Vector> mixed_z = multi_consensus(buffer, a, 1);

  std::vector<AgentState> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto self = static_cast<Eigen::Index>(i);
    const AgentState& old = states[i];
    AgentState& s = out[i];
    s.x = mixed_x[i] - old.alpha * old.z;
    s.y = std::move(mixed_y[i]);
    s.grad = eval_gradient(objectives[i], s.x);
    s.z = mixed_z[i] + s.grad / s.y(self) - old.grad / old.y(self);
    s.x_prev = old.x;
    s.grad_prev = old.grad;
    s.alpha = old.alpha;
    s.raw_alpha = std::numeric_limits<double>::quiet_NaN();
    s.has_prev = true;
  }
  return out;
}

RunResult run_frost(const Problem& problem, const FrostConfig& config) {
  const int m = problem.agents();
  config.validate(m);
  std::vector<AgentState> states = initialize_agents(problem.objectives, 1.0);
  for (int i = 0; i < m; ++i) states[static_cast<std::size_t>(i)].alpha = config.alphas[static_cast<std::size_t>(i)];
  long grad_evals = m;
  long comm_rounds = 0;

  RunResult result;
  result.trace.push_back(observe(0, states, problem, grad_evals, comm_rounds));
  int k = 0;
  while (result.trace.back().residual > config.residual_tol && k < config.max_iters) {
    states = frost_iterate(states, problem.weights, problem.objectives);
    ++k;
    grad_evals += m;
    comm_rounds += 3;
    check_blowup(states, k);
    result.trace.push_back(observe(k, states, problem, grad_evals, comm_rounds));
  }
  result.converged = result.trace.back().residual <= config.residual_tol;
  result.final_states = std::move(states);
  return result;
}

}  // namespace adbb
