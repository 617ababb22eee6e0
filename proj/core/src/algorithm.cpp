#include "adbb/algorithm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adbb/error.hpp"

namespace adbb {

void AdbbConfig::validate() const {
  if (inner_loops < 1) throw Error(ErrorCode::kInvalidConfig, "H must be >= 1");
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
    throw Error(ErrorCode::kInvalidConfig, "alpha0 must be positive");
  }
  if (!(safeguard_eps > 0.0)) throw Error(ErrorCode::kInvalidConfig, "safeguard_eps must be positive");
  if (max_iters < 0) throw Error(ErrorCode::kInvalidConfig, "max_iters must be non-negative");
  if (!(residual_tol >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "residual_tol must be >= 0");
}

StepBounds step_bounds(const ObjectiveInfo& info, int agents) {
  return {1.0 / (agents * info.L), 1.0 / (agents * info.mu)};
}

std::optional<double> raw_bb_step(const Vector& s, const Vector& v, int agents, StepRule rule,
                                  double eps) {
  if (agents < 1) throw Error(ErrorCode::kInvalidConfig, "agent count must be positive");
  if (s.size() != v.size()) throw Error(ErrorCode::kDimensionMismatch, "s and v differ in length");
  const double sv = s.dot(v);
  double numerator = 0.0;
  double denominator = 0.0;
  if (rule == StepRule::kBB1) {
    numerator = s.squaredNorm();
    denominator = sv;
  } else {
    numerator = sv;
    denominator = v.squaredNorm();
  }
  if (!(numerator > 0.0) || !(denominator > eps * numerator)) return std::nullopt;
  return numerator / denominator / agents;
}

double bb_step_size(const Vector& s, const Vector& v, int agents, StepRule rule,
                    const ObjectiveInfo& info, double eps, double fallback) {
  const StepBounds bounds = step_bounds(info, agents);
  const std::optional<double> raw = raw_bb_step(s, v, agents, rule, eps);
  return std::clamp(raw.value_or(fallback), bounds.lower, bounds.upper);
}

std::vector<Vector> multi_consensus(std::span<const Vector> values, const WeightMatrix& a,
                                    int rounds) {
  const int m = a.agents();
  if (static_cast<int>(values.size()) != m) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(values.size()) + " agent values for a " + std::to_string(m) +
                    "-agent weight matrix");
  }
  std::vector<Vector> current(values.begin(), values.end());
  for (const Vector& v : current) {
    if (v.size() != current.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch, "agent values differ in length");
    }
  }
  std::vector<Vector> next(current.size());
  for (int h = 0; h < rounds; ++h) {
    for (int i = 0; i < m; ++i) {
      Vector& out = next[static_cast<std::size_t>(i)];
      out.setZero(current.front().size());
      for (const WeightMatrix::Link& link : a.row(i)) {
        out += link.weight * current[static_cast<std::size_t>(link.from)];
      }
    }
    std::swap(current, next);
  }
  return current;
}

std::vector<AgentState> adbb_iterate(std::span<const AgentState> states, const WeightMatrix& a,
                                     std::span<const LocalObjective> objectives,
                                     const AdbbConfig& config, const ObjectiveInfo& info) {
  const std::size_t m = states.size();
  if (objectives.size() != m || static_cast<std::size_t>(a.agents()) != m) {
    throw Error(ErrorCode::kDimensionMismatch, "states, objectives and weights disagree on m");
  }
  const int H = config.inner_loops;
  const int agents = static_cast<int>(m);

  std::vector<Vector> buffer(m);
  for (std::size_t i = 0; i < m; ++i) buffer[i] = states[i].x - states[i].alpha * states[i].z;
  const std::vector<Vector> x_next = multi_consensus(buffer, a, H);

  for (std::size_t i = 0; i < m; ++i) buffer[i] = states[i].y;
  const std::vector<Vector> y_next = multi_consensus(buffer, a, H);

  std::vector<Vector> grad_next(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto self = static_cast<Eigen::Index>(i);
    grad_next[i] = eval_gradient(objectives[i], x_next[i]);
    buffer[i] = states[i].z + grad_next[i] / y_next[i](self) - states[i].grad / states[i].y(self);
  }
  const std::vector<Vector> z_next = multi_consensus(buffer, a, H);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<AgentState> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const AgentState& old = states[i];
    AgentState& s = out[i];
    s.x = x_next[i];
    s.y = y_next[i];
    s.z = z_next[i];
    s.x_prev = old.x;
    s.grad = std::move(grad_next[i]);
    s.grad_prev = old.grad;
    s.has_prev = true;
    if (config.adaptive_step) {
      const Vector step = s.x - s.x_prev;
      const Vector grad_change = s.grad - s.grad_prev;
      const std::optional<double> raw =
          raw_bb_step(step, grad_change, agents, config.rule, config.safeguard_eps);
      s.raw_alpha = raw.value_or(nan);
      s.alpha = bb_step_size(step, grad_change, agents, config.rule, info, config.safeguard_eps,
                             old.alpha);
    } else {
      s.raw_alpha = nan;
      s.alpha = old.alpha;
    }
  }
  return out;
}

RunResult run_adbb(const Problem& problem, const AdbbConfig& config) {
  config.validate();
  const int m = problem.agents();
  std::vector<AgentState> states = initialize_agents(problem.objectives, config.alpha0);
  long grad_evals = m;
  long comm_rounds = 0;

  RunResult result;
  result.trace.push_back(observe(0, states, problem, grad_evals, comm_rounds));
  int k = 0;
  while (result.trace.back().residual > config.residual_tol && k < config.max_iters) {
    states = adbb_iterate(states, problem.weights, problem.objectives, config, problem.info);
    ++k;
    grad_evals += m;
    comm_rounds += 3L * config.inner_loops;
    check_blowup(states, k);
    result.trace.push_back(observe(k, states, problem, grad_evals, comm_rounds));
  }
  result.converged = result.trace.back().residual <= config.residual_tol;
  result.final_states = std::move(states);
  return result;
}

RunResult run_adbb(const DirectedNetwork& network, std::span<const LocalObjective> objectives,
                   const AdbbConfig& config) {
  config.validate();
  Problem problem = prepare_problem(network, {objectives.begin(), objectives.end()});
  return run_adbb(problem, config);
}

}  // namespace adbb
