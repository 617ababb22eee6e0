#pragma once

#include <span>
#include <vector>

#include "adbb/graph.hpp"
#include "adbb/objective.hpp"
#include "adbb/problem.hpp"

namespace adbb {

/// Combine-then-adapt baseline with one consensus step per iteration and
/// fixed, possibly uncoordinated, per-agent step-sizes.
struct FrostConfig {
  std::vector<double> alphas;
  int max_iters = 1000;
  double residual_tol = 1e-8;

  void validate(int agents) const;
};

/// 1 / (m L): the step-size ceiling quoted for FROST's linear rate.
double frost_stability_bound(const ObjectiveInfo& info, int agents);

/// alpha_i = 0.9 / (m L) for every agent.
FrostConfig default_frost_config(const ObjectiveInfo& info, int agents);

std::vector<AgentState> frost_iterate(std::span<const AgentState> states, const WeightMatrix& a,
                                      std::span<const LocalObjective> objectives);

/// Same trace schema as run_adbb; comm_rounds grows by 3 per iteration.
RunResult run_frost(const Problem& problem, const FrostConfig& config);

}  // namespace adbb
