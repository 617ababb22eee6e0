#pragma once

#include <optional>
#include <span>
#include <vector>

#include "adbb/graph.hpp"
#include "adbb/objective.hpp"
#include "adbb/problem.hpp"

namespace adbb {

/// BB1: (1/m) s^T s / s^T v.  BB2: (1/m) s^T v / v^T v.
enum class StepRule { kBB1, kBB2 };

struct AdbbConfig {
  int inner_loops = 1;  // H
  double alpha0 = 1.2;
  StepRule rule = StepRule::kBB1;
  double safeguard_eps = 1e-14;
  int max_iters = 1000;
  double residual_tol = 1e-8;
  /// When false every agent keeps alpha0 forever; used to compare against
  /// fixed-step methods.
  bool adaptive_step = true;

  /// Throws kInvalidConfig.
  void validate() const;
};

/// The interval [1/(m L), 1/(m mu)] every BB step is kept in.
struct StepBounds {
  double lower = 0.0;
  double upper = 0.0;
};
StepBounds step_bounds(const ObjectiveInfo& info, int agents);

/// Unclamped BB value, or nullopt when the denominator is degenerate
/// (non-positive or below eps times the numerator scale).
std::optional<double> raw_bb_step(const Vector& s, const Vector& v, int agents, StepRule rule,
                                  double eps);

/// BB step clamped to step_bounds(info, agents); `fallback` is returned when
/// the quotient is degenerate.
double bb_step_size(const Vector& s, const Vector& v, int agents, StepRule rule,
                    const ObjectiveInfo& info, double eps, double fallback);

/// H synchronous rounds of out_i = sum_j a_ij in_j. In each round an agent
/// reads only its own row's neighbors from the previous round's snapshot.
std::vector<Vector> multi_consensus(std::span<const Vector> values, const WeightMatrix& a,
                                    int rounds);

/// One outer iteration of ADBB, adapt-then-combine: descend, mix x H times,
/// mix y H times, correct and mix z H times, then refresh alpha from (s, v).
std::vector<AgentState> adbb_iterate(std::span<const AgentState> states, const WeightMatrix& a,
                                     std::span<const LocalObjective> objectives,
                                     const AdbbConfig& config, const ObjectiveInfo& info);

/// Runs until the residual drops to residual_tol or max_iters iterations.
/// Records the trace every iteration. Throws kNumericalBlowup on divergence.
RunResult run_adbb(const Problem& problem, const AdbbConfig& config);

RunResult run_adbb(const DirectedNetwork& network, std::span<const LocalObjective> objectives,
                   const AdbbConfig& config);

}  // namespace adbb
