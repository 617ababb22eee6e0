#pragma once

#include <span>
#include <vector>

#include "adbb/graph.hpp"
#include "adbb/linalg.hpp"
#include "adbb/objective.hpp"

namespace adbb {

/// Per-agent algorithm state. `grad` caches grad f_i(x) so each outer
/// iteration evaluates every local gradient exactly once.
struct AgentState {
  Vector x;          // x_k^i
  Vector y;          // y_k^i, length m
  Vector z;          // z_k^i
  Vector x_prev;     // x_{k-1}^i
  Vector grad;       // grad f_i(x_k^i)
  Vector grad_prev;  // grad f_i(x_{k-1}^i)
  double alpha = 0.0;
  double raw_alpha = 0.0;  // unclamped BB value behind alpha; NaN when none was computed
  bool has_prev = false;
};

/// y_0 = e_i, z_0 = grad f_i(x_0), alpha_0 for every agent.
std::vector<AgentState> initialize_agents(std::span<const LocalObjective> objectives,
                                          std::span<const Vector> x0, double alpha0);

/// Same, with x_0 = 0 everywhere.
std::vector<AgentState> initialize_agents(std::span<const LocalObjective> objectives,
                                          double alpha0);

/// One row per iteration. The first eight fields are the trace CSV columns;
/// the rest are centralized diagnostics used by tests and the theory checks.
struct TraceRecord {
  int k = 0;
  double residual = 0.0;       // (1/m) sum_i ||x_k^i - w*||
  double consensus_err = 0.0;  // ||x_k - y_inf x_k||_pi
  double tracking_err = 0.0;   // ||z_k - y_inf z_k||_pi
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  long grad_evals = 0;
  long comm_rounds = 0;

  double optimality_gap = 0.0;     // ||y_inf x_k - 1 (x) w*||_2
  double grad_norm = 0.0;          // ||grad F(x_k)||_2
  double tracking_identity = 0.0;  // ||(pi^T (x) I) z_k - (pi^T (x) I) yhat_k^-1 grad F(x_k)||
  double eigvec_err = 0.0;         // ||Ytilde_k - 1 pi^T||_2
  double eigvec_err_pi = 0.0;      // same in the pi-induced norm
  double y_simplex_err = 0.0;      // max_i |sum(y_k^i) - 1|
  double y_min_entry = 0.0;        // min_i,j [y_k^i]_j
  double alpha_pi_mean = 0.0;      // pi^T alpha_k
  double raw_alpha_min = 0.0;      // NaN when no agent computed a BB value this step
  double raw_alpha_max = 0.0;
};

/// Everything fixed across runs on one instance: network, weights, objectives,
/// constants, Perron vector and the centralized optimum used for residuals.
struct Problem {
  DirectedNetwork network;
  WeightMatrix weights;
  std::vector<LocalObjective> objectives;
  ObjectiveInfo info;
  Vector pi;
  Vector optimum;

  int agents() const { return network.agents; }
  int dimension() const { return static_cast<int>(optimum.size()); }
};

/// Validates the standing assumptions for the instance (strong connectivity, matching
/// dimensions, mu > 0) and computes the centralized reference.
Problem prepare_problem(DirectedNetwork network, std::vector<LocalObjective> objectives,
                        const CentralizedOptions& reference = {});

TraceRecord observe(int k, std::span<const AgentState> states, const Problem& problem,
                    long grad_evals, long comm_rounds);

struct RunResult {
  std::vector<TraceRecord> trace;
  std::vector<AgentState> final_states;
  bool converged = false;  // false means the iteration budget ran out
};

/// Stacks agent vectors into an m x n matrix (row i = agent i).
Matrix stack_x(std::span<const AgentState> states);
Matrix stack_y(std::span<const AgentState> states);
Matrix stack_z(std::span<const AgentState> states);

/// Throws kNumericalBlowup if any state entry is non-finite or above 1e100.
void check_blowup(std::span<const AgentState> states, int k);

}  // namespace adbb
