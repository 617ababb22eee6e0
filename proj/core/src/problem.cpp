#include "adbb/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "adbb/error.hpp"

namespace adbb {

std::vector<AgentState> initialize_agents(std::span<const LocalObjective> objectives,
                                          std::span<const Vector> x0, double alpha0) {
  if (!(alpha0 > 0.0)) throw Error(ErrorCode::kInvalidConfig, "alpha0 must be positive");
  if (x0.size() != objectives.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "one starting point per agent is required");
  }
  const auto m = static_cast<Eigen::Index>(objectives.size());
  std::vector<AgentState> states(objectives.size());
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    AgentState& s = states[i];
    s.x = x0[i];
    s.y = Vector::Unit(m, static_cast<Eigen::Index>(i));
    s.grad = eval_gradient(objectives[i], s.x);
    s.z = s.grad;
    s.x_prev = s.x;
    s.grad_prev = s.grad;
    s.alpha = alpha0;
    s.raw_alpha = std::numeric_limits<double>::quiet_NaN();
  }
  return states;
}

std::vector<AgentState> initialize_agents(std::span<const LocalObjective> objectives,
                                          double alpha0) {
  if (objectives.empty()) throw Error(ErrorCode::kInvalidConfig, "no objectives");
  std::vector<Vector> x0(objectives.size(), Vector::Zero(dimension(objectives.front())));
  return initialize_agents(objectives, x0, alpha0);
}

Problem prepare_problem(DirectedNetwork network, std::vector<LocalObjective> objectives,
                        const CentralizedOptions& reference) {
  if (static_cast<int>(objectives.size()) != network.agents) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(objectives.size()) + " objectives for " +
                    std::to_string(network.agents) + " agents");
  }
  if (!check_strong_connectivity(network)) {
    throw Error(ErrorCode::kNotStronglyConnected, "network is not strongly connected");
  }
  WeightMatrix weights = build_uniform_weights(network);
  ObjectiveInfo info = uniform_constants(objectives);
  Vector pi = perron_vector(weights);
  Vector optimum = solve_centralized(objectives, reference);
  return Problem{std::move(network), std::move(weights), std::move(objectives),
                 info,               std::move(pi),      std::move(optimum)};
}

Matrix stack_x(std::span<const AgentState> states) {
  Matrix out(static_cast<Eigen::Index>(states.size()), states.front().x.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = states[i].x.transpose();
  }
  return out;
}

Matrix stack_y(std::span<const AgentState> states) {
  Matrix out(static_cast<Eigen::Index>(states.size()), states.front().y.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = states[i].y.transpose();
  }
  return out;
}

Matrix stack_z(std::span<const AgentState> states) {
  Matrix out(static_cast<Eigen::Index>(states.size()), states.front().z.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = states[i].z.transpose();
  }
  return out;
}

TraceRecord observe(int k, std::span<const AgentState> states, const Problem& problem,
                    long grad_evals, long comm_rounds) {
  const Vector& pi = problem.pi;
  const auto m = static_cast<Eigen::Index>(states.size());
  const Matrix x = stack_x(states);
  const Matrix z = stack_z(states);
  const Matrix y = stack_y(states);

  TraceRecord r;
  r.k = k;
  r.grad_evals = grad_evals;
  r.comm_rounds = comm_rounds;

  double residual = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) residual += (x.row(i).transpose() - problem.optimum).norm();
  r.residual = residual / static_cast<double>(m);

  const Eigen::RowVectorXd x_avg = pi.transpose() * x;
  const Eigen::RowVectorXd z_avg = pi.transpose() * z;
  r.consensus_err = pi_weighted_norm(Matrix(x.rowwise() - x_avg), pi);
  r.tracking_err = pi_weighted_norm(Matrix(z.rowwise() - z_avg), pi);
  r.optimality_gap = std::sqrt(static_cast<double>(m)) * (x_avg.transpose() - problem.optimum).norm();

  Vector scaled_grad_avg = Vector::Zero(x.cols());
  double grad_sq = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const AgentState& s = states[static_cast<std::size_t>(i)];
    scaled_grad_avg += pi(i) * s.grad / s.y(i);
    grad_sq += s.grad.squaredNorm();
  }
  r.grad_norm = std::sqrt(grad_sq);
  r.tracking_identity = (z_avg.transpose() - scaled_grad_avg).norm();

  const Matrix limit = Vector::Ones(m) * pi.transpose();
  r.eigvec_err = spectral_norm(y - limit);
  r.eigvec_err_pi = pi_induced_norm(y - limit, pi);
  r.y_simplex_err = (y.rowwise().sum().array() - 1.0).abs().maxCoeff();
  r.y_min_entry = y.minCoeff();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.alpha_min = std::numeric_limits<double>::infinity();
  r.alpha_max = -std::numeric_limits<double>::infinity();
  r.raw_alpha_min = nan;
  r.raw_alpha_max = nan;
  r.alpha_pi_mean = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const AgentState& s = states[static_cast<std::size_t>(i)];
    r.alpha_min = std::min(r.alpha_min, s.alpha);
    r.alpha_max = std::max(r.alpha_max, s.alpha);
    r.alpha_pi_mean += pi(i) * s.alpha;
    if (!std::isnan(s.raw_alpha)) {
      r.raw_alpha_min = std::isnan(r.raw_alpha_min) ? s.raw_alpha : std::min(r.raw_alpha_min, s.raw_alpha);
      r.raw_alpha_max = std::isnan(r.raw_alpha_max) ? s.raw_alpha : std::max(r.raw_alpha_max, s.raw_alpha);
    }
  }
  return r;
}

void check_blowup(std::span<const AgentState> states, int k) {
  constexpr double kLimit = 1e100;
  auto bad = [](const Vector& v) { return !v.allFinite() || v.cwiseAbs().maxCoeff() > kLimit; };
  for (std::size_t i = 0; i < states.size(); ++i) {
    const AgentState& s = states[i];
    if (bad(s.x) || bad(s.y) || bad(s.z) || !std::isfinite(s.alpha)) {
      throw Error(ErrorCode::kNumericalBlowup,
                  "agent " + std::to_string(i + 1) + " diverged at iteration " + std::to_string(k));
    }
  }
}

}  // namespace adbb
