#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adbb/algorithm.hpp"
#include "adbb/graph.hpp"
#include "adbb/objective.hpp"
#include "adbb/problem.hpp"

namespace adbb {

// Centralized diagnostics for the linear-convergence argument. These consume
// pi and sigma, which no agent can compute locally, and never feed back into
// the algorithm.

/// The 3x3 bound on (consensus error, optimality gap, tracking error) and the
/// quantities derived from it.
struct ContractionReport {
  int inner_loops = 1;
  double alpha_max = 0.0;
  double sigma_H = 0.0;
  std::array<double, 7> w{};
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  double rho_M = 0.0;
  /// rho of the same matrix with the (2,2) entry 1 - mu/(m L) instead of
  /// 1 - mu/L; the proof text and the matrix disagree on the factor m.
  double rho_M_alt = 0.0;
  Eigen::Vector3d c = Eigen::Vector3d::Ones();
  double alpha_lower = 0.0;  // 1 / (m L)
  double alpha_upper = 0.0;  // min of the three admissible-step fractions
  double varpi = 0.0;
  int H_min = 1;
  bool satisfied = false;  // rho_M < 1 and M c < c componentwise
};

/// w_1..w_7 from the spectral constants (at spectral.inner_loops) and mu, L.
std::array<double, 7> contraction_constants(const SpectralInfo& spectral,
                                            const ObjectiveInfo& info, int agents);

/// Positive test vector: c1 = c3 = 1 (c1 capped at the midpoint of its
/// feasible interval when that is narrower) and c2 twice the smallest value the
/// optimality-gap row admits at the largest admissible BB step 1/(m mu).
/// Throws kInfeasibleC when sigma^H >= 1.
Eigen::Vector3d certificate_vector(const std::array<double, 7>& w, double sigma_H,
                                   const ObjectiveInfo& info, int agents);

/// Requires spectral.inner_loops == inner_loops.
ContractionReport build_contraction_matrix(const SpectralInfo& spectral,
                                           const ObjectiveInfo& info, int agents,
                                           int inner_loops, double alpha_max);

/// ceil(ln varpi / ln sigma), plus one when the ratio is a positive integer;
/// never below 1.
int inner_loop_bound(double varpi, double sigma);

/// varpi for the H-independent certificate (c1 = c3 = 1) and its H bound,
/// using the constants stored in `spectral`.
double sigma_threshold(const SpectralInfo& spectral, const ObjectiveInfo& info, int agents);
int min_inner_loops(const SpectralInfo& spectral, const ObjectiveInfo& info, int agents);

/// Smallest H reached by iterating H <- min_inner_loops(spectral at H) from
/// H = 1 until H is self-consistent (the H-dependent constants Y, Yhat, p1
/// are re-evaluated at each candidate).
struct CertifiedLoops {
  int inner_loops = 1;
  SpectralInfo spectral;
};
CertifiedLoops certified_inner_loops(const WeightMatrix& a, const ObjectiveInfo& info);

/// True iff the whole interval [1/(m L), 1/(m mu)] lies below alpha_upper.
bool check_step_window(const ContractionReport& report, int agents, const ObjectiveInfo& info);

/// Checks t_{k+1} <= M_k t_k + G_k g_k (plus `slack`) at every k of the trace,
/// with lambda_k from pi^T alpha_k and alpha_max the largest step in the run.
/// Throws kTraceIncomplete when the trace lacks the needed diagnostics.
std::vector<bool> verify_contraction_empirically(const RunResult& run,
                                                 const SpectralInfo& spectral,
                                                 const ObjectiveInfo& info,
                                                 const AdbbConfig& config, double slack = 1e-7);

/// Flat `key = value` block.
std::string format_report(const ContractionReport& report);

double spectral_radius(const Eigen::Matrix3d& m);

}  // namespace adbb
