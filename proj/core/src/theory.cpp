#include "adbb/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "adbb/error.hpp"

namespace adbb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : kInf; }

Eigen::Matrix3d assemble(const std::array<double, 7>& w, double sigma_H, double alpha,
                         double lambda) {
  Eigen::Matrix3d M;
  M << sigma_H + alpha * sigma_H * w[0], alpha * sigma_H * w[0], alpha * sigma_H,  //
      alpha * w[1], lambda, alpha * w[2],                                         //
      sigma_H * w[3] + alpha * sigma_H * w[4], alpha * sigma_H * w[4],
      sigma_H + alpha * sigma_H * w[5];
  return M;
}

// The two sigma^H fractions whose minimum is varpi.
double varpi_for(const std::array<double, 7>& w, const Eigen::Vector3d& c, double m_mu) {
  const double first = m_mu * c(0) / ((w[0] + m_mu) * c(0) + w[0] * c(1) + c(2));
  const double second =
      m_mu * c(2) / ((w[4] + m_mu * w[3]) * c(0) + w[4] * c(1) + (w[5] + m_mu) * c(2));
  return std::min(first, second);
}

}  // namespace

double spectral_radius(const Eigen::Matrix3d& m) {
  Eigen::EigenSolver<Eigen::Matrix3d> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::array<double, 7> contraction_constants(const SpectralInfo& s, const ObjectiveInfo& info,
                                            int agents) {
  const double m = agents;
  const double L = info.L;
  return {
      std::sqrt(s.pi_max) * m * L,                 // w1
      m * L / std::sqrt(s.pi_min),                 // w2
      s.Yhat / std::sqrt(s.pi_min),                // w3
      std::sqrt(s.vartheta) * s.Y * L * s.p1,      // w4
      m * s.Y * s.Yhat * L * L,                    // w5
      s.Y * s.Yhat * L / std::sqrt(s.pi_min),      // w6
      info.mu / L,                                 // w7
  };
}

Eigen::Vector3d certificate_vector(const std::array<double, 7>& w, double sigma_H,
                                   const ObjectiveInfo& info, int agents) {
  if (!(sigma_H < 1.0)) {
    throw Error(ErrorCode::kInfeasibleC, "sigma^H >= 1 leaves no admissible c1");
  }
  // 0 < c1 < (1 - sigma^H) c3 / (sigma^H w4)
  const double c1_bound = safe_ratio(1.0 - sigma_H, sigma_H * w[3]);
  const double c1 = std::min(1.0, 0.5 * c1_bound);
  const double c3 = 1.0;
  const double alpha_top = 1.0 / (agents * info.mu);
  const double c2 = 2.0 * alpha_top * (w[1] * c1 + w[2] * c3) / w[6];
  return {c1, c2, c3};
}

ContractionReport build_contraction_matrix(const SpectralInfo& spectral,
                                           const ObjectiveInfo& info, int agents,
                                           int inner_loops, double alpha_max) {
  if (inner_loops < 1) throw Error(ErrorCode::kInvalidConfig, "H must be >= 1");
  if (spectral.inner_loops != inner_loops) {
    throw Error(ErrorCode::kInvalidConfig,
                "spectral constants were computed for H = " + std::to_string(spectral.inner_loops));
  }
  if (!(alpha_max > 0.0)) throw Error(ErrorCode::kInvalidConfig, "alpha_max must be positive");

  ContractionReport r;
  r.inner_loops = inner_loops;
  r.alpha_max = alpha_max;
  r.sigma_H = std::pow(spectral.sigma, inner_loops);
  r.w = contraction_constants(spectral, info, agents);
  const auto& w = r.w;

  r.M = assemble(w, r.sigma_H, alpha_max, 1.0 - w[6]);
  r.rho_M = spectral_radius(r.M);
  r.rho_M_alt = spectral_radius(assemble(w, r.sigma_H, alpha_max, 1.0 - info.mu / (agents * info.L)));

  r.c = certificate_vector(w, r.sigma_H, info, agents);
  const Eigen::Vector3d& c = r.c;
  const double sH = r.sigma_H;
  r.alpha_lower = 1.0 / (agents * info.L);
  r.alpha_upper = std::min({
      safe_ratio((1.0 - sH) * c(0), sH * (w[0] * c(0) + w[0] * c(1) + c(2))),
      w[6] * c(1) / (w[1] * c(0) + w[2] * c(2)),
      safe_ratio((1.0 - sH) * c(2) - sH * w[3] * c(0), sH * (w[4] * c(0) + w[4] * c(1) + w[5] * c(2))),
  });
  r.varpi = varpi_for(w, c, agents * info.mu);
  r.H_min = inner_loop_bound(r.varpi, spectral.sigma);
  r.satisfied = r.rho_M < 1.0 && ((r.M * c).array() < c.array()).all();
  return r;
}

int inner_loop_bound(double varpi, double sigma) {
  if (sigma <= 0.0 || varpi >= 1.0) return 1;
  if (!(varpi > 0.0)) throw Error(ErrorCode::kInvalidConfig, "varpi must be positive");
  const double ratio = std::log(varpi) / std::log(sigma);
  double bound = std::ceil(ratio);
  const double nearest = std::round(ratio);
  if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    bound = nearest + 1.0;
  }
  if (bound > static_cast<double>(std::numeric_limits<int>::max())) {
    throw Error(ErrorCode::kInvalidConfig, "inner-loop bound overflows");
  }
  return std::max(1, static_cast<int>(bound));
}

double sigma_threshold(const SpectralInfo& spectral, const ObjectiveInfo& info, int agents) {
  const auto w = contraction_constants(spectral, info, agents);
  const double c3 = 1.0;
  const double c1 = 1.0;
  const double c2 = 2.0 * (w[1] * c1 + w[2] * c3) / (agents * info.mu * w[6]);
  return varpi_for(w, {c1, c2, c3}, agents * info.mu);
}

int min_inner_loops(const SpectralInfo& spectral, const ObjectiveInfo& info, int agents) {
  if (spectral.sigma <= 0.0) return 1;
  return inner_loop_bound(sigma_threshold(spectral, info, agents), spectral.sigma);
}

CertifiedLoops certified_inner_loops(const WeightMatrix& a, const ObjectiveInfo& info) {
  const int m = a.agents();
  int H = 1;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    SpectralInfo spectral = compute_spectral_info(a, H);
    const int needed = min_inner_loops(spectral, info, m);
    if (needed <= H) return {H, std::move(spectral)};
    H = needed;
  }
  throw Error(ErrorCode::kBudgetExceeded, "inner-loop bound did not settle");
}

bool check_step_window(const ContractionReport& report, int agents, const ObjectiveInfo& info) {
  return 1.0 / (agents * info.mu) < report.alpha_upper;
}

std::vector<bool> verify_contraction_empirically(const RunResult& run,
                                                 const SpectralInfo& spectral,
                                                 const ObjectiveInfo& info,
                                                 const AdbbConfig& config, double slack) {
  const auto& trace = run.trace;
  if (trace.size() < 2 || run.final_states.empty()) {
    throw Error(ErrorCode::kTraceIncomplete, "need at least two trace records");
  }
  if (spectral.inner_loops != config.inner_loops) {
    throw Error(ErrorCode::kInvalidConfig, "spectral constants computed for a different H");
  }
  for (const TraceRecord& r : trace) {
    for (double v : {r.consensus_err, r.optimality_gap, r.tracking_err, r.grad_norm, r.alpha_pi_mean,
                     r.alpha_max}) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kTraceIncomplete, "trace record " + std::to_string(r.k) +
                                                     " is missing diagnostics");
      }
    }
  }
  const int m = static_cast<int>(run.final_states.size());
  const double md = m;
  const auto w = contraction_constants(spectral, info, m);
  const double sH = std::pow(spectral.sigma, config.inner_loops);
  double alpha = 0.0;
  for (const TraceRecord& r : trace) alpha = std::max(alpha, r.alpha_max);

  const double Y = spectral.Y;
  const double Yh = spectral.Yhat;
  const Eigen::Vector3d G0(alpha * std::sqrt(md * spectral.pi_max) * Yh * Y * Y * sH,
                           alpha * std::sqrt(md) * Y * Y * Yh,
                           2.0 * std::sqrt(md / spectral.pi_min) * Y * Y * sH +
                               alpha * std::sqrt(md) * Yh * Yh * Y * Y * Y * info.L * sH);

  std::vector<bool> verdicts;
  verdicts.reserve(trace.size() - 1);
  double decay = 1.0;  // sigma^{kH}
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const TraceRecord& now = trace[k];
    const TraceRecord& next = trace[k + 1];
    const double step = md * now.alpha_pi_mean;
    const double lambda = std::max(std::abs(1.0 - step * info.mu), std::abs(1.0 - step * info.L));
    const Eigen::Matrix3d Mk = assemble(w, sH, alpha, lambda);
    const Eigen::Vector3d t(now.consensus_err, now.optimality_gap, now.tracking_err);
    const Eigen::Vector3d t_next(next.consensus_err, next.optimality_gap, next.tracking_err);
    const Eigen::Vector3d bound = Mk * t + G0 * decay * now.grad_norm;
    verdicts.push_back(((t_next.array()) <= bound.array() + slack).all());
    decay *= sH;
  }
  return verdicts;
}

std::string format_report(const ContractionReport& r) {
  std::ostringstream out;
  out.precision(10);
  out << "H = " << r.inner_loops << '\n';
  out << "alpha_max = " << r.alpha_max << '\n';
  out << "sigma_H = " << r.sigma_H << '\n';
  for (std::size_t i = 0; i < r.w.size(); ++i) out << "w" << (i + 1) << " = " << r.w[i] << '\n';
  for (int i = 0; i < 3; ++i) {
    out << "M_row" << (i + 1) << " = " << r.M(i, 0) << ' ' << r.M(i, 1) << ' ' << r.M(i, 2) << '\n';
  }
  out << "rho_M = " << r.rho_M << '\n';
  out << "rho_M_alt = " << r.rho_M_alt << '\n';
  out << "c = " << r.c(0) << ' ' << r.c(1) << ' ' << r.c(2) << '\n';
  out << "alpha_window = " << r.alpha_lower << ' ' << r.alpha_upper << '\n';
  out << "varpi = " << r.varpi << '\n';
  out << "H_min = " << r.H_min << '\n';
  out << "satisfied = " << (r.satisfied ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace adbb
