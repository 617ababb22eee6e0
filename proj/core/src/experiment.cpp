#include "adbb/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "adbb/algorithm.hpp"
#include "adbb/error.hpp"
#include "adbb/frost.hpp"
#include "adbb/graph.hpp"
#include "adbb/theory.hpp"

namespace adbb {
namespace {

std::string_view problem_name(ProblemKind p) {
  switch (p) {
    case ProblemKind::kSynthetic: return "synthetic";
    case ProblemKind::kMushroom: return "mushroom";
    case ProblemKind::kQuadratic: return "quadratic";
  }
  return "?";
}

std::vector<LocalObjective> random_quadratics(int agents, int dimension, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> target(0.0, 1.0);
  std::uniform_real_distribution<double> curvature(1.0, 4.0);
  std::vector<LocalObjective> out;
  for (int i = 0; i < agents; ++i) {
    Vector b(dimension);
    for (int j = 0; j < dimension; ++j) b(j) = target(rng);
    out.emplace_back(QuadraticObjective(std::move(b), curvature(rng)));
  }
  return out;
}

std::filesystem::path with_suffix(const std::filesystem::path& p, const std::string& suffix) {
  return std::filesystem::path(p.string() + suffix);
}

std::filesystem::path sweep_path(const std::filesystem::path& p, int h) {
  std::filesystem::path out = p;
  out.replace_filename(fmt::format("{}_H{}{}", p.stem().string(), h, p.extension().string()));
  return out;
}

int iterations_to(const RunResult& run, double tol) {
  for (const TraceRecord& r : run.trace) {
    if (r.residual <= tol) return r.k;
  }
  return -1;
}

std::string theory_block(const ExperimentConfig& cfg, const Instance& inst, const RunResult& run,
                         int H) {
  const Problem& p = inst.problem;
  const int m = p.agents();
  std::ostringstream out;
  out << fmt::format("problem = {}\nm = {}\nn = {}\nbeta = {}\nalpha0 = {}\nseed = {}\n",
                     problem_name(cfg.problem), m, p.dimension(), cfg.beta, cfg.alpha0, cfg.seed);
  out << fmt::format("mu = {}\nL = {}\n", p.info.mu, p.info.L);
  double alpha_max = 0.0;
  for (const TraceRecord& r : run.trace) alpha_max = std::max(alpha_max, r.alpha_max);

  const SpectralInfo spectral = compute_spectral_info(p.weights, H);
  out << fmt::format("sigma = {}\npi_min = {}\npi_max = {}\nY = {}\nYhat = {}\np1 = {}\n",
                     spectral.sigma, spectral.pi_min, spectral.pi_max, spectral.Y, spectral.Yhat,
                     spectral.p1);
  try {
    const ContractionReport report = build_contraction_matrix(spectral, p.info, m, H, alpha_max);
    out << format_report(report);
    out << "step_window_ok = " << (check_step_window(report, m, p.info) ? "true" : "false") << '\n';
  } catch (const Error& e) {
    out << "contraction = " << e.what() << '\n';
  }
  out << "H_min_fixed = " << min_inner_loops(spectral, p.info, m) << '\n';
  if (cfg.theory_check && cfg.algorithm == AlgorithmKind::kAdbb) {
    AdbbConfig ac;
    ac.inner_loops = H;
    const std::vector<bool> verdicts = verify_contraction_empirically(run, spectral, p.info, ac);
    const auto ok = std::count(verdicts.begin(), verdicts.end(), true);
    out << fmt::format("empirical_contraction = {}/{}\n", ok, verdicts.size());
  }
  return out.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (agents < 1) bad("m must be >= 1");
  if (dimension < 1) bad("n must be >= 1");
  if (train_count < 1) bad("N must be >= 1");
  if (!(density >= 0.0 && density <= 1.0)) bad("density must lie in [0, 1]");
  if (inner_loops < 1) bad("H must be >= 1");
  if (!(alpha0 > 0.0)) bad("alpha0 must be positive");
  if (!(beta >= 0.0)) bad("beta must be non-negative");
  if (max_iters < 0) bad("max-iters must be non-negative");
  if (!(residual_tol >= 0.0)) bad("tol must be non-negative");
  if (problem == ProblemKind::kMushroom && data.empty()) bad("mushroom problem needs --data");
  if (output.empty()) bad("output path is empty");
  for (int h : sweep) {
    if (h < 1) bad("sweep H values must be >= 1");
  }
}

Instance build_instance(const ExperimentConfig& cfg) {
  cfg.validate();
  DirectedNetwork network = cfg.topology.empty()
                                ? random_unbalanced_network(cfg.agents, cfg.density, cfg.seed)
                                : load_edge_list(cfg.topology);
  const int m = network.agents;
  std::optional<LabeledSet> test;
  std::vector<LocalObjective> objectives;
  switch (cfg.problem) {
    case ProblemKind::kSynthetic: {
      Dataset d = generate_synthetic(m, cfg.dimension, cfg.train_count, cfg.beta, cfg.seed);
      objectives = std::move(d.objectives);
      test = std::move(d.test);
      break;
    }
    case ProblemKind::kMushroom: {
      Dataset d = load_mushroom(cfg.data, m, cfg.beta, cfg.seed, cfg.train_count);
      objectives = std::move(d.objectives);
      test = std::move(d.test);
      break;
    }
    case ProblemKind::kQuadratic:
      objectives = random_quadratics(m, cfg.dimension, cfg.seed);
      break;
  }
  return {prepare_problem(std::move(network), std::move(objectives)), std::move(test)};
}

RunResult run_algorithm(const Instance& instance, const ExperimentConfig& cfg) {
  const Problem& p = instance.problem;
  if (cfg.algorithm == AlgorithmKind::kFrost) {
    FrostConfig fc = default_frost_config(p.info, p.agents());
    fc.max_iters = cfg.max_iters;
    fc.residual_tol = cfg.residual_tol;
    return run_frost(p, fc);
  }
  AdbbConfig ac;
  ac.inner_loops = cfg.inner_loops;
  ac.alpha0 = cfg.alpha0;
  ac.max_iters = cfg.max_iters;
  ac.residual_tol = cfg.residual_tol;
  return run_adbb(p, ac);
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "k,residual,consensus_err,tracking_err,alpha_min,alpha_max,grad_evals,comm_rounds\n";
  for (const TraceRecord& r : trace) {
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", r.k, r.residual, r.consensus_err, r.tracking_err,
               r.alpha_min, r.alpha_max, r.grad_evals, r.comm_rounds);
  }
}

void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidConfig, "cannot write " + path.string());
  write_trace_csv(out, trace);
}

std::string format_classification(const ClassificationReport& r) {
  return fmt::format(
      "                predicted_P  predicted_E\n"
      "true_P          {:>11}  {:>11}\n"
      "true_E          {:>11}  {:>11}\n"
      "accuracy = {:.5f}\n",
      r.confusion[0][0], r.confusion[0][1], r.confusion[1][0], r.confusion[1][1], r.accuracy);
}

Vector consensus_point(const RunResult& run) {
  if (run.final_states.empty()) throw Error(ErrorCode::kTraceIncomplete, "run has no states");
  Vector w = Vector::Zero(run.final_states.front().x.size());
  for (const AgentState& s : run.final_states) w += s.x;
  return w / static_cast<double>(run.final_states.size());
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Instance inst = build_instance(cfg);
    const std::vector<int> loops = cfg.sweep.empty() ? std::vector<int>{cfg.inner_loops} : cfg.sweep;
    bool all_converged = true;
    std::string theory;
    for (int H : loops) {
      ExperimentConfig run_cfg = cfg;
      run_cfg.inner_loops = H;
      const RunResult run = run_algorithm(inst, run_cfg);
      const std::filesystem::path trace_path = cfg.sweep.empty() ? cfg.output : sweep_path(cfg.output, H);
      write_trace_csv(trace_path, run.trace);
      const TraceRecord& last = run.trace.back();
      fmt::print(out, "{} H={} iters={} residual={:.3e} grad_evals={} comm_rounds={} {}\n",
                 cfg.algorithm == AlgorithmKind::kAdbb ? "adbb" : "frost", H, last.k,
                 last.residual, last.grad_evals, last.comm_rounds,
                 run.converged ? "converged" : "budget-exhausted");
      all_converged = all_converged && run.converged;

      if (!cfg.sweep.empty()) theory += fmt::format("[H={}] iterations_to_tol = {}\n", H,
                                                    iterations_to(run, cfg.residual_tol));
      theory += theory_block(cfg, inst, run, cfg.algorithm == AlgorithmKind::kAdbb ? H : 1);

      if (inst.test && H == loops.back()) {
        const ClassificationReport report = evaluate_classifier(consensus_point(run), *inst.test);
        std::ofstream cls(with_suffix(cfg.output, ".classification.txt"), std::ios::binary);
        cls << format_classification(report);
        fmt::print(out, "test accuracy = {:.5f}\n", report.accuracy);
      }
    }
    std::ofstream(with_suffix(cfg.output, ".theory.txt"), std::ios::binary) << theory;
    if (cfg.theory_check) out << theory;
    return all_converged ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kBudgetExceeded ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace adbb
