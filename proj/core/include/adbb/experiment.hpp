#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adbb/dataset.hpp"
#include "adbb/problem.hpp"

namespace adbb {

enum class ProblemKind { kSynthetic, kMushroom, kQuadratic };
enum class AlgorithmKind { kAdbb, kFrost };

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::kSynthetic;
  std::filesystem::path data;      // mushroom CSV
  std::filesystem::path topology;  // edge list; empty means generate one
  int agents = 10;
  int dimension = 100;
  int train_count = 1000;  // N (synthetic) or training rows (mushroom)
  double density = 0.3;    // generated topology only
  AlgorithmKind algorithm = AlgorithmKind::kAdbb;
  int inner_loops = 1;
  double alpha0 = 1.2;
  double beta = 0.1;
  int max_iters = 1000;
  double residual_tol = 1e-8;
  std::uint64_t seed = 1;
  std::filesystem::path output = "trace.csv";
  std::vector<int> sweep;  // H values; empty means a single run
  bool theory_check = false;

  /// Throws kInvalidConfig.
  void validate() const;
};

/// Network, objectives and (for classification problems) the held-out set.
struct Instance {
  Problem problem;
  std::optional<LabeledSet> test;
};

Instance build_instance(const ExperimentConfig& cfg);

RunResult run_algorithm(const Instance& instance, const ExperimentConfig& cfg);

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRecord> trace);

std::string format_classification(const ClassificationReport& report);

/// Average of the agents' final x.
Vector consensus_point(const RunResult& run);

/// Runs the configured experiment, writes the trace CSV (one per H in sweep
/// mode, suffixed _H<h>), `<output>.theory.txt` and, for classification
/// problems, `<output>.classification.txt`. Returns 0 when the residual
/// tolerance was reached, 2 when a budget ran out and 1 on any other error.
int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace adbb
