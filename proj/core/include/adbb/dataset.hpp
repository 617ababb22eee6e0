#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "adbb/linalg.hpp"
#include "adbb/objective.hpp"

namespace adbb {

/// Rows of `features` are samples; `labels` holds +1 / -1.
struct LabeledSet {
  Matrix features;
  Vector labels;

  int size() const { return static_cast<int>(labels.size()); }
};

/// Per-agent training objectives plus a held-out test set.
struct Dataset {
  std::vector<LocalObjective> objectives;
  LabeledSet train;  // all training rows, agent blocks in order
  LabeledSet test;
};

/// Two Gaussian classes with means +2u and -2u, covariance 2I, where
/// u = sqrt(2/n) (1, -1, 1, -1, ...). Every agent gets N/m training samples, half of each class.
/// Throws kInvalidConfig unless N is divisible by m and N/m is even.
Dataset generate_synthetic(int agents, int dimension, int train_count, double beta,
                           std::uint64_t seed, int test_count = 1000);

/// One-hot encoded agaricus-lepiota rows (class p -> +1, e -> -1). Attributes
/// with missing values ('?': only stalk-root in the UCI file) are dropped,
/// which leaves 112 binary features on the full file.
LabeledSet read_mushroom(std::istream& in);

/// Seeded shuffle, the first `train_count` rows split equally over the agents,
/// the rest become the test set. Throws kFileFormatError, kDimensionMismatch
/// (width != 112) or kInvalidConfig.
Dataset load_mushroom(const std::filesystem::path& path, int agents, double beta,
                      std::uint64_t seed, int train_count = 6000);

/// Splits rows [0, agents * q) into `agents` logistic objectives of q rows each.
std::vector<LocalObjective> partition_logistic(const LabeledSet& train, int agents, double beta);

struct ClassificationReport {
  // rows: true +1 / -1, columns: predicted +1 / -1
  long confusion[2][2] = {{0, 0}, {0, 0}};
  double accuracy = 0.0;

  long total() const { return confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1]; }
};

/// sign(c^T w), with ties predicting +1.
ClassificationReport evaluate_classifier(const Vector& w, const LabeledSet& test);

}  // namespace adbb
