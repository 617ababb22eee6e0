#include "adbb/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "adbb/error.hpp"

namespace adbb {
namespace {

constexpr int kMushroomColumns = 23;
constexpr int kMushroomWidth = 112;

LabeledSet take_rows(const LabeledSet& from, const std::vector<int>& order, int begin, int end) {
  LabeledSet out;
  out.features.resize(end - begin, from.features.cols());
  out.labels.resize(end - begin);
  for (int r = begin; r < end; ++r) {
    out.features.row(r - begin) = from.features.row(order[static_cast<std::size_t>(r)]);
    out.labels(r - begin) = from.labels(order[static_cast<std::size_t>(r)]);
  }
  return out;
}

}  // namespace

std::vector<LocalObjective> partition_logistic(const LabeledSet& train, int agents, double beta) {
  if (agents < 1 || train.size() < agents) {
    throw Error(ErrorCode::kInvalidConfig, "need at least one training row per agent");
  }
  const int q = train.size() / agents;
  std::vector<LocalObjective> out;
  out.reserve(static_cast<std::size_t>(agents));
  for (int i = 0; i < agents; ++i) {
    out.emplace_back(LogisticObjective(train.features.middleRows(i * q, q),
                                       train.labels.segment(i * q, q), beta, agents));
  }
  return out;
}

Dataset generate_synthetic(int agents, int dimension, int train_count, double beta,
                           std::uint64_t seed, int test_count) {
  if (agents < 1 || dimension < 1 || train_count < 1 || test_count < 0) {
    throw Error(ErrorCode::kInvalidConfig, "synthetic sizes must be positive");
  }
  if (train_count % agents != 0 || (train_count / agents) % 2 != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "N must split into an even number of samples per agent");
  }
  // +-sqrt(2/n) keeps ||2u|| = ||(2, -2)||, the two-dimensional class mean.
  const double level = std::sqrt(2.0 / dimension);
  Vector pattern(dimension);
  for (int j = 0; j < dimension; ++j) pattern(j) = (j % 2 == 0) ? level : -level;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(2.0));
  auto draw = [&](LabeledSet& set, int row, double label) {
    for (int j = 0; j < dimension; ++j) set.features(row, j) = 2.0 * label * pattern(j) + noise(rng);
    set.labels(row) = label;
  };

  Dataset d;
  d.train.features.resize(train_count, dimension);
  d.train.labels.resize(train_count);
  const int q = train_count / agents;
  for (int i = 0; i < agents; ++i) {
    for (int r = 0; r < q; ++r) draw(d.train, i * q + r, r < q / 2 ? 1.0 : -1.0);
  }
  d.test.features.resize(test_count, dimension);
  d.test.labels.resize(test_count);
  for (int r = 0; r < test_count; ++r) draw(d.test, r, r % 2 == 0 ? 1.0 : -1.0);
  d.objectives = partition_logistic(d.train, agents, beta);
  return d;
}

LabeledSet read_mushroom(std::istream& in) {
  std::vector<std::array<char, kMushroomColumns>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<char, kMushroomColumns> row{};
    std::istringstream fields(line);
    std::string field;
    int col = 0;
    while (std::getline(fields, field, ',')) {
      if (col >= kMushroomColumns || field.size() != 1) {
        throw Error(ErrorCode::kFileFormatError, "line " + std::to_string(line_no) +
                                                     ": expected 23 single-character fields");
      }
      row[static_cast<std::size_t>(col++)] = field[0];
    }
    if (col != kMushroomColumns) {
      throw Error(ErrorCode::kFileFormatError,
                  "line " + std::to_string(line_no) + ": " + std::to_string(col) + " fields");
    }
    if (row[0] != 'p' && row[0] != 'e') {
      throw Error(ErrorCode::kFileFormatError,
                  "line " + std::to_string(line_no) + ": class must be p or e");
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw Error(ErrorCode::kFileFormatError, "no samples");

  // Category alphabet per attribute, in sorted order, so the encoding does not
  // depend on row order. Attributes with a '?' anywhere are dropped.
  std::map<std::pair<int, char>, int> column_of;
  std::array<bool, kMushroomColumns> dropped{};
  int width = 0;
  for (int a = 1; a < kMushroomColumns; ++a) {
    std::set<char> seen;
    for (const auto& r : rows) seen.insert(r[static_cast<std::size_t>(a)]);
    dropped[static_cast<std::size_t>(a)] = seen.count('?') > 0;
    if (dropped[static_cast<std::size_t>(a)]) continue;
    for (char c : seen) column_of[{a, c}] = width++;
  }
  if (width != kMushroomWidth) {
    throw Error(ErrorCode::kDimensionMismatch,
                "one-hot encoding has " + std::to_string(width) + " features, expected 112");
  }

  LabeledSet out;
  out.features = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), width);
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    out.labels(i) = rows[r][0] == 'p' ? 1.0 : -1.0;
    for (int a = 1; a < kMushroomColumns; ++a) {
      if (dropped[static_cast<std::size_t>(a)]) continue;
      out.features(i, column_of.at({a, rows[r][static_cast<std::size_t>(a)]})) = 1.0;
    }
  }
  return out;
}

Dataset load_mushroom(const std::filesystem::path& path, int agents, double beta,
                      std::uint64_t seed, int train_count) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileFormatError, "cannot open " + path.string());
  const LabeledSet all = read_mushroom(in);
  if (agents < 1 || train_count < agents || train_count % agents != 0) {
    throw Error(ErrorCode::kInvalidConfig, "train_count must be a positive multiple of m");
  }
  if (train_count >= all.size()) {
    throw Error(ErrorCode::kInvalidConfig, "train_count leaves no test samples");
  }
  std::vector<int> order(static_cast<std::size_t>(all.size()));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  Dataset d;
  d.train = take_rows(all, order, 0, train_count);
  d.test = take_rows(all, order, train_count, all.size());
  d.objectives = partition_logistic(d.train, agents, beta);
  return d;
}

ClassificationReport evaluate_classifier(const Vector& w, const LabeledSet& test) {
  if (w.size() != test.features.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "classifier and features differ in length");
  }
  ClassificationReport report;
  const Vector scores = test.features * w;
  for (Eigen::Index r = 0; r < scores.size(); ++r) {
    const int truth = test.labels(r) > 0.0 ? 0 : 1;
    const int predicted = scores(r) >= 0.0 ? 0 : 1;
    ++report.confusion[truth][predicted];
  }
  const long total = report.total();
  report.accuracy =
      total > 0 ? static_cast<double>(report.confusion[0][0] + report.confusion[1][1]) / total : 0.0;
  return report;
}

}  // namespace adbb
