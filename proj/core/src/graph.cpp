#include "adbb/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "adbb/error.hpp"

namespace adbb {

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

bool all_finite(const Vector& v) { return v.allFinite(); }

DirectedNetwork DirectedNetwork::from_edges(int agents,
                                            std::span<const std::pair<int, int>> edges) {
  if (agents <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "network needs at least one agent");
  }
  DirectedNetwork net;
  net.agents = agents;
  net.in_neighbors.resize(static_cast<std::size_t>(agents));
  for (const auto& [src, dst] : edges) {
    if (src < 0 || src >= agents || dst < 0 || dst >= agents) {
      throw Error(ErrorCode::kInvalidConfig,
                  "edge (" + std::to_string(src) + ", " + std::to_string(dst) +
                      ") out of range for " + std::to_string(agents) + " agents");
    }
    if (src == dst) continue;
    net.in_neighbors[static_cast<std::size_t>(dst)].push_back(src);
  }
  for (auto& list : net.in_neighbors) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return net;
}

std::size_t DirectedNetwork::edge_count() const {
  std::size_t count = 0;
  for (const auto& list : in_neighbors) count += list.size();
  return count;
}

DirectedNetwork read_edge_list(std::istream& in) {
  std::vector<std::pair<int, int>> edges;
  int max_index = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long src = 0;
    long dst = 0;
    if (!(fields >> src)) continue;  // blank or comment-only
    std::string rest;
    if (!(fields >> dst) || (fields >> rest) || src < 1 || dst < 1) {
      throw Error(ErrorCode::kFileFormatError,
                  "edge list line " + std::to_string(line_no) + ": expected `src dst` (1-based)");
    }
    edges.emplace_back(static_cast<int>(src - 1), static_cast<int>(dst - 1));
    max_index = std::max({max_index, static_cast<int>(src), static_cast<int>(dst)});
  }
  if (edges.empty()) throw Error(ErrorCode::kFileFormatError, "edge list has no edges");
  return DirectedNetwork::from_edges(max_index, edges);
}

DirectedNetwork load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileFormatError, "cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const DirectedNetwork& net) {
  out << "# " << net.agents << " agents, " << net.edge_count() << " edges\n";
  for (int dst = 0; dst < net.agents; ++dst) {
    for (int src : net.in_neighbors[static_cast<std::size_t>(dst)]) {
      out << (src + 1) << ' ' << (dst + 1) << '\n';
    }
  }
}

DirectedNetwork directed_ring(int agents) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < agents; ++i) edges.emplace_back(i, (i + 1) % agents);
  return DirectedNetwork::from_edges(agents, edges);
}

DirectedNetwork random_unbalanced_network(int agents, double density, std::uint64_t seed) {
  if (density < 0.0 || density > 1.0) {
    throw Error(ErrorCode::kInvalidConfig, "density must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < agents; ++i) edges.emplace_back(i, (i + 1) % agents);
  for (int src = 0; src < agents; ++src) {
    for (int dst = 0; dst < agents; ++dst) {
      if (src == dst || dst == (src + 1) % agents) continue;
      if (coin(rng)) edges.emplace_back(src, dst);
    }
  }
  return DirectedNetwork::from_edges(agents, edges);
}

namespace {

// Agents reachable from agent 0 following edges forward (reverse = false) or
// backward (reverse = true).
std::vector<bool> reachable_from_first(const DirectedNetwork& net, bool reverse) {
  const auto m = static_cast<std::size_t>(net.agents);
  std::vector<std::vector<int>> adjacency(m);
  for (std::size_t dst = 0; dst < m; ++dst) {
    for (int src : net.in_neighbors[dst]) {
      if (reverse) {
        adjacency[dst].push_back(src);
      } else {
        adjacency[static_cast<std::size_t>(src)].push_back(static_cast<int>(dst));
      }
    }
  }
  std::vector<bool> seen(m, false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    for (int next : adjacency[static_cast<std::size_t>(node)]) {
      if (!seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = true;
        stack.push_back(next);
      }
    }
  }
  return seen;
}

}  // namespace

bool check_strong_connectivity(const DirectedNetwork& net) {
  if (net.agents <= 0) return false;
  auto all = [](const std::vector<bool>& v) {
    return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
  };
  return all(reachable_from_first(net, false)) && all(reachable_from_first(net, true));
}

WeightMatrix::WeightMatrix(Matrix a) : dense_(std::move(a)) {
  rows_.resize(static_cast<std::size_t>(dense_.rows()));
  for (Eigen::Index i = 0; i < dense_.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense_.cols(); ++j) {
      if (dense_(i, j) > 0.0) {
        rows_[static_cast<std::size_t>(i)].push_back({static_cast<int>(j), dense_(i, j)});
      }
    }
  }
}

WeightMatrix WeightMatrix::from_dense(Matrix a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "weight matrix must be square and non-empty");
  }
  if (!a.allFinite() || (a.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidConfig, "weight matrix must be finite and non-negative");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (std::abs(a.row(i).sum() - 1.0) > 1e-12) {
      throw Error(ErrorCode::kInvalidConfig,
                  "row " + std::to_string(i) + " of the weight matrix does not sum to 1");
    }
  }
  return WeightMatrix(std::move(a));
}

WeightMatrix build_uniform_weights(const DirectedNetwork& net) {
  const int m = net.agents;
  Matrix a = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const auto& in = net.in_neighbors[static_cast<std::size_t>(i)];
    const double w = 1.0 / static_cast<double>(in.size() + 1);
    a(i, i) = w;
    for (int j : in) a(i, j) = w;
  }
  return WeightMatrix::from_dense(std::move(a));
}

bool is_primitive(const WeightMatrix& a) {
  const int m = a.agents();
  using Pattern = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  Pattern base = (a.dense().array() > 0.0).cast<int>().matrix();
  auto boolean_product = [](const Pattern& x, const Pattern& y) -> Pattern {
    Pattern p = x * y;
    return (p.array() > 0).cast<int>().matrix();
  };
  // Wielandt: a primitive m x m pattern is positive at power (m-1)^2 + 1.
  long exponent = static_cast<long>(m - 1) * (m - 1) + 1;
  Pattern result = Pattern::Identity(m, m);
  Pattern square = base;
  while (exponent > 0) {
    if (exponent & 1L) result = boolean_product(result, square);
    exponent >>= 1;
    if (exponent > 0) square = boolean_product(square, square);
  }
  return (result.array() > 0).all();
}

Vector perron_vector(const WeightMatrix& a) {
  const int m = a.agents();
  if (!is_primitive(a)) {
    throw Error(ErrorCode::kNotPrimitive, "weight matrix is not primitive");
  }
  const double log_m = m > 1 ? std::log(static_cast<double>(m)) : 0.0;
  const auto budget = static_cast<long>(100.0 * m * log_m) + 10000;
  const Matrix at = a.dense().transpose();
  Vector pi = Vector::Constant(m, 1.0 / m);
  for (long iter = 0; iter < budget; ++iter) {
    Vector next = at * pi;
    next /= next.sum();
    const double change = (next - pi).lpNorm<1>();
    pi = std::move(next);
    if (change < 1e-12) return pi;
  }
  throw Error(ErrorCode::kNotPrimitive, "power iteration for the Perron vector did not converge");
}

Matrix matrix_power(const Matrix& a, int power) {
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix square = a;
  while (power > 0) {
    if (power & 1) result = result * square;
    power >>= 1;
    if (power > 0) square = square * square;
  }
  return result;
}

SpectralInfo compute_spectral_info(const WeightMatrix& a, int inner_loops) {
  if (inner_loops < 1) throw Error(ErrorCode::kInvalidConfig, "H must be >= 1");
  const int m = a.agents();
  SpectralInfo info;
  info.inner_loops = inner_loops;
  info.pi = perron_vector(a);
  info.pi_max = info.pi.maxCoeff();
  info.pi_min = info.pi.minCoeff();
  info.vartheta = info.pi_max / info.pi_min;

  const Matrix limit = Vector::Ones(m) * info.pi.transpose();
  info.sigma = pi_induced_norm(a.dense() - limit, info.pi);

  const Matrix step = matrix_power(a.dense(), inner_loops);
  info.p1 = spectral_norm(Matrix::Identity(m, m) - step);

  // Suprema over k of the y_k = A^{kH} iterates; the limit 1 pi^T is included
  // because the sequence approaches it without necessarily reaching it.
  info.Y = 1.0 / info.pi_min;
  info.Yhat = spectral_norm(limit);
  Matrix power = Matrix::Identity(m, m);
  constexpr int kMaxSteps = 1000000;
  for (int k = 0; k < kMaxSteps; ++k) {
    info.Y = std::max(info.Y, 1.0 / power.diagonal().minCoeff());
    info.Yhat = std::max(info.Yhat, spectral_norm(power));
    if (spectral_norm(power - limit) < 1e-12) break;
    power = power * step;
  }
  return info;
}

double pi_weighted_norm(const Vector& x, const Vector& pi) {
  if (x.size() != pi.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "vector and Perron vector differ in length");
  }
  return std::sqrt((pi.array() * x.array().square()).sum());
}

double pi_weighted_norm(const Matrix& x, const Vector& pi) {
  if (x.rows() != pi.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "stacked rows and Perron vector differ in length");
  }
  return std::sqrt((pi.array() * x.rowwise().squaredNorm().array()).sum());
}

double pi_induced_norm(const Matrix& x, const Vector& pi) {
  if (x.rows() != pi.size() || x.cols() != pi.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix and Perron vector differ in size");
  }
  const Vector root = pi.array().sqrt();
  const Matrix similar = root.asDiagonal() * x * root.cwiseInverse().asDiagonal();
  return spectral_norm(similar);
}

}  // namespace adbb
