#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "adbb/linalg.hpp"

namespace adbb {

/// Directed communication graph. Agents are 0-based internally; the edge-list
/// file format is 1-based. `in_neighbors[i]` lists the agents that transmit to
/// agent i, sorted, without i itself (the self-loop is implied).
struct DirectedNetwork {
  int agents = 0;
  std::vector<std::vector<int>> in_neighbors;

  /// Builds from 0-based (src, dst) pairs; src transmits to dst. Self-loops
  /// and duplicates are dropped. Throws kInvalidConfig on out-of-range ids.
  static DirectedNetwork from_edges(int agents, std::span<const std::pair<int, int>> edges);

  std::size_t edge_count() const;
};

/// Reads the edge-list format: one `src dst` pair per line, 1-based, `#` starts
/// a comment. The agent count is the largest index seen.
DirectedNetwork read_edge_list(std::istream& in);
DirectedNetwork load_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const DirectedNetwork& net);

/// Directed cycle 1 -> 2 -> ... -> m -> 1.
DirectedNetwork directed_ring(int agents);

/// A directed ring plus each remaining ordered pair with probability `density`.
/// Always strongly connected; in-degrees differ so the graph is unbalanced.
DirectedNetwork random_unbalanced_network(int agents, double density, std::uint64_t seed);

bool check_strong_connectivity(const DirectedNetwork& net);

/// Row-stochastic mixing matrix. Besides the dense form it keeps, for every
/// agent, the (neighbor, weight) pairs of its row: the only values an agent is
/// allowed to read during a consensus round.
class WeightMatrix {
 public:
  struct Link {
    int from;
    double weight;
  };

  /// Validates non-negativity and unit row sums (1e-12).
  static WeightMatrix from_dense(Matrix a);

  int agents() const { return static_cast<int>(dense_.rows()); }
  const Matrix& dense() const { return dense_; }
  std::span<const Link> row(int agent) const { return rows_[static_cast<std::size_t>(agent)]; }

 private:
  explicit WeightMatrix(Matrix a);

  Matrix dense_;
  std::vector<std::vector<Link>> rows_;
};

/// a_ij = 1 / (|N_i^in| + 1) for j in N_i^in and j = i.
WeightMatrix build_uniform_weights(const DirectedNetwork& net);

/// Wielandt test on the sparsity pattern: A^((m-1)^2+1) > 0 entrywise.
bool is_primitive(const WeightMatrix& a);

struct SpectralInfo {
  int inner_loops = 1;  // the H the H-dependent constants below refer to
  Vector pi;            // left Perron vector, sums to one
  double sigma = 0.0;   // ||A - 1 pi^T||_pi
  double pi_max = 0.0;
  double pi_min = 0.0;
  double vartheta = 1.0;  // pi_max / pi_min
  double Y = 1.0;         // sup_k max_i 1 / [A^{kH}]_ii
  double Yhat = 1.0;      // sup_k ||A^{kH}||_2
  double p1 = 0.0;        // ||I - A^H||_2
};

/// Left Perron vector by power iteration on A^T from the uniform vector.
/// Throws kNotPrimitive when A is not primitive or iteration does not settle.
Vector perron_vector(const WeightMatrix& a);

SpectralInfo compute_spectral_info(const WeightMatrix& a, int inner_loops);

/// sqrt(sum_i pi_i x_i^2).
double pi_weighted_norm(const Vector& x, const Vector& pi);

/// Stacked form: row i of `x` is agent i's block, weighted by pi_i.
double pi_weighted_norm(const Matrix& x, const Vector& pi);

/// ||diag(sqrt(pi)) X diag(sqrt(pi))^-1||_2.
double pi_induced_norm(const Matrix& x, const Vector& pi);

/// A^power by repeated squaring.
Matrix matrix_power(const Matrix& a, int power);

}  // namespace adbb
