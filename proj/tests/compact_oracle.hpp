#pragma once

// Dense stacked-matrix evaluation of the ADBB recursion:
//   X+ = A^H (X - diag(alpha) Z)
//   Y+ = A^H Y
//   Z+ = A^H (Z + diag(Y+)^-1 grad F(X+) - diag(Y)^-1 grad F(X))
// followed by the clamped per-agent BB1 step. Shares no code with the
// message-passing implementation apart from the objective gradients.

#include <algorithm>
#include <span>
#include <vector>

#include "adbb/objective.hpp"
#include "test_support.hpp"

namespace adbb::testing {

struct CompactState {
  Matrix X, Y, Z, G;
  Vector alpha;
};

inline Matrix stacked_gradient(std::span<const LocalObjective> objs, const Matrix& X) {
  Matrix G(X.rows(), X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    G.row(i) = eval_gradient(objs[static_cast<std::size_t>(i)], X.row(i).transpose()).transpose();
  }
  return G;
}

inline CompactState compact_init(std::span<const LocalObjective> objs, int n, double alpha0) {
  const auto m = static_cast<Eigen::Index>(objs.size());
  CompactState s;
  s.X = Matrix::Zero(m, n);
  s.Y = Matrix::Identity(m, m);
  s.G = stacked_gradient(objs, s.X);
  s.Z = s.G;
  s.alpha = Vector::Constant(m, alpha0);
  return s;
}

inline CompactState compact_step(const CompactState& s, const Matrix& AH,
                                 std::span<const LocalObjective> objs, double mu, double L,
                                 double eps = 1e-14) {
  const Eigen::Index m = s.X.rows();
  CompactState t;
  t.X = AH * (s.X - s.alpha.asDiagonal() * s.Z);
  t.Y = AH * s.Y;
  t.G = stacked_gradient(objs, t.X);
  const Vector inv_new = t.Y.diagonal().cwiseInverse();
  const Vector inv_old = s.Y.diagonal().cwiseInverse();
  t.Z = AH * (s.Z + inv_new.asDiagonal() * t.G - inv_old.asDiagonal() * s.G);
  t.alpha.resize(m);
  const double md = static_cast<double>(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vector sv = (t.X.row(i) - s.X.row(i)).transpose();
    const Vector vv = (t.G.row(i) - s.G.row(i)).transpose();
    const double ss = sv.squaredNorm();
    const double sTv = sv.dot(vv);
    double a = s.alpha(i);
    if (ss > 0.0 && sTv > eps * ss) a = ss / sTv / md;
    t.alpha(i) = std::clamp(a, 1.0 / (md * L), 1.0 / (md * mu));
  }
  return t;
}

}  // namespace adbb::testing
