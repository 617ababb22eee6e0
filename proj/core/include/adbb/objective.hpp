#pragma once

#include <span>
#include <variant>
#include <vector>

#include "adbb/linalg.hpp"

namespace adbb {

/// f_i(w) = (1/q) sum_j log(1 + exp(-b_j c_j^T w)) + beta / (2m) ||w||^2
///
/// Rows of `samples` are the c_j, `labels` holds b_j in {+1, -1}, and `agents`
/// is the m of the regularizer.
class LogisticObjective {
 public:
  LogisticObjective(Matrix samples, Vector labels, double beta, int agents);

  const Matrix& samples() const { return samples_; }
  const Vector& labels() const { return labels_; }
  double beta() const { return beta_; }
  int agents() const { return agents_; }
  int dimension() const { return static_cast<int>(samples_.cols()); }
  int sample_count() const { return static_cast<int>(samples_.rows()); }

 private:
  Matrix samples_;
  Vector labels_;
  double beta_;
  int agents_;
};

/// f_i(w) = (kappa / 2) ||w - b||^2, so mu = L = kappa and the minimizer is b.
class QuadraticObjective {
 public:
  QuadraticObjective(Vector target, double curvature);

  const Vector& target() const { return target_; }
  double curvature() const { return curvature_; }
  int dimension() const { return static_cast<int>(target_.size()); }

 private:
  Vector target_;
  double curvature_;
};

using LocalObjective = std::variant<LogisticObjective, QuadraticObjective>;

/// Strong convexity and gradient Lipschitz constants, 0 < mu <= L.
struct ObjectiveInfo {
  double mu = 1.0;
  double L = 1.0;
};

int dimension(const LocalObjective& obj);
double eval_value(const LocalObjective& obj, const Vector& w);

/// Throws kNonFiniteInput for non-finite w and kDimensionMismatch for wrong size.
Vector eval_gradient(const LocalObjective& obj, const Vector& w);

/// Logistic: mu = beta/m, L = lambda_max(C^T C) / (4q) + beta/m.
/// Quadratic: mu = L = kappa. Throws kNotStronglyConvex for logistic beta = 0.
ObjectiveInfo estimate_constants(const LocalObjective& obj);

/// Constants valid for every local objective at once (min mu, max L); these
/// are the uniform mu and L_f the step-size bounds are stated with.
ObjectiveInfo uniform_constants(std::span<const LocalObjective> objectives);

/// Gradient of f = (1/m) sum_i f_i.
Vector global_gradient(std::span<const LocalObjective> objectives, const Vector& w);
double global_value(std::span<const LocalObjective> objectives, const Vector& w);

struct CentralizedOptions {
  double tolerance = 1e-12;
  int max_iters = 200000;
};

/// Minimizer of (1/m) sum_i f_i, returned once ||grad f|| <= tolerance.
/// Gradient descent started at 0 with BB step lengths inside [1/L, 1/mu] and a
/// non-monotone Armijo safeguard. Throws kBudgetExceeded.
Vector solve_centralized(std::span<const LocalObjective> objectives,
                         const CentralizedOptions& options = {});

}  // namespace adbb
