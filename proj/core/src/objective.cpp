#include "adbb/objective.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "adbb/error.hpp"

namespace adbb {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// log(1 + exp(u)) without overflow.
double softplus(double u) {
  return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

// 1 / (1 + exp(t)) without overflow.
double logistic_tail(double t) {
  if (t >= 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

void check_argument(const Vector& w, int dim) {
  if (w.size() != dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected a vector of length " + std::to_string(dim) + ", got " +
                    std::to_string(w.size()));
  }
  if (!w.allFinite()) throw Error(ErrorCode::kNonFiniteInput, "argument has non-finite entries");
}

}  // namespace

LogisticObjective::LogisticObjective(Matrix samples, Vector labels, double beta, int agents)
    : samples_(std::move(samples)), labels_(std::move(labels)), beta_(beta), agents_(agents) {
  if (samples_.rows() < 1 || samples_.cols() < 1) {
    throw Error(ErrorCode::kInvalidConfig, "logistic objective needs q >= 1 samples and n >= 1");
  }
  if (labels_.size() != samples_.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "one label per sample row is required");
  }
  for (Eigen::Index j = 0; j < labels_.size(); ++j) {
    if (labels_(j) != 1.0 && labels_(j) != -1.0) {
      throw Error(ErrorCode::kInvalidConfig, "labels must be exactly +1 or -1");
    }
  }
  if (!(beta_ >= 0.0) || !std::isfinite(beta_)) {
    throw Error(ErrorCode::kInvalidConfig, "beta must be finite and non-negative");
  }
  if (agents_ < 1) throw Error(ErrorCode::kInvalidConfig, "agent count must be positive");
  if (!samples_.allFinite()) throw Error(ErrorCode::kNonFiniteInput, "samples must be finite");
}

QuadraticObjective::QuadraticObjective(Vector target, double curvature)
    : target_(std::move(target)), curvature_(curvature) {
  if (target_.size() < 1) throw Error(ErrorCode::kInvalidConfig, "target must be non-empty");
  if (!(curvature_ > 0.0) || !std::isfinite(curvature_)) {
    throw Error(ErrorCode::kInvalidConfig, "curvature must be positive");
  }
}

int dimension(const LocalObjective& obj) {
  return std::visit([](const auto& f) { return f.dimension(); }, obj);
}

double eval_value(const LocalObjective& obj, const Vector& w) {
  check_argument(w, dimension(obj));
  return std::visit(
      Overloaded{
          [&](const LogisticObjective& f) {
            const Vector margins = f.labels().cwiseProduct(f.samples() * w);
            double loss = 0.0;
            for (Eigen::Index j = 0; j < margins.size(); ++j) loss += softplus(-margins(j));
            return loss / f.sample_count() + f.beta() / (2.0 * f.agents()) * w.squaredNorm();
          },
          [&](const QuadraticObjective& f) {
            return 0.5 * f.curvature() * (w - f.target()).squaredNorm();
          },
      },
      obj);
}

Vector eval_gradient(const LocalObjective& obj, const Vector& w) {
  check_argument(w, dimension(obj));
  return std::visit(
      Overloaded{
          [&](const LogisticObjective& f) -> Vector {
            const Vector margins = f.labels().cwiseProduct(f.samples() * w);
            Vector weights(margins.size());
            for (Eigen::Index j = 0; j < margins.size(); ++j) {
              weights(j) = -f.labels()(j) * logistic_tail(margins(j));
            }
            return f.samples().transpose() * weights / f.sample_count() +
                   (f.beta() / f.agents()) * w;
          },
          [&](const QuadraticObjective& f) -> Vector {
            return f.curvature() * (w - f.target());
          },
      },
      obj);
}

ObjectiveInfo estimate_constants(const LocalObjective& obj) {
  return std::visit(
      Overloaded{
          [](const LogisticObjective& f) {
            if (f.beta() <= 0.0) {
              throw Error(ErrorCode::kNotStronglyConvex,
                          "logistic objective needs beta > 0 to be strongly convex");
            }
            const Matrix gram = f.samples().transpose() * f.samples();
            Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
            const double lambda_max = std::max(0.0, eig.eigenvalues().maxCoeff());
            const double reg = f.beta() / f.agents();
            return ObjectiveInfo{reg, lambda_max / (4.0 * f.sample_count()) + reg};
          },
          [](const QuadraticObjective& f) {
            return ObjectiveInfo{f.curvature(), f.curvature()};
          },
      },
      obj);
}

ObjectiveInfo uniform_constants(std::span<const LocalObjective> objectives) {
  if (objectives.empty()) throw Error(ErrorCode::kInvalidConfig, "no objectives");
  ObjectiveInfo out = estimate_constants(objectives.front());
  for (const auto& obj : objectives.subspan(1)) {
    const ObjectiveInfo info = estimate_constants(obj);
    out.mu = std::min(out.mu, info.mu);
    out.L = std::max(out.L, info.L);
  }
  return out;
}

Vector global_gradient(std::span<const LocalObjective> objectives, const Vector& w) {
  Vector g = Vector::Zero(w.size());
  for (const auto& obj : objectives) g += eval_gradient(obj, w);
  return g / static_cast<double>(objectives.size());
}

double global_value(std::span<const LocalObjective> objectives, const Vector& w) {
  double v = 0.0;
  for (const auto& obj : objectives) v += eval_value(obj, w);
  return v / static_cast<double>(objectives.size());
}

Vector solve_centralized(std::span<const LocalObjective> objectives,
                         const CentralizedOptions& options) {
  if (objectives.empty()) throw Error(ErrorCode::kInvalidConfig, "no objectives");
  const int n = dimension(objectives.front());
  for (const auto& obj : objectives) {
    if (dimension(obj) != n) {
      throw Error(ErrorCode::kDimensionMismatch, "local objectives differ in dimension");
    }
  }
  const ObjectiveInfo info = uniform_constants(objectives);
  const double step_min = 1.0 / info.L;
  const double step_max = 1.0 / info.mu;

  constexpr std::size_t kMemory = 10;
  constexpr double kArmijo = 1e-4;

  Vector x = Vector::Zero(n);
  Vector g = global_gradient(objectives, x);
  double fx = global_value(objectives, x);
  std::deque<double> history{fx};
  double step = step_min;

  for (int iter = 0; iter < options.max_iters; ++iter) {
    if (g.norm() <= options.tolerance) return x;
    const double reference = *std::max_element(history.begin(), history.end());
    const double slope = -g.squaredNorm();
    // Round-off slack: near the optimum f changes by far less than its ulp.
    const double slack = 1e-15 * std::abs(reference);
    double trial = step;
    Vector x_next = x - trial * g;
    double f_next = global_value(objectives, x_next);
    for (int halving = 0; halving < 60 && f_next > reference + kArmijo * trial * slope + slack;
         ++halving) {
      trial *= 0.5;
      x_next = x - trial * g;
      f_next = global_value(objectives, x_next);
    }
    const Vector g_next = global_gradient(objectives, x_next);
    const Vector s = x_next - x;
    const Vector v = g_next - g;
    const double sv = s.dot(v);
    step = sv > 0.0 ? std::clamp(s.squaredNorm() / sv, step_min, step_max) : step_min;

    x = x_next;
    g = g_next;
    fx = f_next;
    history.push_back(fx);
    if (history.size() > kMemory) history.pop_front();
  }
  if (g.norm() <= options.tolerance) return x;
  throw Error(ErrorCode::kBudgetExceeded,
              "centralized solver stopped at gradient norm " + std::to_string(g.norm()));
}

}  // namespace adbb
