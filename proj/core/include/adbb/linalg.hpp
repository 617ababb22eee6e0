#pragma once

#include <Eigen/Dense>

namespace adbb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Spectral norm (largest singular value).
double spectral_norm(const Matrix& a);

bool all_finite(const Vector& v);

}  // namespace adbb
