#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace mxclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Symmetric positive definite matrix. Validates symmetry and positive
/// definiteness on construction and keeps the Cholesky factor around,
/// since every consumer needs it for solves and log-determinants.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix m);

  static SpdMatrix identity(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }

  /// Lower Cholesky factor L with L L^T = mat().
  const Matrix& chol() const { return chol_; }

  double log_det() const { return log_det_; }

  /// A^{-1} b via two triangular solves.
  Matrix solve(const Matrix& rhs) const;
  Matrix inverse() const;

  /// x^T A^{-1} x for a conforming square/rectangular x is not well defined;
  /// this is the scalar form for a single vector.
  double inv_quad_form(const Vector& x) const;

 private:
  Matrix mat_;
  Matrix chol_;
  double log_det_;
};

/// Cholesky with an explicit positive-pivot threshold. Throws
/// std::runtime_error if the matrix is not (numerically) positive definite.
Matrix cholesky_lower(const Matrix& a);

}  // namespace mxclust
