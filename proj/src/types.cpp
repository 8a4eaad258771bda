#include "mxclust/types.hpp"

#include <cmath>
#include <sstream>

namespace mxclust {

namespace {

// Relative symmetry tolerance for SpdMatrix validation.
constexpr double kSymTol = 1e-10;
// A Cholesky pivot below this fraction of the largest diagonal entry is
// treated as a failure. No jittering happens at this layer.
constexpr double kPivotTol = 1e-12;

}  // namespace

Matrix cholesky_lower(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("cholesky: matrix is not square");
  }
  const double max_diag = std::max(a.diagonal().maxCoeff(), 1.0);
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("cholesky: matrix is not positive definite");
  }
  Matrix lower = llt.matrixL();
  const double min_pivot = lower.diagonal().minCoeff();
  if (!(min_pivot * min_pivot > kPivotTol * max_diag)) {
    std::ostringstream msg;
    msg << "cholesky: pivot " << min_pivot * min_pivot
        << " below tolerance (max diagonal " << max_diag << ")";
    throw std::runtime_error(msg.str());
  }
  return lower;
}

SpdMatrix::SpdMatrix(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
    throw std::invalid_argument("SpdMatrix: matrix must be square and nonempty");
  }
  if (!mat_.allFinite()) {
    throw std::invalid_argument("SpdMatrix: entries must be finite");
  }
  const double scale = std::max(mat_.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (mat_ - mat_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymTol * scale) {
    throw std::invalid_argument("SpdMatrix: matrix is not symmetric");
  }
  // Symmetrize exactly so downstream algebra sees a clean input.
  mat_ = ((mat_ + mat_.transpose()) / 2.0).eval();
  chol_ = cholesky_lower(mat_);
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
}

SpdMatrix SpdMatrix::identity(int dim) {
  return SpdMatrix(Matrix::Identity(dim, dim));
}

Matrix SpdMatrix::solve(const Matrix& rhs) const {
  Matrix y = chol_.triangularView<Eigen::Lower>().solve(rhs);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix SpdMatrix::inverse() const {
  return solve(Matrix::Identity(dim(), dim()));
}

double SpdMatrix::inv_quad_form(const Vector& x) const {
  Vector y = chol_.triangularView<Eigen::Lower>().solve(x);
  return y.squaredNorm();
}

}  // namespace mxclust
