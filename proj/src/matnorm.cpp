#include "mxclust/matnorm.hpp"

#include <cmath>

namespace mxclust {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

MatrixNormalParams::MatrixNormalParams(Matrix m, SpdMatrix u, SpdMatrix v)
    : mean(std::move(m)), row_cov(std::move(u)), col_cov(std::move(v)) {
  if (mean.rows() != row_cov.dim() || mean.cols() != col_cov.dim()) {
    throw std::invalid_argument(
        "MatrixNormalParams: mean dimensions do not match the covariances");
  }
  if (!mean.allFinite()) {
    throw std::invalid_argument("MatrixNormalParams: mean must be finite");
  }
}

double log_density_matnorm(const Matrix& y, const MatrixNormalParams& params) {
  const int p = params.rows();
  const int q = params.cols();
  if (y.rows() != p || y.cols() != q) {
    throw std::invalid_argument("log_density_matnorm: dimension mismatch");
  }
  // tr[V^{-1} E^T U^{-1} E] = ||L_v^{-1} (L_u^{-1} E)^T||_F^2
  Matrix e = y - params.mean;
  Matrix a = params.row_cov.chol().triangularView<Eigen::Lower>().solve(e);
  Matrix b =
      params.col_cov.chol().triangularView<Eigen::Lower>().solve(a.transpose());
  const double qform = b.squaredNorm();
  return -0.5 * (qform + p * q * kLog2Pi + p * params.col_cov.log_det() +
                 q * params.row_cov.log_det());
}

Matrix standard_normal_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      z(i, j) = normal(rng);
    }
  }
  return z;
}

Matrix sample_matnorm(const MatrixNormalParams& params, Rng& rng) {
  Matrix z = standard_normal_matrix(params.rows(), params.cols(), rng);
  return params.mean + params.row_cov.chol() * z * params.col_cov.chol().transpose();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector vec(const Matrix& y) {
  return Eigen::Map<const Vector>(y.data(), y.size());
}

Matrix unvec(const Vector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

SpdMatrix sample_wishart(double df, const SpdMatrix& scale, Rng& rng) {
  const int d = scale.dim();
  if (!(df > d - 1)) {
    throw std::invalid_argument("sample_wishart: df must exceed dim - 1");
  }
  // Bartlett: A lower triangular, A(i,i) = sqrt(chi2(df - i)), A(i,j) ~ N(0,1).
  Matrix a = Matrix::Zero(d, d);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < d; ++i) {
    std::chi_squared_distribution<double> chi2(df - i);
    a(i, i) = std::sqrt(chi2(rng));
    for (int j = 0; j < i; ++j) {
      a(i, j) = normal(rng);
    }
  }
  Matrix f = scale.chol() * a;
  Matrix w = f * f.transpose();
  return SpdMatrix((w + w.transpose()) / 2.0);
}

SpdMatrix sample_inv_wishart(double df, const SpdMatrix& scale, Rng& rng) {
  const int d = scale.dim();
  if (!(df > d - 1)) {
    throw std::invalid_argument("sample_inv_wishart: df must exceed dim - 1");
  }
  // W ~ Wishart(df, scale^{-1}) with factor C = L_s^{-T}, then return W^{-1}
  // = (L_s A^{-T}) (L_s A^{-T})^T without forming scale^{-1} explicitly.
  Matrix a = Matrix::Zero(d, d);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < d; ++i) {
    std::chi_squared_distribution<double> chi2(df - i);
    a(i, i) = std::sqrt(chi2(rng));
    for (int j = 0; j < i; ++j) {
      a(i, j) = normal(rng);
    }
  }
  Matrix t = a.triangularView<Eigen::Lower>().solve(
      Matrix(scale.chol().transpose()));
  Matrix s = t.transpose() * t;
  return SpdMatrix((s + s.transpose()) / 2.0);
}

SpdMatrix ar1_cov(int dim, double rho, double sigma2) {
  if (!(std::abs(rho) < 1.0)) {
    throw std::invalid_argument("ar1_cov: |rho| must be < 1");
  }
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("ar1_cov: sigma2 must be positive");
  }
  Matrix out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      out(i, j) = sigma2 * std::pow(rho, std::abs(i - j));
    }
  }
  return SpdMatrix(std::move(out));
}

SpdMatrix cov_to_corr(const SpdMatrix& s) {
  Vector d = s.mat().diagonal();
  if ((d.array() <= 0.0).any()) {
    throw std::invalid_argument("cov_to_corr: non-positive diagonal entry");
  }
  Vector inv_sd = d.array().sqrt().inverse();
  Matrix corr = inv_sd.asDiagonal() * s.mat() * inv_sd.asDiagonal();
  corr.diagonal().setOnes();
  return SpdMatrix((corr + corr.transpose()) / 2.0);
}

std::pair<SpdMatrix, SpdMatrix> normalize_trace(const SpdMatrix& row_cov,
                                                const SpdMatrix& col_cov) {
  const double q = static_cast<double>(col_cov.dim());
  const double c = col_cov.mat().trace() / q;
  return {SpdMatrix(row_cov.mat() * c), SpdMatrix(col_cov.mat() / c)};
}

}  // namespace mxclust
