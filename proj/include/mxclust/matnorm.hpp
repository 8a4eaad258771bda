#pragma once

#include <utility>

#include "mxclust/types.hpp"

namespace mxclust {

/// Parameters of a matrix normal distribution on p x q matrices: mean M,
/// row covariance U (p x p) and column covariance V (q x q). Equivalent to
/// vec(Y) ~ N(vec(M), V \otimes U).
struct MatrixNormalParams {
  Matrix mean;
  SpdMatrix row_cov;
  SpdMatrix col_cov;

  MatrixNormalParams(Matrix m, SpdMatrix u, SpdMatrix v);

  int rows() const { return static_cast<int>(mean.rows()); }
  int cols() const { return static_cast<int>(mean.cols()); }
};

/// Log density of the matrix normal distribution, computed through the
/// Cholesky factors of the two covariances.
double log_density_matnorm(const Matrix& y, const MatrixNormalParams& params);

/// Draw from the matrix normal as M + L_u Z L_v^T with Z i.i.d. standard
/// normal, so vec(draw) has covariance V \otimes U.
Matrix sample_matnorm(const MatrixNormalParams& params, Rng& rng);

/// Kronecker product; block (i,j) of the result is a(i,j) * b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Column-stacking vectorization.
Vector vec(const Matrix& y);

/// Inverse of vec: reshape a length rows*cols vector back to a matrix.
Matrix unvec(const Vector& v, int rows, int cols);

/// Wishart draw via the Bartlett decomposition; E[draw] = df * scale.
/// Requires df > dim - 1.
SpdMatrix sample_wishart(double df, const SpdMatrix& scale, Rng& rng);

/// Inverse-Wishart draw with density proportional to
/// |S|^{-(df+d+1)/2} exp(-tr(scale S^{-1})/2); the inverse of a
/// Wishart(df, scale^{-1}) draw. E[draw] = scale / (df - dim - 1) when
/// df > dim + 1.
SpdMatrix sample_inv_wishart(double df, const SpdMatrix& scale, Rng& rng);

/// Log density of the inverse-Wishart distribution parameterized as in
/// sample_inv_wishart (density proportional to
/// |X|^{-(df+d+1)/2} exp(-tr(scale X^{-1})/2)).
double log_density_inv_wishart(const SpdMatrix& x, double df,
                               const SpdMatrix& scale);

/// AR(1) covariance: entry (i,j) = sigma2 * rho^|i-j|. Requires |rho| < 1.
SpdMatrix ar1_cov(int dim, double rho, double sigma2);

/// Rescale a covariance matrix to a correlation matrix.
SpdMatrix cov_to_corr(const SpdMatrix& s);

/// Rescale (U, V) so that tr(V) = q while leaving kron(V, U) unchanged.
std::pair<SpdMatrix, SpdMatrix> normalize_trace(const SpdMatrix& row_cov,
                                                const SpdMatrix& col_cov);

/// Fill helper: standard normal draws, one shared distribution per call so
/// results are reproducible from the rng state alone.
Matrix standard_normal_matrix(int rows, int cols, Rng& rng);

}  // namespace mxclust
