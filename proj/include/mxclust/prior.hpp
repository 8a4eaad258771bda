#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mxclust/types.hpp"

namespace mxclust {

/// Fixed prior constants of the mixture model. The cluster-mean prior is
/// matrix normal (mean0, row_cov0, col_cov0); the shared covariances get
/// inverse-Wishart priors with degrees of freedom 2*alpha / 2*psi and scale
/// matrices beta_scale / rho_scale.
struct Hyperparams {
  double gamma;          // Dirichlet concentration of the mixture weights
  double tau;            // rate of the truncated-Poisson prior on K
  Matrix mean0;          // p x q prior mean of cluster means
  SpdMatrix row_cov0;    // p x p prior row covariance of cluster means
  SpdMatrix col_cov0;    // q x q prior column covariance of cluster means
  double alpha;          // row-covariance prior df is 2*alpha
  SpdMatrix beta_scale;  // p x p row-covariance prior scale (the full 2*beta)
  double psi;            // column-covariance prior df is 2*psi
  SpdMatrix rho_scale;   // q x q column-covariance prior scale (the full 2*rho)

  int p() const { return static_cast<int>(mean0.rows()); }
  int q() const { return static_cast<int>(mean0.cols()); }

  /// Throws std::invalid_argument if any invariant is violated
  /// (gamma, tau > 0; 2*alpha > p-1; 2*psi > q-1; consistent dimensions).
  void validate() const;
};

/// Data-driven default hyperparameters: diffuse inverse-Wishart priors with
/// df (p+1) / (q+1) and identity scales, gamma = 3, tau = 1, prior mean at
/// the element-wise data midpoint, and diagonal mean covariances from half
/// the per-row / per-column data ranges. Degenerate (constant) rows or
/// columns are floored at 1e-6 of the global range with a warning on
/// stderr; an entirely constant dataset is an error.
Hyperparams default_hyperparams(const std::vector<Matrix>& data);

/// Log p.m.f. of a Poisson(tau) truncated to {1, 2, ...}.
double log_pk(int k, double tau);

/// Coefficients of the exchangeable partition distribution induced by the
/// mixture-of-finite-mixtures prior: for each t, the series
/// sum_k k_(t) / (gamma k)^(n) * p_K(k), stored in log space for
/// t = 1..n+1. Immutable after construction.
class PartitionCoefficients {
 public:
  PartitionCoefficients(int n, double gamma, double tau,
                        std::vector<double> log_coef);

  int n() const { return n_; }
  double gamma() const { return gamma_; }
  double tau() const { return tau_; }

  /// log V_n(t) for t in 1..n+1.
  double log_coef(int t) const;

 private:
  int n_;
  double gamma_;
  double tau_;
  std::vector<double> log_coef_;
};

/// Build the coefficient table by streaming log-sum-exp over the series,
/// stopping once the bounded relative tail drops below 1e-12. Throws if the
/// term cap is hit with a non-negligible tail.
PartitionCoefficients build_vn_table(int n, double gamma, double tau,
                                     int max_terms = 10000);

/// Plain-text key-value serialization; every field round-trips.
void save_hyperparams(const Hyperparams& hyper, std::ostream& out);
Hyperparams load_hyperparams(std::istream& in);

/// Apply a single "key=value" override (the same keys the config file
/// uses); matrix values are given as "rows cols v11 v12 ...".
void apply_hyperparam_override(Hyperparams& hyper, const std::string& spec);

}  // namespace mxclust
