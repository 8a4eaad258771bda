#include "mxclust/prior.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

namespace mxclust {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp_pair(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

Matrix parse_matrix_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  int rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw std::invalid_argument("hyperparams: bad matrix header for '" + key +
                                "'");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (!(in >> m(i, j))) {
        throw std::invalid_argument("hyperparams: too few entries for '" +
                                    key + "'");
      }
    }
  }
  return m;
}

void write_matrix_value(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols();
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << ' ' << m(i, j);
    }
  }
}

void set_hyperparam_field(Hyperparams& hyper, const std::string& key,
                          const std::string& value) {
  auto scalar = [&]() {
    std::istringstream in(value);
    double x;
    if (!(in >> x)) {
      throw std::invalid_argument("hyperparams: bad scalar for '" + key + "'");
    }
    return x;
  };
  if (key == "gamma") {
    hyper.gamma = scalar();
  } else if (key == "tau") {
    hyper.tau = scalar();
  } else if (key == "alpha") {
    hyper.alpha = scalar();
  } else if (key == "psi") {
    hyper.psi = scalar();
  } else if (key == "mean0") {
    hyper.mean0 = parse_matrix_value(value, key);
  } else if (key == "row_cov0") {
    hyper.row_cov0 = SpdMatrix(parse_matrix_value(value, key));
  } else if (key == "col_cov0") {
    hyper.col_cov0 = SpdMatrix(parse_matrix_value(value, key));
  } else if (key == "beta_scale") {
    hyper.beta_scale = SpdMatrix(parse_matrix_value(value, key));
  } else if (key == "rho_scale") {
    hyper.rho_scale = SpdMatrix(parse_matrix_value(value, key));
  } else {
    throw std::invalid_argument("hyperparams: unknown key '" + key + "'");
  }
}

}  // namespace

void Hyperparams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("hyperparams: gamma <= 0");
  if (!(tau > 0.0)) throw std::invalid_argument("hyperparams: tau <= 0");
  const int pr = p();
  const int qc = q();
  if (row_cov0.dim() != pr || beta_scale.dim() != pr) {
    throw std::invalid_argument("hyperparams: row-side dimension mismatch");
  }
  if (col_cov0.dim() != qc || rho_scale.dim() != qc) {
    throw std::invalid_argument("hyperparams: column-side dimension mismatch");
  }
  if (!(2.0 * alpha > pr - 1)) {
    throw std::invalid_argument("hyperparams: 2*alpha must exceed p - 1");
  }
  if (!(2.0 * psi > qc - 1)) {
    throw std::invalid_argument("hyperparams: 2*psi must exceed q - 1");
  }
  if (!mean0.allFinite()) {
    throw std::invalid_argument("hyperparams: mean0 must be finite");
  }
}

Hyperparams default_hyperparams(const std::vector<Matrix>& data) {
  if (data.empty()) {
    throw std::invalid_argument("default_hyperparams: empty data");
  }
  const int p = static_cast<int>(data.front().rows());
  const int q = static_cast<int>(data.front().cols());
  for (const Matrix& y : data) {
    if (y.rows() != p || y.cols() != q) {
      throw std::invalid_argument(
          "default_hyperparams: observations have inconsistent dimensions");
    }
  }

  Matrix lo = data.front();
  Matrix hi = data.front();
  for (const Matrix& y : data) {
    lo = lo.cwiseMin(y);
    hi = hi.cwiseMax(y);
  }
  const double global_range = (hi - lo).maxCoeff();
  if (!(global_range > 0.0)) {
    throw std::invalid_argument(
        "default_hyperparams: dataset is a single repeated constant matrix");
  }
  const double floor_sd = 1e-6 * global_range;

  Vector row_sd(p), col_sd(q);
  int floored = 0;
  for (int i = 0; i < p; ++i) {
    double sd = (hi.row(i).maxCoeff() - lo.row(i).minCoeff()) / 2.0;
    if (sd < floor_sd) {
      sd = floor_sd;
      ++floored;
    }
    row_sd(i) = sd;
  }
  for (int j = 0; j < q; ++j) {
    double sd = (hi.col(j).maxCoeff() - lo.col(j).minCoeff()) / 2.0;
    if (sd < floor_sd) {
      sd = floor_sd;
      ++floored;
    }
    col_sd(j) = sd;
  }
  if (floored > 0) {
    std::cerr << "warning: " << floored
              << " degenerate data range(s); prior scale floored at "
              << floor_sd << "\n";
  }

  Hyperparams hyper{
      /*gamma=*/3.0,
      /*tau=*/1.0,
      /*mean0=*/(lo + hi) / 2.0,
      /*row_cov0=*/SpdMatrix(Matrix(row_sd.array().square().matrix().asDiagonal())),
      /*col_cov0=*/SpdMatrix(Matrix(col_sd.array().square().matrix().asDiagonal())),
      /*alpha=*/(p + 1) / 2.0,
      /*beta_scale=*/SpdMatrix::identity(p),
      /*psi=*/(q + 1) / 2.0,
      /*rho_scale=*/SpdMatrix::identity(q)};
  hyper.validate();
  return hyper;
}

double log_pk(int k, double tau) {
  if (k < 1) {
    throw std::invalid_argument("log_pk: k must be >= 1");
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("log_pk: tau must be positive");
  }
  return k * std::log(tau) - tau - std::lgamma(k + 1.0) -
         std::log1p(-std::exp(-tau));
}

PartitionCoefficients::PartitionCoefficients(int n, double gamma, double tau,
                                             std::vector<double> log_coef)
    : n_(n), gamma_(gamma), tau_(tau), log_coef_(std::move(log_coef)) {
  if (log_coef_.size() != static_cast<size_t>(n_) + 1) {
    throw std::invalid_argument(
        "PartitionCoefficients: table must have n + 1 entries");
  }
  for (double v : log_coef_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(
          "PartitionCoefficients: non-finite table entry");
    }
  }
}

double PartitionCoefficients::log_coef(int t) const {
  if (t < 1 || t > n_ + 1) {
    throw std::out_of_range("PartitionCoefficients: t out of range");
  }
  return log_coef_[static_cast<size_t>(t) - 1];
}

PartitionCoefficients build_vn_table(int n, double gamma, double tau,
                                     int max_terms) {
  if (n < 1) throw std::invalid_argument("build_vn_table: n must be >= 1");
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("build_vn_table: gamma must be positive");
  }
  constexpr double kLogRelTol = -27.631021115928547;  // log(1e-12)

  std::vector<double> table(static_cast<size_t>(n) + 1);
  for (int t = 1; t <= n + 1; ++t) {
    double logsum = kNegInf;
    bool converged = false;
    for (int k = t; k < t + max_terms; ++k) {
      // log k_(t) - log (gamma k)^(n) + log p_K(k), all rising factorials
      // expressed through lgamma.
      const double log_falling = std::lgamma(k + 1.0) - std::lgamma(k - t + 1.0);
      const double log_rising =
          std::lgamma(gamma * k + n) - std::lgamma(gamma * k);
      const double log_term = log_falling - log_rising + log_pk(k, tau);
      logsum = log_sum_exp_pair(logsum, log_term);
      // Successive term ratios beyond k are bounded by tau / (k + 1 - t), so
      // the remaining tail is at most term * r / (1 - r).
      const double r = tau / (k + 1.0 - t);
      if (r < 1.0 &&
          log_term + std::log(r / (1.0 - r)) < logsum + kLogRelTol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "build_vn_table: series cap reached with non-negligible tail at "
             "t="
          << t << " (n=" << n << ", gamma=" << gamma << ", tau=" << tau << ")";
      throw std::runtime_error(msg.str());
    }
    table[static_cast<size_t>(t) - 1] = logsum;
  }
  return PartitionCoefficients(n, gamma, tau, std::move(table));
}

void save_hyperparams(const Hyperparams& hyper, std::ostream& out) {
  out << std::setprecision(17);
  out << "gamma = " << hyper.gamma << "\n";
  out << "tau = " << hyper.tau << "\n";
  out << "alpha = " << hyper.alpha << "\n";
  out << "psi = " << hyper.psi << "\n";
  out << "mean0 = ";
  write_matrix_value(out, hyper.mean0);
  out << "\nrow_cov0 = ";
  write_matrix_value(out, hyper.row_cov0.mat());
  out << "\ncol_cov0 = ";
  write_matrix_value(out, hyper.col_cov0.mat());
  out << "\nbeta_scale = ";
  write_matrix_value(out, hyper.beta_scale.mat());
  out << "\nrho_scale = ";
  write_matrix_value(out, hyper.rho_scale.mat());
  out << "\n";
}

Hyperparams load_hyperparams(std::istream& in) {
  std::map<std::string, std::string> fields;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("hyperparams: malformed line '" + line + "'");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    fields[key] = value;
  }
  for (const char* required :
       {"gamma", "tau", "alpha", "psi", "mean0", "row_cov0", "col_cov0",
        "beta_scale", "rho_scale"}) {
    if (!fields.count(required)) {
      throw std::invalid_argument(std::string("hyperparams: missing key '") +
                                  required + "'");
    }
  }
  Hyperparams hyper{0.0,
                    0.0,
                    Matrix(),
                    SpdMatrix::identity(1),
                    SpdMatrix::identity(1),
                    0.0,
                    SpdMatrix::identity(1),
                    0.0,
                    SpdMatrix::identity(1)};
  for (const auto& [key, value] : fields) {
    set_hyperparam_field(hyper, key, value);
  }
  hyper.validate();
  return hyper;
}

void apply_hyperparam_override(Hyperparams& hyper, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("hyperparams: override must be key=value, got '" +
                                spec + "'");
  }
  set_hyperparam_field(hyper, spec.substr(0, eq), spec.substr(eq + 1));
  hyper.validate();
}

}  // namespace mxclust
