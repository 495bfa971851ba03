#pragma once

// Gaussian-membership fuzzy attention. Each rule j carries a centre r_j, a
// diagonal covariance (stored as log-variance), a query matrix Q_j and a value
// matrix V_j. For an input vector x:
//   d_j = sum_k ((Q_j x - r_j)_k)^2 / var_jk,   w = softmax(-d),
//   y   = sum_j w_j V_j x.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "saslo/rng.hpp"

namespace saslo {

struct FuzzyLayer {
  int dim = 0;
  int rules = 0;
  Eigen::MatrixXd centers;  // dim x rules
  Eigen::MatrixXd log_var;  // dim x rules
  std::vector<Eigen::MatrixXd> query;  // rules entries, dim x dim
  std::vector<Eigen::MatrixXd> value;

  FuzzyLayer() = default;
  // Zero centres, unit variances, identity query and value matrices.
  FuzzyLayer(int dim, int rules);

  Eigen::VectorXd variances(int j) const { return log_var.col(j).array().exp(); }
  // Errors unless every entry is finite and strictly positive.
  void set_variances(int j, const Eigen::VectorXd& var);

  void set_zero();
  // Parameter tensors in a fixed order: centers, log_var, query[0..], value[0..].
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  std::size_t parameter_count() const;
  void validate() const;
};

// Centres ~ N(0, center_sd), log-variance log(dim), query I + N(0, 0.1/sqrt(dim)),
// value identity + N(0, 0.1/sqrt(dim)) or, when random_value, N(0, 1/dim).
FuzzyLayer random_fuzzy_layer(int dim, int rules, Rng& rng, double center_sd, bool random_value);

// Intermediate values kept for the backward pass. Columns of x are the
// attended vectors.
struct FuzzyCache {
  Eigen::MatrixXd x;                   // dim x n
  std::vector<Eigen::MatrixXd> diff;   // Q_j x - r_j, dim x n
  std::vector<Eigen::MatrixXd> proj;   // V_j x, dim x n
  Eigen::MatrixXd w;                   // rules x n
};

// rules x n membership weights; every column sums to 1.
Eigen::MatrixXd firing_strengths(const FuzzyLayer& layer, const Eigen::MatrixXd& x);
Eigen::VectorXd firing_strengths(const FuzzyLayer& layer, const Eigen::VectorXd& x);

void fuzzy_forward(const FuzzyLayer& layer, const Eigen::MatrixXd& x, FuzzyCache& cache);
// y = sum_j w_j V_j x column-wise.
Eigen::MatrixXd fuzzy_combine(const FuzzyCache& cache);

// Accumulates parameter gradients into `grad` given upstream gradients with
// respect to the weights (rules x n) and each projection V_j x. When g_x is
// non-null it receives dL/dx.
void fuzzy_backward(const FuzzyLayer& layer, const FuzzyCache& cache, const Eigen::MatrixXd& g_w,
                    const std::vector<Eigen::MatrixXd>& g_proj, FuzzyLayer& grad, Eigen::MatrixXd* g_x);

struct AttentionOutput {
  Eigen::MatrixXd y;          // C x T
  Eigen::MatrixXd strengths;  // T x rules (temporal) or C x rules (spatial)
};

// Temporal attention: one membership vector per time step (columns of x, C x T).
AttentionOutput tal_forward(const Eigen::MatrixXd& x, const FuzzyLayer& layer);
// Spatial attention: one membership vector per channel (rows of y); rules live in R^T.
AttentionOutput sal_forward(const Eigen::MatrixXd& y, const FuzzyLayer& layer);

}  // namespace saslo
