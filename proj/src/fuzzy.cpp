#include "saslo/fuzzy.hpp"

#include <cmath>

#include "saslo/error.hpp"

namespace saslo {

FuzzyLayer::FuzzyLayer(int d, int r) : dim(d), rules(r) {
  require(d >= 1, "fuzzy layer dimension must be positive");
  require(r >= 1, "fuzzy layer needs at least one rule");
  centers = Eigen::MatrixXd::Zero(d, r);
  log_var = Eigen::MatrixXd::Zero(d, r);
  query.assign(r, Eigen::MatrixXd::Identity(d, d));
  value.assign(r, Eigen::MatrixXd::Identity(d, d));
}

void FuzzyLayer::set_variances(int j, const Eigen::VectorXd& var) {
  require(j >= 0 && j < rules, "rule index out of range");
  require(var.size() == dim, "variance vector has wrong length");
  for (Eigen::Index k = 0; k < var.size(); ++k)
    require(std::isfinite(var[k]) && var[k] > 0.0, "fuzzy rule variances must be positive");
  log_var.col(j) = var.array().log().matrix();
}

void FuzzyLayer::set_zero() {
  centers.setZero();
  log_var.setZero();
  for (auto& m : query) m.setZero();
  for (auto& m : value) m.setZero();
}

namespace {
template <class M>
auto span_of(M& m) {
  return std::span(m.data(), static_cast<std::size_t>(m.size()));
}
}  // namespace

std::vector<std::span<double>> FuzzyLayer::tensors() {
  std::vector<std::span<double>> out{span_of(centers), span_of(log_var)};
  for (auto& m : query) out.push_back(span_of(m));
  for (auto& m : value) out.push_back(span_of(m));
  return out;
}

std::vector<std::span<const double>> FuzzyLayer::tensors() const {
  std::vector<std::span<const double>> out{span_of(centers), span_of(log_var)};
  for (const auto& m : query) out.push_back(span_of(m));
  for (const auto& m : value) out.push_back(span_of(m));
  return out;
}

std::size_t FuzzyLayer::parameter_count() const {
  return static_cast<std::size_t>(2 * dim * rules + 2 * rules * dim * dim);
}

void FuzzyLayer::validate() const {
  require(dim >= 1 && rules >= 1, "fuzzy layer has no rules");
  require(centers.rows() == dim && centers.cols() == rules, "fuzzy centres have wrong shape");
  require(log_var.rows() == dim && log_var.cols() == rules, "fuzzy variances have wrong shape");
  require(static_cast<int>(query.size()) == rules && static_cast<int>(value.size()) == rules,
          "fuzzy layer needs one query and value matrix per rule");
  for (int j = 0; j < rules; ++j) {
    require(query[j].rows() == dim && query[j].cols() == dim, "query matrix has wrong shape");
    require(value[j].rows() == dim && value[j].cols() == dim, "value matrix has wrong shape");
  }
  for (auto t : tensors())
    for (double v : t) require(std::isfinite(v), "fuzzy layer has non-finite parameters");
}

FuzzyLayer random_fuzzy_layer(int dim, int rules, Rng& rng, double center_sd, bool random_value) {
  FuzzyLayer layer(dim, rules);
  std::normal_distribution<double> n01(0.0, 1.0);
  const double small = 0.1 / std::sqrt(static_cast<double>(dim));
  const double wide = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < rules; ++j) {
    for (int k = 0; k < dim; ++k) layer.centers(k, j) = center_sd * n01(rng);
    layer.log_var.col(j).setConstant(std::log(static_cast<double>(dim)));
    for (Eigen::Index i = 0; i < layer.query[j].size(); ++i) layer.query[j].data()[i] += small * n01(rng);
    if (random_value) {
      for (Eigen::Index i = 0; i < layer.value[j].size(); ++i) layer.value[j].data()[i] = wide * n01(rng);
    } else {
      for (Eigen::Index i = 0; i < layer.value[j].size(); ++i) layer.value[j].data()[i] += small * n01(rng);
    }
  }
  return layer;
}

namespace {

// Column-wise softmax of -d, stabilized by the column maximum.
void softmax_neg(Eigen::MatrixXd& d) {
  for (Eigen::Index c = 0; c < d.cols(); ++c) {
    auto col = d.col(c);
    const double lo = col.minCoeff();
    col = (-(col.array() - lo)).exp().matrix();
    col /= col.sum();
  }
}

}  // namespace

void fuzzy_forward(const FuzzyLayer& layer, const Eigen::MatrixXd& x, FuzzyCache& cache) {
  require(x.rows() == layer.dim, "fuzzy input dimension mismatch");
  const int r = layer.rules;
  cache.x = x;
  cache.diff.resize(r);
  cache.proj.resize(r);
  cache.w.resize(r, x.cols());
  for (int j = 0; j < r; ++j) {
    cache.diff[j].noalias() = layer.query[j] * x;
    cache.diff[j].colwise() -= layer.centers.col(j);
    const Eigen::ArrayXd inv_var = (-layer.log_var.col(j).array()).exp();
    cache.w.row(j) = (cache.diff[j].array().square().colwise() * inv_var).colwise().sum();
    cache.proj[j].noalias() = layer.value[j] * x;
  }
  softmax_neg(cache.w);
}

Eigen::MatrixXd fuzzy_combine(const FuzzyCache& cache) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(cache.x.rows(), cache.x.cols());
  for (std::size_t j = 0; j < cache.proj.size(); ++j)
    y.array() += cache.proj[j].array().rowwise() * cache.w.row(static_cast<Eigen::Index>(j)).array();
  return y;
}

Eigen::MatrixXd firing_strengths(const FuzzyLayer& layer, const Eigen::MatrixXd& x) {
  require(x.rows() == layer.dim, "fuzzy input dimension mismatch");
  Eigen::MatrixXd d(layer.rules, x.cols());
  for (int j = 0; j < layer.rules; ++j) {
    Eigen::MatrixXd a = layer.query[j] * x;
    a.colwise() -= layer.centers.col(j);
    const Eigen::ArrayXd inv_var = (-layer.log_var.col(j).array()).exp();
    d.row(j) = (a.array().square().colwise() * inv_var).colwise().sum();
  }
  softmax_neg(d);
  return d;
}

Eigen::VectorXd firing_strengths(const FuzzyLayer& layer, const Eigen::VectorXd& x) {
  return firing_strengths(layer, Eigen::MatrixXd(x)).col(0);
}

void fuzzy_backward(const FuzzyLayer& layer, const FuzzyCache& cache, const Eigen::MatrixXd& g_w,
                    const std::vector<Eigen::MatrixXd>& g_proj, FuzzyLayer& grad, Eigen::MatrixXd* g_x) {
  const int r = layer.rules;
  const Eigen::MatrixXd& w = cache.w;
  // Softmax backward; dL/dd = -dL/du.
  const Eigen::RowVectorXd mean_g = (w.array() * g_w.array()).colwise().sum();
  const Eigen::MatrixXd g_d = -(w.array() * (g_w.rowwise() - mean_g).array()).matrix();
  if (g_x) g_x->setZero(cache.x.rows(), cache.x.cols());
  for (int j = 0; j < r; ++j) {
    const Eigen::ArrayXd inv_var = (-layer.log_var.col(j).array()).exp();
    const Eigen::ArrayXXd sq = cache.diff[j].array().square().colwise() * inv_var;
    grad.log_var.col(j) -= (sq.rowwise() * g_d.row(j).array()).rowwise().sum().matrix();
    const Eigen::MatrixXd g_a =
        ((2.0 * cache.diff[j].array()).colwise() * inv_var).rowwise() * g_d.row(j).array();
    grad.centers.col(j) -= g_a.rowwise().sum();
    grad.query[j].noalias() += g_a * cache.x.transpose();
    grad.value[j].noalias() += g_proj[j] * cache.x.transpose();
    if (g_x) {
      g_x->noalias() += layer.query[j].transpose() * g_a;
      g_x->noalias() += layer.value[j].transpose() * g_proj[j];
    }
  }
}

AttentionOutput tal_forward(const Eigen::MatrixXd& x, const FuzzyLayer& layer) {
  FuzzyCache cache;
  fuzzy_forward(layer, x, cache);
  return {fuzzy_combine(cache), cache.w.transpose()};
}

AttentionOutput sal_forward(const Eigen::MatrixXd& y, const FuzzyLayer& layer) {
  FuzzyCache cache;
  fuzzy_forward(layer, y.transpose(), cache);
  return {fuzzy_combine(cache).transpose(), cache.w.transpose()};
}

}  // namespace saslo
