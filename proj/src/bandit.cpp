#include "saslo/bandit.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "saslo/error.hpp"

namespace saslo {

using nlohmann::json;

BanditState::BanditState(int dim, double lambda)
    : theta_(Eigen::VectorXd::Zero(dim)),
      a_(Eigen::MatrixXd::Identity(dim, dim)),
      b_(Eigen::VectorXd::Zero(dim)),
      lambda_(lambda) {
  require(dim >= 1, "bandit dimension must be positive");
  set_lambda(lambda);
}

void BanditState::set_lambda(double lambda) {
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be finite and non-negative");
  lambda_ = lambda;
}

Eigen::MatrixXd BanditState::a_inverse() const {
  return a_.llt().solve(Eigen::MatrixXd::Identity(dim(), dim()));
}

void BanditState::update(const FeatureVector& x, double reward) {
  require(x.size() == theta_.size(), "feature dimension " + std::to_string(x.size()) +
                                         " does not match bandit dimension " +
                                         std::to_string(theta_.size()));
  require(std::isfinite(reward), "reward must be finite");
  require(x.allFinite(), "features must be finite");
  a_.noalias() += x * x.transpose();
  b_.noalias() += reward * x;
  theta_ = a_.ldlt().solve(b_);
  ++count_;
}

BanditState BanditState::restore(Eigen::VectorXd theta, Eigen::MatrixXd a, double lambda,
                                 std::int64_t count, const Eigen::VectorXd* b) {
  const auto d = theta.size();
  if (d < 1 || a.rows() != d || a.cols() != d)
    fail(ErrorKind::kState, "bandit state: design matrix does not match theta");
  if (!theta.allFinite() || !a.allFinite())
    fail(ErrorKind::kState, "bandit state: non-finite values");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + a.cwiseAbs().maxCoeff()))
    fail(ErrorKind::kState, "bandit state: design matrix is not symmetric");
  if (a.llt().info() != Eigen::Success)
    fail(ErrorKind::kState, "bandit state: design matrix is not positive definite");
  if (!(lambda >= 0.0) || !std::isfinite(lambda) || count < 0)
    fail(ErrorKind::kState, "bandit state: invalid lambda or observation count");
  BanditState s(static_cast<int>(d), lambda);
  s.a_ = std::move(a);
  if (b != nullptr) {
    if (b->size() != d) fail(ErrorKind::kState, "bandit state: response has wrong length");
    s.b_ = *b;
  } else {
    s.b_ = s.a_ * theta;
  }
  s.theta_ = std::move(theta);
  s.count_ = count;
  return s;
}

double predict_reward(const BanditState& state, const FeatureVector& x) {
  require(x.size() == state.dim(), "feature dimension mismatch");
  return x.dot(state.theta());
}

double exploration_bonus(const BanditState& state, const FeatureVector& x) {
  require(x.size() == state.dim(), "feature dimension mismatch");
  const auto llt = state.design_matrix().llt();
  if (llt.info() != Eigen::Success) fail("design matrix is singular");
  const double q = x.dot(llt.solve(x));
  return std::sqrt(std::max(q, 0.0));
}

double ucb_score(const BanditState& state, const FeatureVector& x) {
  return predict_reward(state, x) + state.lambda() * exploration_bonus(state, x);
}

void update(BanditState& state, const FeatureVector& x, double reward) { state.update(x, reward); }

BanditState train(std::span<const TrainingSample> dataset, const RewardCurves& curves,
                  const RewardConfig& cfg, double lambda) {
  require(!dataset.empty(), "training dataset is empty");
  BanditState state(3 * static_cast<int>(dataset.front().arm.positions.size()), lambda);
  for (const auto& s : dataset) state.update(build_features(s.context, s.arm, curves, cfg), s.reward);
  return state;
}

BanditState train_features(std::span<const FeatureSample> dataset, double lambda) {
  require(!dataset.empty(), "training dataset is empty");
  BanditState state(static_cast<int>(dataset.front().x.size()), lambda);
  for (const auto& s : dataset) state.update(s.x, s.reward);
  return state;
}

std::string state_to_json(const BanditState& state) {
  const int d = state.dim();
  std::vector<double> theta(state.theta().data(), state.theta().data() + d);
  std::vector<double> b(state.response().data(), state.response().data() + d);
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a.push_back(state.design_matrix()(r, c));
  json j = {{"theta", theta},
            {"design_matrix", a},
            {"response", b},
            {"lambda", state.lambda()},
            {"observation_count", state.observation_count()}};
  return j.dump() + "\n";
}

BanditState state_from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    const auto theta_v = j.at("theta").get<std::vector<double>>();
    const auto a_v = j.at("design_matrix").get<std::vector<double>>();
    const auto d = static_cast<Eigen::Index>(theta_v.size());
    if (d == 0 || a_v.size() != static_cast<std::size_t>(d * d))
      fail(ErrorKind::kState, "bandit state: design_matrix must have dim*dim entries");
    Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(theta_v.data(), d);
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) a(r, c) = a_v[static_cast<std::size_t>(r * d + c)];
    const double lambda = j.at("lambda").get<double>();
    const auto count = j.at("observation_count").get<std::int64_t>();
    if (j.contains("response")) {
      const auto b_v = j.at("response").get<std::vector<double>>();
      Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(b_v.data(), static_cast<Eigen::Index>(b_v.size()));
      return BanditState::restore(std::move(theta), std::move(a), lambda, count, &b);
    }
    return BanditState::restore(std::move(theta), std::move(a), lambda, count);
  } catch (const json::exception& e) {
    fail(ErrorKind::kState, std::string("bandit state: ") + e.what());
  }
}

void write_state(const std::filesystem::path& path, const BanditState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kInput, "cannot write " + path.string());
  out << state_to_json(state);
}

BanditState read_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kState, "cannot open bandit state " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return state_from_json(ss.str());
}

namespace {

json cells_to_json(const std::vector<Cell>& cells) {
  json arr = json::array();
  for (Cell c : cells) arr.push_back({c.col, c.row});
  return arr;
}

std::vector<Cell> cells_from_json(const json& arr) {
  std::vector<Cell> out;
  for (const auto& c : arr) out.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
  return out;
}

}  // namespace

std::string sample_to_jsonl(const TrainingSample& sample) {
  const auto& g = sample.context.grid;
  json grid = json::array();
  for (int row = 0; row < g.n_g; ++row) {
    json r = json::array();
    for (int col = 0; col < g.n_g; ++col) r.push_back(g.at(col, row));
    grid.push_back(std::move(r));
  }
  json j = {{"grid", std::move(grid)},
            {"objects", cells_to_json(sample.context.objects)},
            {"arm", cells_to_json(sample.arm.positions)},
            {"reward", sample.reward}};
  return j.dump();
}

TrainingSample sample_from_jsonl(const std::string& line) {
  try {
    const auto j = json::parse(line);
    const auto& grid = j.at("grid");
    const int n = static_cast<int>(grid.size());
    TrainingSample s;
    s.context.grid = LuminanceGrid(n);
    for (int row = 0; row < n; ++row) {
      if (static_cast<int>(grid[row].size()) != n) fail(ErrorKind::kInput, "dataset grid must be square");
      for (int col = 0; col < n; ++col) s.context.grid.at(col, row) = grid[row][col].get<double>();
    }
    s.context.objects = cells_from_json(j.at("objects"));
    s.arm.positions = cells_from_json(j.at("arm"));
    s.reward = j.at("reward").get<double>();
    s.context.validate();
    return s;
  } catch (const json::exception& e) {
    fail(ErrorKind::kInput, std::string("dataset line: ") + e.what());
  }
}

std::vector<TrainingSample> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kInput, "cannot open " + path.string());
  std::vector<TrainingSample> out;
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(sample_from_jsonl(line));
  return out;
}

}  // namespace saslo
