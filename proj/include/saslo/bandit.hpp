#pragma once

// Linear contextual bandit with a unit ridge prior: A = I + sum x x^T,
// b = sum r x, theta = A^-1 b, UCB score x.theta + lambda * ||x||_{A^-1}.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "saslo/layout.hpp"

namespace saslo {

inline constexpr double kDefaultLambda = 0.5;

class BanditState {
 public:
  explicit BanditState(int dim = 3 * kDefaultStimuli, double lambda = kDefaultLambda);

  int dim() const { return static_cast<int>(theta_.size()); }
  const Eigen::VectorXd& theta() const { return theta_; }
  const Eigen::MatrixXd& design_matrix() const { return a_; }
  const Eigen::VectorXd& response() const { return b_; }
  double lambda() const { return lambda_; }
  std::int64_t observation_count() const { return count_; }

  void set_lambda(double lambda);

  Eigen::MatrixXd a_inverse() const;

  // Folds one observation in and re-solves theta.
  void update(const FeatureVector& x, double reward);

  // Rebuilds a state from serialized parts; b is recovered as A * theta when
  // not supplied.
  static BanditState restore(Eigen::VectorXd theta, Eigen::MatrixXd a, double lambda,
                             std::int64_t count, const Eigen::VectorXd* b = nullptr);

 private:
  Eigen::VectorXd theta_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  double lambda_;
  std::int64_t count_ = 0;
};

double predict_reward(const BanditState& state, const FeatureVector& x);
double exploration_bonus(const BanditState& state, const FeatureVector& x);
double ucb_score(const BanditState& state, const FeatureVector& x);
void update(BanditState& state, const FeatureVector& x, double reward);

struct TrainingSample {
  ContextGrid context;
  Layout arm;
  double reward = 0.0;
};

// Folds update() over the dataset in order.
BanditState train(std::span<const TrainingSample> dataset, const RewardCurves& curves,
                  const RewardConfig& cfg, double lambda = kDefaultLambda);

struct FeatureSample {
  FeatureVector x;
  double reward = 0.0;
};
BanditState train_features(std::span<const FeatureSample> dataset, double lambda = kDefaultLambda);

// BanditState as JSON: theta, design_matrix (row-major), lambda,
// observation_count, plus the response vector b.
std::string state_to_json(const BanditState& state);
BanditState state_from_json(const std::string& text);
void write_state(const std::filesystem::path& path, const BanditState& state);
BanditState read_state(const std::filesystem::path& path);

// One training triplet per line: {"grid":[[..]],"objects":[[c,r]..],"arm":[[c,r]..],"reward":r}
std::string sample_to_jsonl(const TrainingSample& sample);
TrainingSample sample_from_jsonl(const std::string& line);
std::vector<TrainingSample> read_dataset(const std::filesystem::path& path);

}  // namespace saslo
