#pragma once

// Simulated online sessions on a virtual clock. Each round fixes one scene
// and object placement, then runs six trials per method (every object is the
// target once) in a shuffled method order. A trial streams synthetic EEG into
// the ring buffer, brackets the stimulation with START/END events and decodes
// the online window.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "saslo/bandit.hpp"
#include "saslo/recommender.hpp"
#include "saslo/ring_buffer.hpp"
#include "saslo/synth.hpp"
#include "saslo/workload.hpp"

namespace saslo {

enum class Method { kJoli, kLoo, kNo };
inline constexpr std::array<Method, 3> kAllMethods{Method::kJoli, Method::kLoo, Method::kNo};

Method parse_method(const std::string& name);  // joli | loo | no, any case
std::string to_string(Method m);                // JOLI | LOO | NO

struct PhaseDurations {
  double capture_s = 1.0;
  double cue_s = 1.5;
  double stimulation_s = 4.0;
  double feedback_s = 1.5;
};

struct SessionConfig {
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  int rounds = 10;
  std::vector<double> windows{kOnlineWindow.length_s};
  WorkloadConfig workload{};
  RewardConfig reward{};
  SamplerConfig sampler{};
  SynthConfig synth{};
  PhaseDurations phases{};
  double chunk_s = 0.1;  // streaming granularity
  std::uint64_t seed = 0;

  void validate() const;
};

struct SessionModels {
  RewardCurves curves = RewardCurves::defaults();
  BanditState joli;
  BanditState loo;
};

// Both bandits trained on the same synthetic arms; LOO rewards exclude ISD.
SessionModels train_session_models(int samples, const WorkloadConfig& workload, const RewardCurves& curves,
                                   const RewardConfig& reward, double lambda, std::uint64_t seed);

using EpochDecoder = std::function<int(const EegEpoch&)>;

struct TrialRecord {
  int round = 0;
  int trial_id = 0;
  Method method = Method::kNo;
  int target_class = 0;
  int predicted_class = -1;
  Layout layout;
  double window_s = 0.0;
  double luminance = 0.0;    // at the target stimulus
  double isd_degrees = 0.0;  // target stimulus to its nearest neighbour
  double quality = 0.0;
  double onset_s = 0.0;      // virtual time of stimulation onset
  bool valid = true;

  bool correct() const { return valid && predicted_class == target_class; }
};

// Layout a method shows for a context.
Recommendation layout_for(Method method, const SessionModels& models, const ContextGrid& context,
                          const SessionConfig& cfg, std::uint64_t seed);

struct TrialSetup {
  int round = 0;
  int trial_id = 0;
  Method method = Method::kNo;
  int target = 0;
  const ContextGrid* context = nullptr;
  const Layout* layout = nullptr;  // null marks a failed recommendation
};

// Runs one trial against the buffer and clock; one record per decode window.
// The EEG noise stream depends only on (seed, round, target), so methods see
// common random numbers.
std::vector<TrialRecord> run_trial(const TrialSetup& setup, const RewardCurves& curves, const EpochDecoder& decode,
                                   const SessionConfig& cfg, RingBuffer& buffer, double& clock_s);

// Method order for a round (uniform over permutations).
std::vector<Method> method_order(const std::vector<Method>& methods, std::uint64_t seed, int round);

struct MethodMetrics {
  Method method = Method::kNo;
  double window_s = 0.0;
  double t_c = 0.0;
  int trials = 0;
  int correct = 0;
  double accuracy = 0.0;      // correct / trials
  double accuracy_std = 0.0;  // across rounds
  double itr = 0.0;           // of the pooled accuracy
  double itr_round_mean = 0.0;
  double itr_round_std = 0.0;
};

struct SessionResult {
  std::vector<TrialRecord> trials;
  std::vector<MethodMetrics> metrics;
  double elapsed_s = 0.0;  // virtual time
};

SessionResult simulate_session(const SessionModels& models, const EpochDecoder& decode, const SessionConfig& cfg);

std::vector<MethodMetrics> summarize(const std::vector<TrialRecord>& trials, const std::vector<Method>& methods,
                                     const std::vector<double>& windows);

// Rows: method x {accuracy, accuracy_std, itr, itr_std}; one column per window.
std::string metrics_to_csv(const std::vector<MethodMetrics>& metrics);
std::string trial_to_jsonl(const TrialRecord& r);

}  // namespace saslo
