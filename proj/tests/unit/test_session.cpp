#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <json.hpp>
#include <sstream>

#include "saslo/decoder.hpp"
#include "saslo/metrics.hpp"
#include "saslo/session.hpp"
#include "saslo/workload.hpp"

using namespace saslo;

namespace {

const SessionModels& models() {
  static const SessionModels m =
      train_session_models(3000, WorkloadConfig{}, RewardCurves::defaults(), RewardConfig{}, kDefaultLambda, 9);
  return m;
}

SessionConfig small_session(int rounds, std::uint64_t seed) {
  SessionConfig cfg;
  cfg.rounds = rounds;
  cfg.seed = seed;
  cfg.sampler.batch_size = 500;
  return cfg;
}

int constant_zero(const EegEpoch&) { return 0; }

}  // namespace

TEST_CASE("method names") {
  CHECK(parse_method("joli") == Method::kJoli);
  CHECK(parse_method("LOO") == Method::kLoo);
  CHECK(parse_method("No") == Method::kNo);
  CHECK_THROWS_AS(parse_method("random"), Error);
  for (Method m : kAllMethods) CHECK(parse_method(to_string(m)) == m);
}

TEST_CASE("one round gives eighteen records, every target once per method") {
  const auto res = simulate_session(models(), constant_zero, small_session(1, 3));
  REQUIRE(res.trials.size() == 18);
  std::map<Method, std::vector<int>> targets;
  for (const auto& t : res.trials) {
    targets[t.method].push_back(t.target_class);
    CHECK(t.valid);
    CHECK(t.window_s == 3.0);
    CHECK(t.layout.positions.size() == 6);
  }
  for (auto& [m, v] : targets) {
    std::sort(v.begin(), v.end());
    CHECK(v == std::vector<int>{0, 1, 2, 3, 4, 5});
  }
  // Virtual clock: 18 trials of capture + cue + stimulation + feedback.
  CHECK(res.elapsed_s == doctest::Approx(18 * 8.0));
  for (std::size_t i = 1; i < res.trials.size(); ++i) CHECK(res.trials[i].onset_s > res.trials[i - 1].onset_s);
}

TEST_CASE("NO layouts are the objects themselves") {
  WorkloadConfig wl;
  Rng rng(4);
  const auto ctx = synth_context(wl, rng);
  const auto rec = layout_for(Method::kNo, models(), ctx, SessionConfig{}, 1);
  CHECK(rec.layout.positions == ctx.objects);
}

TEST_CASE("accuracy counts correct over total") {
  // A constant decoder is right exactly once per six targets.
  const auto res = simulate_session(models(), constant_zero, small_session(2, 5));
  REQUIRE(res.metrics.size() == 3);
  for (const auto& m : res.metrics) {
    CHECK(m.trials == 12);
    CHECK(m.correct == 2);
    CHECK(m.accuracy == doctest::Approx(1.0 / 6));
    CHECK(m.itr == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.t_c == doctest::Approx(3.135));
  }
}

TEST_CASE("summaries from hand-built records") {
  std::vector<TrialRecord> recs;
  // Round 0: 6/6 correct, round 1: 3/6 correct, method JOLI, window 2.0 s.
  for (int round = 0; round < 2; ++round)
    for (int k = 0; k < 6; ++k) {
      TrialRecord r;
      r.round = round;
      r.method = Method::kJoli;
      r.window_s = 2.0;
      r.target_class = k;
      r.predicted_class = (round == 1 && k % 2) ? (k + 1) % 6 : k;
      recs.push_back(r);
    }
  recs.push_back(recs.front());
  recs.back().valid = false;
  recs.back().round = 1;
  const auto m = summarize(recs, {Method::kJoli}, {2.0}).front();
  CHECK(m.trials == 13);
  CHECK(m.correct == 9);
  CHECK(m.accuracy == doctest::Approx(9.0 / 13));
  CHECK(m.itr == doctest::Approx(itr(9.0 / 13, 6, 2.135)));
  const double r0 = itr(1.0, 6, 2.135), r1 = itr(3.0 / 7, 6, 2.135);
  CHECK(m.itr_round_mean == doctest::Approx((r0 + r1) / 2));
  CHECK(m.itr_round_std == doctest::Approx(std::abs(r0 - r1) / std::sqrt(2.0)));
  CHECK(m.accuracy_std == doctest::Approx(std::abs(1.0 - 3.0 / 7) / std::sqrt(2.0)));
}

TEST_CASE("fixed seeds reproduce sessions exactly") {
  auto cfg = small_session(1, 8);
  const auto a = simulate_session(models(), peak_decode, cfg);
  const auto b = simulate_session(models(), peak_decode, cfg);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) CHECK(trial_to_jsonl(a.trials[i]) == trial_to_jsonl(b.trials[i]));
}

TEST_CASE("method order is uniform over the six permutations") {
  std::map<std::vector<Method>, int> counts;
  const int rounds = 6000;
  for (int r = 0; r < rounds; ++r) ++counts[method_order({kAllMethods.begin(), kAllMethods.end()}, 17, r)];
  REQUIRE(counts.size() == 6);
  double chi2 = 0.0;
  const double expected = rounds / 6.0;
  for (const auto& [order, n] : counts) chi2 += (n - expected) * (n - expected) / expected;
  CHECK(chi2 < 11.07);  // 95% quantile, 5 degrees of freedom
}

TEST_CASE("metrics CSV and trial JSON lines") {
  SessionConfig cfg = small_session(1, 2);
  cfg.windows = {1.0, 3.5};
  const auto res = simulate_session(models(), constant_zero, cfg);
  CHECK(res.trials.size() == 36);
  const auto csv = metrics_to_csv(res.metrics);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "method,metric,1.0s,3.5s");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == 15);
  CHECK(csv.find("JOLI,accuracy,0.1667,0.1667") != std::string::npos);

  const auto j = nlohmann::json::parse(trial_to_jsonl(res.trials.front()));
  for (const char* key : {"round", "trial_id", "method", "target_class", "predicted_class", "positions", "window_s"})
    CHECK(j.contains(key));
  CHECK(j["positions"].size() == 6);
}

TEST_CASE("uniform dark scenes: luminance no longer separates JOLI from LOO") {
  SessionConfig cfg = small_session(3, 4);
  cfg.workload.scene = SceneKind::kUniformDark;
  cfg.methods = {Method::kJoli, Method::kLoo};
  const auto res = simulate_session(models(), constant_zero, cfg);
  double lum[2] = {0, 0}, isd[2] = {0, 0};
  for (const auto& t : res.trials) {
    const int k = t.method == Method::kJoli ? 0 : 1;
    lum[k] += t.luminance;
    isd[k] += t.isd_degrees;
  }
  CHECK(lum[0] == doctest::Approx(lum[1]).epsilon(1e-9));
  CHECK(isd[0] >= isd[1]);
}

TEST_CASE("invalid session configurations") {
  SessionConfig cfg;
  cfg.rounds = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.methods.clear();
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.windows = {5.0};
  CHECK_THROWS_AS(cfg.validate(), Error);
}
