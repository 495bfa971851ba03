#include "saslo/session.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>

#include <json.hpp>

#include "saslo/error.hpp"
#include "saslo/metrics.hpp"

namespace saslo {

Method parse_method(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "joli") return Method::kJoli;
  if (s == "loo") return Method::kLoo;
  if (s == "no") return Method::kNo;
  fail("unknown method '" + name + "' (expected joli, loo or no)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kJoli: return "JOLI";
    case Method::kLoo: return "LOO";
    case Method::kNo: return "NO";
  }
  return "?";
}

void SessionConfig::validate() const {
  require(!methods.empty(), "session needs at least one method");
  require(rounds >= 1, "session needs at least one round");
  require(!windows.empty(), "session needs at least one decode window");
  for (double w : windows)
    require(w > 0.0 && w <= phases.stimulation_s, "decode window must lie within the stimulation phase");
  require(phases.capture_s >= 0.0 && phases.cue_s >= 0.0 && phases.feedback_s >= 0.0 && phases.stimulation_s > 0.0,
          "phase durations must be non-negative");
  require(chunk_s > 0.0, "chunk duration must be positive");
  require(reward.n_stimuli == workload.n_stimuli, "reward config and workload disagree on stimulus count");
  require(workload.n_stimuli <= kClasses, "at most six stimuli can be decoded");
  reward.validate();
  sampler.validate();
}

SessionModels train_session_models(int samples, const WorkloadConfig& workload, const RewardCurves& curves,
                                   const RewardConfig& reward, double lambda, std::uint64_t seed) {
  RewardConfig full = reward;
  full.include_isd = true;
  RewardConfig loo = reward;
  loo.include_isd = false;
  auto data = synthetic_training_set(samples, workload, curves, full, seed);
  SessionModels m{curves, train(data, curves, full, lambda), BanditState(3 * workload.n_stimuli, lambda)};
  data = relabel(std::move(data), curves, loo);
  m.loo = train(data, curves, loo, lambda);
  return m;
}

Recommendation layout_for(Method method, const SessionModels& models, const ContextGrid& context,
                          const SessionConfig& cfg, std::uint64_t seed) {
  SamplerConfig sc = cfg.sampler;
  sc.seed = seed;
  switch (method) {
    case Method::kJoli: {
      RewardConfig rc = cfg.reward;
      rc.include_isd = true;
      return recommend(models.joli, context, models.curves, rc, sc);
    }
    case Method::kLoo:
      return loo_recommend(models.loo, context, models.curves, cfg.reward, sc);
    case Method::kNo:
      break;
  }
  Recommendation r;
  r.layout = no_layout(context);
  return r;
}

namespace {

void stream(RingBuffer& buffer, const EegEpoch& signal, double chunk_s) {
  const int chunk = std::max(1, static_cast<int>(std::lround(chunk_s * signal.sample_rate)));
  for (int start = 0; start < signal.samples; start += chunk) {
    const int n = std::min(chunk, signal.samples - start);
    EegEpoch part(signal.channels, n, signal.sample_rate);
    for (int c = 0; c < signal.channels; ++c)
      std::copy_n(signal.row(c).begin() + start, n, part.row(c).begin());
    buffer.append(part);
  }
}

EegEpoch background(double seconds, const SessionConfig& cfg, Rng& rng) {
  return synth_trial(stimulus_for_class(0), 0.0, seconds, cfg.synth, rng);
}

}  // namespace

std::vector<TrialRecord> run_trial(const TrialSetup& setup, const RewardCurves& curves, const EpochDecoder& decode,
                                   const SessionConfig& cfg, RingBuffer& buffer, double& clock_s) {
  require(setup.context != nullptr, "trial has no context");
  const int n_channels = buffer.channels();
  Rng rng = make_rng(cfg.seed, "session_eeg", static_cast<std::uint64_t>(setup.round) * kClasses + setup.target);
  SynthConfig synth = cfg.synth;
  synth.channels = n_channels;
  synth.sample_rate = buffer.sample_rate();
  SessionConfig local = cfg;
  local.synth = synth;

  TrialRecord base;
  base.round = setup.round;
  base.trial_id = setup.trial_id;
  base.method = setup.method;
  base.target_class = setup.target;

  // Scene capture and cue: background activity only.
  const double lead = cfg.phases.capture_s + cfg.phases.cue_s;
  if (lead > 0.0) stream(buffer, background(lead, local, rng), cfg.chunk_s);
  clock_s += lead;

  std::vector<TrialRecord> out;
  if (setup.layout == nullptr) {
    base.valid = false;
    for (double w : cfg.windows) {
      TrialRecord r = base;
      r.window_s = w;
      out.push_back(r);
    }
    clock_s += cfg.phases.stimulation_s + cfg.phases.feedback_s;
    return out;
  }
  base.layout = *setup.layout;
  const auto assessed = assess_layout(*setup.context, *setup.layout, cfg.reward);
  const auto& target = assessed[setup.target];
  base.luminance = target.luminance;
  base.isd_degrees = target.nearest_neighbor_distance;
  base.quality = trial_quality({base.luminance, base.isd_degrees}, curves);
  base.onset_s = clock_s;

  const std::uint64_t onset = buffer.published();
  const EegEpoch eeg = synth_trial(stimulus_for_class(setup.target), base.quality, cfg.phases.stimulation_s, synth, rng);
  stream(buffer, eeg, cfg.chunk_s);
  clock_s += cfg.phases.stimulation_s;
  for (double w : cfg.windows) {
    TrialRecord r = base;
    r.window_s = w;
    r.predicted_class = decode(buffer.extract_epoch(onset, {0.0, w}));
    out.push_back(r);
  }
  if (cfg.phases.feedback_s > 0.0) stream(buffer, background(cfg.phases.feedback_s, local, rng), cfg.chunk_s);
  clock_s += cfg.phases.feedback_s;
  return out;
}

std::vector<Method> method_order(const std::vector<Method>& methods, std::uint64_t seed, int round) {
  std::vector<Method> order = methods;
  Rng rng = make_rng(seed, "method_order", static_cast<std::uint64_t>(round));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

SessionResult simulate_session(const SessionModels& models, const EpochDecoder& decode, const SessionConfig& cfg) {
  cfg.validate();
  require(static_cast<bool>(decode), "session needs a decoder");
  SessionResult result;
  RingBuffer buffer(cfg.synth.channels, static_cast<std::size_t>(kBufferSeconds * cfg.synth.sample_rate),
                    cfg.synth.sample_rate);
  double clock = 0.0;
  int trial_id = 0;
  for (int round = 0; round < cfg.rounds; ++round) {
    Rng scene_rng = make_rng(cfg.seed, "session_scene", static_cast<std::uint64_t>(round));
    const ContextGrid context = synth_context(cfg.workload, scene_rng);
    for (Method method : method_order(cfg.methods, cfg.seed, round)) {
      std::optional<Layout> layout;
      try {
        layout = layout_for(method, models, context, cfg, derive_seed(cfg.seed, "session_layout", round)).layout;
      } catch (const Error&) {
        layout.reset();
      }
      std::vector<int> targets(cfg.workload.n_stimuli);
      std::iota(targets.begin(), targets.end(), 0);
      Rng target_rng = make_rng(cfg.seed, "session_targets",
                                static_cast<std::uint64_t>(round) * 4 + static_cast<std::uint64_t>(method));
      std::shuffle(targets.begin(), targets.end(), target_rng);
      for (int target : targets) {
        TrialSetup setup{round, trial_id++, method, target, &context, layout ? &*layout : nullptr};
        for (auto& r : run_trial(setup, models.curves, decode, cfg, buffer, clock)) result.trials.push_back(std::move(r));
      }
    }
  }
  result.elapsed_s = clock;
  result.metrics = summarize(result.trials, cfg.methods, cfg.windows);
  return result;
}

namespace {

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<MethodMetrics> summarize(const std::vector<TrialRecord>& trials, const std::vector<Method>& methods,
                                     const std::vector<double>& windows) {
  std::vector<MethodMetrics> out;
  for (Method m : methods)
    for (double w : windows) {
      MethodMetrics mm;
      mm.method = m;
      mm.window_s = w;
      mm.t_c = time_cost(w);
      std::map<int, std::pair<int, int>> per_round;  // round -> (correct, total)
      for (const auto& t : trials) {
        if (t.method != m || std::abs(t.window_s - w) > 1e-9) continue;
        ++mm.trials;
        auto& pr = per_round[t.round];
        ++pr.second;
        if (t.correct()) {
          ++mm.correct;
          ++pr.first;
        }
      }
      if (mm.trials > 0) {
        mm.accuracy = static_cast<double>(mm.correct) / mm.trials;
        mm.itr = itr(mm.accuracy, kClasses, mm.t_c);
        std::vector<double> acc, rate;
        for (const auto& [round, pr] : per_round) {
          const double p = static_cast<double>(pr.first) / pr.second;
          acc.push_back(p);
          rate.push_back(itr(p, kClasses, mm.t_c));
        }
        double sum = 0.0;
        for (double r : rate) sum += r;
        mm.itr_round_mean = sum / static_cast<double>(rate.size());
        mm.accuracy_std = sample_std(acc);
        mm.itr_round_std = sample_std(rate);
      }
      out.push_back(mm);
    }
  return out;
}

std::string metrics_to_csv(const std::vector<MethodMetrics>& metrics) {
  std::vector<double> windows;
  std::vector<Method> methods;
  for (const auto& m : metrics) {
    if (std::find_if(windows.begin(), windows.end(), [&](double w) { return std::abs(w - m.window_s) < 1e-9; }) ==
        windows.end())
      windows.push_back(m.window_s);
    if (std::find(methods.begin(), methods.end(), m.method) == methods.end()) methods.push_back(m.method);
  }
  char buf[64];
  std::string out = "method,metric";
  for (double w : windows) {
    std::snprintf(buf, sizeof buf, ",%.1fs", w);
    out += buf;
  }
  out += '\n';
  const std::array<std::pair<const char*, double MethodMetrics::*>, 5> rows{{{"accuracy", &MethodMetrics::accuracy},
                                                                             {"accuracy_std", &MethodMetrics::accuracy_std},
                                                                             {"itr", &MethodMetrics::itr_round_mean},
                                                                             {"itr_std", &MethodMetrics::itr_round_std},
                                                                             {"itr_pooled", &MethodMetrics::itr}}};
  for (Method m : methods)
    for (const auto& [name, field] : rows) {
      out += to_string(m) + "," + name;
      for (double w : windows) {
        auto it = std::find_if(metrics.begin(), metrics.end(),
                               [&](const MethodMetrics& x) { return x.method == m && std::abs(x.window_s - w) < 1e-9; });
        std::snprintf(buf, sizeof buf, ",%.4f", it == metrics.end() ? 0.0 : (*it).*field);
        out += buf;
      }
      out += '\n';
    }
  return out;
}

std::string trial_to_jsonl(const TrialRecord& r) {
  nlohmann::json pos = nlohmann::json::array();
  for (const auto& p : r.layout.positions) pos.push_back({p.col, p.row});
  nlohmann::json j = {{"round", r.round},
                      {"trial_id", r.trial_id},
                      {"method", to_string(r.method)},
                      {"target_class", r.target_class},
                      {"predicted_class", r.predicted_class},
                      {"positions", pos},
                      {"window_s", r.window_s},
                      {"luminance", r.luminance},
                      {"isd_degrees", r.isd_degrees},
                      {"quality", r.quality},
                      {"onset_s", r.onset_s},
                      {"valid", r.valid}};
  return j.dump();
}

}  // namespace saslo
