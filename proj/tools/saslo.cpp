// saslo: scene-aware stimulus layout toolkit command line.
//
// Exit codes: 0 success, 2 input/usage error, 3 state or model error,
// 4 protocol error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "saslo/bandit.hpp"
#include "saslo/decoder.hpp"
#include "saslo/error.hpp"
#include "saslo/image_io.hpp"
#include "saslo/loopback.hpp"
#include "saslo/luminance.hpp"
#include "saslo/recommender.hpp"
#include "saslo/session.hpp"
#include "saslo/spectrum.hpp"
#include "saslo/synth.hpp"
#include "saslo/workload.hpp"

namespace fs = std::filesystem;
using namespace saslo;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitState = 3;
constexpr int kExitProtocol = 4;

void log(const std::string& msg) { std::fprintf(stderr, "%s\n", msg.c_str()); }

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void write_text(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kInput, "cannot write " + path.string());
  out << text;
}

// A .ppm file, a directory of .ppm frames, or a raw RGB24 dump.
std::vector<RgbFrame> load_frames(const fs::path& path, int width, int height) {
  if (!fs::exists(path)) fail(ErrorKind::kInput, "no such file or directory: " + path.string());
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path))
      if (e.path().extension() == ".ppm") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) fail(ErrorKind::kInput, "no .ppm frames in " + path.string());
    std::vector<RgbFrame> frames;
    for (const auto& f : files) frames.push_back(read_ppm(f));
    return frames;
  }
  const auto ext = path.extension().string();
  if (ext == ".rgb" || ext == ".raw") {
    if (width <= 0 || height <= 0) fail(ErrorKind::kInput, "raw RGB24 input needs --width and --height");
    return read_rgb24(path, width, height);
  }
  return {read_ppm(path)};
}

std::vector<Cell> parse_objects(const std::string& text) {
  std::vector<Cell> out;
  std::stringstream ss(text);
  std::string item;
  while (ss >> item) {
    const auto comma = item.find(',');
    if (comma == std::string::npos) fail(ErrorKind::kInput, "object '" + item + "' is not col,row");
    try {
      out.push_back({std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1))});
    } catch (const std::exception&) {
      fail(ErrorKind::kInput, "object '" + item + "' is not col,row");
    }
  }
  return out;
}

// Grid heatmap with stimuli as bright rings and objects as dark crosses.
LuminanceMap overlay(const ContextGrid& ctx, const Layout& layout, int px) {
  const int n = ctx.grid.n_g;
  LuminanceMap m(n * px, n * px);
  for (int y = 0; y < n * px; ++y)
    for (int x = 0; x < n * px; ++x) m.at(x, y) = 0.15 + 0.7 * ctx.grid.at(x / px, y / px);
  for (const Cell& p : layout.positions)
    for (int k = 1; k < px - 1; ++k)
      for (int t : {1, px - 2}) {
        m.at(p.col * px + k, p.row * px + t) = 1.0;
        m.at(p.col * px + t, p.row * px + k) = 1.0;
      }
  for (const Cell& o : ctx.objects)
    for (int k = px / 4; k < px - px / 4; ++k) {
      m.at(o.col * px + k, o.row * px + px / 2) = 0.0;
      m.at(o.col * px + px / 2, o.row * px + k) = 0.0;
    }
  return m;
}

struct Common {
  std::uint64_t seed = 0;
  int grid = kDefaultGridSize;
  double alpha = kDefaultAlpha;
  double lambda = kDefaultLambda;
  int batch = 2000;
  double threshold = 0.8;
  double degrees_per_cell = kDefaultDegreesPerCell;
  std::string luminance_anchors, isd_anchors;

  RewardCurves curves() const {
    RewardCurves c = RewardCurves::defaults();
    if (!luminance_anchors.empty()) c.luminance = RewardCurve(read_anchor_csv(luminance_anchors));
    if (!isd_anchors.empty()) c.isd = RewardCurve(read_anchor_csv(isd_anchors));
    return c;
  }
  RewardConfig reward(int n_stimuli) const {
    RewardConfig r;
    r.alpha = alpha;
    r.n_stimuli = n_stimuli;
    r.degrees_per_cell = degrees_per_cell;
    r.validate();
    return r;
  }
  SamplerConfig sampler() const {
    SamplerConfig s;
    s.batch_size = batch;
    s.threshold = threshold;
    s.seed = derive_seed(seed, "recommend");
    s.validate();
    return s;
  }
};

void add_common(CLI::App* cmd, Common& c, bool bandit_flags) {
  cmd->add_option("--seed", c.seed, "Master random seed")->capture_default_str();
  cmd->add_option("--grid", c.grid, "Grid side length N_g")->capture_default_str()->check(CLI::Range(2, 1024));
  if (!bandit_flags) return;
  cmd->add_option("--alpha", c.alpha, "Mean/minimum blend of the layout reward")->capture_default_str();
  cmd->add_option("--lambda", c.lambda, "UCB exploration coefficient")->capture_default_str();
  cmd->add_option("--batch", c.batch, "Candidate layouts per batch")->capture_default_str();
  cmd->add_option("--threshold", c.threshold, "Acceptance threshold on predicted reward")->capture_default_str();
  cmd->add_option("--degrees-per-cell", c.degrees_per_cell, "Visual angle of one grid cell")->capture_default_str();
  cmd->add_option("--luminance-anchors", c.luminance_anchors, "Luminance anchor CSV (factor,accuracy)");
  cmd->add_option("--isd-anchors", c.isd_anchors, "ISD anchor CSV (factor,accuracy)");
}

EpochDecoder make_decoder(const std::string& model_path, std::shared_ptr<DecoderModel>& holder) {
  if (model_path.empty() || model_path == "peak") return peak_decode;
  holder = std::make_shared<DecoderModel>(read_model(model_path));
  return [m = holder](const EegEpoch& e) { return predict(*m, e); };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene-aware SSVEP stimulus layout toolkit"};
  app.require_subcommand(1);

  // luminance
  Common lum;
  std::string lum_in, lum_out = "out/luminance";
  int width = 0, height = 0;
  double gamma = kDefaultGamma;
  auto* c_lum = app.add_subcommand("luminance", "Estimate a luminance grid from an image or clip");
  c_lum->add_option("input", lum_in, "PPM image, directory of PPM frames, or raw .rgb dump")->required();
  c_lum->add_option("--out", lum_out, "Output directory")->capture_default_str();
  c_lum->add_option("--width", width, "Frame width for raw input");
  c_lum->add_option("--height", height, "Frame height for raw input");
  c_lum->add_option("--gamma", gamma, "Display gamma")->capture_default_str();
  add_common(c_lum, lum, false);

  // train-bandit
  Common tb;
  std::string tb_scenes, tb_out = "out/bandit.json", tb_dataset;
  int tb_synthetic = 0, tb_per_scene = 50, tb_stimuli = kDefaultStimuli;
  bool tb_loo = false;
  auto* c_tb = app.add_subcommand("train-bandit", "Train the contextual bandit on constructed rewards");
  auto* src = c_tb->add_option_group("source");
  src->add_option("--scenes", tb_scenes, "Directory of PPM scenes");
  src->add_option("--synthetic", tb_synthetic, "Number of synthetic training samples");
  src->require_option(1);
  c_tb->add_option("--samples-per-scene", tb_per_scene, "Samples drawn per scene")->capture_default_str();
  c_tb->add_option("--stimuli", tb_stimuli, "Stimuli per layout")->capture_default_str();
  c_tb->add_flag("--loo", tb_loo, "Luminance-only reward (ISD excluded)");
  c_tb->add_option("--dataset-out", tb_dataset, "Also write the training triplets as JSON lines");
  c_tb->add_option("--out", tb_out, "State file")->capture_default_str();
  add_common(c_tb, tb, true);

  // recommend
  Common rc;
  std::string rc_state, rc_scene, rc_objects, rc_method = "joli", rc_out = "out/recommend", rc_kind = "mixed";
  int rc_stimuli = kDefaultStimuli;
  bool rc_ucb = false;
  auto* c_rc = app.add_subcommand("recommend", "Recommend a stimulus layout for a scene");
  c_rc->add_option("--state", rc_state, "Bandit state file (not needed for --method no)");
  c_rc->add_option("--scene", rc_scene, "PPM image or frame directory (default: synthetic scene)");
  c_rc->add_option("--scene-kind", rc_kind, "Synthetic scene kind: mixed, dark, split")->capture_default_str();
  c_rc->add_option("--objects", rc_objects, "Object cells as \"col,row col,row ...\" (default: random)");
  c_rc->add_option("--stimuli", rc_stimuli, "Number of random objects")->capture_default_str();
  c_rc->add_option("--method", rc_method, "joli, loo or no")->capture_default_str()->check(
      CLI::IsMember({"joli", "loo", "no"}, CLI::ignore_case));
  c_rc->add_flag("--ucb", rc_ucb, "Select by UCB score instead of predicted reward");
  c_rc->add_option("--out", rc_out, "Output directory")->capture_default_str();
  add_common(c_rc, rc, true);

  // simulate
  Common sm;
  int sm_rounds = 10, sm_bandit_samples = 10000;
  std::vector<double> sm_windows{3.0};
  std::vector<std::string> sm_methods;
  std::string sm_model = "peak", sm_out = "out/simulate", sm_kind = "mixed", sm_joli, sm_loo;
  auto* c_sm = app.add_subcommand("simulate", "Simulate online sessions and tabulate accuracy / ITR");
  c_sm->add_option("--rounds", sm_rounds, "Rounds (6 trials per method each)")->capture_default_str();
  c_sm->add_option("--window", sm_windows, "Decode window(s) in seconds")->capture_default_str();
  c_sm->add_option("--method", sm_methods, "Methods to run (default all)")
      ->check(CLI::IsMember({"joli", "loo", "no"}, CLI::ignore_case));
  c_sm->add_option("--model", sm_model, "Decoder model file, or 'peak' for the spectral peak picker")
      ->capture_default_str();
  c_sm->add_option("--scene-kind", sm_kind, "Synthetic scene kind: mixed, dark, split")->capture_default_str();
  c_sm->add_option("--bandit-samples", sm_bandit_samples, "Training samples for the bandits")->capture_default_str();
  c_sm->add_option("--joli-state", sm_joli, "Pre-trained JOLI bandit state");
  c_sm->add_option("--loo-state", sm_loo, "Pre-trained LOO bandit state");
  c_sm->add_option("--out", sm_out, "Output directory")->capture_default_str();
  add_common(c_sm, sm, true);

  // train-decoder
  Common td;
  std::string td_data, td_out = "out/decoder.json";
  int td_synthetic = 0;
  double td_quality = 1.0, td_duration = kOfflineWindow.length_s, td_holdout = 0.0;
  DecoderConfig td_cfg;
  td_cfg.epochs = 30;
  auto* c_td = app.add_subcommand("train-decoder", "Train the fuzzy-attention decoder");
  auto* tds = c_td->add_option_group("source");
  tds->add_option("--data", td_data, "Directory of .eeg epoch files");
  tds->add_option("--synthetic", td_synthetic, "Synthetic trials per class (full-drive responses)");
  tds->require_option(1);
  c_td->add_option("--quality", td_quality, "Quality of synthetic trials")->capture_default_str();
  c_td->add_option("--duration", td_duration, "Synthetic trial length in seconds")->capture_default_str();
  c_td->add_option("--holdout", td_holdout, "Fraction held out for evaluation")->capture_default_str();
  c_td->add_option("--epochs", td_cfg.epochs, "Training passes")->capture_default_str();
  c_td->add_option("--batch-size", td_cfg.batch_size, "Minibatch size")->capture_default_str();
  c_td->add_option("--rules", td_cfg.n_rules, "Fuzzy rules per layer")->capture_default_str();
  c_td->add_option("--hidden", td_cfg.hidden, "Hidden units")->capture_default_str();
  c_td->add_option("--lr", td_cfg.learning_rate, "Learning rate")->capture_default_str();
  c_td->add_option("--dropout", td_cfg.dropout, "Dropout rate")->capture_default_str();
  c_td->add_option("--out", td_out, "Model file")->capture_default_str();
  add_common(c_td, td, false);

  // spectrum
  Common sp;
  std::string sp_epoch, sp_channel = "Oz", sp_model, sp_out = "out/spectrum.csv";
  int sp_class = -1;
  double sp_quality = 1.0, sp_duration = 4.0;
  auto* c_sp = app.add_subcommand("spectrum", "Amplitude spectrum of an epoch or of decoder firing strengths");
  auto* sps = c_sp->add_option_group("source");
  sps->add_option("--epoch", sp_epoch, "Epoch file");
  sps->add_option("--synthetic-class", sp_class, "Synthesize one trial of this class")->check(CLI::Range(0, 5));
  sps->require_option(1);
  c_sp->add_option("--quality", sp_quality, "Quality of the synthetic trial")->capture_default_str();
  c_sp->add_option("--duration", sp_duration, "Synthetic trial length in seconds")->capture_default_str();
  c_sp->add_option("--channel", sp_channel, "Channel name, or 'mean' for the channel average")->capture_default_str();
  c_sp->add_option("--model", sp_model, "Decoder model: emit the temporal firing-strength spectrum instead");
  c_sp->add_option("--out", sp_out, "CSV file")->capture_default_str();
  add_common(c_sp, sp, false);

  // synth-eeg
  Common se;
  std::string se_out = "out/epochs";
  int se_per_class = 10;
  double se_quality = 1.0, se_duration = kOfflineWindow.length_s;
  auto* c_se = app.add_subcommand("synth-eeg", "Write synthetic labeled epoch files");
  c_se->add_option("--per-class", se_per_class, "Trials per class")->capture_default_str();
  c_se->add_option("--quality", se_quality, "Trial quality")->capture_default_str();
  c_se->add_option("--duration", se_duration, "Seconds per trial")->capture_default_str();
  c_se->add_option("--out", se_out, "Output directory")->capture_default_str();
  add_common(c_se, se, false);

  // loopback
  Common lb;
  LoopbackConfig lb_cfg;
  std::string lb_model = "peak";
  auto* c_lb = app.add_subcommand("loopback", "Run trials through the TCP event protocol on localhost");
  c_lb->add_option("--trials", lb_cfg.trials, "Number of trials")->capture_default_str();
  c_lb->add_option("--model", lb_model, "Decoder model file or 'peak'")->capture_default_str();
  c_lb->add_option("--window", lb_cfg.window.length_s, "Decode window in seconds")->capture_default_str();
  add_common(c_lb, lb, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*c_lum) {
      LuminanceConfig cfg;
      cfg.gamma = gamma;
      cfg.grid_size = lum.grid;
      const auto frames = load_frames(lum_in, width, height);
      const ClipLuminance clip = estimate_clip(frames, cfg);
      const LuminanceGrid grid = discretize(clip, cfg.grid_size, cfg.parallel);
      fs::create_directories(lum_out);
      write_text(fs::path(lum_out) / "grid.json", grid_to_json(grid));
      write_pgm16(fs::path(lum_out) / "luminance.pgm", clip.map);
      log("luminance: " + std::to_string(frames.size()) + " frame(s), grid " + std::to_string(grid.n_g) + "x" +
          std::to_string(grid.n_g) + " -> " + lum_out);
    } else if (*c_tb) {
      const RewardCurves curves = tb.curves();
      RewardConfig reward = tb.reward(tb_stimuli);
      reward.include_isd = !tb_loo;
      WorkloadConfig wl;
      wl.grid_size = tb.grid;
      wl.n_stimuli = tb_stimuli;
      wl.samples_per_scene = tb_per_scene;
      std::vector<TrainingSample> data;
      if (!tb_scenes.empty()) {
        if (!fs::is_directory(tb_scenes)) fail(ErrorKind::kInput, "not a directory: " + tb_scenes);
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(tb_scenes))
          if (e.path().extension() == ".ppm") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        if (files.empty()) fail(ErrorKind::kInput, "no .ppm scenes in " + tb_scenes);
        Rng rng = make_rng(tb.seed, "train_bandit_scenes");
        LuminanceConfig lc;
        lc.grid_size = tb.grid;
        for (const auto& f : files) {
          const std::vector<RgbFrame> frames{read_ppm(f)};
          ContextGrid ctx{estimate_grid(frames, lc), {}};
          for (int i = 0; i < tb_per_scene; ++i) {
            ctx.objects = random_objects(tb.grid, tb_stimuli, rng);
            Layout arm = random_layout(ctx, reward, rng);
            const double r = true_reward(ctx, arm, curves, reward);
            data.push_back({ctx, std::move(arm), r});
          }
        }
      } else {
        if (tb_synthetic <= 0) fail(ErrorKind::kInput, "--synthetic needs a positive sample count");
        data = synthetic_training_set(tb_synthetic, wl, curves, reward, tb.seed);
      }
      const BanditState state = train(data, curves, reward, tb.lambda);
      ensure_parent(tb_out);
      write_state(tb_out, state);
      if (!tb_dataset.empty()) {
        std::string lines;
        for (const auto& s : data) lines += sample_to_jsonl(s) + "\n";
        write_text(tb_dataset, lines);
      }
      log("train-bandit: " + std::to_string(state.observation_count()) + " samples, reward " +
          (tb_loo ? "luminance+SOD" : "luminance+ISD+SOD") + " -> " + tb_out);
      // Recovery diagnostic: refit on the same features with a known linear
      // reward r = x.theta* + N(0, 0.05).
      Rng rng = make_rng(tb.seed, "recovery");
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      std::normal_distribution<double> noise(0.0, 0.05);
      Eigen::VectorXd theta_star(3 * tb_stimuli);
      for (Eigen::Index i = 0; i < theta_star.size(); ++i) theta_star[i] = u(rng);
      std::vector<FeatureSample> fsamples;
      fsamples.reserve(data.size());
      for (const auto& s : data) {
        FeatureVector x = build_features(s.context, s.arm, curves, reward);
        const double r = x.dot(theta_star) + noise(rng);
        fsamples.push_back({std::move(x), r});
      }
      const BanditState rec = train_features(fsamples, tb.lambda);
      char buf[160];
      std::snprintf(buf, sizeof buf, "recovery check: |theta_hat - theta*|_2 = %.4f over %zu samples",
                    (rec.theta() - theta_star).norm(), fsamples.size());
      log(buf);
    } else if (*c_rc) {
      const Method method = parse_method(rc_method);
      const RewardCurves curves = rc.curves();
      Rng rng = make_rng(rc.seed, "recommend_context");
      ContextGrid ctx;
      LuminanceConfig lc;
      lc.grid_size = rc.grid;
      if (!rc_scene.empty()) {
        ctx.grid = estimate_grid(load_frames(rc_scene, 0, 0), lc);
      } else {
        WorkloadConfig wl;
        wl.scene = parse_scene_kind(rc_kind);
        wl.grid_size = rc.grid;
        ctx.grid = estimate_grid(synth_scene(wl.scene, wl.scene_config, rng), lc);
      }
      ctx.objects = rc_objects.empty() ? random_objects(rc.grid, rc_stimuli, rng) : parse_objects(rc_objects);
      ctx.validate();
      const RewardConfig reward = rc.reward(ctx.n_stimuli());
      SamplerConfig sc = rc.sampler();
      if (rc_ucb) sc.selection = Selection::kUcb;
      Recommendation r;
      if (method == Method::kNo) {
        r.layout = no_layout(ctx);
      } else {
        if (rc_state.empty()) fail(ErrorKind::kInput, "--state is required for method " + rc_method);
        BanditState state = read_state(rc_state);
        if (state.dim() != 3 * ctx.n_stimuli())
          fail(ErrorKind::kState, "bandit state has dimension " + std::to_string(state.dim()) + ", context needs " +
                                      std::to_string(3 * ctx.n_stimuli()));
        state.set_lambda(rc.lambda);
        r = method == Method::kJoli ? recommend(state, ctx, curves, reward, sc)
                                    : loo_recommend(state, ctx, curves, reward, sc);
      }
      fs::create_directories(rc_out);
      write_text(fs::path(rc_out) / "layout.json", recommendation_to_json(r));
      write_text(fs::path(rc_out) / "grid.json", grid_to_json(ctx.grid));
      write_pgm16(fs::path(rc_out) / "overlay.pgm", overlay(ctx, r.layout, 16));
      std::cout << recommendation_to_json(r);
    } else if (*c_sm) {
      SessionConfig cfg;
      cfg.rounds = sm_rounds;
      cfg.windows = sm_windows;
      cfg.seed = sm.seed;
      if (!sm_methods.empty()) {
        cfg.methods.clear();
        for (const auto& m : sm_methods) cfg.methods.push_back(parse_method(m));
      }
      cfg.workload.scene = parse_scene_kind(sm_kind);
      cfg.workload.grid_size = sm.grid;
      cfg.reward = sm.reward(cfg.workload.n_stimuli);
      cfg.sampler = sm.sampler();
      const RewardCurves curves = sm.curves();
      SessionModels models;
      if (!sm_joli.empty() && !sm_loo.empty()) {
        models = {curves, read_state(sm_joli), read_state(sm_loo)};
      } else {
        log("simulate: training bandits on " + std::to_string(sm_bandit_samples) + " synthetic samples");
        models = train_session_models(sm_bandit_samples, cfg.workload, curves, cfg.reward, sm.lambda,
                                      derive_seed(sm.seed, "session_bandits"));
      }
      std::shared_ptr<DecoderModel> holder;
      const EpochDecoder decode = make_decoder(sm_model, holder);
      const SessionResult res = simulate_session(models, decode, cfg);
      fs::create_directories(sm_out);
      const std::string table = metrics_to_csv(res.metrics);
      write_text(fs::path(sm_out) / "table.csv", table);
      std::string lines;
      for (const auto& t : res.trials) lines += trial_to_jsonl(t) + "\n";
      write_text(fs::path(sm_out) / "trials.jsonl", lines);
      std::cout << table;
      log("simulate: " + std::to_string(res.trials.size()) + " trial records -> " + sm_out);
    } else if (*c_td) {
      std::vector<EegEpoch> data;
      if (!td_data.empty()) {
        if (!fs::is_directory(td_data)) fail(ErrorKind::kInput, "not a directory: " + td_data);
        data = read_epoch_dir(td_data);
      } else {
        if (td_synthetic <= 0) fail(ErrorKind::kInput, "--synthetic needs a positive trial count");
        data = synth_dataset(td_synthetic, td_quality, td_duration, SynthConfig::high_snr(),
                             derive_seed(td.seed, "train_decoder_data"));
      }
      if (data.empty()) fail(ErrorKind::kInput, "training set is empty");
      std::vector<EegEpoch> held;
      if (td_holdout > 0.0) {
        Rng rng = make_rng(td.seed, "holdout");
        std::shuffle(data.begin(), data.end(), rng);
        const auto n_held = static_cast<std::size_t>(td_holdout * static_cast<double>(data.size()));
        held.assign(data.end() - static_cast<std::ptrdiff_t>(n_held), data.end());
        data.resize(data.size() - n_held);
      }
      td_cfg.seed = td.seed;
      TrainReport rep;
      const DecoderModel model = train_decoder(data, td_cfg, &rep, [](int pass, double loss, double acc) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "pass %3d  loss %.4f  train accuracy %.3f", pass + 1, loss, acc);
        log(buf);
      });
      ensure_parent(td_out);
      write_model(td_out, model);
      char buf[128];
      std::snprintf(buf, sizeof buf, "train-decoder: %zu trials, %zu passes, %.1f s -> %s", data.size(), rep.loss.size(), rep.seconds, td_out.c_str());
      log(buf);
      if (!held.empty()) {
        std::snprintf(buf, sizeof buf, "held-out accuracy %.3f over %zu trials", evaluate_accuracy(model, held),
                      held.size());
        log(buf);
      }
    } else if (*c_sp) {
      EegEpoch epoch;
      if (!sp_epoch.empty()) {
        epoch = read_epoch(sp_epoch);
      } else {
        Rng rng = make_rng(sp.seed, "spectrum");
        epoch = synth_trial(sp_class, sp_quality, sp_duration, SynthConfig::high_snr(), rng);
      }
      Spectrum s;
      if (!sp_model.empty()) {
        const DecoderModel model = read_model(sp_model);
        const FiringTrace tr = firing_trace(model, epoch);
        std::vector<Spectrum> parts;
        for (Eigen::Index j = 0; j < tr.temporal[0].cols(); ++j) {
          const Eigen::VectorXd col = tr.temporal[0].col(j);
          parts.push_back(amplitude_spectrum(std::span(col.data(), static_cast<std::size_t>(col.size())), tr.sample_rate));
        }
        s = average_spectra(parts);
      } else if (sp_channel == "mean") {
        std::vector<Spectrum> parts;
        for (int c = 0; c < epoch.channels; ++c) parts.push_back(amplitude_spectrum(epoch.row(c), epoch.sample_rate));
        s = average_spectra(parts);
      } else {
        const int c = channel_index(sp_channel);
        if (c >= epoch.channels) fail(ErrorKind::kInput, "epoch has no channel " + sp_channel);
        s = amplitude_spectrum(epoch.row(c), epoch.sample_rate);
      }
      write_text(sp_out, spectrum_to_csv(s));
      const auto top = s.top_bins(2, 1.0, s.frequency.back());
      char buf[128];
      std::snprintf(buf, sizeof buf, "spectrum: bin width %.4f Hz, strongest bins %.2f and %.2f Hz -> %s", s.bin_width,
                    s.frequency[top.at(0)], s.frequency[top.at(1)], sp_out.c_str());
      log(buf);
    } else if (*c_se) {
      const auto data = synth_dataset(se_per_class, se_quality, se_duration, SynthConfig::high_snr(),
                                      derive_seed(se.seed, "synth_eeg"));
      fs::create_directories(se_out);
      for (std::size_t i = 0; i < data.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "trial_%05zu.eeg", i);
        write_epoch(fs::path(se_out) / name, data[i]);
      }
      log("synth-eeg: " + std::to_string(data.size()) + " epochs -> " + se_out);
    } else if (*c_lb) {
      lb_cfg.seed = lb.seed;
      std::shared_ptr<DecoderModel> holder;
      const LoopbackReport rep = run_loopback(make_decoder(lb_model, holder), lb_cfg);
      std::printf("trials %d  results %d  correct %d  epoch samples %d\n", rep.trials, rep.results, rep.correct,
                  rep.epoch_samples);
      if (!rep.error.empty()) fail(ErrorKind::kProtocol, rep.error);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.kind()) {
      case ErrorKind::kState: return kExitState;
      case ErrorKind::kProtocol: return kExitProtocol;
      default: return kExitInput;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return 0;
}
