#include "saslo/decoder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "saslo/error.hpp"
#include "saslo/rng.hpp"
#include "saslo/spectrum.hpp"
#include "saslo/synth.hpp"

namespace saslo {

namespace {
constexpr double kEnergyFloor = 1e-8;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
constexpr int kModelVersion = 1;
}  // namespace

void DecoderConfig::validate(double sample_rate) const {
  require(n_rules >= 1, "decoder needs at least one fuzzy rule");
  for (const Band& b : bands)
    require(b.low_hz > 0.0 && b.high_hz > b.low_hz && b.high_hz < sample_rate / 2.0,
            "decoder band edges must satisfy 0 < low < high < Nyquist");
  require(fir_order >= 2 && fir_order % 2 == 0, "FIR order must be even and >= 2");
  require(decimation >= 1, "decimation factor must be >= 1");
  for (const Band& b : bands)
    require(b.high_hz < sample_rate / decimation / 2.0, "band exceeds the decimated Nyquist frequency");
  require(frame >= 1 && hop >= 1, "frame and hop must be positive");
  require(hidden >= 1, "hidden layer must have at least one unit");
  require(n_classes >= 2, "need at least two classes");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning rate must be positive");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  require(epochs >= 1 && batch_size >= 1, "epochs and batch size must be positive");
}

std::vector<std::span<double>> DecoderModel::tensors() {
  std::vector<std::span<double>> out;
  for (int b = 0; b < 2; ++b) {
    for (auto t : tal[b].tensors()) out.push_back(t);
    for (auto t : sal[b].tensors()) out.push_back(t);
  }
  for (Eigen::MatrixXd* m : {&w1, &w2}) out.emplace_back(m->data(), static_cast<std::size_t>(m->size()));
  for (Eigen::VectorXd* v : {&b1, &b2}) out.emplace_back(v->data(), static_cast<std::size_t>(v->size()));
  return out;
}

std::vector<std::span<const double>> DecoderModel::tensors() const {
  auto mut = const_cast<DecoderModel*>(this)->tensors();
  return {mut.begin(), mut.end()};
}

std::size_t DecoderModel::parameter_count() const {
  std::size_t n = 0;
  for (auto t : tensors()) n += t.size();
  return n;
}

void DecoderModel::set_zero() {
  for (auto t : tensors()) std::fill(t.begin(), t.end(), 0.0);
}

void DecoderModel::validate() const {
  config.validate(sample_rate);
  require(channels >= 1, "decoder model has no channels");
  for (int b = 0; b < 2; ++b) {
    require(input_scale[b] > 0.0 && std::isfinite(input_scale[b]), "input scale must be positive");
    tal[b].validate();
    sal[b].validate();
    require(tal[b].dim == channels && tal[b].rules == config.n_rules, "temporal layer shape mismatch");
    require(sal[b].dim == config.frame && sal[b].rules == config.n_rules, "spatial layer shape mismatch");
  }
  require(w1.rows() == config.hidden && w1.cols() == feature_count(), "hidden weights have wrong shape");
  require(b1.size() == config.hidden, "hidden bias has wrong size");
  require(w2.rows() == config.n_classes && w2.cols() == config.hidden, "output weights have wrong shape");
  require(b2.size() == config.n_classes, "output bias has wrong size");
  for (auto t : tensors())
    for (double v : t) require(std::isfinite(v), "decoder model has non-finite parameters");
}

DecoderModel init_decoder(const DecoderConfig& config, int channels, double sample_rate, std::uint64_t seed) {
  config.validate(sample_rate);
  require(channels >= 1, "decoder needs at least one channel");
  DecoderModel m;
  m.config = config;
  m.channels = channels;
  m.sample_rate = sample_rate;
  Rng rng = make_rng(seed, "decoder_init");
  for (int b = 0; b < 2; ++b) {
    m.tal[b] = random_fuzzy_layer(channels, config.n_rules, rng, 0.5, false);
    m.sal[b] = random_fuzzy_layer(config.frame, config.n_rules, rng, 0.5, true);
  }
  const int f = m.feature_count();
  std::normal_distribution<double> n01(0.0, 1.0);
  m.w1.resize(config.hidden, f);
  const double s1 = std::sqrt(2.0 / f);
  for (Eigen::Index i = 0; i < m.w1.size(); ++i) m.w1.data()[i] = s1 * n01(rng);
  m.b1 = Eigen::VectorXd::Zero(config.hidden);
  m.w2.resize(config.n_classes, config.hidden);
  const double s2 = std::sqrt(1.0 / config.hidden);
  for (Eigen::Index i = 0; i < m.w2.size(); ++i) m.w2.data()[i] = s2 * n01(rng);
  m.b2 = Eigen::VectorXd::Zero(config.n_classes);
  return m;
}

BandSignals preprocess(const EegEpoch& epoch, const DecoderConfig& config, bool parallel) {
  epoch.validate();
  config.validate(epoch.sample_rate);
  EegEpoch e = epoch;
  average_reference(e);
  remove_artifacts(e);
  BandSignals out;
  const int d = config.decimation;
  const int n = (e.samples + d - 1) / d;
  for (int b = 0; b < 2; ++b) {
    const EegEpoch f =
        filter_decimate(e, design_bandpass(config.bands[b], e.sample_rate, config.fir_order), d, parallel);
    out[b] = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        f.data.data(), e.channels, n);
  }
  return out;
}

int frame_count(int samples, int frame, int hop) {
  if (samples <= frame) return 1;
  return (samples - frame) / hop + 1;
}

namespace {

struct BandCache {
  FuzzyCache tal;
  Eigen::MatrixXd y;
  FuzzyCache sal;
  int frames = 1;
  Eigen::MatrixXd sq_norm;  // rules x (frames * C)
  Eigen::MatrixXd energy;   // rules x C
};

struct Forward {
  std::array<BandCache, 2> band;
  Eigen::VectorXd f, pre, h, z, p;
};

// Frame column m * C + c holds channel c, samples [m * hop, m * hop + frame).
Eigen::MatrixXd to_frames(const Eigen::MatrixXd& y, int frame, int hop, int frames) {
  const auto c_count = y.rows();
  const auto t_count = y.cols();
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(frame, frames * c_count);
  for (int m = 0; m < frames; ++m)
    for (Eigen::Index c = 0; c < c_count; ++c)
      for (int k = 0; k < frame; ++k) {
        const Eigen::Index t = static_cast<Eigen::Index>(m) * hop + k;
        if (t < t_count) u(k, m * c_count + c) = y(c, t);
      }
  return u;
}

void from_frames(const Eigen::MatrixXd& g_u, int hop, int frames, Eigen::MatrixXd& g_y) {
  const auto c_count = g_y.rows();
  const auto t_count = g_y.cols();
  const auto frame = g_u.rows();
  for (int m = 0; m < frames; ++m)
    for (Eigen::Index c = 0; c < c_count; ++c)
      for (Eigen::Index k = 0; k < frame; ++k) {
        const Eigen::Index t = static_cast<Eigen::Index>(m) * hop + k;
        if (t < t_count) g_y(c, t) += g_u(k, m * c_count + c);
      }
}

void check_bands(const DecoderModel& model, const BandSignals& bands) {
  for (const auto& x : bands) {
    if (x.rows() != model.channels)
      fail(ErrorKind::kInput, "epoch has " + std::to_string(x.rows()) + " channels, decoder expects " +
                                  std::to_string(model.channels));
    require(x.cols() >= 1, "empty epoch");
  }
  require(bands[0].cols() == bands[1].cols(), "band signals differ in length");
}

void forward(const DecoderModel& model, const BandSignals& bands, const Eigen::VectorXd* mask, Forward& fw) {
  check_bands(model, bands);
  const int c_count = model.channels;
  const int r = model.config.n_rules;
  const int k = model.config.frame;
  fw.f.resize(model.feature_count());
  for (int b = 0; b < 2; ++b) {
    BandCache& bc = fw.band[b];
    fuzzy_forward(model.tal[b], bands[b] / model.input_scale[b], bc.tal);
    bc.y = fuzzy_combine(bc.tal);
    bc.frames = frame_count(static_cast<int>(bc.y.cols()), k, model.config.hop);
    fuzzy_forward(model.sal[b], to_frames(bc.y, k, model.config.hop, bc.frames), bc.sal);
    bc.sq_norm.resize(r, bc.frames * c_count);
    for (int j = 0; j < r; ++j) bc.sq_norm.row(j) = bc.sal.proj[j].colwise().squaredNorm();
    const Eigen::MatrixXd weighted = bc.sal.w.cwiseProduct(bc.sq_norm);
    bc.energy = Eigen::MatrixXd::Zero(r, c_count);
    for (int m = 0; m < bc.frames; ++m) bc.energy += weighted.middleCols(m * c_count, c_count);
    bc.energy /= static_cast<double>(bc.frames) * k;
    for (int c = 0; c < c_count; ++c)
      for (int j = 0; j < r; ++j) fw.f[(b * c_count + c) * r + j] = std::log(kEnergyFloor + bc.energy(j, c));
  }
  fw.pre = model.w1 * fw.f + model.b1;
  fw.h = fw.pre.cwiseMax(0.0);
  if (mask) fw.h = fw.h.cwiseProduct(*mask);
  fw.z = model.w2 * fw.h + model.b2;
  fw.p = (fw.z.array() - fw.z.maxCoeff()).exp();
  fw.p /= fw.p.sum();
}

void backward(const DecoderModel& model, const Forward& fw, int label, const Eigen::VectorXd* mask,
              DecoderModel& grad) {
  const int c_count = model.channels;
  const int r = model.config.n_rules;
  const int k = model.config.frame;
  Eigen::VectorXd g_z = fw.p;
  g_z[label] -= 1.0;
  grad.w2.noalias() += g_z * fw.h.transpose();
  grad.b2 += g_z;
  Eigen::VectorXd g_pre = model.w2.transpose() * g_z;
  if (mask) g_pre = g_pre.cwiseProduct(*mask);
  for (Eigen::Index i = 0; i < g_pre.size(); ++i)
    if (fw.pre[i] <= 0.0) g_pre[i] = 0.0;
  grad.w1.noalias() += g_pre * fw.f.transpose();
  grad.b1 += g_pre;
  const Eigen::VectorXd g_f = model.w1.transpose() * g_pre;

  for (int b = 0; b < 2; ++b) {
    const BandCache& bc = fw.band[b];
    const double norm = 1.0 / (static_cast<double>(bc.frames) * k);
    Eigen::MatrixXd g_e(r, c_count);
    for (int c = 0; c < c_count; ++c)
      for (int j = 0; j < r; ++j)
        g_e(j, c) = g_f[(b * c_count + c) * r + j] / (kEnergyFloor + bc.energy(j, c));
    const Eigen::Index cols = static_cast<Eigen::Index>(bc.frames) * c_count;
    Eigen::MatrixXd g_w(r, cols);
    std::vector<Eigen::MatrixXd> g_proj(r);
    for (int j = 0; j < r; ++j) {
      Eigen::RowVectorXd scale(cols);
      for (int m = 0; m < bc.frames; ++m)
        for (int c = 0; c < c_count; ++c) {
          const Eigen::Index col = static_cast<Eigen::Index>(m) * c_count + c;
          g_w(j, col) = g_e(j, c) * bc.sq_norm(j, col) * norm;
          scale[col] = 2.0 * g_e(j, c) * bc.sal.w(j, col) * norm;
        }
      g_proj[j] = bc.sal.proj[j].array().rowwise() * scale.array();
    }
    Eigen::MatrixXd g_u;
    fuzzy_backward(model.sal[b], bc.sal, g_w, g_proj, grad.sal[b], &g_u);
    Eigen::MatrixXd g_y = Eigen::MatrixXd::Zero(bc.y.rows(), bc.y.cols());
    from_frames(g_u, model.config.hop, bc.frames, g_y);

    Eigen::MatrixXd g_wt(r, bc.y.cols());
    std::vector<Eigen::MatrixXd> g_pt(r);
    for (int j = 0; j < r; ++j) {
      g_wt.row(j) = bc.tal.proj[j].cwiseProduct(g_y).colwise().sum();
      g_pt[j] = g_y.array().rowwise() * bc.tal.w.row(j).array();
    }
    fuzzy_backward(model.tal[b], bc.tal, g_wt, g_pt, grad.tal[b], nullptr);
  }
}

double cross_entropy(const Forward& fw, int label) {
  const double zmax = fw.z.maxCoeff();
  return std::log((fw.z.array() - zmax).exp().sum()) + zmax - fw.z[label];
}

}  // namespace

Eigen::VectorXd decoder_features(const DecoderModel& model, const BandSignals& bands) {
  Forward fw;
  forward(model, bands, nullptr, fw);
  return fw.f;
}

double loss_and_gradient(const DecoderModel& model, const BandSignals& bands, int label,
                         const Eigen::VectorXd* dropout_mask, DecoderModel* grad) {
  require(label >= 0 && label < model.config.n_classes, "label out of range");
  Forward fw;
  forward(model, bands, dropout_mask, fw);
  if (grad) backward(model, fw, label, dropout_mask, *grad);
  return cross_entropy(fw, label);
}

Eigen::VectorXd class_probabilities(const DecoderModel& model, const BandSignals& bands) {
  Forward fw;
  forward(model, bands, nullptr, fw);
  return fw.p;
}

Eigen::VectorXd classify(const DecoderModel& model, const EegEpoch& epoch) {
  if (epoch.channels != model.channels)
    fail(ErrorKind::kInput, "epoch has " + std::to_string(epoch.channels) + " channels, decoder expects " +
                                std::to_string(model.channels));
  require(std::abs(epoch.sample_rate - model.sample_rate) < 1e-9, "epoch sample rate differs from the model's");
  return class_probabilities(model, preprocess(epoch, model.config, false));
}

int predict(const DecoderModel& model, const EegEpoch& epoch) {
  Eigen::Index k = 0;
  classify(model, epoch).maxCoeff(&k);
  return static_cast<int>(k);
}

DecoderModel train_decoder(const std::vector<EegEpoch>& dataset, const DecoderConfig& config,
                           TrainReport* report, const EpochCallback& on_pass) {
  const auto t0 = std::chrono::steady_clock::now();
  require(!dataset.empty(), "decoder training set is empty");
  const int channels = dataset.front().channels;
  const double fs = dataset.front().sample_rate;
  config.validate(fs);
  std::vector<int> per_class(config.n_classes, 0);
  for (const auto& e : dataset) {
    require(e.channels == channels, "training epochs differ in channel count");
    require(std::abs(e.sample_rate - fs) < 1e-9, "training epochs differ in sample rate");
    require(e.label >= 0 && e.label < config.n_classes, "training epoch has no valid label");
    ++per_class[e.label];
  }
  for (int k = 0; k < config.n_classes; ++k)
    if (per_class[k] == 0) fail(ErrorKind::kInput, "training set has no examples of class " + std::to_string(k));

  const auto n = static_cast<std::ptrdiff_t>(dataset.size());
  std::vector<BandSignals> pre(dataset.size());
#pragma omp parallel for schedule(dynamic) if (config.parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) pre[i] = preprocess(dataset[i], config, false);

  DecoderModel model = init_decoder(config, channels, fs, config.seed);
  for (int b = 0; b < 2; ++b) {
    double ss = 0.0;
    std::size_t count = 0;
    for (const auto& p : pre) {
      ss += p[b].squaredNorm();
      count += static_cast<std::size_t>(p[b].size());
    }
    const double rms = std::sqrt(ss / static_cast<double>(count));
    model.input_scale[b] = rms > 0.0 ? rms : 1.0;
  }

  DecoderModel zero = model;
  zero.set_zero();
  const int batch = std::min<int>(config.batch_size, static_cast<int>(n));
  std::vector<DecoderModel> slot(batch, zero);
  std::vector<double> slot_loss(batch, 0.0);
  std::vector<int> slot_hit(batch, 0);
  std::vector<Eigen::VectorXd> masks(batch);
  DecoderModel total = zero;
  DecoderModel adam_m = zero;
  DecoderModel adam_v = zero;
  auto params = model.tensors();
  auto grads = total.tensors();
  auto ms = adam_m.tensors();
  auto vs = adam_v.tensors();

  Rng rng = make_rng(config.seed, "decoder_train");
  std::bernoulli_distribution keep(1.0 - config.dropout);
  const double keep_scale = 1.0 / (1.0 - config.dropout);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  long step = 0;

  for (int pass = 0; pass < config.epochs; ++pass) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    int hits = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const int bsz = static_cast<int>(std::min<std::size_t>(batch, order.size() - start));
      for (int i = 0; i < bsz; ++i) {
        masks[i].resize(config.hidden);
        for (int h = 0; h < config.hidden; ++h) masks[i][h] = keep(rng) ? keep_scale : 0.0;
      }
#pragma omp parallel for schedule(static) if (config.parallel)
      for (int i = 0; i < bsz; ++i) {
        slot[i].set_zero();
        const std::size_t idx = order[start + i];
        Forward fw;
        const Eigen::VectorXd* mask = config.dropout > 0.0 ? &masks[i] : nullptr;
        forward(model, pre[idx], mask, fw);
        backward(model, fw, dataset[idx].label, mask, slot[i]);
        slot_loss[i] = cross_entropy(fw, dataset[idx].label);
        Eigen::Index arg = 0;
        fw.p.maxCoeff(&arg);
        slot_hit[i] = arg == dataset[idx].label ? 1 : 0;
      }
      total.set_zero();
      for (int i = 0; i < bsz; ++i) {
        auto src = slot[i].tensors();
        for (std::size_t t = 0; t < grads.size(); ++t)
          for (std::size_t e = 0; e < grads[t].size(); ++e) grads[t][e] += src[t][e];
        loss_sum += slot_loss[i];
        hits += slot_hit[i];
      }
      ++step;
      const double inv_b = 1.0 / bsz;
      const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
      for (std::size_t t = 0; t < params.size(); ++t)
        for (std::size_t e = 0; e < params[t].size(); ++e) {
          const double g = grads[t][e] * inv_b;
          ms[t][e] = kAdamBeta1 * ms[t][e] + (1.0 - kAdamBeta1) * g;
          vs[t][e] = kAdamBeta2 * vs[t][e] + (1.0 - kAdamBeta2) * g * g;
          params[t][e] -= config.learning_rate * (ms[t][e] / c1) / (std::sqrt(vs[t][e] / c2) + kAdamEps);
        }
    }
    const double loss = loss_sum / static_cast<double>(n);
    const double acc = static_cast<double>(hits) / static_cast<double>(n);
    if (!std::isfinite(loss)) fail(ErrorKind::kState, "decoder training diverged");
    if (report) {
      report->loss.push_back(loss);
      report->train_accuracy.push_back(acc);
    }
    if (on_pass) on_pass(pass, loss, acc);
  }
  if (report) report->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return model;
}

double evaluate_accuracy(const DecoderModel& model, const std::vector<EegEpoch>& dataset) {
  require(!dataset.empty(), "evaluation set is empty");
  const auto n = static_cast<std::ptrdiff_t>(dataset.size());
  std::vector<int> hit(dataset.size(), 0);
#pragma omp parallel for schedule(dynamic) if (model.config.parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) hit[i] = predict(model, dataset[i]) == dataset[i].label ? 1 : 0;
  return static_cast<double>(std::accumulate(hit.begin(), hit.end(), 0)) / static_cast<double>(n);
}

FiringTrace firing_trace(const DecoderModel& model, const EegEpoch& epoch) {
  require(epoch.channels == model.channels, "epoch channel count differs from the model's");
  Forward fw;
  forward(model, preprocess(epoch, model.config, false), nullptr, fw);
  FiringTrace tr;
  tr.sample_rate = model.decimated_rate();
  for (int b = 0; b < 2; ++b) {
    const BandCache& bc = fw.band[b];
    tr.temporal[b] = bc.tal.w.transpose();
    tr.spatial[b] = Eigen::MatrixXd::Zero(model.channels, model.config.n_rules);
    for (int m = 0; m < bc.frames; ++m)
      tr.spatial[b] += bc.sal.w.middleCols(static_cast<Eigen::Index>(m) * model.channels, model.channels).transpose();
    tr.spatial[b] /= bc.frames;
  }
  return tr;
}

namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols)
    fail(ErrorKind::kState, "model matrix has inconsistent shape");
  return Eigen::Map<const Eigen::MatrixXd>(data.data(), rows, cols);
}

json layer_json(const FuzzyLayer& l) {
  json q = json::array(), v = json::array();
  for (const auto& m : l.query) q.push_back(matrix_json(m));
  for (const auto& m : l.value) v.push_back(matrix_json(m));
  return {{"dim", l.dim}, {"rules", l.rules}, {"centers", matrix_json(l.centers)},
          {"log_variance", matrix_json(l.log_var)}, {"query", q}, {"value", v}};
}

FuzzyLayer layer_from(const json& j) {
  FuzzyLayer l;
  l.dim = j.at("dim").get<int>();
  l.rules = j.at("rules").get<int>();
  l.centers = matrix_from(j.at("centers"));
  l.log_var = matrix_from(j.at("log_variance"));
  for (const auto& m : j.at("query")) l.query.push_back(matrix_from(m));
  for (const auto& m : j.at("value")) l.value.push_back(matrix_from(m));
  return l;
}

}  // namespace

std::string model_to_json(const DecoderModel& m) {
  const auto& c = m.config;
  json cfg = {{"n_rules", c.n_rules},
              {"bands", {{c.bands[0].low_hz, c.bands[0].high_hz}, {c.bands[1].low_hz, c.bands[1].high_hz}}},
              {"fir_order", c.fir_order},
              {"decimation", c.decimation},
              {"frame", c.frame},
              {"hop", c.hop},
              {"hidden", c.hidden},
              {"n_classes", c.n_classes},
              {"learning_rate", c.learning_rate},
              {"dropout", c.dropout},
              {"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"seed", c.seed}};
  json j = {{"format", "saslo-fuzzy-decoder"},
            {"version", kModelVersion},
            {"config", cfg},
            {"channels", m.channels},
            {"sample_rate", m.sample_rate},
            {"input_scale", m.input_scale},
            {"tal", {layer_json(m.tal[0]), layer_json(m.tal[1])}},
            {"sal", {layer_json(m.sal[0]), layer_json(m.sal[1])}},
            {"w1", matrix_json(m.w1)},
            {"b1", matrix_json(m.b1)},
            {"w2", matrix_json(m.w2)},
            {"b2", matrix_json(m.b2)}};
  return j.dump();
}

DecoderModel model_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "saslo-fuzzy-decoder")
      fail(ErrorKind::kState, "not a decoder model file");
    if (j.at("version").get<int>() != kModelVersion)
      fail(ErrorKind::kState, "unsupported decoder model version " + std::to_string(j.at("version").get<int>()));
    DecoderModel m;
    const json& cfg = j.at("config");
    auto& c = m.config;
    c.n_rules = cfg.at("n_rules").get<int>();
    for (int b = 0; b < 2; ++b)
      c.bands[b] = {cfg.at("bands").at(b).at(0).get<double>(), cfg.at("bands").at(b).at(1).get<double>()};
    c.fir_order = cfg.at("fir_order").get<int>();
    c.decimation = cfg.at("decimation").get<int>();
    c.frame = cfg.at("frame").get<int>();
    c.hop = cfg.at("hop").get<int>();
    c.hidden = cfg.at("hidden").get<int>();
    c.n_classes = cfg.at("n_classes").get<int>();
    c.learning_rate = cfg.at("learning_rate").get<double>();
    c.dropout = cfg.at("dropout").get<double>();
    c.epochs = cfg.at("epochs").get<int>();
    c.batch_size = cfg.at("batch_size").get<int>();
    c.seed = cfg.at("seed").get<std::uint64_t>();
    m.channels = j.at("channels").get<int>();
    m.sample_rate = j.at("sample_rate").get<double>();
    m.input_scale = j.at("input_scale").get<std::array<double, 2>>();
    for (int b = 0; b < 2; ++b) {
      m.tal[b] = layer_from(j.at("tal").at(b));
      m.sal[b] = layer_from(j.at("sal").at(b));
    }
    m.w1 = matrix_from(j.at("w1"));
    m.b1 = matrix_from(j.at("b1"));
    m.w2 = matrix_from(j.at("w2"));
    m.b2 = matrix_from(j.at("b2"));
    m.validate();
    return m;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kState) throw;
    fail(ErrorKind::kState, std::string("invalid decoder model: ") + e.what());
  } catch (const std::exception& e) {
    fail(ErrorKind::kState, std::string("invalid decoder model: ") + e.what());
  }
}

void write_model(const std::filesystem::path& path, const DecoderModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kInput, "cannot write " + path.string());
  out << model_to_json(model) << '\n';
}

DecoderModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kInput, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

int peak_decode(const EegEpoch& epoch) {
  epoch.validate();
  EegEpoch e = epoch;
  average_reference(e);
  std::vector<Spectrum> spectra;
  spectra.reserve(e.channels);
  for (int c = 0; c < e.channels; ++c) spectra.push_back(amplitude_spectrum(e.row(c), e.sample_rate));
  const Spectrum s = average_spectra(spectra);
  int best = 0;
  double best_score = -1.0;
  for (int k = 0; k < kClasses; ++k) {
    const double f = kStimulusFrequencies[k];
    const double score = s.amplitude[s.bin_of(f)] + s.amplitude[s.bin_of(2.0 * f)];
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

}  // namespace saslo
