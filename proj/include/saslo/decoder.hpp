#pragma once

// Dual-band fuzzy-attention SSVEP classifier.
//
// Per band: average reference -> bandpass -> decimate -> temporal attention
// (rules over channel vectors) -> spatial attention on fixed-length frames
// (rules over per-channel frame vectors). Each spatial rule j contributes the
// log of its membership-weighted projection energy per channel, averaged over
// frames; the 2 x C x N_r features feed a one-hidden-layer MLP.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "saslo/eeg.hpp"
#include "saslo/fir.hpp"
#include "saslo/fuzzy.hpp"

namespace saslo {

struct DecoderConfig {
  int n_rules = 5;
  std::array<Band, 2> bands{kFrequencyBand, kRotationBand};
  int fir_order = kDefaultFirOrder;
  int decimation = 5;   // 500 Hz -> 100 Hz
  int frame = 100;      // spatial-attention frame length, decimated samples
  int hop = 50;
  int hidden = 64;
  int n_classes = kClasses;
  double learning_rate = 1e-3;
  double dropout = 0.25;
  int epochs = 40;
  int batch_size = 16;
  std::uint64_t seed = 0;
  bool parallel = true;

  void validate(double sample_rate) const;
};

using BandSignals = std::array<Eigen::MatrixXd, 2>;  // C x T' per band

struct DecoderModel {
  DecoderConfig config;
  int channels = kChannels;
  double sample_rate = kSampleRate;
  std::array<double, 2> input_scale{1.0, 1.0};
  std::array<FuzzyLayer, 2> tal;  // dim = channels
  std::array<FuzzyLayer, 2> sal;  // dim = frame
  Eigen::MatrixXd w1;  // hidden x features
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // classes x hidden
  Eigen::VectorXd b2;

  int feature_count() const { return 2 * channels * config.n_rules; }
  double decimated_rate() const { return sample_rate / config.decimation; }
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  std::size_t parameter_count() const;
  void set_zero();
  void validate() const;
};

DecoderModel init_decoder(const DecoderConfig& config, int channels, double sample_rate, std::uint64_t seed);

// Band-split, decimated signals (not yet divided by input_scale).
BandSignals preprocess(const EegEpoch& epoch, const DecoderConfig& config, bool parallel = true);

// Number of spatial frames for T' decimated samples (at least one; short
// inputs are zero-padded).
int frame_count(int samples, int frame, int hop);

Eigen::VectorXd decoder_features(const DecoderModel& model, const BandSignals& bands);

// Cross-entropy of one example. When `dropout_mask` is non-null it multiplies
// the hidden activations (entries 0 or 1/(1-p)). When `grad` is non-null the
// parameter gradient is accumulated into it.
double loss_and_gradient(const DecoderModel& model, const BandSignals& bands, int label,
                         const Eigen::VectorXd* dropout_mask, DecoderModel* grad);

Eigen::VectorXd class_probabilities(const DecoderModel& model, const BandSignals& bands);
Eigen::VectorXd classify(const DecoderModel& model, const EegEpoch& epoch);
int predict(const DecoderModel& model, const EegEpoch& epoch);

struct TrainReport {
  std::vector<double> loss;            // mean minibatch loss per pass
  std::vector<double> train_accuracy;  // argmax accuracy per pass (dropout active)
  double seconds = 0.0;
};

using EpochCallback = std::function<void(int pass, double loss, double accuracy)>;

// Adam on minibatch cross-entropy. Errors when a class has no examples or
// epochs disagree in channel count.
DecoderModel train_decoder(const std::vector<EegEpoch>& dataset, const DecoderConfig& config,
                           TrainReport* report = nullptr, const EpochCallback& on_pass = {});

double evaluate_accuracy(const DecoderModel& model, const std::vector<EegEpoch>& dataset);

struct FiringTrace {
  double sample_rate = 0.0;                 // of the temporal traces
  std::array<Eigen::MatrixXd, 2> temporal;  // T' x N_r per band
  std::array<Eigen::MatrixXd, 2> spatial;   // C x N_r per band, mean over frames
};

FiringTrace firing_trace(const DecoderModel& model, const EegEpoch& epoch);

void write_model(const std::filesystem::path& path, const DecoderModel& model);
DecoderModel read_model(const std::filesystem::path& path);
std::string model_to_json(const DecoderModel& model);
DecoderModel model_from_json(const std::string& text);

// Training-free baseline: picks the stimulus whose fundamental + first
// harmonic carry the most channel-averaged spectral amplitude.
int peak_decode(const EegEpoch& epoch);

}  // namespace saslo
