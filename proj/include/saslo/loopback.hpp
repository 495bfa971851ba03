#pragma once

// End-to-end protocol exercise on one machine: a writer thread streams
// synthetic EEG into a ring buffer, a client brackets each trial with
// START/END over TCP, and the server decodes the online window from the
// buffer when END arrives.

#include <cstdint>
#include <functional>
#include <string>

#include "saslo/session.hpp"

namespace saslo {

struct LoopbackConfig {
  int trials = 100;
  double lead_s = 0.5;  // background EEG before each stimulation
  double quality = 1.0;
  SynthConfig synth = SynthConfig::high_snr();
  EpochWindow window = kOnlineWindow;
  double stimulation_s = 4.0;
  std::uint64_t seed = 0;
  int timeout_ms = 10000;
};

struct LoopbackReport {
  int trials = 0;
  int results = 0;  // RESULT lines whose trial_id matched the request
  int correct = 0;
  int epoch_samples = 0;  // length of the last decoded epoch
  std::string error;      // first protocol failure, empty when none
};

LoopbackReport run_loopback(const EpochDecoder& decode, const LoopbackConfig& cfg);

}  // namespace saslo
