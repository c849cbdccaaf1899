#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eegdec/tensor.hpp"

namespace eegdec {

// Continuous multichannel EEG, one row per channel, in microvolts.
struct Recording {
    Matrix data;  // [n_channels x n_samples]
    double sample_rate = 0.0;
    std::vector<std::string> channel_labels;

    std::size_t n_channels() const { return data.rows; }
    std::size_t n_samples() const { return data.cols; }
};

// Trial window in seconds relative to stimulus onset.
struct DecodingInterval {
    double start_s = 0.0;
    double end_s = 0.0;
};

// Epoched data: [n_trials x n_channels x n_samples] with binary labels
// (0 = correct, 1 = error).
struct TrialSet {
    Tensor3 data;
    std::vector<int> labels;
    double sample_rate = 0.0;
    DecodingInterval interval;
    std::vector<std::string> channel_labels;

    std::size_t n_trials() const { return data.n0; }
    std::size_t n_channels() const { return data.n1; }
    std::size_t n_samples() const { return data.n2; }
};

struct StandardizerConfig {
    double decay = 0.999;
    double eps = 1e-4;
};

void validate(const Recording& rec);
void validate(const TrialSet& trials);

// Sample-index rounding rule used across the library (half away from zero).
std::int64_t seconds_to_samples(double seconds, double sample_rate);

// Subtracts the instantaneous mean across channels from every channel.
Recording common_average_reference(const Recording& rec);

// Polyphase windowed-sinc resampling; anti-alias low-pass at 0.9 of the
// smaller Nyquist. target_rate == sample_rate returns the input unchanged.
Recording resample(const Recording& rec, double target_rate);

// Causal electrode-wise exponential moving standardization:
//   m_t = decay*m_{t-1} + (1-decay)*x_t
//   v_t = decay*v_{t-1} + (1-decay)*(x_t - m_t)^2
//   out_t = (x_t - m_t) / max(sqrt(v_t), sqrt(eps))
// with m_0 = x_0, v_0 = 0.
Recording exp_moving_standardize(const Recording& rec, const StandardizerConfig& cfg);

// Cuts fixed-length trials at onsets (sample indices) using the interval.
TrialSet cut_trials(const Recording& rec, const std::vector<std::size_t>& onsets,
                    const std::vector<int>& labels, const DecodingInterval& interval);

// Per-trial variants used by the preprocessing pipeline.
TrialSet common_average_reference(const TrialSet& trials);
TrialSet resample(const TrialSet& trials, double target_rate);
TrialSet exp_moving_standardize(const TrialSet& trials, const StandardizerConfig& cfg);

}  // namespace eegdec
