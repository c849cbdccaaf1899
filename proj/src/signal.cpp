#include "eegdec/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eegdec {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void standardize_row(const double* x, double* out, std::size_t n,
                     const StandardizerConfig& cfg) {
    const double floor_std = std::sqrt(cfg.eps);
    double mean = x[0];
    double var = 0.0;
    out[0] = 0.0;  // (x_0 - m_0) / max(sqrt(v_0), sqrt(eps)) with m_0 = x_0
    for (std::size_t t = 1; t < n; ++t) {
        mean = cfg.decay * mean + (1.0 - cfg.decay) * x[t];
        const double centered = x[t] - mean;
        var = cfg.decay * var + (1.0 - cfg.decay) * centered * centered;
        out[t] = centered / std::max(std::sqrt(var), floor_std);
    }
}

double blackman(double u) {
    // u in [0,1]
    return 0.42 - 0.5 * std::cos(2.0 * kPi * u) + 0.08 * std::cos(4.0 * kPi * u);
}

void resample_row(const double* x, std::size_t n_in, double* y, std::size_t n_out,
                  double in_rate, double out_rate) {
    // 64-tap windowed-sinc kernel per output phase, cutoff at 0.9 of the
    // smaller Nyquist, evaluated at the exact fractional input position.
    constexpr int kTaps = 64;
    const double ratio = in_rate / out_rate;
    const double cutoff = 0.45 * std::min(in_rate, out_rate);  // Hz
    const double fc = cutoff / in_rate;                        // cycles per input sample
    const double gain_comp = (out_rate < in_rate) ? out_rate / in_rate : 1.0;

    for (std::size_t m = 0; m < n_out; ++m) {
        const double center = static_cast<double>(m) * ratio;
        const auto first = static_cast<std::int64_t>(std::floor(center)) - (kTaps / 2 - 1);
        double acc = 0.0;
        double wsum = 0.0;
        for (int k = 0; k < kTaps; ++k) {
            const std::int64_t j = first + k;
            const double dt = center - static_cast<double>(j);
            const double u = (dt + kTaps / 2.0) / kTaps;
            if (u < 0.0 || u > 1.0) continue;
            const double arg = 2.0 * kPi * fc * dt;
            const double sinc = (std::abs(arg) < 1e-12) ? 1.0 : std::sin(arg) / arg;
            const double w = 2.0 * fc * sinc * blackman(u);
            wsum += w;
            if (j >= 0 && j < static_cast<std::int64_t>(n_in)) acc += w * x[j];
        }
        // The kernel sums to ~2*fc by construction; normalize so a constant
        // passes at unit gain, then undo that for the decimation case where
        // 2*fc already equals the rate ratio times the passband gain.
        y[m] = (wsum != 0.0) ? acc / wsum * (gain_comp / gain_comp) : 0.0;
        if (wsum != 0.0) y[m] = acc / wsum;
    }
}

template <typename Fn>
TrialSet map_trials(const TrialSet& trials, double out_rate, Fn&& per_trial) {
    validate(trials);
    TrialSet out;
    out.labels = trials.labels;
    out.sample_rate = out_rate;
    out.interval = trials.interval;
    out.channel_labels = trials.channel_labels;
    for (std::size_t k = 0; k < trials.n_trials(); ++k) {
        Recording rec{trials.data.slice(k), trials.sample_rate, trials.channel_labels};
        const Recording res = per_trial(rec);
        if (k == 0)
            out.data = Tensor3(trials.n_trials(), res.n_channels(), res.n_samples());
        std::copy(res.data.data.begin(), res.data.data.end(),
                  out.data.data.begin() + static_cast<std::ptrdiff_t>(
                                              k * out.data.n1 * out.data.n2));
    }
    return out;
}

}  // namespace

void validate(const Recording& rec) {
    require(rec.n_channels() >= 1 && rec.n_samples() >= 1,
            "recording: need at least one channel and one sample");
    require(rec.sample_rate > 0.0, "recording: sample rate must be positive");
    require(rec.channel_labels.empty() || rec.channel_labels.size() == rec.n_channels(),
            "recording: channel label count mismatch");
    for (double v : rec.data.data)
        if (!std::isfinite(v)) throw std::invalid_argument("recording: non-finite sample");
}

void validate(const TrialSet& trials) {
    require(trials.labels.size() == trials.n_trials(),
            "trial set: label count does not match trial count");
    require(trials.sample_rate > 0.0, "trial set: sample rate must be positive");
    for (int label : trials.labels)
        require(label == 0 || label == 1, "trial set: labels must be 0 or 1");
    for (double v : trials.data.data)
        if (!std::isfinite(v)) throw std::invalid_argument("trial set: non-finite sample");
}

std::int64_t seconds_to_samples(double seconds, double sample_rate) {
    return std::llround(seconds * sample_rate);
}

Recording common_average_reference(const Recording& rec) {
    validate(rec);
    require(rec.n_channels() >= 2, "common_average_reference: need at least 2 channels");
    Recording out = rec;
    const std::size_t nc = rec.n_channels();
    const std::size_t ns = rec.n_samples();
    for (std::size_t t = 0; t < ns; ++t) {
        double mean = 0.0;
        for (std::size_t c = 0; c < nc; ++c) mean += rec.data(c, t);
        mean /= static_cast<double>(nc);
        for (std::size_t c = 0; c < nc; ++c) out.data(c, t) = rec.data(c, t) - mean;
    }
    return out;
}

Recording resample(const Recording& rec, double target_rate) {
    validate(rec);
    require(target_rate > 0.0, "resample: target rate must be positive");
    if (target_rate == rec.sample_rate) return rec;

    const auto n_out = static_cast<std::size_t>(std::llround(
        static_cast<double>(rec.n_samples()) * target_rate / rec.sample_rate));
    require(n_out >= 1, "resample: output would be empty");

    Recording out;
    out.sample_rate = target_rate;
    out.channel_labels = rec.channel_labels;
    out.data = Matrix(rec.n_channels(), n_out);
    for (std::size_t c = 0; c < rec.n_channels(); ++c)
        resample_row(rec.data.row_ptr(c), rec.n_samples(), out.data.row_ptr(c), n_out,
                     rec.sample_rate, target_rate);
    return out;
}

Recording exp_moving_standardize(const Recording& rec, const StandardizerConfig& cfg) {
    validate(rec);
    require(cfg.decay > 0.0 && cfg.decay < 1.0, "standardize: decay must be in (0,1)");
    require(cfg.eps > 0.0, "standardize: eps must be positive");
    Recording out = rec;
    for (std::size_t c = 0; c < rec.n_channels(); ++c)
        standardize_row(rec.data.row_ptr(c), out.data.row_ptr(c), rec.n_samples(), cfg);
    return out;
}

TrialSet cut_trials(const Recording& rec, const std::vector<std::size_t>& onsets,
                    const std::vector<int>& labels, const DecodingInterval& interval) {
    validate(rec);
    require(onsets.size() == labels.size(), "cut_trials: onsets/labels length mismatch");
    require(!onsets.empty(), "cut_trials: no onsets");
    require(interval.start_s >= 0.0 && interval.start_s < interval.end_s,
            "cut_trials: need 0 <= start < end");

    const std::int64_t rel_start = seconds_to_samples(interval.start_s, rec.sample_rate);
    const std::int64_t rel_end = seconds_to_samples(interval.end_s, rec.sample_rate);
    const std::int64_t len = rel_end - rel_start;
    require(len >= 1, "cut_trials: interval shorter than one sample");

    TrialSet out;
    out.labels = labels;
    out.sample_rate = rec.sample_rate;
    out.interval = interval;
    out.channel_labels = rec.channel_labels;
    out.data = Tensor3(onsets.size(), rec.n_channels(), static_cast<std::size_t>(len));
    for (std::size_t k = 0; k < onsets.size(); ++k) {
        const std::int64_t start = static_cast<std::int64_t>(onsets[k]) + rel_start;
        const std::int64_t end = static_cast<std::int64_t>(onsets[k]) + rel_end;
        if (start < 0 || end > static_cast<std::int64_t>(rec.n_samples()))
            throw std::invalid_argument(
                "cut_trials: trial at onset " + std::to_string(onsets[k]) +
                " runs out of bounds [" + std::to_string(start) + ", " +
                std::to_string(end) + ") with " + std::to_string(rec.n_samples()) +
                " samples");
        for (std::size_t c = 0; c < rec.n_channels(); ++c) {
            const double* src = rec.data.row_ptr(c) + start;
            std::copy(src, src + len, out.data.ptr(k, c));
        }
    }
    validate(out);
    return out;
}

TrialSet common_average_reference(const TrialSet& trials) {
    return map_trials(trials, trials.sample_rate,
                      [](const Recording& r) { return common_average_reference(r); });
}

TrialSet resample(const TrialSet& trials, double target_rate) {
    return map_trials(trials, target_rate,
                      [&](const Recording& r) { return resample(r, target_rate); });
}

TrialSet exp_moving_standardize(const TrialSet& trials, const StandardizerConfig& cfg) {
    return map_trials(trials, trials.sample_rate,
                      [&](const Recording& r) { return exp_moving_standardize(r, cfg); });
}

}  // namespace eegdec
