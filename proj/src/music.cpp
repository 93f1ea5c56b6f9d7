#include "choreo/music.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "choreo/error.hpp"

namespace choreo {

namespace {

constexpr int kBins = kStftWindow / 2 + 1; // 513
constexpr double kMelFloorHz = 0.0;
constexpr double kMelCeilHz = 12000.0;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// FFTW plan creation is not thread-safe; execution with fftw_execute_dft_r2c is.
class Stft {
public:
    Stft() {
        in_ = fftw_alloc_real(kStftWindow);
        out_ = fftw_alloc_complex(kBins);
        plan_ = fftw_plan_dft_r2c_1d(kStftWindow, in_, out_, FFTW_ESTIMATE);
        window_.resize(kStftWindow);
        for (int n = 0; n < kStftWindow; ++n) {
            window_[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / kStftWindow); // periodic Hann
        }
    }
    ~Stft() {
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }

    // Magnitudes of one frame starting at `start` (zero-padded past the end).
    void frame(const std::vector<double>& samples, std::size_t start, std::vector<double>& mag) {
        for (int n = 0; n < kStftWindow; ++n) {
            const std::size_t idx = start + static_cast<std::size_t>(n);
            const double s = idx < samples.size() ? samples[idx] : 0.0;
            in_[n] = s * window_[n];
        }
        fftw_execute(plan_);
        mag.resize(kBins);
        for (int k = 0; k < kBins; ++k) {
            mag[k] = std::hypot(out_[k][0], out_[k][1]);
        }
    }

private:
    double* in_;
    fftw_complex* out_;
    fftw_plan plan_;
    std::vector<double> window_;
};

std::mutex g_stft_mutex;

// Triangular filters with unit peaks; edges equally spaced on the mel scale.
const std::vector<std::vector<std::pair<int, double>>>& mel_filters() {
    static const auto filters = [] {
        const std::vector<double> edges = mel_band_edges();
        std::vector<std::vector<std::pair<int, double>>> f(kMelBands);
        for (int b = 0; b < kMelBands; ++b) {
            const double left = edges[b], center = edges[b + 1], right = edges[b + 2];
            for (int k = 0; k < kBins; ++k) {
                const double freq = static_cast<double>(k) * kAudioRate / kStftWindow;
                double w = 0.0;
                if (freq > left && freq < center) {
                    w = (freq - left) / (center - left);
                } else if (freq >= center && freq < right) {
                    w = (right - freq) / (right - center);
                }
                if (w > 0.0) f[b].emplace_back(k, w);
            }
        }
        return f;
    }();
    return filters;
}

} // namespace

std::vector<double> mel_band_edges() {
    const double mel_lo = hz_to_mel(kMelFloorHz);
    const double mel_hi = hz_to_mel(kMelCeilHz);
    std::vector<double> edges(kMelBands + 2);
    for (int i = 0; i < kMelBands + 2; ++i) {
        edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (kMelBands + 1));
    }
    return edges;
}

void stft_features(const AudioBuffer& audio, Spectrogram& mel_out, Spectrogram& spectrum_out) {
    if (audio.sample_rate != kAudioRate) {
        throw ValidationError("mel_spectrogram: audio must be at the internal rate " +
                              std::to_string(kAudioRate));
    }
    if (static_cast<int>(audio.samples.size()) < kStftWindow) {
        throw ValidationError("mel_spectrogram: audio shorter than one analysis window (" +
                              std::to_string(audio.samples.size()) + " < " +
                              std::to_string(kStftWindow) + " samples)");
    }
    const int n_frames = static_cast<int>(audio.samples.size() / kStftHop);

    mel_out.assign(kMelBands, std::vector<double>(n_frames, 0.0));
    spectrum_out.assign(kBins, std::vector<double>(n_frames, 0.0));

    std::lock_guard<std::mutex> lock(g_stft_mutex);
    Stft stft;
    std::vector<double> mag;
    const auto& filters = mel_filters();
    for (int t = 0; t < n_frames; ++t) {
        stft.frame(audio.samples, static_cast<std::size_t>(t) * kStftHop, mag);
        for (int k = 0; k < kBins; ++k) spectrum_out[k][t] = mag[k];
        for (int b = 0; b < kMelBands; ++b) {
            double acc = 0.0;
            for (const auto& [k, w] : filters[b]) acc += w * mag[k];
            mel_out[b][t] = std::log1p(acc);
        }
    }
}

Spectrogram mel_spectrogram(const AudioBuffer& audio) {
    Spectrogram mel, spectrum;
    stft_features(audio, mel, spectrum);
    return mel;
}

std::vector<double> onset_envelope(const Spectrogram& mel) {
    if (mel.empty()) throw ValidationError("onset_envelope: empty mel matrix");
    const int n = static_cast<int>(mel.front().size());
    std::vector<double> env(n, 0.0);
    for (int t = 1; t < n; ++t) {
        double flux = 0.0;
        for (const auto& band : mel) {
            flux += std::max(0.0, band[t] - band[t - 1]);
        }
        env[t] = flux;
    }
    return env;
}

std::vector<int> music_beats(const std::vector<double>& onset_env, const OnsetOptions& opts) {
    if (onset_env.empty()) throw ValidationError("music_beats: empty envelope");
    PeakOptions popts;
    popts.prominence_fraction = opts.prominence;
    popts.min_separation = opts.min_separation_frames;
    popts.reference = PeakReference::Max;
    return find_peaks(onset_env, popts);
}

MusicFeatures analyze_music(const AudioBuffer& audio, const OnsetOptions& opts) {
    MusicFeatures f;
    stft_features(audio, f.mel, f.spectrum);
    f.onset_env = onset_envelope(f.mel);
    f.beats = music_beats(f.onset_env, opts);
    f.duration_seconds = audio.duration_seconds();
    return f;
}

} // namespace choreo
