#pragma once

#include <vector>

#include "choreo/audio.hpp"
#include "choreo/peaks.hpp"

namespace choreo {

// Column-major time series: data[band][frame].
using Spectrogram = std::vector<std::vector<double>>;

// Everything the engine needs from a piece of music. `mel` is 96 bands of
// log1p mel amplitude at 60 fps. `spectrum` keeps the linear-frequency STFT
// magnitude (513 bins) because the label features (fundamental estimates,
// spectral flatness, band energies) need more frequency resolution than the
// mel projection retains.
struct MusicFeatures {
    Spectrogram mel;            // [96][N]
    Spectrogram spectrum;       // [513][N], linear magnitude
    std::vector<double> onset_env; // length N, >= 0
    std::vector<int> beats;        // strictly increasing frame indices, 60 fps
    double duration_seconds = 0.0;

    int frame_count() const {
        return mel.empty() ? 0 : static_cast<int>(mel.front().size());
    }
};

struct OnsetOptions {
    double prominence = 0.1;      // fraction of max(onset_env)
    int min_separation_frames = 15; // 0.25 s at 60 fps
};

// STFT window 1024, hop 400, Hann; 96 triangular mel bands over 0..12 kHz on
// the magnitude spectrum, log1p amplitude. N = floor(samples / hop). Throws
// ValidationError when the audio is shorter than one window.
Spectrogram mel_spectrogram(const AudioBuffer& audio);

// Same pass but also returns the linear magnitude spectrum.
void stft_features(const AudioBuffer& audio, Spectrogram& mel_out, Spectrogram& spectrum_out);

// Half-wave-rectified spectral flux summed over bands; o(0) = 0.
std::vector<double> onset_envelope(const Spectrogram& mel);

// Peak-picking on the envelope (prominence >= opts.prominence * max, minimum
// separation opts.min_separation_frames). All-zero envelope yields {}.
std::vector<int> music_beats(const std::vector<double>& onset_env, const OnsetOptions& opts = {});

// Full music-side analysis for one buffer.
MusicFeatures analyze_music(const AudioBuffer& audio, const OnsetOptions& opts = {});

// Mel band edges in Hz (97 edges for 96 bands), exposed so tests can locate
// the band containing a given frequency independently.
std::vector<double> mel_band_edges();

} // namespace choreo
