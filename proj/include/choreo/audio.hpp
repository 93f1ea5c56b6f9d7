#pragma once

#include <string>
#include <vector>

namespace choreo {

inline constexpr int kAudioRate = 24000; // internal sample rate, Hz
inline constexpr int kStftWindow = 1024;
inline constexpr int kStftHop = 400; // 60 feature frames per second at 24 kHz
inline constexpr int kMusicFps = 60;
inline constexpr int kMelBands = 96;

// Mono audio at the internal rate, samples in [-1, 1].
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = kAudioRate;

    double duration_seconds() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

// Reads a PCM WAV (16-bit int or 32-bit float, mono or stereo), averages to
// mono, scales to [-1, 1] and resamples to 24 kHz by linear interpolation.
// Throws FormatError for unsupported encodings, ValidationError for empty audio.
AudioBuffer decode_wav(const std::string& path);

// Linear-interpolation resampler (exposed for tests).
std::vector<double> resample_linear(const std::vector<double>& in, int src_rate, int dst_rate);

} // namespace choreo
