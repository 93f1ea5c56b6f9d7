#include "choreo/style.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "choreo/error.hpp"
#include "choreo/repertoire.hpp"

namespace choreo {

namespace {

constexpr double kAsymmetryEps = 1e-9;

double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Linear-interpolated quantile of a sorted sample.
double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double pos = q * (values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - lo;
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

// Fallback bounds when no paired music exists: physically grounded ranges for
// (interval stddev in semitones, onsets/s, mean onset gap in s, flatness+band mix).
constexpr LabelTable::Bounds kDefaultMusicBounds[4] = {{0.0, 6.0}, {0.0, 8.0}, {0.0, 4.0}, {0.0, 1.0}};

} // namespace

RawLabels motion_labels(const MotionClip& clip, const SkeletonDescriptor& descriptor) {
    if (clip.length() != kSegmentFrames) {
        throw ValidationError("motion_labels: clip '" + clip.id + "' has " +
                              std::to_string(clip.length()) + " frames, expected " +
                              std::to_string(kSegmentFrames));
    }
    const int n = clip.length();
    const int joints = descriptor.joint_count;

    // Body openness: head and end effectors away from the root, averaged.
    double openness = 0.0;
    for (const Pose& pose : clip.frames) {
        const Vec3& root = pose[descriptor.root_index];
        double spread = (pose[descriptor.head_index] - root).norm();
        for (int idx : descriptor.end_effector_indices) {
            spread += (pose[idx] - root).norm();
        }
        openness += spread;
    }
    openness /= n;

    // Motion intensity: mean absolute coordinate change per frame.
    double intensity = 0.0;
    for (int t = 1; t < n; ++t) {
        for (int j = 0; j < joints; ++j) {
            const Vec3 d = clip.frames[t][j] - clip.frames[t - 1][j];
            intensity += std::abs(d.x) + std::abs(d.y) + std::abs(d.z);
        }
    }
    intensity /= static_cast<double>(n - 1) * joints * 3;

    // Rhythm: accumulated second-difference magnitude, per second of clip.
    double rhythm = 0.0;
    for (int t = 1; t + 1 < n; ++t) {
        for (int j = 0; j < joints; ++j) {
            const Vec3 acc = clip.frames[t + 1][j] - clip.frames[t][j] -
                             (clip.frames[t][j] - clip.frames[t - 1][j]);
            rhythm += acc.norm();
        }
    }
    rhythm /= clip.duration_seconds();

    // Asymmetry: displacement energy imbalance between upper and lower body.
    double e_up = 0.0, e_low = 0.0;
    for (int t = 1; t < n; ++t) {
        for (int j : descriptor.upper_body_indices) {
            e_up += (clip.frames[t][j] - clip.frames[t - 1][j]).norm();
        }
        for (int j : descriptor.lower_body_indices) {
            e_low += (clip.frames[t][j] - clip.frames[t - 1][j]).norm();
        }
    }
    const double asymmetry = std::abs(e_up - e_low) / (e_up + e_low + kAsymmetryEps);

    return {openness, intensity, rhythm, asymmetry};
}

namespace {

// Harmonic-product-spectrum fundamental estimate for one frame, as an FFT bin
// index in [kF0MinBin, kF0MaxBin]; 0 when the frame is unvoiced (quiet in
// absolute terms or relative to the loudest frame of the window). The log
// product is floored at 1e-6 of the frame's strongest bin: without the floor,
// near-silent harmonic bins dominate the product and subharmonic candidates
// that catch the true peak as their 2nd harmonic win.
constexpr int kF0MinBin = 3;    // ~70 Hz
constexpr int kF0MaxBin = 42;   // ~984 Hz
constexpr int kHarmonics = 3;

int hps_peak_bin(const Spectrogram& spectrum, int t, double window_max_power) {
    double frame_power = 0.0;
    double max_bin_power = 0.0;
    for (const auto& bin : spectrum) {
        const double p = bin[t] * bin[t];
        frame_power += p;
        max_bin_power = std::max(max_bin_power, p);
    }
    if (frame_power < 1e-10 || frame_power < 1e-4 * window_max_power) return 0; // unvoiced
    const double floor = 1e-6 * max_bin_power;
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int k = kF0MinBin; k <= kF0MaxBin; ++k) {
        double score = 0.0;
        for (int h = 1; h <= kHarmonics; ++h) {
            const double m = spectrum[k * h][t];
            score += std::log(floor + m * m);
        }
        if (score > best_score) {
            best_score = score;
            best = k;
        }
    }
    return best;
}

} // namespace

RawLabels music_labels(const MusicFeatures& features, int start_frame60) {
    const int window = 4 * kMusicFps;
    const int n = features.frame_count();
    if (start_frame60 < 0 || start_frame60 + window > n) {
        throw BoundsError("music_labels: window [" + std::to_string(start_frame60) + ", " +
                          std::to_string(start_frame60 + window) + ") outside " + std::to_string(n) +
                          " feature frames");
    }

    // Intervallic structure: spread of semitone steps between consecutive
    // fundamental estimates. The final frames whose analysis window runs past
    // the audio mix signal with padding and are skipped as unvoiced.
    const long long total_samples =
        std::llround(features.duration_seconds * static_cast<double>(kAudioRate));
    const int last_full_frame =
        static_cast<int>((total_samples - kStftWindow) / kStftHop);
    double window_max_power = 0.0;
    for (int t = start_frame60; t < start_frame60 + window; ++t) {
        double p = 0.0;
        for (const auto& bin : features.spectrum) p += bin[t] * bin[t];
        window_max_power = std::max(window_max_power, p);
    }
    std::vector<double> intervals;
    int prev_bin = 0;
    for (int t = start_frame60; t < start_frame60 + window; ++t) {
        const int bin =
            t <= last_full_frame ? hps_peak_bin(features.spectrum, t, window_max_power) : 0;
        if (bin > 0 && prev_bin > 0) {
            intervals.push_back(12.0 * std::log2(static_cast<double>(bin) / prev_bin));
        }
        if (bin > 0) prev_bin = bin;
    }
    double intervallic = 0.0;
    if (intervals.size() >= 2) {
        double mean = 0.0;
        for (double v : intervals) mean += v;
        mean /= intervals.size();
        double var = 0.0;
        for (double v : intervals) var += (v - mean) * (v - mean);
        intervallic = std::sqrt(var / intervals.size());
    }

    // Rhythmic density and onset gap from the beat list.
    std::vector<int> window_beats;
    for (int b : features.beats) {
        if (b >= start_frame60 && b < start_frame60 + window) window_beats.push_back(b);
    }
    const double rhythmic_density = window_beats.size() / 4.0;
    double onset_gap = 4.0;
    if (window_beats.size() >= 2) {
        onset_gap = 0.0;
        for (std::size_t i = 1; i < window_beats.size(); ++i) {
            onset_gap += (window_beats[i] - window_beats[i - 1]) / static_cast<double>(kMusicFps);
        }
        onset_gap /= window_beats.size() - 1;
    }

    // Spectral contents: flatness of the window-averaged power spectrum plus
    // the high-band (>= 4 kHz) energy share, equal-weighted. Averaging over
    // the window first keeps the flatness of broadband noise near 1 instead
    // of the single-periodogram value.
    const int bins = static_cast<int>(features.spectrum.size());
    const int high_bin = static_cast<int>(std::ceil(4000.0 * kStftWindow / kAudioRate));
    const double eps = 1e-12;
    std::vector<double> mean_power(bins, 0.0);
    for (int t = start_frame60; t < start_frame60 + window; ++t) {
        for (int k = 0; k < bins; ++k) {
            mean_power[k] += features.spectrum[k][t] * features.spectrum[k][t];
        }
    }
    double log_acc = 0.0, lin_acc = 0.0, high_energy = 0.0;
    for (int k = 0; k < bins; ++k) {
        mean_power[k] /= window;
        log_acc += std::log(mean_power[k] + eps);
        lin_acc += mean_power[k];
        if (k >= high_bin) high_energy += mean_power[k];
    }
    const double flatness = lin_acc > eps ? std::exp(log_acc / bins) / (lin_acc / bins + eps) : 0.0;
    const double high_ratio = lin_acc > eps ? high_energy / lin_acc : 0.0;
    const double spectral = 0.5 * (flatness + high_ratio);

    return {intervallic, rhythmic_density, onset_gap, spectral};
}

LabelTable LabelTable::fit(const std::vector<RawLabels>& motion_samples,
                           const std::vector<RawLabels>& music_samples, NormalizationMode mode) {
    if (motion_samples.empty()) {
        throw ValidationError("LabelTable::fit: no motion samples");
    }
    LabelTable table;
    auto fit_axis = [&](const std::vector<RawLabels>& samples, int axis) {
        std::vector<double> values;
        values.reserve(samples.size());
        for (const RawLabels& s : samples) values.push_back(s[axis]);
        Bounds b;
        if (mode == NormalizationMode::Percentile) {
            b.lo = quantile(values, 0.01);
            b.hi = quantile(values, 0.99);
        } else {
            b.lo = *std::min_element(values.begin(), values.end());
            b.hi = *std::max_element(values.begin(), values.end());
        }
        if (b.hi - b.lo < 1e-9) { // degenerate corpus: widen symmetrically
            b.lo -= 0.5;
            b.hi += 0.5;
        }
        return b;
    };
    for (int axis = 0; axis < 4; ++axis) {
        table.motion_bounds_[axis] = fit_axis(motion_samples, axis);
        table.music_bounds_[axis] =
            music_samples.empty() ? kDefaultMusicBounds[axis] : fit_axis(music_samples, axis);
    }
    table.fitted_ = true;
    return table;
}

LabelTable LabelTable::from_bounds(const std::array<Bounds, 4>& motion,
                                   const std::array<Bounds, 4>& music) {
    LabelTable table;
    table.motion_bounds_ = motion;
    table.music_bounds_ = music;
    table.fitted_ = true;
    for (int axis = 0; axis < 4; ++axis) {
        if (!(motion[axis].lo < motion[axis].hi) || !(music[axis].lo < music[axis].hi)) {
            throw ValidationError("LabelTable: bounds must satisfy lo < hi");
        }
    }
    return table;
}

StyleVector LabelTable::normalize(const RawLabels& raw, const std::array<Bounds, 4>& bounds) const {
    if (!fitted_) throw StateError("LabelTable: normalize called before fit");
    StyleVector out;
    out.backend = StyleBackend::Labels;
    out.values.resize(4);
    for (int i = 0; i < 4; ++i) {
        const double span = bounds[i].hi - bounds[i].lo;
        const double unit = std::clamp((raw[i] - bounds[i].lo) / span, 0.0, 1.0);
        out.values[i] = 1.0 + 9.0 * unit;
    }
    return out;
}

StyleVector LabelTable::normalize_motion(const RawLabels& raw) const {
    return normalize(raw, motion_bounds_);
}

StyleVector LabelTable::normalize_music(const RawLabels& raw) const {
    return normalize(raw, music_bounds_);
}

double style_distance(const StyleVector& s_m, const StyleVector& s_d, int music_beat_count,
                      int motion_beat_count, double lambda_cs, double lambda_b) {
    if (s_m.dimension() != s_d.dimension()) {
        throw ValidationError("style_distance: dimension mismatch " +
                              std::to_string(s_m.dimension()) + " vs " +
                              std::to_string(s_d.dimension()));
    }
    return lambda_cs * l2(s_m.values, s_d.values) +
           lambda_b * std::abs(music_beat_count - motion_beat_count);
}

std::vector<SelectionHit> select_top_k(const StyleVector& s_m, int music_beat_count,
                                       const Repertoire& repertoire, int k, double lambda_cs,
                                       double lambda_b) {
    if (repertoire.entries.empty()) {
        throw ValidationError("select_top_k: empty repertoire");
    }
    if (k < 1) {
        throw ValidationError("select_top_k: k must be >= 1, got " + std::to_string(k));
    }
    std::vector<SelectionHit> hits;
    hits.reserve(repertoire.entries.size());
    for (std::size_t i = 0; i < repertoire.entries.size(); ++i) {
        const RepertoireEntry& entry = repertoire.entries[i];
        if (!entry.caches_ready) {
            throw StateError("select_top_k: entry '" + entry.clip.id + "' has unpopulated caches");
        }
        hits.push_back({i, entry.clip.id,
                        style_distance(s_m, entry.style, music_beat_count, entry.mid_beat_count,
                                       lambda_cs, lambda_b)});
    }
    std::sort(hits.begin(), hits.end(), [](const SelectionHit& a, const SelectionHit& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.id < b.id;
    });
    if (k < static_cast<int>(hits.size())) {
        hits.resize(k);
    }
    return hits;
}

std::map<std::string, StyleVector> load_external_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open embedding file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("embeddings " + path + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw ParseError("embeddings " + path + ": expected a JSON object");
    std::map<std::string, StyleVector> out;
    std::size_t dim = 0;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_array() || value.empty()) {
            throw ParseError("embeddings " + path + ": entry '" + key + "' must be a float array");
        }
        StyleVector v;
        v.backend = StyleBackend::External;
        for (const auto& x : value) v.values.push_back(x.get<double>());
        if (dim == 0) dim = v.values.size();
        if (v.values.size() != dim) {
            throw ValidationError("embeddings " + path + ": entry '" + key +
                                  "' has dimension " + std::to_string(v.values.size()) +
                                  ", expected " + std::to_string(dim));
        }
        out.emplace(key, std::move(v));
    }
    return out;
}

} // namespace choreo
