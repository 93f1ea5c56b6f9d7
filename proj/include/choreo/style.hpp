#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "choreo/motion.hpp"
#include "choreo/music.hpp"

namespace choreo {

enum class StyleBackend {
    Labels,   // 4 analytic artist labels, normalized to [1, 10]
    External, // precomputed embeddings loaded from file (any dimension)
};

// Style coordinates on the common normalized scale. Both modalities must use
// the same backend and dimension within one run.
struct StyleVector {
    std::vector<double> values;
    StyleBackend backend = StyleBackend::Labels;

    int dimension() const { return static_cast<int>(values.size()); }
};

// Raw (unnormalized) 4-label vectors.
using RawLabels = std::array<double, 4>;

// Motion label names, in vector order: openness, intensity, rhythm, asymmetry.
// Music label order: intervallic, rhythmic_density, onset_gap, spectral.
// Index i of one modality is evaluated against index i of the other.

// Motion labels of a 4-second clip:
//   openness  = mean over frames of summed head/end-effector distance to root
//   intensity = mean |per-frame coordinate change| over all joints and axes
//   rhythm    = accumulated magnitude of second-order coordinate differences,
//               per second of clip
//   asymmetry = |E_up - E_low| / (E_up + E_low + 1e-9), E = summed displacement
//               over the respective joint set
// Throws ValidationError when the clip is not kSegmentFrames long.
RawLabels motion_labels(const MotionClip& clip, const SkeletonDescriptor& descriptor);

// Music labels of a 4-second window starting at start_frame60:
//   intervallic      = stddev of semitone intervals between consecutive
//                      per-frame fundamental estimates (harmonic product
//                      spectrum; unvoiced frames skipped)
//   rhythmic_density = onsets per second from the beat list
//   onset_gap        = mean seconds between consecutive onsets (4.0 if < 2)
//   spectral         = mean of spectral flatness and the >= 4 kHz energy ratio
RawLabels music_labels(const MusicFeatures& features, int start_frame60);

enum class NormalizationMode {
    Percentile, // 1st / 99th percentile bounds (default)
    MinMax,
};

// Per-label normalization bounds learned from the repertoire. Motion bounds
// come from clip labels; music bounds from paired-music windows when any exist,
// otherwise from documented physical defaults.
class LabelTable {
public:
    struct Bounds {
        double lo = 0.0;
        double hi = 1.0;
    };

    static LabelTable fit(const std::vector<RawLabels>& motion_samples,
                          const std::vector<RawLabels>& music_samples,
                          NormalizationMode mode = NormalizationMode::Percentile);

    // 1 + 9 * clamp((x - lo)/(hi - lo), 0, 1) per label.
    StyleVector normalize_motion(const RawLabels& raw) const;
    StyleVector normalize_music(const RawLabels& raw) const;

    bool fitted() const { return fitted_; }
    const std::array<Bounds, 4>& motion_bounds() const { return motion_bounds_; }
    const std::array<Bounds, 4>& music_bounds() const { return music_bounds_; }

    // Used by the cache reader.
    static LabelTable from_bounds(const std::array<Bounds, 4>& motion,
                                  const std::array<Bounds, 4>& music);

private:
    StyleVector normalize(const RawLabels& raw, const std::array<Bounds, 4>& bounds) const;

    std::array<Bounds, 4> motion_bounds_{};
    std::array<Bounds, 4> music_bounds_{};
    bool fitted_ = false;
};

// Cross-modality style loss: lambda_cs * ||s_m - s_d||_2 + lambda_b * |B_m - N_B|.
// Throws ValidationError on dimension mismatch.
double style_distance(const StyleVector& s_m, const StyleVector& s_d, int music_beat_count,
                      int motion_beat_count, double lambda_cs, double lambda_b);

struct SelectionHit {
    std::size_t entry_index;
    std::string id;
    double distance;
};

// External embeddings: JSON object mapping key -> array of floats. Motion
// vectors are keyed by clip id; music vectors by window start second.
std::map<std::string, StyleVector> load_external_embeddings(const std::string& path);

} // namespace choreo
