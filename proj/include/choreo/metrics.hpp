#pragma once

#include <optional>
#include <vector>

#include "choreo/motion.hpp"
#include "choreo/music.hpp"
#include "choreo/repertoire.hpp"
#include "choreo/style.hpp"

namespace choreo {

// Gaussian fit of a sample set: mean, (unbiased) covariance, count.
struct GaussianSummary {
    std::vector<double> mean;
    std::vector<std::vector<double>> covariance; // D x D, symmetric
    int sample_count = 0;

    int dimension() const { return static_cast<int>(mean.size()); }
};

// Fits mean and covariance over row vectors. Throws ValidationError when
// fewer than 2 samples or inconsistent dimensions.
GaussianSummary fit_gaussian(const std::vector<std::vector<double>>& samples);

// ||mu_a - mu_b||^2 + tr(Sa + Sb - 2 (Sa Sb)^{1/2}), matrix square root via
// symmetric eigendecomposition of Sa^{1/2} Sb Sa^{1/2}. Covariances are
// regularized with 1e-6 on the diagonal; the result is clamped at 0.
double frechet_distance(const GaussianSummary& a, const GaussianSummary& b);

// Frechet pose distance over flattened 63-dim poses.
double fpd(const MotionClip& generated, const Repertoire& reference);

// Frechet movement distance over 189-dim windows of three consecutive poses.
double fmd(const MotionClip& generated, const Repertoire& reference);

// Beat alignment in squared 60 fps music-frame units. A direction with no
// beats on its own side is reported absent rather than zero. Inputs are
// deduplicated before scoring.
struct BasReport {
    std::optional<double> motion2audio;
    std::optional<double> audio2motion;
    int motion_beat_count = 0;
    int music_beat_count = 0;
};

BasReport beat_alignment(const std::vector<double>& motion_beats_s,
                         const std::vector<double>& music_beats_s);

// Mean |normalized motion label - normalized music label| per label pair over
// aligned 4 s windows stepped by 1 s. Throws ValidationError when durations
// differ by more than 1 s.
struct LabelDistanceReport {
    std::array<double, 4> distances{};
    // Per-window normalized labels for the CSV export.
    std::vector<int> window_start_seconds;
    std::vector<StyleVector> motion_windows;
    std::vector<StyleVector> music_windows;
};

LabelDistanceReport label_distance(const MotionClip& generated, const MusicFeatures& music,
                                   const SkeletonDescriptor& descriptor, const LabelTable& table);

} // namespace choreo
