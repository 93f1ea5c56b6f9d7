#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "choreo/motion.hpp"
#include "choreo/peaks.hpp"

namespace choreo {

// Per-frame average joint speed in m/s; values[0] = 0 by convention.
struct SpeedSeries {
    std::vector<double> values;
};

struct MotionBeatOptions {
    double prominence = 0.05;    // fraction of (max - min) of the speed curve
    int min_separation_frames = 5; // 0.25 s at 20 fps
};

// v(t) = frame_rate * mean over joints of ||pose[t] - pose[t-1]||.
// Throws ValidationError on single-frame clips.
SpeedSeries average_joint_speed(const MotionClip& clip);

// Motion beats: strict local minima of the speed curve found by peak-picking
// on the negated series.
std::vector<int> motion_beats(const SpeedSeries& speed, const MotionBeatOptions& opts = {});

// Counts beats, caching them onto the clip.
int beat_count(MotionClip& clip, const MotionBeatOptions& opts = {});

// Returns a copy with the beats cache populated (no-op when already present).
MotionClip with_beats(MotionClip clip, const MotionBeatOptions& opts = {});

// The randomized retiming used for augmentation and warp-recovery testing.
// Anchors pair original beat frames with their shifted positions; endpoints
// (0,0) and (L-1,L-1) are always pinned.
struct WarpSpec {
    std::vector<std::pair<int, int>> anchors; // (original_frame, shifted_frame)
};

struct RandomWarpOptions {
    int max_shift = 4;        // frames (0.2 s)
    double select_prob = 0.5; // per-beat selection probability
};

// Randomly selects beats (at least one forced), shifts each by a uniform
// integer in [-max_shift, +max_shift], re-clamps so shifted anchors stay
// strictly increasing with a minimum gap of 2 frames, and resamples the clip
// through the piecewise-linear retiming. Output length equals input length and
// the first/last frames are preserved exactly. Deterministic given the seed.
// Throws ValidationError when fewer than 2 beats are detected.
std::pair<MotionClip, WarpSpec> random_time_warp(const MotionClip& clip, std::uint64_t seed,
                                                 const RandomWarpOptions& warp_opts = {},
                                                 const MotionBeatOptions& beat_opts = {});

} // namespace choreo
