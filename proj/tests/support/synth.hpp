#pragma once

// Synthetic dance-clip and corpus generators shared by the unit and acceptance
// suites. Clips are whole-body horizontal sways with a raised-cosine step
// profile (clean speed minima every `period` frames) plus small limb
// decorations for style variety.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "choreo/motion.hpp"
#include "choreo/rng.hpp"
#include "choreo/skeleton.hpp"

namespace testsupport {

inline choreo::Pose base_pose() {
    using choreo::Vec3;
    return {
        Vec3{0.00, 1.00, 0.00},  // root
        Vec3{0.00, 1.20, 0.00},  // spine
        Vec3{0.00, 1.35, 0.00},  // chest
        Vec3{0.00, 1.50, 0.00},  // neck
        Vec3{0.00, 1.60, 0.00},  // head
        Vec3{0.20, 1.45, 0.00},  // l_shoulder
        Vec3{0.45, 1.45, 0.00},  // l_elbow
        Vec3{0.65, 1.45, 0.00},  // l_wrist
        Vec3{0.75, 1.45, 0.00},  // l_hand
        Vec3{-0.20, 1.45, 0.00}, // r_shoulder
        Vec3{-0.45, 1.45, 0.00}, // r_elbow
        Vec3{-0.65, 1.45, 0.00}, // r_wrist
        Vec3{-0.75, 1.45, 0.00}, // r_hand
        Vec3{0.10, 0.90, 0.00},  // l_hip
        Vec3{0.10, 0.50, 0.00},  // l_knee
        Vec3{0.10, 0.10, 0.00},  // l_ankle
        Vec3{0.15, 0.05, 0.10},  // l_foot
        Vec3{-0.10, 0.90, 0.00}, // r_hip
        Vec3{-0.10, 0.50, 0.00}, // r_knee
        Vec3{-0.10, 0.10, 0.00}, // r_ankle
        Vec3{-0.15, 0.05, 0.10}, // r_foot
    };
}

struct DanceParams {
    int frames = choreo::kRepertoireFrames;
    int period = 20;          // frames between motion beats
    double root_step = 0.04;  // peak per-frame whole-body step, meters
    double limb_scale = 0.15; // limb decoration relative to the root sway
    int phase = 0;            // shifts beat positions
    std::uint64_t seed = 1;   // per-clip variation
};

// The whole body translates along x with per-frame step
// s(t) = root_step * (1 - cos(2*pi*(t - phase)/period)) / 2, direction
// flipping each period, so average joint speed has strict minima exactly where
// s(t) = 0. Decorated limbs add small synchronized oscillations.
inline choreo::MotionClip make_dance_clip(const std::string& id, const DanceParams& p = {}) {
    choreo::Rng rng(choreo::sub_seed(p.seed, "synth-clip"));
    const choreo::Pose base = base_pose();
    const int joints = static_cast<int>(base.size());

    // Decoration set: upper limbs, lower limbs, or both.
    const int family = rng.uniform_int(0, 2);
    std::vector<int> decorated;
    if (family == 0 || family == 2) decorated.insert(decorated.end(), {6, 7, 8, 10, 11, 12});
    if (family == 1 || family == 2) decorated.insert(decorated.end(), {14, 15, 16, 18, 19, 20});
    std::vector<double> limb_gain(joints, 0.0);
    for (int j : decorated) limb_gain[j] = p.limb_scale * (0.5 + rng.uniform01());

    choreo::MotionClip clip;
    clip.id = id;
    clip.frame_rate = choreo::kMotionFps;
    clip.frames.reserve(p.frames);

    double sway = 0.0;
    double direction = 1.0;
    for (int t = 0; t < p.frames; ++t) {
        const double theta = 2.0 * M_PI * (t - p.phase) / p.period;
        const double step = p.root_step * (1.0 - std::cos(theta)) / 2.0;
        if (t > 0) {
            sway += direction * step;
            // Flip direction at each speed minimum so the sway stays bounded.
            const int rel = t - p.phase;
            if (rel > 0 && rel % p.period == 0) direction = -direction;
        }
        choreo::Pose pose(joints);
        for (int j = 0; j < joints; ++j) {
            pose[j] = base[j];
            pose[j].x += sway;
            if (limb_gain[j] > 0.0) {
                // Limb decoration shares the root's rhythm so minima stay put.
                pose[j].z += limb_gain[j] * sway;
            }
        }
        clip.frames.push_back(std::move(pose));
    }
    return clip;
}

// A clip with zero motion everywhere.
inline choreo::MotionClip make_frozen_clip(const std::string& id, int frames) {
    choreo::MotionClip clip;
    clip.id = id;
    clip.frame_rate = choreo::kMotionFps;
    clip.frames.assign(frames, base_pose());
    return clip;
}

struct CorpusParams {
    int clip_count = 10;
    std::vector<int> periods = {14, 16, 18, 22, 24, 26};
    std::uint64_t seed = 7;
    bool with_click_wavs = false; // pair each clip with a click WAV at its period
};

// Writes <dir>/clips/*.json (+ paired WAVs when requested) and
// <dir>/descriptor.json; returns the clip ids.
std::vector<std::string> write_corpus(const std::string& dir, const CorpusParams& params);

} // namespace testsupport
