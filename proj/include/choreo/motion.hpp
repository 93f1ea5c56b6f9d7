#pragma once

#include <optional>
#include <string>
#include <vector>

#include "choreo/skeleton.hpp"
#include "choreo/vec3.hpp"

namespace choreo {

inline constexpr int kMotionFps = 20;        // motion frames per second
inline constexpr int kRepertoireFrames = 160; // stored clips are 8 s
inline constexpr int kSegmentFrames = 80;     // warped segments are 4 s
inline constexpr int kNodeFrames = 20;        // graph nodes are 1 s

// One skeleton pose: joint_count 3-D joint positions.
using Pose = std::vector<Vec3>;

// A fixed-rate sequence of poses. `beats` caches detected motion beat frames
// (strictly increasing, within [0, length)).
struct MotionClip {
    std::string id;
    int frame_rate = kMotionFps;
    std::vector<Pose> frames;
    std::optional<std::vector<int>> beats;

    int length() const { return static_cast<int>(frames.size()); }
    double duration_seconds() const {
        return static_cast<double>(frames.size()) / frame_rate;
    }
};

// Validates finiteness and per-pose dimension against the descriptor.
// Throws ValidationError naming the clip id on failure.
void validate_clip(const MotionClip& clip, const SkeletonDescriptor& descriptor);

// Frames [start_frame, start_frame + length). The beats cache is re-indexed
// and filtered to the window. Throws BoundsError when out of range.
MotionClip slice(const MotionClip& clip, int start_frame, int length);

// Motion JSON format: {"id": str, "fps": int, "joints": [[[x,y,z] * J] * frames]}.
MotionClip load_motion_json(const std::string& path);
void save_motion_json(const MotionClip& clip, const std::string& path);
std::string motion_to_json(const MotionClip& clip);
MotionClip motion_from_json(const std::string& text, const std::string& origin);

} // namespace choreo
