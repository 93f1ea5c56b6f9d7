#include "choreo/motion.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "choreo/error.hpp"

namespace choreo {

void validate_clip(const MotionClip& clip, const SkeletonDescriptor& descriptor) {
    if (clip.frames.empty()) {
        throw ValidationError("clip '" + clip.id + "': no frames");
    }
    for (std::size_t f = 0; f < clip.frames.size(); ++f) {
        const Pose& pose = clip.frames[f];
        if (static_cast<int>(pose.size()) != descriptor.joint_count) {
            throw ValidationError("clip '" + clip.id + "': frame " + std::to_string(f) + " has " +
                                  std::to_string(pose.size()) + " joints, expected " +
                                  std::to_string(descriptor.joint_count));
        }
        for (const Vec3& v : pose) {
            if (!v.finite()) {
                throw ValidationError("clip '" + clip.id + "': non-finite coordinate in frame " +
                                      std::to_string(f));
            }
        }
    }
    if (clip.beats) {
        int prev = -1;
        for (int b : *clip.beats) {
            if (b <= prev || b < 0 || b >= clip.length()) {
                throw ValidationError("clip '" + clip.id + "': beats cache not strictly increasing in range");
            }
            prev = b;
        }
    }
}

MotionClip slice(const MotionClip& clip, int start_frame, int length) {
    if (start_frame < 0 || length < 0 || start_frame + length > clip.length()) {
        throw BoundsError("slice [" + std::to_string(start_frame) + ", " +
                          std::to_string(start_frame + length) + ") outside clip '" + clip.id +
                          "' of " + std::to_string(clip.length()) + " frames");
    }
    MotionClip out;
    out.id = clip.id;
    out.frame_rate = clip.frame_rate;
    out.frames.assign(clip.frames.begin() + start_frame, clip.frames.begin() + start_frame + length);
    if (clip.beats) {
        std::vector<int> kept;
        for (int b : *clip.beats) {
            if (b >= start_frame && b < start_frame + length) {
                kept.push_back(b - start_frame);
            }
        }
        out.beats = std::move(kept);
    }
    return out;
}

MotionClip motion_from_json(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("motion file " + origin + ": invalid JSON: " + e.what());
    }
    MotionClip clip;
    if (!j.contains("id") || !j["id"].is_string()) {
        throw ParseError("motion file " + origin + ": missing string field \"id\"");
    }
    clip.id = j["id"].get<std::string>();
    if (!j.contains("fps") || !j["fps"].is_number()) {
        throw ParseError("motion file " + origin + ": missing numeric field \"fps\"");
    }
    clip.frame_rate = j["fps"].get<int>();
    if (!j.contains("joints") || !j["joints"].is_array()) {
        throw ParseError("motion file " + origin + ": missing array field \"joints\"");
    }
    for (const auto& frame : j["joints"]) {
        if (!frame.is_array()) {
            throw ParseError("motion file " + origin + ": field \"joints\" must hold frame arrays");
        }
        Pose pose;
        pose.reserve(frame.size());
        for (const auto& joint : frame) {
            if (!joint.is_array() || joint.size() != 3) {
                throw ParseError("motion file " + origin +
                                 ": field \"joints\" entries must be [x,y,z] triples");
            }
            pose.push_back(Vec3{joint[0].get<double>(), joint[1].get<double>(), joint[2].get<double>()});
        }
        clip.frames.push_back(std::move(pose));
    }
    return clip;
}

MotionClip load_motion_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open motion file: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return motion_from_json(text, path);
}

std::string motion_to_json(const MotionClip& clip) {
    nlohmann::json j;
    j["id"] = clip.id;
    j["fps"] = clip.frame_rate;
    auto frames = nlohmann::json::array();
    for (const Pose& pose : clip.frames) {
        auto frame = nlohmann::json::array();
        for (const Vec3& v : pose) {
            frame.push_back({v.x, v.y, v.z});
        }
        frames.push_back(std::move(frame));
    }
    j["joints"] = std::move(frames);
    return j.dump();
}

void save_motion_json(const MotionClip& clip, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write motion file: " + path);
    }
    out << motion_to_json(clip) << '\n';
    if (!out) {
        throw IoError("failed writing motion file: " + path);
    }
}

} // namespace choreo
