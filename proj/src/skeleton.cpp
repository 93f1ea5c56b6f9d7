#include "choreo/skeleton.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "choreo/error.hpp"

namespace choreo {

namespace {

void check_index(int idx, int joint_count, const std::string& what) {
    if (idx < 0 || idx >= joint_count) {
        throw ValidationError("skeleton descriptor: " + what + " index " + std::to_string(idx) +
                              " outside [0, " + std::to_string(joint_count) + ")");
    }
}

} // namespace

void SkeletonDescriptor::validate() const {
    if (joint_count <= 0) {
        throw ValidationError("skeleton descriptor: joint_count must be positive");
    }
    if (!joint_names.empty() && static_cast<int>(joint_names.size()) != joint_count) {
        throw ValidationError("skeleton descriptor: joint_names length " +
                              std::to_string(joint_names.size()) + " != joint_count " +
                              std::to_string(joint_count));
    }
    check_index(root_index, joint_count, "root");
    check_index(head_index, joint_count, "head");
    for (int idx : end_effector_indices) {
        check_index(idx, joint_count, "end_effector");
        if (idx == root_index) {
            throw ValidationError("skeleton descriptor: root_index must not be an end effector");
        }
    }
    if (upper_body_indices.empty() || lower_body_indices.empty()) {
        throw ValidationError("skeleton descriptor: upper and lower body sets must be nonempty");
    }
    for (int idx : upper_body_indices) {
        check_index(idx, joint_count, "upper_body");
        if (lower_body_indices.count(idx)) {
            throw ValidationError("skeleton descriptor: joint " + std::to_string(idx) +
                                  " appears in both upper and lower body sets");
        }
    }
    for (int idx : lower_body_indices) {
        check_index(idx, joint_count, "lower_body");
    }
}

SkeletonDescriptor SkeletonDescriptor::default21() {
    SkeletonDescriptor d;
    d.joint_count = 21;
    d.joint_names = {"root",      "spine",   "chest",   "neck",    "head",    "l_shoulder",
                     "l_elbow",   "l_wrist", "l_hand",  "r_shoulder", "r_elbow", "r_wrist",
                     "r_hand",    "l_hip",   "l_knee",  "l_ankle", "l_foot",  "r_hip",
                     "r_knee",    "r_ankle", "r_foot"};
    d.root_index = 0;
    d.head_index = 4;
    d.end_effector_indices = {8, 12, 16, 20};
    d.upper_body_indices = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    d.lower_body_indices = {13, 14, 15, 16, 17, 18, 19, 20};
    return d;
}

SkeletonDescriptor descriptor_from_json(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("descriptor " + origin + ": invalid JSON: " + e.what());
    }
    SkeletonDescriptor d;
    try {
        d.joint_count = j.at("joint_count").get<int>();
        if (j.contains("joint_names")) {
            d.joint_names = j.at("joint_names").get<std::vector<std::string>>();
        }
        d.root_index = j.at("root_index").get<int>();
        d.head_index = j.at("head_index").get<int>();
        d.end_effector_indices = j.at("end_effector_indices").get<std::vector<int>>();
        auto upper = j.at("upper_body_indices").get<std::vector<int>>();
        auto lower = j.at("lower_body_indices").get<std::vector<int>>();
        d.upper_body_indices.insert(upper.begin(), upper.end());
        d.lower_body_indices.insert(lower.begin(), lower.end());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("descriptor " + origin + ": " + e.what());
    }
    d.validate();
    return d;
}

SkeletonDescriptor load_descriptor(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open descriptor file: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return descriptor_from_json(text, path);
}

std::string descriptor_to_json(const SkeletonDescriptor& d) {
    nlohmann::json j;
    j["joint_count"] = d.joint_count;
    j["joint_names"] = d.joint_names;
    j["root_index"] = d.root_index;
    j["head_index"] = d.head_index;
    j["end_effector_indices"] = d.end_effector_indices;
    j["upper_body_indices"] = std::vector<int>(d.upper_body_indices.begin(), d.upper_body_indices.end());
    j["lower_body_indices"] = std::vector<int>(d.lower_body_indices.begin(), d.lower_body_indices.end());
    return j.dump(2);
}

} // namespace choreo
