#pragma once

#include <set>
#include <string>
#include <vector>

namespace choreo {

// Describes the joint layout shared by every clip in a repertoire: which joint
// is the root, which are end effectors, and how joints split into upper/lower
// body. Label features (openness, asymmetry) need these roles; the motion data
// itself only carries coordinates.
struct SkeletonDescriptor {
    int joint_count = 21;
    std::vector<std::string> joint_names;
    int root_index = 0;
    int head_index = 0;
    std::vector<int> end_effector_indices;
    std::set<int> upper_body_indices;
    std::set<int> lower_body_indices;

    // Throws ValidationError if any invariant is broken: indices in range,
    // upper/lower disjoint and nonempty, root not an end effector.
    void validate() const;

    // Built-in 21-joint humanoid used by tests and as a documented template.
    static SkeletonDescriptor default21();
};

// Loads a descriptor from its JSON file format (named index lists).
SkeletonDescriptor load_descriptor(const std::string& path);

// Parses the same format from a string; `origin` names the source in errors.
SkeletonDescriptor descriptor_from_json(const std::string& text, const std::string& origin);

// Serializes back to the same JSON format.
std::string descriptor_to_json(const SkeletonDescriptor& d);

} // namespace choreo
