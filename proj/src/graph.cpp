#include "choreo/graph.hpp"

#include <algorithm>
#include <cmath>

#include "choreo/error.hpp"

namespace choreo {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

} // namespace

double style_cost(const GraphNode& candidate, const StyleVector& s_m) {
    if (candidate.segment_style.dimension() != s_m.dimension()) {
        throw ValidationError("style_cost: dimension mismatch " +
                              std::to_string(candidate.segment_style.dimension()) + " vs " +
                              std::to_string(s_m.dimension()));
    }
    return l2(candidate.segment_style.values, s_m.values);
}

double completeness_cost(const GraphNode& prev, const GraphNode& candidate,
                         CompletenessVariant variant) {
    if (prev.segment_id != candidate.segment_id) return 1.0;
    // Beat gap across the concatenated 40-frame window; no beats on either
    // side reads as mid-action, so V takes the window maximum.
    double v = 40.0;
    if (!prev.node_beats.empty() && !candidate.node_beats.empty()) {
        const int last_prev = prev.node_beats.back();
        const int first_cand = kNodeFrames + candidate.node_beats.front();
        v = first_cand - last_prev;
    }
    return variant == CompletenessVariant::Midpoint ? sigmoid((20.0 - v) / 5.0)
                                                    : sigmoid(20.0 - v / 5.0);
}

double transition_cost(const GraphNode* prev, const GraphNode& candidate) {
    if (prev == nullptr) return 0.0;
    const Pose& last = prev->frames.back();
    const Pose& first = candidate.frames.front();
    const std::size_t joints = last.size();
    double acc = 0.0;
    for (std::size_t j = 0; j < joints; ++j) {
        acc += (first[j] - last[j]).norm();
    }
    return acc / static_cast<double>(joints);
}

DynamicGraph::DynamicGraph(CostWeights weights, GraphMode mode, CompletenessVariant variant)
    : weights_(weights), mode_(mode), variant_(variant) {
    if (!(weights.lambda_s >= 0.0) || !(weights.lambda_c >= 0.0) || !(weights.lambda_t >= 0.0)) {
        throw ValidationError("DynamicGraph: cost weights must be finite and >= 0");
    }
}

void DynamicGraph::insert_segments(std::vector<WarpedSegment> warped, int t) {
    if (current_time_ >= 0 && t != current_time_ + 1) {
        throw StateError("DynamicGraph: time must advance by one second per insertion (got " +
                         std::to_string(t) + " after " + std::to_string(current_time_) + ")");
    }
    current_time_ = t;
    inserted_this_second_ = true;

    for (WarpedSegment& seg : warped) {
        if (seg.clip.length() != kSegmentFrames) {
            throw ValidationError("insert_segments: segment '" + seg.clip.id + "' has " +
                                  std::to_string(seg.clip.length()) + " frames, expected 80");
        }
        if (!seg.clip.beats) {
            throw ValidationError("insert_segments: segment '" + seg.clip.id + "' has no beats cache");
        }
        SegmentChain chain;
        chain.segment_id = next_segment_id_++;
        chain.birth_time = t;
        const int node_count = mode_ == GraphMode::MotionGraph ? 1 : 4;
        for (int j = 1; j <= node_count; ++j) {
            GraphNode node;
            node.segment_id = chain.segment_id;
            node.node_index = j;
            node.birth_time = t;
            node.frames.assign(seg.clip.frames.begin() + (j - 1) * kNodeFrames,
                               seg.clip.frames.begin() + j * kNodeFrames);
            node.segment_style = seg.style;
            node.sliced = seg.sliced;
            for (int b : *seg.clip.beats) {
                if (b >= (j - 1) * kNodeFrames && b < j * kNodeFrames) {
                    node.node_beats.push_back(b - (j - 1) * kNodeFrames);
                }
            }
            chain.nodes.push_back(std::move(node));
        }
        live_.push_back(std::move(chain));
    }

    // Segments inserted before t-3 can never be activated again.
    while (!live_.empty() && live_.front().birth_time < t - 3) {
        live_.pop_front();
    }
}

std::vector<const GraphNode*> DynamicGraph::active_candidates() const {
    std::vector<const GraphNode*> active;
    for (const SegmentChain& chain : live_) {
        const int j = current_time_ - chain.birth_time + 1;
        if (j >= 1 && j <= static_cast<int>(chain.nodes.size())) {
            active.push_back(&chain.nodes[j - 1]);
        }
    }
    return active;
}

SelectionResult DynamicGraph::select_node(const StyleVector& s_m) {
    if (!inserted_this_second_) {
        throw StateError("DynamicGraph: select_node called before insert_segments for this second");
    }
    const std::vector<const GraphNode*> active = active_candidates();
    if (active.empty()) {
        throw StateError("DynamicGraph: no active candidates at t=" + std::to_string(current_time_));
    }

    const GraphNode* prev = current_node_ ? &*current_node_ : nullptr;
    SelectionResult result;
    result.candidates.reserve(active.size());

    std::size_t best = 0;
    for (std::size_t i = 0; i < active.size(); ++i) {
        const GraphNode& node = *active[i];
        CandidateCost cc;
        cc.segment_id = node.segment_id;
        cc.birth_time = node.birth_time;
        cc.node_index = node.node_index;
        cc.sliced = node.sliced;
        if (mode_ == GraphMode::MotionGraph) {
            // Transition-only scoring: fresh style-matched candidates each
            // second make the style term uninformative, and completeness never
            // applies without stored subsequent nodes.
            cc.style = 0.0;
            cc.completeness = 0.0;
            cc.transition = transition_cost(prev, node);
            cc.total = weights_.lambda_t * cc.transition;
        } else {
            cc.style = style_cost(node, s_m);
            cc.completeness = prev ? completeness_cost(*prev, node, variant_) : 1.0;
            cc.transition = transition_cost(prev, node);
            cc.total = weights_.lambda_s * cc.style + weights_.lambda_c * cc.completeness +
                       weights_.lambda_t * cc.transition;
        }
        result.candidates.push_back(cc);

        if (i > 0) {
            const CandidateCost& a = result.candidates[best];
            const CandidateCost& b = cc;
            const bool a_stays = prev && a.segment_id == prev->segment_id;
            const bool b_stays = prev && b.segment_id == prev->segment_id;
            bool better = false;
            if (b.total != a.total) {
                better = b.total < a.total;
            } else if (b_stays != a_stays) {
                better = b_stays;
            } else if (b.segment_id != a.segment_id) {
                better = b.segment_id < a.segment_id;
            } else {
                better = b.node_index < a.node_index;
            }
            if (better) best = i;
        }
    }

    result.chosen_index = best;
    result.chosen = *active[best];
    current_node_ = result.chosen;
    inserted_this_second_ = false;
    return result;
}

std::size_t DynamicGraph::live_segment_count() const { return live_.size(); }

int DynamicGraph::live_node_count() const {
    int n = 0;
    for (const SegmentChain& chain : live_) n += static_cast<int>(chain.nodes.size());
    return n;
}

namespace {

// Rotates p horizontally around `center` by angle (used by the optional yaw
// alignment).
Vec3 rotate_y(const Vec3& p, const Vec3& center, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    const double dx = p.x - center.x, dz = p.z - center.z;
    return {center.x + c * dx + s * dz, p.y, center.z - s * dx + c * dz};
}

} // namespace

MotionClip blend_output(const std::vector<GraphNode>& selected, const BlendOptions& opts) {
    if (selected.empty()) {
        throw ValidationError("blend_output: empty selection");
    }
    MotionClip out;
    out.id = "choreography";
    out.frame_rate = kMotionFps;
    out.frames.reserve(selected.size() * kNodeFrames);

    // The alignment transform (yaw about the switch pivot, then a horizontal
    // translation) persists until the next switch so continuation nodes of the
    // same segment stay seamless.
    Vec3 offset{0.0, 0.0, 0.0};
    Vec3 pivot{0.0, 0.0, 0.0};
    double yaw = 0.0;
    for (std::size_t s = 0; s < selected.size(); ++s) {
        const GraphNode& node = selected[s];
        const bool switched = s > 0 && node.segment_id != selected[s - 1].segment_id;
        if (s > 0 && !switched && node.node_index != selected[s - 1].node_index + 1) {
            throw ValidationError("blend_output: non-consecutive nodes of segment " +
                                  std::to_string(node.segment_id));
        }

        if (switched) {
            const Vec3 prev_root = out.frames.back()[opts.root_index];
            const Vec3 in_root = node.frames.front()[opts.root_index];
            pivot = in_root;
            yaw = 0.0;
            if (opts.align_yaw) {
                const Vec3 prev_prev = out.frames[out.frames.size() - 2][opts.root_index];
                const Vec3 v_out{prev_root.x - prev_prev.x, 0.0, prev_root.z - prev_prev.z};
                const Vec3 in_next = node.frames[1][opts.root_index];
                const Vec3 v_in{in_next.x - in_root.x, 0.0, in_next.z - in_root.z};
                if (v_out.norm() > 1e-6 && v_in.norm() > 1e-6) {
                    yaw = std::atan2(v_out.z, v_out.x) - std::atan2(v_in.z, v_in.x);
                }
            }
            // Horizontal translation only; the root is the yaw pivot, so its
            // rotated position is unchanged and the offset lands it on the
            // previous output root.
            offset = {prev_root.x - in_root.x, 0.0, prev_root.z - in_root.z};
        }

        const std::size_t node_start = out.frames.size();
        for (const Pose& pose : node.frames) {
            Pose placed(pose.size());
            for (std::size_t j = 0; j < pose.size(); ++j) {
                Vec3 p = pose[j];
                if (yaw != 0.0) {
                    p = rotate_y(p, pivot, yaw);
                }
                placed[j] = p + offset;
            }
            out.frames.push_back(std::move(placed));
        }

        if (switched && opts.blend_frames >= 2) {
            // Crossfade across the boundary: half the window re-weights the
            // outgoing tail, half the incoming head. Frame k of the window
            // blends the held/extended tail against the held/advanced head
            // with weight k/(w-1), so the window edges stay exact.
            const int w = std::min(opts.blend_frames, 2 * kNodeFrames);
            const int half = w / 2;
            const std::size_t boundary = node_start;
            std::vector<Pose> tail(out.frames.begin() + (boundary - half),
                                   out.frames.begin() + boundary);
            std::vector<Pose> head(out.frames.begin() + boundary,
                                   out.frames.begin() + boundary + (w - half));
            for (int k = 0; k < w; ++k) {
                const double weight = static_cast<double>(k) / (w - 1);
                const Pose& a = k < half ? tail[k] : tail[half - 1];
                const Pose& b = k < half ? head[0] : head[k - half];
                Pose& dst = out.frames[boundary - half + k];
                for (std::size_t j = 0; j < dst.size(); ++j) {
                    dst[j] = lerp(a[j], b[j], weight);
                }
            }
        }
    }
    return out;
}

} // namespace choreo
