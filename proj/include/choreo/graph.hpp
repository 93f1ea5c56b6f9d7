#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "choreo/motion.hpp"
#include "choreo/style.hpp"

namespace choreo {

// Weights of the three node-transition cost terms.
struct CostWeights {
    double lambda_s = 1.0;
    double lambda_c = 1.0;
    double lambda_t = 2.0;
};

enum class CompletenessVariant {
    Midpoint, // sigmoid((20 - V) / 5): V = 20 (one second) sits at cost 0.5
    Raw,      // sigmoid(20 - V / 5): the literal rendering, kept for experiments
};

enum class GraphMode {
    Dynamic,     // 4-node chains, full cost
    MotionGraph, // only the first node of each segment, transition cost only
};

// One second (20 frames) of a warped segment. All nodes of a segment share the
// segment's style vector.
struct GraphNode {
    int segment_id = 0;
    int node_index = 0; // j in {1,2,3,4}; covers warped frames [20(j-1), 20j)
    int birth_time = 0; // second at which the segment was inserted
    std::vector<Pose> frames; // exactly 20
    StyleVector segment_style;
    std::vector<int> node_beats; // beat frames local to the node, in [0, 20)
    bool sliced = false;         // segment came from the middle-4s slice path
};

// A warped 4-second segment ready for insertion.
struct WarpedSegment {
    MotionClip clip; // 80 frames with beats cache
    StyleVector style;
    bool sliced = false;
};

// ||candidate.segment_style - s_m||_2.
double style_cost(const GraphNode& candidate, const StyleVector& s_m);

// 1 on segment switch; otherwise sigmoid over the gap V between the previous
// node's last beat and the candidate's first beat in the concatenated 40-frame
// window (V = 40 when either side has no beats).
double completeness_cost(const GraphNode& prev, const GraphNode& candidate,
                         CompletenessVariant variant = CompletenessVariant::Midpoint);

// Mean per-joint distance between prev's last frame and candidate's first
// frame; 0 when prev is absent (the first selection).
double transition_cost(const GraphNode* prev, const GraphNode& candidate);

struct CandidateCost {
    int segment_id;
    int birth_time;
    int node_index;
    double style;
    double completeness;
    double transition;
    double total;
    bool sliced;
};

struct SelectionResult {
    GraphNode chosen;
    std::size_t chosen_index = 0; // into candidates
    std::vector<CandidateCost> candidates;
};

// Time-indexed store of candidate segments with per-second insertion,
// activation (node j = t - birth + 1), eviction of segments older than t-3,
// and cost-minimizing selection. Not safe for concurrent mutation.
class DynamicGraph {
public:
    DynamicGraph(CostWeights weights, GraphMode mode = GraphMode::Dynamic,
                 CompletenessVariant variant = CompletenessVariant::Midpoint);

    // Splits each 80-frame segment into nodes (all four, or only j=1 in
    // MotionGraph mode), registers them under birth time t and evicts segments
    // with birth < t-3. t must advance by exactly one per call (or start fresh).
    void insert_segments(std::vector<WarpedSegment> warped, int t);

    // Active nodes for the current second, ordered by (segment_id, node_index).
    std::vector<const GraphNode*> active_candidates() const;

    // Argmin of lambda_s*style + lambda_c*completeness + lambda_t*transition
    // over the active candidates; ties prefer staying on the previous segment,
    // then smaller segment_id, then smaller node index. Sets the current node.
    // Throws StateError when no candidate is active.
    SelectionResult select_node(const StyleVector& s_m);

    int current_time() const { return current_time_; }
    const std::optional<GraphNode>& current_node() const { return current_node_; }
    std::size_t live_segment_count() const;
    int live_node_count() const;
    const CostWeights& weights() const { return weights_; }
    GraphMode mode() const { return mode_; }

private:
    struct SegmentChain {
        int segment_id;
        int birth_time;
        std::vector<GraphNode> nodes; // 4 (or 1 in MotionGraph mode)
    };

    CostWeights weights_;
    GraphMode mode_;
    CompletenessVariant variant_;
    std::deque<SegmentChain> live_;
    std::optional<GraphNode> current_node_;
    int current_time_ = -1;
    int next_segment_id_ = 0;
    bool inserted_this_second_ = false;
};

struct BlendOptions {
    int blend_frames = 8; // crossfade window width at a segment switch
    bool align_yaw = false;
    int root_index = 0;
};

// Concatenates the selected nodes. Consecutive nodes of one segment join
// exactly; at a switch the incoming segment is horizontally root-aligned to
// the previous output frame and the boundary is crossfaded over blend_frames
// frames with linear weights. Output length = 20 * node count.
MotionClip blend_output(const std::vector<GraphNode>& selected, const BlendOptions& opts);

} // namespace choreo
