#include <doctest.h>

#include <cmath>

#include "choreo/error.hpp"
#include "choreo/graph.hpp"
#include "choreo/motion_analysis.hpp"
#include "choreo/rng.hpp"
#include "support/synth.hpp"

using namespace choreo;

namespace {

StyleVector style4(double a, double b, double c, double d) {
    StyleVector s;
    s.values = {a, b, c, d};
    return s;
}

GraphNode node_with_beats(int segment_id, std::vector<int> beats) {
    GraphNode n;
    n.segment_id = segment_id;
    n.node_index = 1;
    n.frames.assign(kNodeFrames, testsupport::base_pose());
    n.segment_style = style4(5, 5, 5, 5);
    n.node_beats = std::move(beats);
    return n;
}

WarpedSegment make_segment(std::uint64_t seed, StyleVector style) {
    testsupport::DanceParams p;
    p.frames = 80;
    p.seed = seed;
    WarpedSegment seg;
    seg.clip = with_beats(testsupport::make_dance_clip("seg", p));
    seg.style = std::move(style);
    return seg;
}

} // namespace

TEST_CASE("style_cost") {
    GraphNode n = node_with_beats(0, {});
    SUBCASE("identical vectors") {
        CHECK(style_cost(n, style4(5, 5, 5, 5)) == 0.0);
    }
    SUBCASE("single-coordinate difference") {
        CHECK(style_cost(n, style4(5, 5, 5, 8)) == doctest::Approx(3.0));
    }
    SUBCASE("random vectors equal an independent recomputation") {
        Rng rng(sub_seed(2, "stylecost"));
        for (int i = 0; i < 50; ++i) {
            StyleVector a = style4(rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01());
            n.segment_style = a;
            const StyleVector b =
                style4(rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01());
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) {
                acc += (a.values[k] - b.values[k]) * (a.values[k] - b.values[k]);
            }
            CHECK(style_cost(n, b) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
        }
    }
    SUBCASE("dimension mismatch") {
        StyleVector wide;
        wide.values.assign(32, 0.0);
        CHECK_THROWS_AS(style_cost(n, wide), ValidationError);
    }
}

TEST_CASE("completeness_cost") {
    SUBCASE("different segments always cost 1") {
        const GraphNode a = node_with_beats(1, {5});
        const GraphNode b = node_with_beats(2, {5});
        CHECK(completeness_cost(a, b) == 1.0);
    }
    SUBCASE("V = 20 sits at the sigmoid midpoint") {
        // prev beat at 10, candidate beat at local 10 => V = 30 - 10 = 20.
        const GraphNode a = node_with_beats(3, {10});
        const GraphNode b = node_with_beats(3, {10});
        CHECK(completeness_cost(a, b) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("tight beats: V = 2 evaluates sigmoid(3.6)") {
        const GraphNode a = node_with_beats(4, {19});
        const GraphNode b = node_with_beats(4, {1});
        const double expected = 1.0 / (1.0 + std::exp(-3.6));
        CHECK(completeness_cost(a, b) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(completeness_cost(a, b) == doctest::Approx(0.9734).epsilon(1e-4));
    }
    SUBCASE("no beats on either side reads as mid-action (V = 40)") {
        const GraphNode a = node_with_beats(5, {});
        const GraphNode b = node_with_beats(5, {7});
        const double expected = 1.0 / (1.0 + std::exp(4.0));
        CHECK(completeness_cost(a, b) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("always in (0, 1]; exactly 1 on switch") {
        Rng rng(sub_seed(4, "complete"));
        for (int i = 0; i < 200; ++i) {
            const int seg_a = rng.uniform_int(0, 3), seg_b = rng.uniform_int(0, 3);
            std::vector<int> beats_a, beats_b;
            if (rng.bernoulli(0.8)) beats_a.push_back(rng.uniform_int(0, 19));
            if (rng.bernoulli(0.8)) beats_b.push_back(rng.uniform_int(0, 19));
            const GraphNode a = node_with_beats(seg_a, beats_a);
            const GraphNode b = node_with_beats(seg_b, beats_b);
            const double c = completeness_cost(a, b);
            CHECK(c > 0.0);
            CHECK(c <= 1.0);
            if (seg_a != seg_b) CHECK(c == 1.0);
        }
    }
    SUBCASE("raw variant evaluates the literal rendering") {
        const GraphNode a = node_with_beats(6, {10});
        const GraphNode b = node_with_beats(6, {10});
        // V = 20: sigmoid(20 - 20/5) = sigmoid(16).
        const double expected = 1.0 / (1.0 + std::exp(-16.0));
        CHECK(completeness_cost(a, b, CompletenessVariant::Raw) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("transition_cost") {
    SUBCASE("no previous node: zero") {
        const GraphNode b = node_with_beats(0, {});
        CHECK(transition_cost(nullptr, b) == 0.0);
    }
    SUBCASE("continuity: equal boundary frames give zero") {
        const GraphNode a = node_with_beats(0, {});
        const GraphNode b = node_with_beats(1, {});
        CHECK(transition_cost(&a, b) == 0.0);
    }
    SUBCASE("hand arithmetic: one joint displaced 0.3 m over 21 joints") {
        const GraphNode a = node_with_beats(0, {});
        GraphNode b = node_with_beats(1, {});
        b.frames.front()[7].x += 0.3;
        CHECK(transition_cost(&a, b) == doctest::Approx(0.3 / 21.0).epsilon(1e-12));
    }
}

TEST_CASE("dynamic graph lifecycle") {
    DynamicGraph graph(CostWeights{});
    const StyleVector query = style4(5, 5, 5, 5);

    SUBCASE("warm-up: K segments at t=0 store 4K nodes, K active") {
        std::vector<WarpedSegment> segs;
        for (int i = 0; i < 3; ++i) segs.push_back(make_segment(i, query));
        graph.insert_segments(std::move(segs), 0);
        CHECK(graph.live_node_count() == 12);
        CHECK(graph.active_candidates().size() == 3);
        for (const GraphNode* n : graph.active_candidates()) CHECK(n->node_index == 1);
    }
    SUBCASE("window arithmetic: births {2,3,4,5} live at t=5") {
        for (int t = 0; t <= 5; ++t) {
            std::vector<WarpedSegment> segs;
            segs.push_back(make_segment(t, query));
            graph.insert_segments(std::move(segs), t);
            graph.select_node(query);
        }
        CHECK(graph.live_segment_count() == 4);
        const auto active = graph.active_candidates();
        REQUIRE(active.size() == 4);
        // Active node j = t - birth + 1 for each live chain.
        for (const GraphNode* n : active) {
            CHECK(n->node_index == 5 - n->birth_time + 1);
        }
    }
    SUBCASE("time must advance by exactly one") {
        graph.insert_segments({make_segment(1, query)}, 0);
        CHECK_THROWS_AS(graph.insert_segments({make_segment(2, query)}, 2), StateError);
    }
    SUBCASE("selection without candidates is a state error") {
        DynamicGraph empty(CostWeights{});
        CHECK_THROWS_AS(empty.select_node(query), StateError);
    }
    SUBCASE("wrong segment length rejected") {
        WarpedSegment seg = make_segment(1, query);
        seg.clip.frames.pop_back();
        std::vector<WarpedSegment> segs;
        segs.push_back(std::move(seg));
        CHECK_THROWS_AS(graph.insert_segments(std::move(segs), 0), ValidationError);
    }
}

TEST_CASE("select_node picks the exhaustive minimum") {
    Rng rng(sub_seed(10, "select"));
    DynamicGraph graph(CostWeights{1.0, 1.0, 2.0});
    for (int t = 0; t < 8; ++t) {
        std::vector<WarpedSegment> segs;
        for (int i = 0; i < 4; ++i) {
            segs.push_back(make_segment(rng.uniform_int(0, 1 << 20),
                                        style4(1 + 9 * rng.uniform01(), 1 + 9 * rng.uniform01(),
                                               1 + 9 * rng.uniform01(), 1 + 9 * rng.uniform01())));
        }
        graph.insert_segments(std::move(segs), t);
        const StyleVector query = style4(1 + 9 * rng.uniform01(), 1 + 9 * rng.uniform01(),
                                         1 + 9 * rng.uniform01(), 1 + 9 * rng.uniform01());
        const SelectionResult sel = graph.select_node(query);

        double min_total = sel.candidates.front().total;
        for (const CandidateCost& c : sel.candidates) min_total = std::min(min_total, c.total);
        CHECK(sel.candidates[sel.chosen_index].total == doctest::Approx(min_total).epsilon(1e-12));
        if (t >= 3) CHECK(sel.candidates.size() == 16);
    }
}

TEST_CASE("single candidate is chosen regardless of cost") {
    DynamicGraph graph(CostWeights{});
    graph.insert_segments({make_segment(9, style4(1, 1, 1, 1))}, 0);
    const SelectionResult sel = graph.select_node(style4(10, 10, 10, 10));
    CHECK(sel.candidates.size() == 1);
    CHECK(sel.chosen.segment_id == 0);
}

TEST_CASE("motiongraph mode keeps only first nodes and transition cost") {
    DynamicGraph graph(CostWeights{1.0, 1.0, 2.0}, GraphMode::MotionGraph);
    const StyleVector query = style4(5, 5, 5, 5);
    for (int t = 0; t < 4; ++t) {
        std::vector<WarpedSegment> segs;
        for (int i = 0; i < 3; ++i) segs.push_back(make_segment(10 * t + i, query));
        graph.insert_segments(std::move(segs), t);
        const SelectionResult sel = graph.select_node(query);
        CHECK(sel.candidates.size() == 3); // only this second's fresh nodes
        for (const CandidateCost& c : sel.candidates) {
            CHECK(c.style == 0.0);
            CHECK(c.completeness == 0.0);
            CHECK(c.total == doctest::Approx(2.0 * c.transition));
            CHECK(c.node_index == 1);
        }
    }
}

TEST_CASE("blend_output") {
    BlendOptions opts;
    opts.root_index = 0;

    SUBCASE("single-segment selection concatenates exactly") {
        testsupport::DanceParams p;
        p.frames = 80;
        p.seed = 33;
        const MotionClip seg = with_beats(testsupport::make_dance_clip("seg", p));
        std::vector<GraphNode> nodes;
        for (int j = 1; j <= 4; ++j) {
            GraphNode n;
            n.segment_id = 7;
            n.node_index = j;
            n.frames.assign(seg.frames.begin() + (j - 1) * 20, seg.frames.begin() + j * 20);
            nodes.push_back(std::move(n));
        }
        const MotionClip out = blend_output(nodes, opts);
        REQUIRE(out.length() == 80);
        CHECK(out.frames == seg.frames);
    }
    SUBCASE("identical frozen nodes from different segments blend to themselves") {
        GraphNode a = node_with_beats(1, {});
        GraphNode b = node_with_beats(2, {});
        const MotionClip out = blend_output({a, b}, opts);
        REQUIRE(out.length() == 40);
        for (const Pose& pose : out.frames) CHECK(pose == testsupport::base_pose());
    }
    SUBCASE("switch with 0.5 m root offset stays continuous") {
        testsupport::DanceParams p;
        p.frames = 80;
        p.seed = 5;
        const MotionClip seg_a = testsupport::make_dance_clip("a", p);
        p.seed = 6;
        MotionClip seg_b = testsupport::make_dance_clip("b", p);
        for (Pose& pose : seg_b.frames) {
            for (Vec3& v : pose) v.x += 0.5; // displaced segment
        }
        GraphNode na;
        na.segment_id = 1;
        na.node_index = 1;
        na.frames.assign(seg_a.frames.begin(), seg_a.frames.begin() + 20);
        GraphNode nb;
        nb.segment_id = 2;
        nb.node_index = 1;
        nb.frames.assign(seg_b.frames.begin(), seg_b.frames.begin() + 20);

        const MotionClip out = blend_output({na, nb}, opts);
        REQUIRE(out.length() == 40);
        // Root trajectory continuity: no step larger than offset/8 plus the
        // intrinsic per-frame motion of either segment.
        double intrinsic = 0.0;
        for (int t = 1; t < 20; ++t) {
            intrinsic = std::max(intrinsic,
                                 (seg_a.frames[t][0] - seg_a.frames[t - 1][0]).norm());
            intrinsic = std::max(intrinsic,
                                 (seg_b.frames[t][0] - seg_b.frames[t - 1][0]).norm());
        }
        for (int t = 1; t < 40; ++t) {
            const double step = (out.frames[t][0] - out.frames[t - 1][0]).norm();
            CHECK(step <= 0.5 / 8.0 + intrinsic + 1e-9);
        }
        // Horizontal alignment: the incoming root lands on the previous one.
        CHECK(out.frames[20][0].x == doctest::Approx(out.frames[19][0].x).epsilon(0.05));
    }
    SUBCASE("non-consecutive same-segment nodes are rejected") {
        GraphNode a = node_with_beats(1, {});
        GraphNode b = node_with_beats(1, {});
        b.node_index = 3;
        CHECK_THROWS_AS(blend_output({a, b}, opts), ValidationError);
    }
    SUBCASE("empty selection rejected") {
        CHECK_THROWS_AS(blend_output({}, opts), ValidationError);
    }
}
