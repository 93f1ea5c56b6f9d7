#include "choreo/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "choreo/error.hpp"
#include "choreo/tempo.hpp"

namespace choreo {

namespace {

int count_beats_in_window(const std::vector<int>& beats, int start, int width) {
    int n = 0;
    for (int b : beats) {
        if (b >= start && b < start + width) ++n;
    }
    return n;
}

} // namespace

ChoreoResult choreograph(const MusicFeatures& music, const Repertoire& repertoire,
                         const RunConfig& config, const PipelineInputs& inputs,
                         const StepObserver& observer) {
    config.validate();
    const int total_seconds = static_cast<int>(music.duration_seconds);
    if (total_seconds < 4) {
        throw ValidationError("choreograph: music must be at least 4 s long (got " +
                              std::to_string(music.duration_seconds) + " s)");
    }
    if (repertoire.entries.empty()) {
        throw ValidationError("choreograph: empty repertoire");
    }
    const int window60 = 4 * kMusicFps;
    const int n_frames = music.frame_count();
    const int k_eff = std::min<int>(config.k, static_cast<int>(repertoire.entries.size()));

    const bool external = config.style_backend == StyleBackend::External;
    if (external && !inputs.music_embeddings) {
        throw ValidationError("choreograph: external style backend needs music embeddings");
    }

    DynamicGraph graph(config.weights, config.mode, config.eq6_variant);
    RetempoOptions retempo_opts = config.retempo_options();

    ChoreoResult result;
    std::vector<GraphNode> selections;
    selections.reserve(total_seconds);

    for (int t = 0; t < total_seconds; ++t) {
        // The last three seconds cannot anchor a full window; clamp to the end.
        const int start = std::min(t * kMusicFps, n_frames - window60);

        StyleVector s_m;
        if (external) {
            auto it = inputs.music_embeddings->find(std::to_string(t));
            if (it == inputs.music_embeddings->end()) {
                throw ValidationError("choreograph: no music embedding for second " +
                                      std::to_string(t));
            }
            s_m = it->second;
        } else {
            s_m = repertoire.label_table.normalize_music(music_labels(music, start));
        }
        const int music_beat_count = count_beats_in_window(music.beats, start, window60);

        std::vector<SelectionHit> hits = select_top_k(s_m, music_beat_count, repertoire, k_eff,
                                                      config.style_lambda_cs, config.style_lambda_b);

        const TempoDensity music_td = music_tempo_density(music, start);
        std::vector<RetempoInput> candidates;
        candidates.reserve(hits.size());
        for (const SelectionHit& hit : hits) {
            const RepertoireEntry& entry = repertoire.entries[hit.entry_index];
            candidates.push_back({&entry.clip, &entry.tempo_density});
        }
        std::vector<RetempoResult> warped = retempo(music_td, candidates, retempo_opts);

        std::vector<WarpedSegment> segments;
        segments.reserve(warped.size());
        for (RetempoResult& r : warped) {
            WarpedSegment seg;
            seg.style = repertoire.entries[hits[r.source_index].entry_index].style;
            seg.sliced = r.sliced;
            seg.clip = std::move(r.clip);
            segments.push_back(std::move(seg));
        }

        graph.insert_segments(std::move(segments), t);
        SelectionResult sel = graph.select_node(s_m);

        StepTrace step;
        step.t = t;
        step.window_start_frame = start;
        step.music_beat_count = music_beat_count;
        for (const SelectionHit& hit : hits) step.selected_ids.push_back(hit.id);
        step.candidates = sel.candidates;
        step.chosen = sel.candidates[sel.chosen_index];
        step.live_segments = graph.live_segment_count();
        result.trace.push_back(step);

        if (observer) {
            observer(step, graph, selections);
        }
        selections.push_back(std::move(sel.chosen));
    }

    result.motion = blend_output(selections, config.blend_options(repertoire.descriptor.root_index));
    return result;
}

std::string trace_to_json(const std::vector<StepTrace>& trace, const RunConfig& config) {
    nlohmann::json j;
    j["config"] = {
        {"mode", config.mode == GraphMode::Dynamic ? "dynamic" : "motiongraph"},
        {"retempo", config.retempo ? "on" : "off"},
        {"k", config.k},
        {"seed", config.seed},
        {"lambda_s", config.weights.lambda_s},
        {"lambda_c", config.weights.lambda_c},
        {"lambda_t", config.weights.lambda_t},
        {"eq6_variant", config.eq6_variant == CompletenessVariant::Midpoint ? "midpoint" : "raw"},
    };
    auto steps = nlohmann::json::array();
    for (const StepTrace& step : trace) {
        nlohmann::json s;
        s["t"] = step.t;
        s["window_start_frame"] = step.window_start_frame;
        s["music_beat_count"] = step.music_beat_count;
        s["selected_ids"] = step.selected_ids;
        s["live_segments"] = step.live_segments;
        auto cand = [](const CandidateCost& c) {
            return nlohmann::json{{"segment_id", c.segment_id}, {"birth", c.birth_time},
                                  {"j", c.node_index},         {"style", c.style},
                                  {"completeness", c.completeness}, {"transition", c.transition},
                                  {"total", c.total},          {"sliced", c.sliced}};
        };
        s["chosen"] = cand(step.chosen);
        auto all = nlohmann::json::array();
        for (const CandidateCost& c : step.candidates) all.push_back(cand(c));
        s["candidates"] = std::move(all);
        steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);
    return j.dump(2);
}

} // namespace choreo
