#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "choreo/config.hpp"
#include "choreo/graph.hpp"
#include "choreo/music.hpp"
#include "choreo/repertoire.hpp"

namespace choreo {

// Per-second record of what the engine saw and chose. Serialized as the trace
// sidecar and consumed by the selection-optimality checks.
struct StepTrace {
    int t = 0;
    int window_start_frame = 0; // 60 fps frame of the 4 s feature window
    int music_beat_count = 0;   // beats inside the window
    std::vector<std::string> selected_ids; // the K clips chosen for this second
    std::vector<CandidateCost> candidates; // all active nodes with their costs
    CandidateCost chosen{};
    std::size_t live_segments = 0;
};

struct ChoreoResult {
    MotionClip motion;
    std::vector<StepTrace> trace;
};

// Called once per second after selection, with the graph still in the state
// the decision was made in. Used by tests to recompute costs independently.
using StepObserver =
    std::function<void(const StepTrace&, const DynamicGraph&, const std::vector<GraphNode>&)>;

struct PipelineInputs {
    // External style backend data (required when config.style_backend is
    // External): music vectors keyed by the loop second as a decimal string.
    std::optional<std::map<std::string, StyleVector>> music_embeddings;
};

// The full engine: per second, style-select K clips, retempo them against the
// music window, insert into the graph, and pick the minimum-cost node; finally
// blend the selections into one clip of exactly 20 * T frames. Deterministic
// for fixed inputs and config. Throws ValidationError when the music is
// shorter than 4 s.
ChoreoResult choreograph(const MusicFeatures& music, const Repertoire& repertoire,
                         const RunConfig& config, const PipelineInputs& inputs = {},
                         const StepObserver& observer = nullptr);

// Trace sidecar JSON (deterministic key order).
std::string trace_to_json(const std::vector<StepTrace>& trace, const RunConfig& config);

} // namespace choreo
