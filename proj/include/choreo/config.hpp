#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "choreo/graph.hpp"
#include "choreo/motion_analysis.hpp"
#include "choreo/music.hpp"
#include "choreo/repertoire.hpp"
#include "choreo/tempo.hpp"

namespace choreo {

// Every tunable in one place. Defaults are the documented engine defaults;
// values can come from a key=value config file and per-key CLI overrides, with
// precedence flags > file > defaults. Unknown keys are rejected.
struct RunConfig {
    std::uint64_t seed = 0;
    bool retempo = true;
    int k = 512; // candidate segments per second, clamped to repertoire size

    GraphMode mode = GraphMode::Dynamic;
    CostWeights weights;                 // graph.lambda_s/_c/_t
    int blend_frames = 8;                // graph.blend_frames
    CompletenessVariant eq6_variant = CompletenessVariant::Midpoint;
    bool align_yaw = false;              // graph.align_yaw

    double style_lambda_cs = 1.0; // style.lambda_cs
    double style_lambda_b = 0.2;  // style.lambda_b
    StyleBackend style_backend = StyleBackend::Labels;
    NormalizationMode style_normalization = NormalizationMode::Percentile;

    OnsetOptions onset;            // onset.prominence, onset.min_separation_frames
    MotionBeatOptions motion_beats; // motion.prominence, motion.min_separation_frames
    CellCost tempo_cost = CellCost::AbsDiff; // tempo.cost = abs | squared

    // Applies one "key=value" assignment; throws ValidationError on unknown
    // keys or unparseable values.
    void set(const std::string& key, const std::string& value);

    // Validates cross-field invariants (nonnegative weights, k >= 1, ...).
    void validate() const;

    BuildOptions build_options() const;
    RetempoOptions retempo_options() const;
    BlendOptions blend_options(int root_index) const;
};

// Parses a line-based key=value file ('#' starts a comment). Throws IoError
// when unreadable, ValidationError on bad keys/values.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

// Applies assignments in order on top of `base`.
RunConfig apply_overrides(RunConfig base, const std::map<std::string, std::string>& overrides);

} // namespace choreo
