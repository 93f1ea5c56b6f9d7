#pragma once

#include <optional>
#include <string>
#include <vector>

#include "choreo/motion.hpp"
#include "choreo/motion_analysis.hpp"
#include "choreo/music.hpp"
#include "choreo/skeleton.hpp"
#include "choreo/style.hpp"
#include "choreo/tempo.hpp"

namespace choreo {

// One stored 8-second clip plus everything precomputed for it at dataset-build
// time. `style` is on the normalized scale (or an external embedding).
struct RepertoireEntry {
    MotionClip clip; // 160 frames, beats cache populated after build_caches
    std::optional<std::string> music_path; // sibling WAV, when present
    RawLabels raw_labels{};      // middle-4s motion labels
    StyleVector style;           // normalized (or external) style vector
    int mid_beat_count = 0;      // N_B of the middle 4 s
    TempoDensity tempo_density;  // full 160-frame curve
    bool caches_ready = false;
};

// The clip database. Immutable after ingestion/build; safe for concurrent reads.
struct Repertoire {
    SkeletonDescriptor descriptor;
    std::vector<RepertoireEntry> entries; // lexicographic by clip id
    LabelTable label_table;

    std::size_t size() const { return entries.size(); }
    const RepertoireEntry& at(std::size_t i) const { return entries[i]; }
    // Index of the entry with the given id, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find(const std::string& id) const;
};

// Reads every *.json motion file under `directory` (non-recursive), validates
// 160 frames / 20 fps, pairs sibling WAVs by stem, and returns entries ordered
// lexicographically by id. Caches are left unpopulated.
Repertoire ingest_repertoire(const std::string& directory, const SkeletonDescriptor& descriptor);

struct BuildOptions {
    MotionBeatOptions motion_beats;
    OnsetOptions onset;
    NormalizationMode normalization = NormalizationMode::Percentile;
};

// Populates per-entry caches (beats, labels, tempo densities) and fits the
// label table. Music bounds use 4-second windows of the paired WAVs when any
// pair exists.
void build_caches(Repertoire& repertoire, const BuildOptions& opts = {});

// Re-derives normalized style vectors from raw labels (used after loading a
// cache or after swapping the backend).
void refresh_styles(Repertoire& repertoire);

// Replaces entry style vectors with external embeddings keyed by clip id.
// Throws ValidationError when a clip id is missing from the map.
void apply_external_styles(Repertoire& repertoire,
                           const std::map<std::string, StyleVector>& embeddings);

// Binary cache: magic "CGRF", version u16 (little-endian), then length-prefixed
// records. Stale magic/version is rejected, not silently reused.
inline constexpr std::uint16_t kCacheVersion = 1;
void save_cache(const Repertoire& repertoire, const std::string& path);
Repertoire load_cache(const std::string& path);

// Style-based selection: the K entries with smallest style_distance against
// the music window (ties by clip id). All entries when K >= size. Requires
// populated caches; throws ValidationError on an empty repertoire.
std::vector<SelectionHit> select_top_k(const StyleVector& s_m, int music_beat_count,
                                       const Repertoire& repertoire, int k, double lambda_cs,
                                       double lambda_b);

} // namespace choreo
