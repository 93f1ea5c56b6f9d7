#pragma once

#include <string>
#include <utility>
#include <vector>

#include "choreo/motion.hpp"
#include "choreo/motion_analysis.hpp"
#include "choreo/music.hpp"

namespace choreo {

// Nonnegative rhythm curve at 20 fps; the shared currency between modalities.
// Builder functions max-normalize (peak 1 unless all-zero).
struct TempoDensity {
    std::vector<double> values;

    int length() const { return static_cast<int>(values.size()); }
};

// Gaussian kernel used to smooth beat impulses: sigma = 2 frames, radius 6.
inline constexpr double kDensitySigma = 2.0;
inline constexpr int kDensityRadius = 6;

// Impulse train at the clip's beat frames convolved with the Gaussian kernel,
// max-normalized. All-zero when the clip has no beats. The clip must carry a
// beats cache (see with_beats).
TempoDensity motion_tempo_density(const MotionClip& clip);

// Onset envelope restricted to [start_frame60, start_frame60 + 240), averaged
// 3:1 down to 20 fps, smoothed with the same kernel, max-normalized; length 80.
// Throws BoundsError when the window leaves the features.
TempoDensity music_tempo_density(const MusicFeatures& features, int start_frame60);

// Loads an externally computed curve (JSON array of numbers), max-normalizing.
TempoDensity load_tempo_density(const std::string& path);

enum class CellCost {
    AbsDiff, // |target[i] - source[j]| (default)
    Squared, // (target[i] - source[j])^2
};

// Monotone target->source correspondence from subsequence DTW. Knot deltas are
// in {(1,1),(1,2),(2,1)}; the target is fully covered while the source start
// and end are free.
struct WarpPath {
    std::vector<std::pair<int, int>> knots; // (target_frame, source_frame)
    double cost = 0.0;
};

// Slope-constrained subsequence DTW.
//
// DP over cell cost c(i,j):
//   D(0,j) = c(0,j)                                  (free start)
//   D(i,j) = c(i,j) + min{ D(i-1,j-1);
//                          D(i-1,j-2);
//                          D(i-2,j-1) + c(i-1,j) }   ((2,1) charges the skipped
//                                                     target row at the landing
//                                                     source column)
// Answer: argmin_j D(T-1, j), backtracked. Ties are broken toward the smallest
// source index: smallest j at the final argmin, and among predecessors
// (i-1,j-2) before (i-1,j-1) before (i-2,j-1), so repeated runs yield one
// canonical path. Throws InfeasibleError when the source is shorter than
// ceil(T/2) or no valid path exists.
WarpPath subsequence_dtw(const TempoDensity& target, const TempoDensity& source,
                         CellCost cell_cost = CellCost::AbsDiff);

// Checks every WarpPath invariant against the given lengths; throws
// ValidationError describing the first violation.
void validate_warp_path(const WarpPath& path, int target_len, int source_len);

// Resamples the source clip through the path: for each target frame the source
// position comes from piecewise-linear interpolation of the knots, and poses
// are linearly interpolated between neighbouring source frames. Beats are
// recomputed on the warped clip.
MotionClip apply_warp(const MotionClip& source_clip, const WarpPath& path,
                      const MotionBeatOptions& beat_opts = {});

struct RetempoInput {
    const MotionClip* clip;         // 160-frame source with beats cache
    const TempoDensity* density;    // cached 160-frame tempo density
};

struct RetempoResult {
    MotionClip clip;  // 80 frames
    WarpPath path;
    bool sliced = false;         // true when the middle 4 s was taken verbatim
    std::size_t source_index = 0; // position in the candidate list
};

struct RetempoOptions {
    bool enabled = true; // false: take slice(clip, 40, 80) instead of warping
    CellCost cell_cost = CellCost::AbsDiff;
    MotionBeatOptions beat_opts;
};

// Warps every candidate against the music density, preserving input order.
// A candidate that fails is dropped with a warning on stderr, never aborting
// the batch; source_index maps each result back to its candidate.
std::vector<RetempoResult> retempo(const TempoDensity& music_td,
                                   const std::vector<RetempoInput>& candidates,
                                   const RetempoOptions& opts = {});

} // namespace choreo
