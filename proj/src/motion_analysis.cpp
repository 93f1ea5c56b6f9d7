#include "choreo/motion_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "choreo/error.hpp"
#include "choreo/rng.hpp"

namespace choreo {

SpeedSeries average_joint_speed(const MotionClip& clip) {
    const int n = clip.length();
    if (n < 2) {
        throw ValidationError("average_joint_speed: clip '" + clip.id + "' has fewer than 2 frames");
    }
    SpeedSeries speed;
    speed.values.assign(n, 0.0);
    const int joints = static_cast<int>(clip.frames.front().size());
    for (int t = 1; t < n; ++t) {
        double acc = 0.0;
        for (int j = 0; j < joints; ++j) {
            acc += (clip.frames[t][j] - clip.frames[t - 1][j]).norm();
        }
        speed.values[t] = clip.frame_rate * acc / joints;
    }
    return speed;
}

std::vector<int> motion_beats(const SpeedSeries& speed, const MotionBeatOptions& opts) {
    if (speed.values.empty()) throw ValidationError("motion_beats: empty speed series");
    // Minima of v are maxima of -v; the range reference is negation-invariant.
    std::vector<double> negated(speed.values.size());
    for (std::size_t i = 0; i < negated.size(); ++i) negated[i] = -speed.values[i];
    PeakOptions popts;
    popts.prominence_fraction = opts.prominence;
    popts.min_separation = opts.min_separation_frames;
    popts.reference = PeakReference::Range;
    return find_peaks(negated, popts);
}

int beat_count(MotionClip& clip, const MotionBeatOptions& opts) {
    if (!clip.beats) {
        clip.beats = motion_beats(average_joint_speed(clip), opts);
    }
    return static_cast<int>(clip.beats->size());
}

MotionClip with_beats(MotionClip clip, const MotionBeatOptions& opts) {
    beat_count(clip, opts);
    return clip;
}

namespace {

// Piecewise-linear map through (shifted, original) anchor pairs, evaluated at
// integer output frames.
double inverse_warp_position(const std::vector<std::pair<int, int>>& anchors, int shifted_frame) {
    for (std::size_t a = 1; a < anchors.size(); ++a) {
        const auto [o0, s0] = anchors[a - 1];
        const auto [o1, s1] = anchors[a];
        if (shifted_frame <= s1) {
            const double frac = static_cast<double>(shifted_frame - s0) / (s1 - s0);
            return o0 + frac * (o1 - o0);
        }
    }
    return anchors.back().first;
}

Pose sample_pose(const MotionClip& clip, double position) {
    const int lo = static_cast<int>(std::floor(position));
    const int hi = std::min(lo + 1, clip.length() - 1);
    const double frac = position - lo;
    if (frac == 0.0) return clip.frames[lo];
    Pose out(clip.frames[lo].size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = lerp(clip.frames[lo][j], clip.frames[hi][j], frac);
    }
    return out;
}

} // namespace

std::pair<MotionClip, WarpSpec> random_time_warp(const MotionClip& clip, std::uint64_t seed,
                                                 const RandomWarpOptions& warp_opts,
                                                 const MotionBeatOptions& beat_opts) {
    MotionClip analyzed = with_beats(clip, beat_opts);
    const std::vector<int>& beats = *analyzed.beats;
    if (beats.size() < 2) {
        throw ValidationError("random_time_warp: clip '" + clip.id + "' has fewer than 2 beats");
    }
    const int length = clip.length();

    Rng rng(seed);
    std::vector<bool> selected(beats.size(), false);
    bool any = false;
    for (std::size_t i = 0; i < beats.size(); ++i) {
        selected[i] = rng.bernoulli(warp_opts.select_prob);
        any = any || selected[i];
    }
    if (!any) {
        selected[rng.uniform_int(0, static_cast<int>(beats.size()) - 1)] = true;
    }

    WarpSpec spec;
    spec.anchors.emplace_back(0, 0);
    for (std::size_t i = 0; i < beats.size(); ++i) {
        if (!selected[i]) continue;
        const int shift = rng.uniform_int(-warp_opts.max_shift, warp_opts.max_shift);
        spec.anchors.emplace_back(beats[i], beats[i] + shift);
    }
    spec.anchors.emplace_back(length - 1, length - 1);

    // Re-clamp shifted positions: strictly increasing with a gap of >= 2,
    // pinned endpoints. Forward pass pushes right, backward pass pulls back
    // under the final endpoint.
    for (std::size_t i = 1; i + 1 < spec.anchors.size(); ++i) {
        spec.anchors[i].second = std::max(spec.anchors[i].second, spec.anchors[i - 1].second + 2);
    }
    for (std::size_t i = spec.anchors.size() - 1; i-- > 1;) {
        spec.anchors[i].second = std::min(spec.anchors[i].second, spec.anchors[i + 1].second - 2);
    }
    for (std::size_t i = 1; i < spec.anchors.size(); ++i) {
        if (spec.anchors[i].first <= spec.anchors[i - 1].first ||
            spec.anchors[i].second - spec.anchors[i - 1].second < 2) {
            throw ValidationError("random_time_warp: clip '" + clip.id +
                                  "' beats too crowded to warp within bounds");
        }
    }

    MotionClip warped;
    warped.id = clip.id;
    warped.frame_rate = clip.frame_rate;
    warped.frames.reserve(length);
    for (int f = 0; f < length; ++f) {
        warped.frames.push_back(sample_pose(analyzed, inverse_warp_position(spec.anchors, f)));
    }
    warped.beats.reset();
    beat_count(warped, beat_opts);
    return {std::move(warped), std::move(spec)};
}

} // namespace choreo
