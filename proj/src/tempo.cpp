#include "choreo/tempo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>

#include <nlohmann/json.hpp>

#include "choreo/error.hpp"
#include "choreo/threading.hpp"

namespace choreo {

namespace {

std::vector<double> gaussian_kernel() {
    std::vector<double> k(2 * kDensityRadius + 1);
    for (int i = -kDensityRadius; i <= kDensityRadius; ++i) {
        k[i + kDensityRadius] = std::exp(-(i * i) / (2.0 * kDensitySigma * kDensitySigma));
    }
    return k;
}

void smooth_and_normalize(std::vector<double>& values) {
    static const std::vector<double> kernel = gaussian_kernel();
    const int n = static_cast<int>(values.size());
    std::vector<double> out(n, 0.0);
    for (int t = 0; t < n; ++t) {
        double acc = 0.0;
        for (int k = -kDensityRadius; k <= kDensityRadius; ++k) {
            const int src = t + k;
            if (src >= 0 && src < n) acc += values[src] * kernel[k + kDensityRadius];
        }
        out[t] = acc;
    }
    const double peak = *std::max_element(out.begin(), out.end());
    if (peak > 0.0) {
        for (double& v : out) v /= peak;
    }
    values = std::move(out);
}

} // namespace

TempoDensity motion_tempo_density(const MotionClip& clip) {
    if (!clip.beats) {
        throw StateError("motion_tempo_density: clip '" + clip.id + "' has no beats cache");
    }
    TempoDensity td;
    td.values.assign(clip.length(), 0.0);
    for (int b : *clip.beats) td.values[b] = 1.0;
    smooth_and_normalize(td.values);
    return td;
}

TempoDensity music_tempo_density(const MusicFeatures& features, int start_frame60) {
    const int window60 = 4 * kMusicFps; // 240
    const int n = static_cast<int>(features.onset_env.size());
    if (start_frame60 < 0 || start_frame60 + window60 > n) {
        throw BoundsError("music_tempo_density: window [" + std::to_string(start_frame60) + ", " +
                          std::to_string(start_frame60 + window60) + ") outside " +
                          std::to_string(n) + " onset frames");
    }
    TempoDensity td;
    td.values.assign(kSegmentFrames, 0.0);
    for (int t = 0; t < kSegmentFrames; ++t) {
        double acc = 0.0;
        for (int k = 0; k < 3; ++k) acc += features.onset_env[start_frame60 + 3 * t + k];
        td.values[t] = acc / 3.0;
    }
    smooth_and_normalize(td.values);
    return td;
}

TempoDensity load_tempo_density(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tempo-density file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("tempo-density " + path + ": invalid JSON: " + e.what());
    }
    if (!j.is_array() || j.empty()) {
        throw ParseError("tempo-density " + path + ": expected a nonempty JSON array");
    }
    TempoDensity td;
    td.values.reserve(j.size());
    for (const auto& v : j) {
        const double x = v.get<double>();
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ValidationError("tempo-density " + path + ": values must be finite and >= 0");
        }
        td.values.push_back(x);
    }
    const double peak = *std::max_element(td.values.begin(), td.values.end());
    if (peak > 0.0) {
        for (double& v : td.values) v /= peak;
    }
    return td;
}

namespace {

inline double cell(const std::vector<double>& t, const std::vector<double>& s, int i, int j,
                   CellCost kind) {
    const double d = t[i] - s[j];
    return kind == CellCost::AbsDiff ? std::abs(d) : d * d;
}

// Backtracking steps, in tie preference order. Toward smaller source index
// first: the (1,2) predecessor sits at j-2; the plain diagonal wins over the
// row-skipping (2,1) step at equal j-1.
enum Step : int { kStep12 = 0, kStep11 = 1, kStep21 = 2, kNone = 3 };

} // namespace

WarpPath subsequence_dtw(const TempoDensity& target, const TempoDensity& source,
                         CellCost cell_cost) {
    const int T = target.length();
    const int S = source.length();
    if (T < 1) throw ValidationError("subsequence_dtw: empty target");
    if (S < (T + 1) / 2) {
        throw InfeasibleError("subsequence_dtw: source length " + std::to_string(S) +
                              " shorter than ceil(T/2) = " + std::to_string((T + 1) / 2));
    }
    const auto& tv = target.values;
    const auto& sv = source.values;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> d((std::size_t)T * S, inf);
    std::vector<signed char> from((std::size_t)T * S, kNone);
    auto at = [S](int i, int j) { return (std::size_t)i * S + j; };

    for (int j = 0; j < S; ++j) d[at(0, j)] = cell(tv, sv, 0, j, cell_cost); // free start

    for (int i = 1; i < T; ++i) {
        for (int j = 0; j < S; ++j) {
            double best = inf;
            signed char step = kNone;
            if (j >= 2 && d[at(i - 1, j - 2)] < best) { // (1,2)
                best = d[at(i - 1, j - 2)];
                step = kStep12;
            }
            if (j >= 1 && d[at(i - 1, j - 1)] < best) { // (1,1)
                best = d[at(i - 1, j - 1)];
                step = kStep11;
            }
            if (i >= 2 && j >= 1) { // (2,1) charges the skipped row at column j
                const double v = d[at(i - 2, j - 1)] + cell(tv, sv, i - 1, j, cell_cost);
                if (v < best) {
                    best = v;
                    step = kStep21;
                }
            }
            if (step != kNone) {
                d[at(i, j)] = best + cell(tv, sv, i, j, cell_cost);
                from[at(i, j)] = step;
            }
        }
    }

    int end_j = -1;
    double best_cost = inf;
    for (int j = 0; j < S; ++j) { // free end; ties toward smallest j
        if (d[at(T - 1, j)] < best_cost) {
            best_cost = d[at(T - 1, j)];
            end_j = j;
        }
    }
    if (end_j < 0) {
        throw InfeasibleError("subsequence_dtw: no feasible path for target " + std::to_string(T) +
                              " over source " + std::to_string(S));
    }

    WarpPath path;
    path.cost = best_cost;
    int i = T - 1, j = end_j;
    path.knots.emplace_back(i, j);
    while (i > 0) {
        switch (from[at(i, j)]) {
            case kStep12: i -= 1; j -= 2; break;
            case kStep11: i -= 1; j -= 1; break;
            case kStep21: i -= 2; j -= 1; break;
            default:
                throw Error("subsequence_dtw: corrupt backtracking state");
        }
        path.knots.emplace_back(i, j);
    }
    std::reverse(path.knots.begin(), path.knots.end());
    return path;
}

void validate_warp_path(const WarpPath& path, int target_len, int source_len) {
    if (path.knots.empty()) throw ValidationError("warp path: empty");
    if (path.knots.front().first != 0) {
        throw ValidationError("warp path: first knot must be at target frame 0");
    }
    if (path.knots.back().first != target_len - 1) {
        throw ValidationError("warp path: last knot must be at target frame " +
                              std::to_string(target_len - 1));
    }
    for (std::size_t k = 0; k < path.knots.size(); ++k) {
        const auto [i, j] = path.knots[k];
        if (j < 0 || j >= source_len) {
            throw ValidationError("warp path: source index " + std::to_string(j) + " out of range");
        }
        if (k > 0) {
            const int di = i - path.knots[k - 1].first;
            const int dj = j - path.knots[k - 1].second;
            const bool valid = (di == 1 && dj == 1) || (di == 1 && dj == 2) || (di == 2 && dj == 1);
            if (!valid) {
                throw ValidationError("warp path: step (" + std::to_string(di) + "," +
                                      std::to_string(dj) + ") outside {(1,1),(1,2),(2,1)}");
            }
        }
    }
    const int span = path.knots.back().second - path.knots.front().second + 1;
    if (span < (target_len + 1) / 2 || span > 2 * target_len) {
        throw ValidationError("warp path: source span " + std::to_string(span) +
                              " outside [ceil(T/2), 2T]");
    }
}

MotionClip apply_warp(const MotionClip& source_clip, const WarpPath& path,
                      const MotionBeatOptions& beat_opts) {
    validate_warp_path(path, path.knots.back().first + 1, source_clip.length());
    const int target_len = path.knots.back().first + 1;

    MotionClip out;
    out.id = source_clip.id;
    out.frame_rate = source_clip.frame_rate;
    out.frames.reserve(target_len);

    std::size_t seg = 1;
    for (int i = 0; i < target_len; ++i) {
        while (seg < path.knots.size() && path.knots[seg].first < i) ++seg;
        double pos;
        if (path.knots[seg - 1].first == i) {
            pos = path.knots[seg - 1].second;
        } else if (seg < path.knots.size() && path.knots[seg].first == i) {
            pos = path.knots[seg].second;
        } else {
            // Interior of a (2,1) step: interpolate between bracketing knots.
            const auto [i0, j0] = path.knots[seg - 1];
            const auto [i1, j1] = path.knots[seg];
            pos = j0 + static_cast<double>(i - i0) / (i1 - i0) * (j1 - j0);
        }
        const int lo = static_cast<int>(std::floor(pos));
        const double frac = pos - lo;
        if (frac == 0.0) {
            out.frames.push_back(source_clip.frames[lo]);
        } else {
            const int hi = std::min(lo + 1, source_clip.length() - 1);
            Pose pose(source_clip.frames[lo].size());
            for (std::size_t jj = 0; jj < pose.size(); ++jj) {
                pose[jj] = lerp(source_clip.frames[lo][jj], source_clip.frames[hi][jj], frac);
            }
            out.frames.push_back(std::move(pose));
        }
    }
    beat_count(out, beat_opts);
    return out;
}

std::vector<RetempoResult> retempo(const TempoDensity& music_td,
                                   const std::vector<RetempoInput>& candidates,
                                   const RetempoOptions& opts) {
    std::vector<std::optional<RetempoResult>> slots(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t c) {
        const RetempoInput& cand = candidates[c];
        RetempoResult r;
        r.source_index = c;
        try {
            if (opts.enabled) {
                r.path = subsequence_dtw(music_td, *cand.density, opts.cell_cost);
                r.clip = apply_warp(*cand.clip, r.path, opts.beat_opts);
                r.sliced = false;
            } else {
                // Ablation path: the middle 4 s stands in for the warped segment.
                const int start = (cand.clip->length() - kSegmentFrames) / 2;
                r.clip = slice(*cand.clip, start, kSegmentFrames);
                r.clip.beats.reset();
                beat_count(r.clip, opts.beat_opts);
                r.path.knots.clear();
                double cost = 0.0;
                for (int i = 0; i < kSegmentFrames; ++i) {
                    r.path.knots.emplace_back(i, start + i);
                    cost += std::abs(music_td.values[i] - cand.density->values[start + i]);
                }
                r.path.cost = cost;
                r.sliced = true;
            }
        } catch (const Error& e) {
            std::fprintf(stderr, "[choreo] warning: dropping candidate '%s': %s\n",
                         cand.clip->id.c_str(), e.what());
            return; // dropped, batch continues
        }
        slots[c] = std::move(r);
    });

    std::vector<RetempoResult> results;
    results.reserve(candidates.size());
    for (auto& slot : slots) {
        if (slot) results.push_back(std::move(*slot));
    }
    return results;
}

} // namespace choreo
