#include "choreo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "choreo/error.hpp"

namespace choreo {

namespace {

constexpr double kCovRegularizer = 1e-6;

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& m) {
    const int n = static_cast<int>(m.size());
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out(i, j) = m[i][j];
    }
    return out;
}

std::vector<double> flatten_window(const MotionClip& clip, int center, int radius) {
    std::vector<double> v;
    v.reserve((2 * radius + 1) * clip.frames[center].size() * 3);
    for (int f = center - radius; f <= center + radius; ++f) {
        for (const Vec3& p : clip.frames[f]) {
            v.push_back(p.x);
            v.push_back(p.y);
            v.push_back(p.z);
        }
    }
    return v;
}

void collect_samples(const MotionClip& clip, int radius, std::vector<std::vector<double>>& out) {
    for (int f = radius; f < clip.length() - radius; ++f) {
        out.push_back(flatten_window(clip, f, radius));
    }
}

double frechet_between(const std::vector<std::vector<double>>& generated,
                       const std::vector<std::vector<double>>& reference) {
    return frechet_distance(fit_gaussian(generated), fit_gaussian(reference));
}

} // namespace

GaussianSummary fit_gaussian(const std::vector<std::vector<double>>& samples) {
    if (samples.size() < 2) {
        throw ValidationError("fit_gaussian: need at least 2 samples, got " +
                              std::to_string(samples.size()));
    }
    const std::size_t dim = samples.front().size();
    for (const auto& s : samples) {
        if (s.size() != dim) {
            throw ValidationError("fit_gaussian: inconsistent sample dimensions");
        }
    }
    GaussianSummary g;
    g.sample_count = static_cast<int>(samples.size());
    g.mean.assign(dim, 0.0);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < dim; ++i) g.mean[i] += s[i];
    }
    for (double& m : g.mean) m /= samples.size();

    g.covariance.assign(dim, std::vector<double>(dim, 0.0));
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < dim; ++i) {
            const double di = s[i] - g.mean[i];
            for (std::size_t j = i; j < dim; ++j) {
                g.covariance[i][j] += di * (s[j] - g.mean[j]);
            }
        }
    }
    const double denom = static_cast<double>(samples.size() - 1);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            g.covariance[i][j] /= denom;
            g.covariance[j][i] = g.covariance[i][j];
        }
    }
    return g;
}

double frechet_distance(const GaussianSummary& a, const GaussianSummary& b) {
    if (a.dimension() != b.dimension()) {
        throw ValidationError("frechet_distance: dimension mismatch " +
                              std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension()));
    }
    const int dim = a.dimension();
    for (int i = 0; i < dim; ++i) {
        if (!std::isfinite(a.mean[i]) || !std::isfinite(b.mean[i])) {
            throw ValidationError("frechet_distance: non-finite mean");
        }
        for (int j = 0; j < dim; ++j) {
            if (!std::isfinite(a.covariance[i][j]) || !std::isfinite(b.covariance[i][j])) {
                throw ValidationError("frechet_distance: non-finite covariance");
            }
        }
    }

    Eigen::MatrixXd sa = to_eigen(a.covariance);
    Eigen::MatrixXd sb = to_eigen(b.covariance);
    sa.diagonal().array() += kCovRegularizer;
    sb.diagonal().array() += kCovRegularizer;

    double mean_term = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = a.mean[i] - b.mean[i];
        mean_term += d * d;
    }

    // sqrt(Sa) via eigendecomposition, then the trace of sqrt(Sa^1/2 Sb Sa^1/2).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_a(sa);
    if (es_a.info() != Eigen::Success) {
        throw ValidationError("frechet_distance: eigendecomposition failed");
    }
    Eigen::VectorXd root_vals = es_a.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd sqrt_a =
        es_a.eigenvectors() * root_vals.asDiagonal() * es_a.eigenvectors().transpose();

    Eigen::MatrixXd inner = sqrt_a * sb * sqrt_a;
    inner = 0.5 * (inner + inner.transpose()); // enforce symmetry against round-off
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_m(inner);
    if (es_m.info() != Eigen::Success) {
        throw ValidationError("frechet_distance: eigendecomposition failed");
    }
    const double trace_sqrt = es_m.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

    const double value = mean_term + sa.trace() + sb.trace() - 2.0 * trace_sqrt;
    return std::max(0.0, value);
}

double fpd(const MotionClip& generated, const Repertoire& reference) {
    std::vector<std::vector<double>> gen, ref;
    collect_samples(generated, 0, gen);
    for (const RepertoireEntry& e : reference.entries) collect_samples(e.clip, 0, ref);
    return frechet_between(gen, ref);
}

double fmd(const MotionClip& generated, const Repertoire& reference) {
    std::vector<std::vector<double>> gen, ref;
    collect_samples(generated, 1, gen);
    for (const RepertoireEntry& e : reference.entries) collect_samples(e.clip, 1, ref);
    return frechet_between(gen, ref);
}

BasReport beat_alignment(const std::vector<double>& motion_beats_s,
                         const std::vector<double>& music_beats_s) {
    // Dedup first: repeated beats must not bias the mean.
    const std::set<double> motion(motion_beats_s.begin(), motion_beats_s.end());
    const std::set<double> music(music_beats_s.begin(), music_beats_s.end());

    BasReport report;
    report.motion_beat_count = static_cast<int>(motion.size());
    report.music_beat_count = static_cast<int>(music.size());

    auto mean_sq_nearest = [](const std::set<double>& from, const std::set<double>& to) {
        double acc = 0.0;
        for (double b : from) {
            auto it = to.lower_bound(b);
            double best = std::numeric_limits<double>::infinity();
            if (it != to.end()) best = std::min(best, std::abs(*it - b));
            if (it != to.begin()) best = std::min(best, std::abs(*std::prev(it) - b));
            const double frames = kMusicFps * best;
            acc += frames * frames;
        }
        return acc / from.size();
    };

    if (!motion.empty() && !music.empty()) {
        report.motion2audio = mean_sq_nearest(motion, music);
        report.audio2motion = mean_sq_nearest(music, motion);
    }
    return report;
}

LabelDistanceReport label_distance(const MotionClip& generated, const MusicFeatures& music,
                                   const SkeletonDescriptor& descriptor, const LabelTable& table) {
    const double motion_s = generated.duration_seconds();
    const double music_s = music.duration_seconds;
    if (std::abs(motion_s - music_s) > 1.0) {
        throw ValidationError("label_distance: motion spans " + std::to_string(motion_s) +
                              " s but music spans " + std::to_string(music_s) + " s");
    }
    const int whole = static_cast<int>(std::min(motion_s, music_s));
    const int windows = whole - 3;
    if (windows < 1) {
        throw ValidationError("label_distance: need at least 4 s of aligned material");
    }

    LabelDistanceReport report;
    for (int t = 0; t < windows; ++t) {
        MotionClip clip_win = slice(generated, t * kMotionFps, kSegmentFrames);
        const StyleVector sm = table.normalize_motion(motion_labels(clip_win, descriptor));
        const StyleVector sd = table.normalize_music(music_labels(music, t * kMusicFps));
        report.window_start_seconds.push_back(t);
        report.motion_windows.push_back(sm);
        report.music_windows.push_back(sd);
        for (int i = 0; i < 4; ++i) {
            report.distances[i] += std::abs(sm.values[i] - sd.values[i]);
        }
    }
    for (double& d : report.distances) d /= windows;
    return report;
}

} // namespace choreo
