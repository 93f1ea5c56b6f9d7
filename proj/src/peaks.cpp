#include "choreo/peaks.hpp"

#include <algorithm>

namespace choreo {

double peak_prominence(const std::vector<double>& x, int peak) {
    const int n = static_cast<int>(x.size());
    double left_min = x[peak];
    for (int i = peak - 1; i >= 0; --i) {
        if (x[i] > x[peak]) break;
        left_min = std::min(left_min, x[i]);
    }
    double right_min = x[peak];
    for (int i = peak + 1; i < n; ++i) {
        if (x[i] > x[peak]) break;
        right_min = std::min(right_min, x[i]);
    }
    return x[peak] - std::max(left_min, right_min);
}

std::vector<int> find_peaks(const std::vector<double>& x, const PeakOptions& opts) {
    const int n = static_cast<int>(x.size());
    if (n < 3) return {};

    double lo = x[0], hi = x[0];
    for (double v : x) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double ref = opts.reference == PeakReference::Max ? hi : hi - lo;
    if (ref <= 0.0) return {};
    const double threshold = opts.prominence_fraction * ref;

    std::vector<int> candidates;
    for (int i = 1; i + 1 < n; ++i) {
        if (x[i] > x[i - 1] && x[i] > x[i + 1] && peak_prominence(x, i) >= threshold) {
            candidates.push_back(i);
        }
    }

    // Greedy separation: tallest peaks claim their neighbourhood first.
    std::vector<int> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (x[candidates[a]] != x[candidates[b]]) return x[candidates[a]] > x[candidates[b]];
        return candidates[a] < candidates[b];
    });
    std::vector<bool> keep(candidates.size(), true);
    for (int oi : order) {
        if (!keep[oi]) continue;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            if (static_cast<int>(k) == oi || !keep[k]) continue;
            if (std::abs(candidates[k] - candidates[oi]) < opts.min_separation &&
                (x[candidates[k]] < x[candidates[oi]] ||
                 (x[candidates[k]] == x[candidates[oi]] && candidates[k] > candidates[oi]))) {
                keep[k] = false;
            }
        }
    }

    std::vector<int> result;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (keep[k]) result.push_back(candidates[k]);
    }
    return result;
}

} // namespace choreo
