#pragma once

#include <vector>

namespace choreo {

// How the prominence threshold scales with the input series.
enum class PeakReference {
    Max,   // threshold = fraction * max(x); used for onset envelopes (nonnegative)
    Range, // threshold = fraction * (max(x) - min(x)); used for speed curves
};

struct PeakOptions {
    double prominence_fraction = 0.1;
    int min_separation = 15;
    PeakReference reference = PeakReference::Max;
};

// Deterministic peak picking:
//   1. candidates are strict single-sample local maxima (x[i-1] < x[i] > x[i+1];
//      plateaus are never reported, so every result is a strict extremum),
//   2. candidates below the prominence threshold are dropped (prominence is the
//      drop from the peak to the higher of the two valley minima reached before
//      a taller sample or the boundary),
//   3. remaining peaks are kept greedily by (height desc, index asc) subject to
//      the minimum separation.
// Returns strictly increasing indices.
std::vector<int> find_peaks(const std::vector<double>& x, const PeakOptions& opts);

// Prominence of a strict local maximum at `peak` (helper, exposed for tests).
double peak_prominence(const std::vector<double>& x, int peak);

} // namespace choreo
