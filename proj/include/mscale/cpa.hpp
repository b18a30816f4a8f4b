#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mscale {

struct TrendSegmentation {
    // breakpoints[0] = 0, breakpoints.back() = track length; bin i spans
    // [breakpoints[i], breakpoints[i+1]).
    std::vector<std::size_t> breakpoints;
    std::vector<double> slopeQ1, seQ1;
    std::vector<double> slopeQ2, seQ2;

    std::size_t nBins() const { return breakpoints.size() - 1; }
    std::size_t binOf(std::size_t idx) const;
};

// Exact minimizer of sum(per-bin linear-fit RSS) + penalty * nBins over all
// partitions with bins of at least minBinLength points. Dynamic program with
// PELT-style pruning (removal deferred by minBinLength so the optimum is
// never lost). Input must be finite; length >= 2 * minBinLength.
std::vector<std::size_t> segmentTrends(std::span<const double> y, double penalty,
                                       std::size_t minBinLength);

// Penalty used when none is given: scale * sigma2 * ln(n), sigma2 the
// residual variance of a single global linear fit of the track.
double defaultPenalty(std::span<const double> y, double scale);

// Per-bin OLS slope of y against the point index; se optional. Bins with
// fewer than 3 finite points yield NaN.
std::vector<double> binSlopes(std::span<const double> y,
                              std::span<const std::size_t> breakpoints,
                              std::vector<double>* se = nullptr);

// Breakpoints from trackQ1, slopes and slope standard errors on both tracks
// under that shared binning.
TrendSegmentation sharedSegmentation(std::span<const double> trackQ1,
                                     std::span<const double> trackQ2,
                                     double penalty, std::size_t minBinLength);

struct SlopeSpread {
    double sigmaDiff = 0;     // sample std over bins of |b1_i - b2_i|
    double sigmaAbsDiff = 0;  // sample std over bins of |b1_i| - |b2_i|
    std::vector<double> slopesQ1, slopesQ2;  // per bin, NaN where uncovered
    std::vector<bool> binUsed;
};

// Surrogate tracks are aligned with the real tracks (same index space,
// leading NaNs allowed). Bins with fewer than 3 finite surrogate points in
// either track are excluded; fewer than 2 usable bins is an error.
SlopeSpread surrogateSlopeSpread(std::span<const double> surrQ1,
                                 std::span<const double> surrQ2,
                                 std::span<const std::size_t> breakpoints);

}  // namespace mscale
