#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mscale/date.hpp"
#include "mscale/price_series.hpp"

namespace mscale {

struct GheConfig {
    std::size_t dt = 250;
    double theta = 250.0;
    std::size_t step = 5;
    std::size_t tauMax = 19;
    std::vector<std::size_t> tauMaxRange = {5,  6,  7,  8,  9,  10, 11, 12,
                                            13, 14, 15, 16, 17, 18, 19};
    std::vector<double> qGrid = {0.1, 1.0, 2.0, 3.0, 4.0};

    // Throws std::invalid_argument on violations: dt >= tauMax + 2, tauMax >= 2,
    // step >= 1, theta > 0, qGrid strictly increasing and positive,
    // tauMaxRange strictly increasing and inside [2, tauMax].
    void validate() const;
};

// Exponential window weights: w[s] = w0 * exp(-s / theta), s = 0 (most
// recent) .. dt-1, normalized so the full-window sum is 1.
struct WeightKernel {
    double theta = 0;
    std::vector<double> w;
    std::vector<double> prefix;  // prefix[m] = sum of w[0..m-1]; size dt + 1

    std::size_t size() const { return w.size(); }
};

WeightKernel buildKernel(std::size_t dt, double theta);

// Weighted structure function of one trailing log-price window
// (window[0] oldest .. window[dt-1] newest): the weighted mean of
// |X[e-s] - X[e-s-tau]|^q over the dt - tau in-window differences, the most
// recent difference carrying w[0], renormalized by the weight mass used.
// Plain pow() evaluation; the windowed series evaluator has an optimized
// route and this function doubles as its oracle.
double structureFunction(std::span<const double> window, const WeightKernel& kernel,
                         double q, std::size_t tau);

struct HqEstimate {
    double h = 0;
    double err = 0;
    double quality = 0;
    bool gap = false;
};

// Fit layer: xi[t-1] holds the structure function at lag t for t = 1..tauMax.
// For each entry m of tauMaxRange an OLS of log xi vs log tau over lags
// 1..m gives slope/q; h is their mean, err the sample std of the estimates
// combined in quadrature with the mean per-fit slope SE divided by q, and
// quality the mean R^2. Any non-positive xi at lags <= max(tauMaxRange)
// flags a gap.
HqEstimate fitHqFromXi(std::span<const double> xi, double q,
                       std::span<const std::size_t> tauMaxRange);

HqEstimate estimateHq(std::span<const double> window, const WeightKernel& kernel,
                      double q, const GheConfig& cfg);

struct GheSurface {
    std::size_t dt = 0;
    double theta = 0;
    std::size_t step = 0;
    std::vector<double> qGrid;
    std::vector<std::size_t> timeIndex;  // 0-based series end index per row
    std::vector<Date> times;
    // Row-major [time][q].
    std::vector<double> H;
    std::vector<double> Herr;
    std::vector<double> fitQuality;

    std::size_t nTimes() const { return timeIndex.size(); }
    std::size_t nQ() const { return qGrid.size(); }
    double h(std::size_t t, std::size_t qi) const { return H[t * nQ() + qi]; }
    double herr(std::size_t t, std::size_t qi) const { return Herr[t * nQ() + qi]; }
    double quality(std::size_t t, std::size_t qi) const {
        return fitQuality[t * nQ() + qi];
    }
    // Index of q in the grid (tolerance 1e-9); throws if absent.
    std::size_t qIndex(double q) const;
    // Column t -> h for one q index.
    std::vector<double> track(std::size_t qi) const;
};

// Trailing-window estimates at end indices dt-1, dt-1+step, ... (day counts
// dt, dt+step, ...).
GheSurface gheSeries(const PriceSeries& series, const GheConfig& cfg);

// Same, at caller-chosen window end indices (each >= dt-1 and < series size).
GheSurface gheSeriesAt(const PriceSeries& series, const GheConfig& cfg,
                       std::span<const std::size_t> endIndices);

// Fast-route structure functions of the window ending at endIndex:
// xi[(tau-1) * nQ + k] for tau = 1..cfg.tauMax and q = cfg.qGrid[k]. Matches
// structureFunction() on the same window (the equivalence is under test).
std::vector<double> structureFunctionsAt(const PriceSeries& series,
                                         const GheConfig& cfg,
                                         std::size_t endIndex);

}  // namespace mscale
