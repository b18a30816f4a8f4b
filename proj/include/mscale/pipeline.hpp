#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mscale/classify.hpp"
#include "mscale/cpa.hpp"
#include "mscale/ghe.hpp"
#include "mscale/price_series.hpp"
#include "mscale/proxies.hpp"
#include "mscale/smooth.hpp"
#include "mscale/surrogate.hpp"

namespace mscale {

enum class BinDriver { Q1, Q2, Gamma };

struct AnalysisConfig {
    GheConfig ghe;  // ghe.qGrid is the width analysis grid
    double q1 = 0.1;
    double q2 = 4.0;
    bool computeCurvature = true;
    double bLo = 0.1;
    double bHi = 1.0;
    std::size_t bCount = 23;
    SmoothConfig smooth;
    double cpaPenalty = kNaN;  // NaN: derive cpaPenaltyScale * sigma2 * ln(n)
    double cpaPenaltyScale = 3.0;
    std::size_t minBinLength = 10;
    BinDriver binDriver = BinDriver::Q1;
    ClassifierConfig classifier;
    std::uint64_t seed = 12345;
    std::size_t surrogateReps = 1;

    void validate() const;
    std::vector<double> bGrid() const;       // bCount points on [bLo, bHi]
    std::vector<double> unionQGrid() const;  // width grid + pair + curvature grid
};

// One classification pass (width- or curvature-driven magnitude).
struct MetricStage {
    double q1 = 0, q2 = 0;          // extreme pair
    std::vector<double> gammaRaw;   // full surface length, gaps possible
    std::size_t start = 0;          // trim offset into the surface time axis
    std::vector<double> gammaS;     // smoothed, trimmed
    std::vector<double> hq1S, hq2S; // smoothed standardized extremes, trimmed
    double penalty = 0;
    TrendSegmentation seg;
    SlopeSpread spread;
    PatternTimeline timeline;
};

struct AnalysisResult {
    AnalysisConfig cfg;
    PriceSeries series;
    VolatilitySeries vol;
    SurrogateSeries surrogate;  // first replicate
    GheSurface real;            // union q grid
    GheSurface surr;            // aligned to real.timeIndex, NaN where uncovered
    std::size_t alignedOffset = 0;  // real evaluations without surrogate coverage
    std::vector<double> sigmaQ;     // per union-grid q, averaged over replicates
    StandardizedSurface stdReal;
    StandardizedSurface stdSurr;    // first replicate
    WidthTracks width;              // real
    std::vector<double> widthSurrStd;  // surrogate standardized width track
    CurvatureTracks curvReal;          // empty when curvature disabled
    double sigmaB = kNaN;
    std::vector<double> curvRealStd;  // B'
    std::vector<double> curvSurrStd;
    MetricStage widthStage;
    std::optional<MetricStage> curvStage;

    const MetricStage& primaryStage() const;
};

AnalysisResult runAnalysis(const PriceSeries& series, const AnalysisConfig& cfg);

}  // namespace mscale
