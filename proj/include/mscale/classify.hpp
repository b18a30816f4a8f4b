#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mscale/cpa.hpp"
#include "mscale/date.hpp"
#include "mscale/stats.hpp"

namespace mscale {

// Temporal multiscaling patterns. The r-prefixed variants mark periods where
// the low-q and high-q roles are interchanged (reversed track ordering).
enum class PatternLabel : int {
    S,    // uniscaling
    M,    // strong multiscaling, parallel trends
    ML,   // weak multiscaling, parallel trends
    Am,   // strong, high-q track falls faster (A-)
    Ap,   // strong, low-q track rises faster (A+)
    A0,   // strong, equal opposite rates, diverging
    mAm,  // mirror of A-
    mAp,  // mirror of A+
    mA0,  // mirror of A0 (converging)
    AL,   // weak transition, diverging
    mAL,  // weak transition, converging
    rM,
    rML,
    rAm,
    rAp,
    rA0,
    rmAm,
    rmAp,
    rmA0,
    rAL,
    rmAL,
};

inline constexpr int kPatternLabelCount = 21;

const char* labelName(PatternLabel l);            // "S", "M", "ML", "A-", ... "rmAL"
PatternLabel labelFromName(const std::string& s);
PatternLabel reversedVariant(PatternLabel l);     // S maps to itself
PatternLabel baseVariant(PatternLabel l);
bool isReversedLabel(PatternLabel l);
bool isStrongLabel(PatternLabel l);     // M and the A family (and r variants)
bool isWeakLabel(PatternLabel l);       // ML, AL, mAL (and r variants)
bool isAFamilyLabel(PatternLabel l);    // A-, A+, A0, mA-, mA+, mA0 (and r variants)

enum class MultiscalingMetric { Width, Curvature };

struct ClassifierConfig {
    double phiL = 0.32;
    double phiH = 1.64;
    double phiS = 1.64;
    MultiscalingMetric metric = MultiscalingMetric::Width;

    void validate() const;  // 0 < phiL < phiH, phiS > 0
};

struct SlopeTestStats {
    double eq16 = kNaN;  // |b1 - b2| / sigmaDiff
    double eq17 = kNaN;  // ||b1| - |b2|| / sigmaAbsDiff
};

// Decision kernel for one time point. gammaEff is the magnitude statistic
// after any reversal handling; b1/b2 are the bin slopes already in
// low-q/high-q ROLE order; reversed only controls the r prefix. Boundary
// values of gammaEff (== phiL or == phiH) classify as weak.
PatternLabel decideLabel(double gammaEff, double b1, double b2, double sigmaDiff,
                         double sigmaAbsDiff, bool reversed,
                         const ClassifierConfig& cfg,
                         SlopeTestStats* stats = nullptr);

struct PatternTimeline {
    std::vector<std::size_t> timeIndex;
    std::vector<Date> times;
    std::vector<PatternLabel> labels;
    std::vector<double> gammaUsed;  // effective magnitude statistic per time
    std::vector<double> eq16;
    std::vector<double> eq17;
    std::vector<std::size_t> bin;
    std::vector<std::uint8_t> reversed;

    std::size_t size() const { return labels.size(); }
};

// Labels every time point of the smoothed standardized tracks. gammaStd,
// HstdQ1 and HstdQ2 share the segmentation's index space. The reversed flag
// at t is HstdQ1[t] < HstdQ2[t]; when set, slope roles swap, the magnitude
// statistic flips sign for the width metric (interchanging the pair negates
// the width) and stays for the curvature metric, and the label takes the r
// prefix. Throws on gaps in the inputs or degenerate slope spreads.
PatternTimeline classify(std::span<const double> gammaStd,
                         const TrendSegmentation& seg, const SlopeSpread& spread,
                         std::span<const double> HstdQ1,
                         std::span<const double> HstdQ2,
                         std::span<const std::size_t> timeIndex,
                         std::span<const Date> times,
                         const ClassifierConfig& cfg);

}  // namespace mscale
