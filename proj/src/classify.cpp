#include "mscale/classify.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mscale {

namespace {

constexpr std::array<const char*, kPatternLabelCount> kNames = {
    "S",   "M",    "ML",  "A-",   "A+",   "A0",   "mA-",
    "mA+", "mA0",  "AL",  "mAL",  "rM",   "rML",  "rA-",
    "rA+", "rA0",  "rmA-", "rmA+", "rmA0", "rAL",  "rmAL"};

}  // namespace

const char* labelName(PatternLabel l) {
    return kNames[static_cast<std::size_t>(l)];
}

PatternLabel labelFromName(const std::string& s) {
    for (int i = 0; i < kPatternLabelCount; ++i)
        if (s == kNames[static_cast<std::size_t>(i)])
            return static_cast<PatternLabel>(i);
    throw std::invalid_argument("unknown pattern label '" + s + "'");
}

PatternLabel reversedVariant(PatternLabel l) {
    if (l == PatternLabel::S) return l;
    int i = static_cast<int>(l);
    int base = static_cast<int>(PatternLabel::M);
    int rbase = static_cast<int>(PatternLabel::rM);
    if (i >= rbase) return l;
    return static_cast<PatternLabel>(i - base + rbase);
}

PatternLabel baseVariant(PatternLabel l) {
    int i = static_cast<int>(l);
    int base = static_cast<int>(PatternLabel::M);
    int rbase = static_cast<int>(PatternLabel::rM);
    if (i < rbase) return l;
    return static_cast<PatternLabel>(i - rbase + base);
}

bool isReversedLabel(PatternLabel l) {
    return static_cast<int>(l) >= static_cast<int>(PatternLabel::rM);
}

bool isStrongLabel(PatternLabel l) {
    switch (baseVariant(l)) {
        case PatternLabel::M:
        case PatternLabel::Am:
        case PatternLabel::Ap:
        case PatternLabel::A0:
        case PatternLabel::mAm:
        case PatternLabel::mAp:
        case PatternLabel::mA0:
            return true;
        default:
            return false;
    }
}

bool isWeakLabel(PatternLabel l) {
    switch (baseVariant(l)) {
        case PatternLabel::ML:
        case PatternLabel::AL:
        case PatternLabel::mAL:
            return true;
        default:
            return false;
    }
}

bool isAFamilyLabel(PatternLabel l) {
    switch (baseVariant(l)) {
        case PatternLabel::Am:
        case PatternLabel::Ap:
        case PatternLabel::A0:
        case PatternLabel::mAm:
        case PatternLabel::mAp:
        case PatternLabel::mA0:
            return true;
        default:
            return false;
    }
}

void ClassifierConfig::validate() const {
    if (!(phiL > 0) || !(phiL < phiH))
        throw std::invalid_argument("classifier config: need 0 < phiL < phiH");
    if (!(phiS > 0))
        throw std::invalid_argument("classifier config: need phiS > 0");
}

PatternLabel decideLabel(double gammaEff, double b1, double b2, double sigmaDiff,
                         double sigmaAbsDiff, bool reversed,
                         const ClassifierConfig& cfg, SlopeTestStats* stats) {
    if (!(sigmaDiff > 0) || !(sigmaAbsDiff > 0))
        throw std::invalid_argument(
            "classify: degenerate surrogate slope spread (sigma <= 0)");
    if (isGap(gammaEff) || isGap(b1) || isGap(b2))
        throw std::invalid_argument("classify: gap in classifier inputs");

    double eq16 = std::fabs(b1 - b2) / sigmaDiff;
    double eq17 = std::fabs(std::fabs(b1) - std::fabs(b2)) / sigmaAbsDiff;
    if (stats) {
        stats->eq16 = eq16;
        stats->eq17 = eq17;
    }

    if (gammaEff < cfg.phiL) return PatternLabel::S;

    bool strong = gammaEff > cfg.phiH;
    PatternLabel base;
    if (eq16 <= cfg.phiS) {
        base = strong ? PatternLabel::M : PatternLabel::ML;
    } else if (strong) {
        if (eq17 <= cfg.phiS) {
            // Equal rates: diverging pair -> A0, converging -> mA0. An exact
            // slope tie cannot reach here (eq16 would be 0), so the split is
            // total; the defensive tie goes to the symmetric A0.
            base = b1 >= b2 ? PatternLabel::A0 : PatternLabel::mA0;
        } else if (std::fabs(b1) < std::fabs(b2)) {
            // High-q track dominates; its direction picks the label.
            base = b2 < 0 ? PatternLabel::Am : PatternLabel::mAm;
        } else if (std::fabs(b1) > std::fabs(b2)) {
            // Low-q track dominates (|b1| > |b2| >= 0 forces b1 != 0).
            base = b1 > 0 ? PatternLabel::Ap : PatternLabel::mAp;
        } else {
            base = PatternLabel::A0;  // |b1| == |b2| tie
        }
    } else {
        // Weak with distinguishable trends: diverging vs converging. A slope
        // tie cannot pass eq16; defensively it stays in the weak family.
        base = b1 > b2 ? PatternLabel::AL
                       : (b1 < b2 ? PatternLabel::mAL : PatternLabel::ML);
    }
    return reversed ? reversedVariant(base) : base;
}

PatternTimeline classify(std::span<const double> gammaStd,
                         const TrendSegmentation& seg, const SlopeSpread& spread,
                         std::span<const double> HstdQ1,
                         std::span<const double> HstdQ2,
                         std::span<const std::size_t> timeIndex,
                         std::span<const Date> times,
                         const ClassifierConfig& cfg) {
    cfg.validate();
    std::size_t n = gammaStd.size();
    if (HstdQ1.size() != n || HstdQ2.size() != n || timeIndex.size() != n ||
        times.size() != n)
        throw std::invalid_argument("classify: input length mismatch");
    if (seg.breakpoints.empty() || seg.breakpoints.back() != n)
        throw std::invalid_argument("classify: segmentation does not span inputs");
    if (seg.slopeQ1.size() != seg.nBins() || seg.slopeQ2.size() != seg.nBins())
        throw std::invalid_argument("classify: segmentation lacks bin slopes");
    if (!(spread.sigmaDiff > 0) || !(spread.sigmaAbsDiff > 0))
        throw std::invalid_argument(
            "classify: degenerate surrogate slope spread (sigma <= 0)");

    PatternTimeline tl;
    tl.timeIndex.assign(timeIndex.begin(), timeIndex.end());
    tl.times.assign(times.begin(), times.end());
    tl.labels.resize(n);
    tl.gammaUsed.resize(n);
    tl.eq16.resize(n);
    tl.eq17.resize(n);
    tl.bin.resize(n);
    tl.reversed.resize(n);

    for (std::size_t t = 0; t < n; ++t) {
        if (isGap(gammaStd[t]) || isGap(HstdQ1[t]) || isGap(HstdQ2[t]))
            throw std::invalid_argument("classify: gap in classifier inputs");
        std::size_t b = seg.binOf(t);
        bool reversed = HstdQ1[t] < HstdQ2[t];
        double b1 = seg.slopeQ1[b], b2 = seg.slopeQ2[b];
        if (reversed) std::swap(b1, b2);
        double gammaEff = gammaStd[t];
        if (reversed && cfg.metric == MultiscalingMetric::Width)
            gammaEff = -gammaEff;
        SlopeTestStats st;
        tl.labels[t] = decideLabel(gammaEff, b1, b2, spread.sigmaDiff,
                                   spread.sigmaAbsDiff, reversed, cfg, &st);
        tl.gammaUsed[t] = gammaEff;
        tl.eq16[t] = st.eq16;
        tl.eq17[t] = st.eq17;
        tl.bin[t] = b;
        tl.reversed[t] = reversed ? 1 : 0;
    }
    return tl;
}

}  // namespace mscale
