#include "doctest.h"

#include <string>
#include <vector>

#include "mscale/classify.hpp"

using namespace mscale;

namespace {

const double kSd = 0.005, kSa = 0.005;

PatternLabel decide(double g, double b1, double b2, bool rev = false) {
    ClassifierConfig cfg;
    return decideLabel(g, b1, b2, kSd, kSa, rev, cfg);
}

}  // namespace

TEST_CASE("worked strong-asymmetric example: statistics and label") {
    ClassifierConfig cfg;
    SlopeTestStats st;
    PatternLabel l = decideLabel(2.0, 0.001, -0.020, kSd, kSa, false, cfg, &st);
    CHECK(l == PatternLabel::Am);
    CHECK(st.eq16 == doctest::Approx(4.2).epsilon(1e-12));
    CHECK(st.eq17 == doctest::Approx(3.8).epsilon(1e-12));
}

TEST_CASE("magnitude gate") {
    // Below phiL: uniscaling regardless of slopes or reversal.
    CHECK(decide(0.1, 0.05, -0.05) == PatternLabel::S);
    CHECK(decide(0.1, 0.05, -0.05, true) == PatternLabel::S);
    CHECK(decide(-0.5, 0.05, -0.05) == PatternLabel::S);  // signed statistic
    // Boundaries classify weak.
    CHECK(decide(0.32, 0.01, 0.01) == PatternLabel::ML);
    CHECK(decide(1.64, 0.01, 0.01) == PatternLabel::ML);
    // Strictly inside the strong region.
    CHECK(decide(1.6401, 0.01, 0.01) == PatternLabel::M);
}

TEST_CASE("parallel trends: M and ML") {
    CHECK(decide(2.0, 0.01, 0.01) == PatternLabel::M);
    CHECK(decide(2.0, 0.0, 0.0) == PatternLabel::M);
    CHECK(decide(1.0, -0.003, -0.003) == PatternLabel::ML);
    // eq16 landing exactly on the threshold still counts parallel
    // (sigma of 0.5 keeps the division exact in floating point).
    ClassifierConfig cfg;
    CHECK(decideLabel(2.0, 0.82, 0.0, 0.5, 0.5, false, cfg) == PatternLabel::M);
}

TEST_CASE("weak transitions: AL and mAL") {
    CHECK(decide(1.0, 0.01, -0.01) == PatternLabel::AL);
    CHECK(decide(1.0, -0.01, 0.01) == PatternLabel::mAL);
}

TEST_CASE("strong asymmetric family") {
    // Slope difference passes, magnitude-difference passes: the dominant
    // track's own direction picks the pattern.
    CHECK(decide(2.0, 0.001, -0.020) == PatternLabel::Am);   // high-q falls
    CHECK(decide(2.0, 0.001, 0.020) == PatternLabel::mAm);   // high-q rises
    CHECK(decide(2.0, 0.020, -0.001) == PatternLabel::Ap);   // low-q rises
    CHECK(decide(2.0, -0.020, -0.001) == PatternLabel::mAp); // low-q falls
    CHECK(decide(2.0, -0.020, 0.001) == PatternLabel::mAp);
    // Magnitude-difference fails: equal-rate divergence or convergence.
    CHECK(decide(2.0, 0.010, -0.010) == PatternLabel::A0);
    CHECK(decide(2.0, -0.010, 0.010) == PatternLabel::mA0);
}

TEST_CASE("reversed periods take the r prefix") {
    CHECK(decide(2.0, 0.01, 0.01, true) == PatternLabel::rM);
    CHECK(decide(1.0, 0.01, -0.01, true) == PatternLabel::rAL);
    CHECK(decide(2.0, 0.001, -0.020, true) == PatternLabel::rAm);
}

TEST_CASE("label helpers are consistent across the whole set") {
    for (int i = 0; i < kPatternLabelCount; ++i) {
        PatternLabel l = static_cast<PatternLabel>(i);
        CHECK(labelFromName(labelName(l)) == l);
        PatternLabel base = baseVariant(l);
        CHECK(!isReversedLabel(base));
        if (l != PatternLabel::S) {
            CHECK(isReversedLabel(reversedVariant(base)));
            CHECK(baseVariant(reversedVariant(base)) == base);
        } else {
            CHECK(reversedVariant(l) == PatternLabel::S);
        }
        // Exactly one magnitude class per label.
        int classes = (l == PatternLabel::S ? 1 : 0) + (isStrongLabel(l) ? 1 : 0) +
                      (isWeakLabel(l) ? 1 : 0);
        CHECK(classes == 1);
        if (isAFamilyLabel(l)) CHECK(isStrongLabel(l));
    }
    CHECK(std::string(labelName(PatternLabel::Am)) == "A-");
    CHECK(std::string(labelName(PatternLabel::rmAp)) == "rmA+");
    CHECK(labelFromName("mA0") == PatternLabel::mA0);
    CHECK_THROWS(labelFromName("nonsense"));
}

TEST_CASE("timeline classification: bins, reversal, width sign flip") {
    const std::size_t n = 30;
    std::vector<double> gamma(n), h1(n), h2(n);
    for (std::size_t t = 0; t < n; ++t) {
        bool second = t >= 15;
        gamma[t] = second ? -2.0 : 2.0;
        h1[t] = second ? -1.0 : 1.0;
        h2[t] = second ? 1.0 : -1.0;
    }
    TrendSegmentation seg;
    seg.breakpoints = {0, 15, 30};
    seg.slopeQ1 = {0.01, 0.002};
    seg.seQ1 = {0, 0};
    seg.slopeQ2 = {0.01, 0.002};
    seg.seQ2 = {0, 0};
    SlopeSpread spread;
    spread.sigmaDiff = kSd;
    spread.sigmaAbsDiff = kSa;
    std::vector<std::size_t> ti(n);
    std::vector<Date> dates(n);
    for (std::size_t t = 0; t < n; ++t) {
        ti[t] = 249 + 5 * t;
        dates[t] = fromSerialDay(static_cast<std::int64_t>(400 + t));
    }
    ClassifierConfig cfg;

    PatternTimeline tl = classify(gamma, seg, spread, h1, h2, ti, dates, cfg);
    REQUIRE(tl.size() == n);
    for (std::size_t t = 0; t < n; ++t) {
        CHECK(tl.timeIndex[t] == ti[t]);
        CHECK(tl.bin[t] == (t < 15 ? 0 : 1));
        CHECK(tl.reversed[t] == (t < 15 ? 0 : 1));
        CHECK(tl.labels[t] == (t < 15 ? PatternLabel::M : PatternLabel::rM));
        // Width metric: reversal flips the sign of the magnitude statistic.
        CHECK(tl.gammaUsed[t] == doctest::Approx(2.0));
        CHECK(tl.eq16[t] == doctest::Approx(0.0));
    }

    // Curvature metric: the statistic keeps its sign, so the second half
    // falls below the gate and reads uniscaling.
    ClassifierConfig curv;
    curv.metric = MultiscalingMetric::Curvature;
    PatternTimeline tc = classify(gamma, seg, spread, h1, h2, ti, dates, curv);
    for (std::size_t t = 0; t < n; ++t) {
        CHECK(tc.labels[t] == (t < 15 ? PatternLabel::M : PatternLabel::S));
        CHECK(tc.gammaUsed[t] == doctest::Approx(t < 15 ? 2.0 : -2.0));
    }
}

TEST_CASE("classification input validation") {
    std::vector<double> g{2.0, 2.0}, h1{1.0, 1.0}, h2{0.0, 0.0};
    std::vector<std::size_t> ti{0, 1};
    std::vector<Date> dates{Date{2000, 1, 3}, Date{2000, 1, 4}};
    TrendSegmentation seg;
    seg.breakpoints = {0, 2};
    seg.slopeQ1 = {0.01};
    seg.seQ1 = {0};
    seg.slopeQ2 = {0.0};
    seg.seQ2 = {0};
    SlopeSpread sp;
    sp.sigmaDiff = 0.005;
    sp.sigmaAbsDiff = 0.005;
    ClassifierConfig cfg;
    CHECK_NOTHROW(classify(g, seg, sp, h1, h2, ti, dates, cfg));

    SlopeSpread bad = sp;
    bad.sigmaDiff = 0.0;
    CHECK_THROWS(classify(g, seg, sp, h1, h2, std::vector<std::size_t>{0}, dates,
                          cfg));  // length mismatch
    CHECK_THROWS(classify(g, seg, bad, h1, h2, ti, dates, cfg));

    std::vector<double> gappy{2.0, kNaN};
    CHECK_THROWS(classify(gappy, seg, sp, h1, h2, ti, dates, cfg));

    TrendSegmentation wrong = seg;
    wrong.breakpoints = {0, 5};  // does not cover the track length
    CHECK_THROWS(classify(g, wrong, sp, h1, h2, ti, dates, cfg));

    ClassifierConfig badCfg;
    badCfg.phiL = 2.0;  // must stay below phiH
    CHECK_THROWS(badCfg.validate());
}
