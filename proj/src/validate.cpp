#include "mscale/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "mscale/classify.hpp"
#include "mscale/cpa.hpp"
#include "mscale/ghe.hpp"
#include "mscale/pipeline.hpp"
#include "mscale/report.hpp"
#include "mscale/rng.hpp"
#include "mscale/stats.hpp"
#include "mscale/synth.hpp"

namespace mscale {

const char* criterionStatusName(CriterionStatus s) {
    switch (s) {
        case CriterionStatus::Pass: return "PASS";
        case CriterionStatus::Fail: return "FAIL";
        case CriterionStatus::Skip: return "SKIP";
    }
    return "FAIL";
}

bool allMandatoryPassed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.optional && r.status == CriterionStatus::Fail) return false;
    return true;
}

namespace {

#if defined(__GNUC__)
__attribute__((format(printf, 1, 2)))
#endif
std::string strf(const char* fmt, ...) {
    char buf[768];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    return buf;
}

double seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool timeOk(CriterionResult& r, double limit) {
    if (r.seconds < limit) return true;
    r.status = CriterionStatus::Fail;
    r.detail += strf(" [exceeded %.0fs runtime bound: %.1fs]", limit, r.seconds);
    return false;
}

// ---- 1: weight kernel identities -------------------------------------------

CriterionResult c1Kernel() {
    CriterionResult r{1, "weight kernel normalization and decay ratio", {}, false,
                      "", 0};
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(42);
    double maxSumErr = 0, maxRatioErr = 0;
    for (int it = 0; it < 1000; ++it) {
        double theta = 1.0 + rng.uniform() * 1999.0;
        std::size_t dt = 3 + static_cast<std::size_t>(rng.uniform() * 1998.0);
        WeightKernel k = buildKernel(dt, theta);
        maxSumErr = std::max(maxSumErr, std::fabs(k.prefix[dt] - 1.0));
        double want = std::exp(1.0 / theta);
        for (std::size_t s = 0; s + 1 < dt; ++s)
            maxRatioErr =
                std::max(maxRatioErr, std::fabs(k.w[s] / k.w[s + 1] / want - 1.0));
    }
    r.seconds = seconds(t0);
    bool ok = maxSumErr <= 1e-12 && maxRatioErr <= 1e-10;
    r.status = ok ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = strf("max |sum-1| = %.3e (<=1e-12), max ratio err = %.3e (<=1e-10), "
                    "%.2fs",
                    maxSumErr, maxRatioErr, r.seconds);
    timeOk(r, 1.0);
    return r;
}

// ---- 2: random-walk null calibration ----------------------------------------

CriterionResult c2Null() {
    CriterionResult r{2, "random-walk null calibration (causal)", {}, false, "", 0};
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> h1s, ws, bs;
    std::size_t sCount = 0, total = 0;
    for (int s = 1; s <= 20; ++s) {
        SynthSpec sp;
        sp.kind = SynthKind::RandomWalk;
        sp.length = 5000;
        sp.seed = static_cast<std::uint64_t>(s);
        PriceSeries series = generate(sp);
        AnalysisConfig cfg;
        cfg.smooth.mode = SmoothMode::Causal;
        cfg.seed = 9000 + static_cast<std::uint64_t>(s);
        AnalysisResult res = runAnalysis(series, cfg);
        h1s.push_back(meanFinite(res.real.track(res.real.qIndex(1.0))));
        ws.push_back(meanFinite(res.width.Wstd));
        bs.push_back(meanFinite(res.curvRealStd));
        for (PatternLabel l : res.widthStage.timeline.labels) {
            ++total;
            if (l == PatternLabel::S) ++sCount;
        }
    }
    double h1 = mean(h1s), w = mean(ws), b = mean(bs);
    double sFrac = static_cast<double>(sCount) / static_cast<double>(total);
    r.seconds = seconds(t0);
    bool ok = h1 >= 0.45 && h1 <= 0.55 && w >= -0.3 && w <= 0.3 && b >= -0.3 &&
              b <= 0.3 && sFrac >= 0.60;
    r.status = ok ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = strf("grand mean H1 = %.4f (in [0.45,0.55]), W' = %+.4f, "
                    "B' = %+.4f (each in [-0.3,0.3]), S fraction = %.1f%% (>=60%%), "
                    "%.1fs",
                    h1, w, b, sFrac * 100, r.seconds);
    timeOk(r, 120.0);
    return r;
}

// ---- 3: fBm exponent recovery -----------------------------------------------

CriterionResult c3Fbm() {
    CriterionResult r{3, "fBm exponent recovery (H = 0.3, 0.5, 0.7)", {}, false,
                      "", 0};
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (double target : {0.3, 0.5, 0.7}) {
        std::vector<double> h1s, ws;
        for (int s = 1; s <= 20; ++s) {
            SynthSpec sp;
            sp.kind = SynthKind::Fbm;
            sp.length = 4096;
            sp.hurst = target;
            sp.seed = static_cast<std::uint64_t>(1000 * target * 10 + s);
            PriceSeries series = generate(sp);
            AnalysisConfig cfg;
            cfg.ghe.qGrid = {0.1, 1.0, 4.0};
            cfg.computeCurvature = false;
            cfg.seed = 3000 + static_cast<std::uint64_t>(s);
            AnalysisResult res = runAnalysis(series, cfg);
            h1s.push_back(meanFinite(res.real.track(res.real.qIndex(1.0))));
            ws.push_back(meanFinite(res.width.Wstd));
        }
        double h1 = mean(h1s), w = mean(ws);
        bool okH = std::fabs(h1 - target) <= 0.08;
        bool okW = w >= -0.5 && w <= 0.5;
        ok = ok && okH && okW;
        detail += strf("H=%.1f: mean H1 = %.4f (|err| %.4f <= 0.08), W' = %+.3f; ",
                       target, h1, std::fabs(h1 - target), w);
    }
    r.seconds = seconds(t0);
    r.status = ok ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = detail + strf("%.1fs", r.seconds);
    timeOk(r, 180.0);
    return r;
}

// ---- 4: cascade multiscaling detection --------------------------------------

CriterionResult c4Cascade() {
    CriterionResult r{4, "cascade multiscaling detection (curvature)", {}, false,
                      "", 0};
    auto t0 = std::chrono::steady_clock::now();
    double absBSum = 0;
    std::size_t absBCount = 0, strong = 0, total = 0;
    for (int s = 1; s <= 20; ++s) {
        SynthSpec sp;
        sp.kind = SynthKind::Cascade;
        sp.length = 8192;
        sp.seed = static_cast<std::uint64_t>(s);
        PriceSeries series = generate(sp);
        AnalysisConfig cfg;
        cfg.classifier.metric = MultiscalingMetric::Curvature;
        cfg.seed = 4000 + static_cast<std::uint64_t>(s);
        AnalysisResult res = runAnalysis(series, cfg);
        for (double b : res.curvRealStd)
            if (std::isfinite(b)) {
                absBSum += std::fabs(b);
                ++absBCount;
            }
        for (PatternLabel l : res.curvStage->timeline.labels) {
            ++total;
            if (isStrongLabel(l)) ++strong;
        }
    }
    double meanAbsB = absBSum / static_cast<double>(absBCount);
    double frac = static_cast<double>(strong) / static_cast<double>(total);
    r.seconds = seconds(t0);
    bool ok = meanAbsB > 1.64 && frac >= 0.50;
    r.status = ok ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = strf("mean |B'| = %.3f (>1.64), strong {M, A-family} fraction = "
                    "%.1f%% (>=50%%), %.1fs",
                    meanAbsB, frac * 100, r.seconds);
    timeOk(r, 180.0);
    return r;
}

// ---- 5: fast path vs naive structure function --------------------------------

CriterionResult c5Oracle() {
    CriterionResult r{5, "structure-function fast path equals naive oracle", {},
                      false, "", 0};
    auto t0 = std::chrono::steady_clock::now();
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 1500;
    sp.seed = 77;
    PriceSeries series = generate(sp);
    GheConfig cfg;
    cfg.qGrid = {0.1, 0.5, 1.0, 2.0, 2.5, 3.0, 4.0};  // uneven gaps on purpose
    WeightKernel kernel = buildKernel(cfg.dt, cfg.theta);
    Rng rng(123);
    double maxRel = 0;
    std::size_t nQ = cfg.qGrid.size();
    for (int it = 0; it < 1000; ++it) {
        std::size_t e =
            cfg.dt - 1 +
            static_cast<std::size_t>(rng.uniform() *
                                     static_cast<double>(series.size() - cfg.dt));
        std::size_t qi = static_cast<std::size_t>(rng.uniform() * double(nQ));
        std::size_t tau =
            1 + static_cast<std::size_t>(rng.uniform() * double(cfg.tauMax));
        std::vector<double> xi = structureFunctionsAt(series, cfg, e);
        std::span<const double> window(series.logPrice.data() + (e - cfg.dt + 1),
                                       cfg.dt);
        double naive = structureFunction(window, kernel, cfg.qGrid[qi], tau);
        double fast = xi[(tau - 1) * nQ + qi];
        double rel = std::fabs(fast - naive) / std::max(std::fabs(naive), 1e-300);
        maxRel = std::max(maxRel, rel);
    }
    r.seconds = seconds(t0);
    r.status = maxRel <= 1e-10 ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = strf("max relative difference = %.3e (<=1e-10) over 1000 samples, "
                    "%.1fs",
                    maxRel, r.seconds);
    return r;
}

// ---- 6: trend segmentation recovery ------------------------------------------

double splitRss(std::span<const double> y, std::size_t from, std::size_t to) {
    // OLS RSS of y[from..to) against the index.
    LinearFit f = fitLineIndexed(y, from, to);
    double rss = 0;
    for (std::size_t i = from; i < to; ++i) {
        double e = y[i] - (f.intercept + f.slope * static_cast<double>(i));
        rss += e * e;
    }
    return rss;
}

CriterionResult c6Cpa() {
    CriterionResult r{6, "trend segmentation recovers slope switches", {}, false,
                      "", 0};
    auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = 200;

    // Noiseless: the continuous two-slope track has exactly two zero-residual
    // partitions (vertex on both lines); accept either.
    std::vector<double> clean(n);
    const std::size_t kTrue = 120;
    for (std::size_t i = 0; i < n; ++i)
        clean[i] = i < kTrue ? 1.0 * static_cast<double>(i)
                             : 1.0 * kTrue - 0.7 * static_cast<double>(i - kTrue);
    std::vector<std::size_t> bp =
        segmentTrends(clean, defaultPenalty(clean, 3.0), 10);
    bool cleanOk = bp.size() == 3 && (bp[1] == kTrue || bp[1] == kTrue + 1);

    // Noisy: compare against the exhaustive single-split oracle.
    Rng rng(2024);
    int good = 0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        std::size_t k = 30 + static_cast<std::size_t>(rng.uniform() * 140.0);
        double s = 0.5 + rng.uniform() * 1.5;
        if (rng.uniform() < 0.5) s = -s;
        double sigma = 0.1 * std::fabs(s);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double base = i < k ? s * static_cast<double>(i)
                                : s * static_cast<double>(k) -
                                      s * static_cast<double>(i - k);
            y[i] = base + rng.normal(0, sigma);
        }
        std::vector<std::size_t> got =
            segmentTrends(y, defaultPenalty(y, 3.0), 10);
        std::size_t best = 10;
        double bestRss = 1e300;
        for (std::size_t b = 10; b + 10 <= n; ++b) {
            double rss = splitRss(y, 0, b) + splitRss(y, b, n);
            if (rss < bestRss) {
                bestRss = rss;
                best = b;
            }
        }
        if (got.size() == 3 &&
            std::llabs(static_cast<long long>(got[1]) -
                       static_cast<long long>(best)) <= 3)
            ++good;
    }
    double frac = static_cast<double>(good) / trials;
    r.seconds = seconds(t0);
    bool ok = cleanOk && frac >= 0.95;
    r.status = ok ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = strf("noiseless split at %zu (true %zu%s), noisy within +/-3 of "
                    "oracle in %.1f%% of %d trials (>=95%%), %.1fs",
                    bp.size() == 3 ? bp[1] : 0, kTrue, cleanOk ? ", ok" : ", BAD",
                    frac * 100, trials, r.seconds);
    timeOk(r, 60.0);
    return r;
}

// ---- 7: classifier truth table and invariants --------------------------------

PatternLabel mirrorOf(PatternLabel l) {
    bool rev = isReversedLabel(l);
    PatternLabel b = baseVariant(l);
    switch (b) {
        case PatternLabel::Am: b = PatternLabel::mAm; break;
        case PatternLabel::mAm: b = PatternLabel::Am; break;
        case PatternLabel::Ap: b = PatternLabel::mAp; break;
        case PatternLabel::mAp: b = PatternLabel::Ap; break;
        case PatternLabel::A0: b = PatternLabel::mA0; break;
        case PatternLabel::mA0: b = PatternLabel::A0; break;
        case PatternLabel::AL: b = PatternLabel::mAL; break;
        case PatternLabel::mAL: b = PatternLabel::AL; break;
        default: break;
    }
    return rev ? reversedVariant(b) : b;
}

struct TruthRow {
    double gamma, b1, b2;
    bool reversed;
    PatternLabel expect;
};

CriterionResult c7Classifier() {
    CriterionResult r{7, "classifier truth table and invariants", {}, false, "",
                      0};
    auto t0 = std::chrono::steady_clock::now();
    ClassifierConfig cfg;  // phiL 0.32, phiH 1.64, phiS 1.64, width metric
    const double sd = 0.005, sa = 0.005;

    // 21 labels + the two magnitude boundaries + reversed-S: slope-test
    // statistics are diff/0.005, so 0.02 passes (4 > 1.64) and 0.002 fails.
    const TruthRow table[24] = {
        {0.10, +0.020, -0.020, false, PatternLabel::S},
        {2.00, +0.010, +0.010, false, PatternLabel::M},
        {1.00, +0.010, +0.008, false, PatternLabel::ML},
        {2.00, +0.001, -0.020, false, PatternLabel::Am},
        {2.00, +0.020, -0.001, false, PatternLabel::Ap},
        {2.00, +0.010, -0.010, false, PatternLabel::A0},
        {2.00, +0.001, +0.020, false, PatternLabel::mAm},
        {2.00, -0.020, +0.001, false, PatternLabel::mAp},
        {2.00, -0.010, +0.010, false, PatternLabel::mA0},
        {1.00, +0.010, -0.010, false, PatternLabel::AL},
        {1.00, -0.010, +0.010, false, PatternLabel::mAL},
        {2.00, +0.010, +0.010, true, PatternLabel::rM},
        {1.00, +0.010, +0.008, true, PatternLabel::rML},
        {2.00, +0.001, -0.020, true, PatternLabel::rAm},
        {2.00, +0.020, -0.001, true, PatternLabel::rAp},
        {2.00, +0.010, -0.010, true, PatternLabel::rA0},
        {2.00, +0.001, +0.020, true, PatternLabel::rmAm},
        {2.00, -0.020, +0.001, true, PatternLabel::rmAp},
        {2.00, -0.010, +0.010, true, PatternLabel::rmA0},
        {1.00, +0.010, -0.010, true, PatternLabel::rAL},
        {1.00, -0.010, +0.010, true, PatternLabel::rmAL},
        {0.32, +0.010, -0.010, false, PatternLabel::AL},  // gamma == phiL: weak
        {1.64, +0.010, +0.008, false, PatternLabel::ML},  // gamma == phiH: weak
        {0.10, +0.010, -0.010, true, PatternLabel::S},    // S has no r variant
    };

    int tableBad = 0;
    std::string firstBad;
    for (int i = 0; i < 24; ++i) {
        const TruthRow& row = table[i];
        SlopeTestStats st;
        PatternLabel got = decideLabel(row.gamma, row.b1, row.b2, sd, sa,
                                       row.reversed, cfg, &st);
        if (got != row.expect) {
            ++tableBad;
            if (firstBad.empty())
                firstBad = strf(" first mismatch row %d: got %s want %s;", i + 1,
                                labelName(got), labelName(row.expect));
        }
    }
    // The spec's worked example: row 4 statistics.
    SlopeTestStats ex;
    decideLabel(2.0, 0.001, -0.020, sd, sa, false, cfg, &ex);
    bool exOk = std::fabs(ex.eq16 - 4.2) < 1e-9 && std::fabs(ex.eq17 - 3.8) < 1e-9;

    // Randomized invariants.
    Rng rng(555);
    int mirrorBad = 0, swapBad = 0, thresholdBad = 0, determinismBad = 0;
    for (int it = 0; it < 1000; ++it) {
        double g = -1.0 + rng.uniform() * 4.5;
        double b1 = rng.normal(0, 0.02), b2 = rng.normal(0, 0.02);
        bool rev = rng.uniform() < 0.5;
        PatternLabel l = decideLabel(g, b1, b2, sd, sa, rev, cfg);
        if (decideLabel(g, b1, b2, sd, sa, rev, cfg) != l) ++determinismBad;
        if (decideLabel(g, -b1, -b2, sd, sa, rev, cfg) != mirrorOf(l)) ++mirrorBad;
        ClassifierConfig loose = cfg;
        loose.phiL = cfg.phiL * (0.1 + 0.8 * rng.uniform());
        loose.phiH = cfg.phiH + rng.uniform() * 2.0;
        PatternLabel l2 = decideLabel(g, b1, b2, sd, sa, rev, loose);
        if (l == PatternLabel::S && isStrongLabel(l2)) ++thresholdBad;
        if (isStrongLabel(l) && l2 == PatternLabel::S) ++thresholdBad;

        // Swap-reversal at the timeline level: exchanging the tracks flips
        // the reversal flag, negates the width, and toggles the r prefix.
        double h1 = rng.normal(0, 1), h2 = rng.normal(0, 1);
        if (h1 == h2) continue;
        double gw = (h1 - h2) * (0.2 + rng.uniform() * 2.0);
        TrendSegmentation seg;
        seg.breakpoints = {0, 1};
        seg.slopeQ1 = {b1};
        seg.seQ1 = {0};
        seg.slopeQ2 = {b2};
        seg.seQ2 = {0};
        SlopeSpread spread;
        spread.sigmaDiff = sd;
        spread.sigmaAbsDiff = sa;
        std::vector<std::size_t> ti{0};
        std::vector<Date> dates{Date{2000, 1, 3}};
        PatternTimeline a = classify(std::vector<double>{gw}, seg, spread,
                                     std::vector<double>{h1},
                                     std::vector<double>{h2}, ti, dates, cfg);
        TrendSegmentation segSwap = seg;
        std::swap(segSwap.slopeQ1, segSwap.slopeQ2);
        std::swap(segSwap.seQ1, segSwap.seQ2);
        PatternTimeline b = classify(std::vector<double>{-gw}, segSwap, spread,
                                     std::vector<double>{h2},
                                     std::vector<double>{h1}, ti, dates, cfg);
        PatternLabel la = a.labels[0];
        PatternLabel expect = la == PatternLabel::S
                                  ? la
                                  : (isReversedLabel(la) ? baseVariant(la)
                                                         : reversedVariant(la));
        if (b.labels[0] != expect) ++swapBad;
    }
    r.seconds = seconds(t0);
    bool ok = tableBad == 0 && exOk && mirrorBad == 0 && swapBad == 0 &&
              thresholdBad == 0 && determinismBad == 0;
    r.status = ok ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = strf("truth table 24/24%s worked-example stats eq16=%.3f eq17=%.3f%s; "
                    "invariant violations over 1000 draws: mirror %d, swap %d, "
                    "threshold %d, determinism %d; %.2fs",
                    tableBad == 0 ? "," : strf(" (%d bad,%s)", tableBad,
                                               firstBad.c_str())
                                              .c_str(),
                    ex.eq16, ex.eq17, exOk ? "" : " (BAD)", mirrorBad, swapBad,
                    thresholdBad, determinismBad, r.seconds);
    return r;
}

// ---- 8: regime-switch warning ------------------------------------------------

CriterionResult c8RegimeSwitch() {
    CriterionResult r{8, "regime switch flagged near the change (causal)", {},
                      false, "", 0};
    auto t0 = std::chrono::steady_clock::now();
    const long long switchIdx = 2000;
    int hits = 0;
    for (int s = 1; s <= 20; ++s) {
        SynthSpec sp;
        sp.kind = SynthKind::Piecewise;
        sp.seed = static_cast<std::uint64_t>(s);
        SynthSegment a;
        a.kind = SynthKind::RandomWalk;
        a.length = 2000;
        SynthSegment b;
        b.kind = SynthKind::Cascade;
        b.length = 2000;
        sp.segments = {a, b};
        PriceSeries series = generate(sp);
        AnalysisConfig cfg;
        cfg.ghe.qGrid = {0.1, 1.0, 4.0};
        cfg.computeCurvature = false;
        cfg.smooth.mode = SmoothMode::Causal;
        cfg.seed = 7000 + static_cast<std::uint64_t>(s);
        AnalysisResult res = runAnalysis(series, cfg);
        const PatternTimeline& tl = res.widthStage.timeline;
        bool hit = false;
        for (std::size_t t = 0; t < tl.size() && !hit; ++t) {
            long long idx = static_cast<long long>(tl.timeIndex[t]);
            if (std::llabs(idx - switchIdx) > 300) continue;
            PatternLabel base = baseVariant(tl.labels[t]);
            if (isAFamilyLabel(tl.labels[t]) || base == PatternLabel::AL ||
                base == PatternLabel::mAL)
                hit = true;
        }
        if (hit) ++hits;
    }
    r.seconds = seconds(t0);
    r.status = hits >= 16 ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = strf("A-family/AL label within +/-300 days of the switch in %d/20 "
                    "seeds (>=16), %.1fs",
                    hits, r.seconds);
    timeOk(r, 180.0);
    return r;
}

// ---- 9: schematic storyline replay -------------------------------------------

CriterionResult c9Schematic() {
    CriterionResult r{9, "schematic storyline replay through CPA + classifier",
                      {}, false, "", 0};
    auto t0 = std::chrono::steady_clock::now();

    struct Seg {
        double h1o, b1, h2o, b2;
        PatternLabel expect;
    };
    // Ten stylized regimes; every boundary jumps the driver track so the
    // noiseless optimal partition is unique, and gamma = h1 - h2 stays inside
    // one magnitude class per regime. Expected labels derived by hand from
    // the decision rules before running.
    const std::vector<Seg> story = {
        {0.10, 0.000, 0.00, 0.000, PatternLabel::S},
        {0.60, +0.008, 0.10, -0.008, PatternLabel::AL},
        {1.50, +0.001, -0.30, -0.020, PatternLabel::Am},
        {1.00, +0.005, -1.00, +0.005, PatternLabel::M},
        {1.00, +0.010, -1.00, -0.010, PatternLabel::A0},
        {3.00, -0.001, 0.10, +0.015, PatternLabel::mAm},
        {1.00, -0.005, 0.00, +0.005, PatternLabel::mAL},
        {-1.00, +0.005, 1.00, +0.005, PatternLabel::rM},
        {-0.30, -0.020, 1.50, +0.001, PatternLabel::rAm},
        {0.12, 0.000, 0.02, 0.000, PatternLabel::S},
    };
    const std::size_t L = 60, n = L * story.size();
    std::vector<double> h1(n), h2(n), gamma(n);
    for (std::size_t i = 0; i < story.size(); ++i)
        for (std::size_t t = 0; t < L; ++t) {
            double x = static_cast<double>(t);
            h1[i * L + t] = story[i].h1o + story[i].b1 * x;
            h2[i * L + t] = story[i].h2o + story[i].b2 * x;
            gamma[i * L + t] = h1[i * L + t] - h2[i * L + t];
        }

    std::vector<std::size_t> bp = segmentTrends(h1, 0.1, 10);
    bool bpOk = bp.size() == story.size() + 1;
    for (std::size_t i = 0; bpOk && i < bp.size(); ++i) bpOk = bp[i] == i * L;

    TrendSegmentation seg;
    seg.breakpoints = bp;
    seg.slopeQ1 = binSlopes(h1, bp, &seg.seQ1);
    seg.slopeQ2 = binSlopes(h2, bp, &seg.seQ2);
    SlopeSpread spread;
    spread.sigmaDiff = 0.005;
    spread.sigmaAbsDiff = 0.005;
    std::vector<std::size_t> ti(n);
    std::vector<Date> dates(n);
    for (std::size_t t = 0; t < n; ++t) {
        ti[t] = t;
        dates[t] = fromSerialDay(static_cast<std::int64_t>(t));
    }
    ClassifierConfig cfg;
    PatternTimeline tl = classify(gamma, seg, spread, h1, h2, ti, dates, cfg);

    std::size_t labelBad = 0;
    std::string firstBad;
    for (std::size_t t = 0; t < n; ++t) {
        PatternLabel want = story[t / L].expect;
        if (tl.labels[t] != want) {
            ++labelBad;
            if (firstBad.empty())
                firstBad = strf(" first mismatch t=%zu: got %s want %s;", t,
                                labelName(tl.labels[t]), labelName(want));
        }
    }
    // The strong-asymmetric regime reproduces the worked slope statistics.
    bool statsOk = std::fabs(tl.eq16[150] - 4.2) < 1e-9 &&
                   std::fabs(tl.eq17[150] - 3.8) < 1e-9;
    r.seconds = seconds(t0);
    bool ok = bpOk && labelBad == 0 && statsOk;
    r.status = ok ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = strf("breakpoints %s, labels %zu/%zu match%s, regime-3 stats "
                    "eq16=%.3f eq17=%.3f%s, %.2fs",
                    bpOk ? "exact at each 60-point boundary" : "WRONG",
                    n - labelBad, n, firstBad.c_str(), tl.eq16[150], tl.eq17[150],
                    statsOk ? "" : " (BAD)", r.seconds);
    return r;
}

// ---- 10/11: optional data-dependent checks -----------------------------------

CriterionResult c10Reference(const ValidateOptions& opts,
                             const PriceSeries* series) {
    CriterionResult r{10, "reference index statistics (theta = 750)", {}, true,
                      "", 0};
    if (!series) {
        r.status = CriterionStatus::Skip;
        r.detail = opts.dataPath.empty()
                       ? "no data file provided"
                       : strf("data file not usable: %s", opts.dataPath.c_str());
        return r;
    }
    auto t0 = std::chrono::steady_clock::now();
    AnalysisConfig cfg;
    cfg.ghe.dt = 750;
    cfg.ghe.theta = 750;
    AnalysisResult res = runAnalysis(*series, cfg);
    double h1 = meanFinite(res.real.track(res.real.qIndex(1.0)));
    std::vector<double> absW;
    for (double w : res.width.W)
        if (std::isfinite(w)) absW.push_back(std::fabs(w));
    double mAbsW = mean(absW);
    double mB = meanFinite(res.curvReal.B);
    double h1s = meanFinite(res.surr.track(res.surr.qIndex(1.0)));
    WidthTracks ws = widthTrack(res.surr, cfg.q1, cfg.q2, res.sigmaQ);
    std::vector<double> absWs;
    for (double w : ws.W)
        if (std::isfinite(w)) absWs.push_back(std::fabs(w));
    double mAbsWs = mean(absWs);
    r.seconds = seconds(t0);
    bool ok = std::fabs(h1 - 0.5244) <= 0.01 && std::fabs(mAbsW - 0.1058) <= 0.01 &&
              std::fabs(mB - (-0.0295)) <= 0.005 && std::fabs(h1s - 0.494) <= 0.01 &&
              std::fabs(mAbsWs - 0.009) <= 0.005;
    r.status = ok ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = strf("mean H1 = %.4f (0.5244+/-0.01), mean |W| = %.4f "
                    "(0.1058+/-0.01), mean B = %+.5f (-0.0295+/-0.005); surrogate "
                    "H1 = %.4f (0.494+/-0.01), |W| = %.4f (0.009+/-0.005); %.0fs",
                    h1, mAbsW, mB, h1s, mAbsWs, r.seconds);
    timeOk(r, 600.0);
    return r;
}

CriterionResult c11EventDeletion(const ValidateOptions& opts,
                                 const PriceSeries* series) {
    CriterionResult r{11, "crash-day deletion removes the post-event band", {},
                      true, "", 0};
    if (!series) {
        r.status = CriterionStatus::Skip;
        r.detail = opts.dataPath.empty()
                       ? "no data file provided"
                       : strf("data file not usable: %s", opts.dataPath.c_str());
        return r;
    }
    auto t0 = std::chrono::steady_clock::now();
    const std::vector<Date> crashDays = {
        {1987, 10, 19}, {1987, 10, 20}, {1987, 10, 21}, {1987, 10, 22}};
    for (const Date& d : crashDays)
        if (!std::binary_search(series->dates.begin(), series->dates.end(), d)) {
            r.status = CriterionStatus::Skip;
            r.detail = strf("series does not contain %s", formatDate(d).c_str());
            return r;
        }
    PriceSeries modified = deleteEvents(*series, crashDays);
    AnalysisConfig cfg;  // dt = theta = 250 defaults
    cfg.computeCurvature = false;
    AnalysisResult orig = runAnalysis(*series, cfg);
    AnalysisResult mod = runAnalysis(modified, cfg);

    const Date postFrom{1987, 10, 23}, postTo{1988, 12, 31};
    const Date preFrom{1986, 1, 1}, preTo{1987, 10, 16};
    auto countAm = [&](const AnalysisResult& res) {
        std::size_t c = 0;
        const PatternTimeline& tl = res.widthStage.timeline;
        for (std::size_t t = 0; t < tl.size(); ++t)
            if (tl.times[t] >= postFrom && tl.times[t] <= postTo &&
                baseVariant(tl.labels[t]) == PatternLabel::Am)
                ++c;
        return c;
    };
    auto hasWarning = [&](const AnalysisResult& res) {
        const PatternTimeline& tl = res.widthStage.timeline;
        for (std::size_t t = 0; t < tl.size(); ++t) {
            if (tl.times[t] < preFrom || tl.times[t] > preTo) continue;
            PatternLabel base = baseVariant(tl.labels[t]);
            if (isAFamilyLabel(tl.labels[t]) || base == PatternLabel::AL) return true;
        }
        return false;
    };
    std::size_t origAm = countAm(orig), modAm = countAm(mod);
    bool origWarn = hasWarning(orig), modWarn = hasWarning(mod);
    r.seconds = seconds(t0);
    bool ok = origAm > 0 && modAm * 4 <= origAm && origWarn && modWarn;
    r.status = ok ? CriterionStatus::Pass : CriterionStatus::Fail;
    r.detail = strf("post-event A- points: original %zu -> modified %zu "
                    "(needs <= 25%%); pre-event A-family/AL warning: original %s, "
                    "modified %s; %.0fs",
                    origAm, modAm, origWarn ? "present" : "ABSENT",
                    modWarn ? "present" : "ABSENT", r.seconds);
    return r;
}

}  // namespace

std::vector<CriterionResult> runAcceptance(const ValidateOptions& opts) {
    // Load the optional reference data once.
    PriceSeries data;
    const PriceSeries* dataPtr = nullptr;
    if (!opts.dataPath.empty() && std::filesystem::exists(opts.dataPath)) {
        LoadOptions lo;
        lo.dateColumn = opts.dateColumn;
        lo.closeColumn = opts.closeColumn;
        lo.dateFormat = opts.dateFormat;
        lo.delimiter = opts.delimiter;
        lo.minValidRows = 1502;
        try {
            data = loadPriceSeries(opts.dataPath, lo).series;
            dataPtr = &data;
        } catch (const std::exception&) {
            dataPtr = nullptr;
        }
    }

    auto selected = [&](int id) {
        return opts.only.empty() ||
               std::find(opts.only.begin(), opts.only.end(), id) != opts.only.end();
    };
    auto skipped = [](int id, const char* name) {
        CriterionResult r{id, name, CriterionStatus::Skip, false,
                          "not selected", 0};
        return r;
    };

    std::vector<CriterionResult> out;
    out.push_back(selected(1) ? c1Kernel()
                              : skipped(1, "weight kernel normalization and decay "
                                           "ratio"));
    out.push_back(selected(2) ? c2Null()
                              : skipped(2, "random-walk null calibration (causal)"));
    out.push_back(selected(3) ? c3Fbm()
                              : skipped(3, "fBm exponent recovery (H = 0.3, 0.5, "
                                           "0.7)"));
    out.push_back(selected(4) ? c4Cascade()
                              : skipped(4, "cascade multiscaling detection "
                                           "(curvature)"));
    out.push_back(selected(5) ? c5Oracle()
                              : skipped(5, "structure-function fast path equals "
                                           "naive oracle"));
    out.push_back(selected(6) ? c6Cpa()
                              : skipped(6, "trend segmentation recovers slope "
                                           "switches"));
    out.push_back(selected(7) ? c7Classifier()
                              : skipped(7, "classifier truth table and invariants"));
    out.push_back(selected(8) ? c8RegimeSwitch()
                              : skipped(8, "regime switch flagged near the change "
                                           "(causal)"));
    out.push_back(selected(9) ? c9Schematic()
                              : skipped(9, "schematic storyline replay through CPA "
                                           "+ classifier"));
    out.push_back(selected(10) ? c10Reference(opts, dataPtr)
                               : skipped(10, "reference index statistics (theta = "
                                             "750)"));
    out.push_back(selected(11) ? c11EventDeletion(opts, dataPtr)
                               : skipped(11, "crash-day deletion removes the "
                                             "post-event band"));
    return out;
}

}  // namespace mscale
