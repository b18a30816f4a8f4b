#include "mscale/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mscale {

void AnalysisConfig::validate() const {
    ghe.validate();
    smooth.validate();
    classifier.validate();
    if (!(q1 > 0) || !(q2 > q1))
        throw std::invalid_argument("analysis config: need 0 < q1 < q2");
    if (computeCurvature) {
        if (!(bLo > 0) || !(bHi > bLo))
            throw std::invalid_argument("analysis config: need 0 < bLo < bHi");
        if (bCount < 3)
            throw std::invalid_argument("analysis config: bCount must be >= 3");
    } else if (classifier.metric == MultiscalingMetric::Curvature) {
        throw std::invalid_argument(
            "analysis config: curvature metric requires computeCurvature");
    }
    if (minBinLength < 3)
        throw std::invalid_argument("analysis config: minBinLength must be >= 3");
    if (surrogateReps < 1)
        throw std::invalid_argument("analysis config: surrogateReps must be >= 1");
    if (!(cpaPenaltyScale > 0))
        throw std::invalid_argument("analysis config: cpaPenaltyScale must be > 0");
}

std::vector<double> AnalysisConfig::bGrid() const {
    std::vector<double> g(bCount);
    for (std::size_t i = 0; i < bCount; ++i)
        g[i] = bLo + (bHi - bLo) * static_cast<double>(i) /
                         static_cast<double>(bCount - 1);
    return g;
}

std::vector<double> AnalysisConfig::unionQGrid() const {
    std::vector<double> qs = ghe.qGrid;
    qs.push_back(q1);
    qs.push_back(q2);
    if (computeCurvature) {
        auto bg = bGrid();
        qs.insert(qs.end(), bg.begin(), bg.end());
    }
    std::sort(qs.begin(), qs.end());
    std::vector<double> out;
    for (double q : qs)
        if (out.empty() || q - out.back() > 1e-9) out.push_back(q);
    return out;
}

const MetricStage& AnalysisResult::primaryStage() const {
    if (cfg.classifier.metric == MultiscalingMetric::Curvature) {
        if (!curvStage) throw std::logic_error("curvature stage missing");
        return *curvStage;
    }
    return widthStage;
}

namespace {

// Expand a surface computed at a subset of the target end indices into
// NaN-padded rows aligned with the target axis.
GheSurface alignSurface(const GheSurface& local, std::size_t offset,
                        const GheSurface& target, std::size_t skipped) {
    GheSurface out;
    out.dt = local.dt;
    out.theta = local.theta;
    out.step = local.step;
    out.qGrid = local.qGrid;
    out.timeIndex = target.timeIndex;
    out.times = target.times;
    std::size_t nT = target.nTimes(), nQ = local.nQ();
    out.H.assign(nT * nQ, kNaN);
    out.Herr.assign(nT * nQ, kNaN);
    out.fitQuality.assign(nT * nQ, kNaN);
    for (std::size_t t = 0; t < local.nTimes(); ++t) {
        std::size_t row = skipped + t;
        // Sanity: the local row must correspond to the target row.
        if (local.timeIndex[t] + offset != target.timeIndex[row])
            throw std::logic_error("alignSurface: index mismatch");
        for (std::size_t k = 0; k < nQ; ++k) {
            out.H[row * nQ + k] = local.h(t, k);
            out.Herr[row * nQ + k] = local.herr(t, k);
            out.fitQuality[row * nQ + k] = local.quality(t, k);
        }
    }
    return out;
}

struct StageInputs {
    double q1, q2;
    std::vector<double> gammaRaw;        // real standardized magnitude
    std::vector<double> hq1Raw, hq2Raw;  // real standardized extremes
    // Per surrogate replicate, standardized extreme tracks (aligned).
    std::vector<std::vector<double>> surrQ1, surrQ2;
};

MetricStage buildStage(const StageInputs& in, const AnalysisConfig& cfg,
                       MultiscalingMetric metric, const GheSurface& real) {
    MetricStage st;
    st.q1 = in.q1;
    st.q2 = in.q2;
    st.gammaRaw = in.gammaRaw;

    std::vector<double> gammaS = smoothTrack(in.gammaRaw, cfg.smooth);
    std::vector<double> h1S = smoothTrack(in.hq1Raw, cfg.smooth);
    std::vector<double> h2S = smoothTrack(in.hq2Raw, cfg.smooth);

    std::size_t n = gammaS.size();
    std::size_t start = 0;
    while (start < n && (isGap(gammaS[start]) || isGap(h1S[start]) || isGap(h2S[start])))
        ++start;
    std::size_t end = n;
    while (end > start && (isGap(gammaS[end - 1]) || isGap(h1S[end - 1]) ||
                           isGap(h2S[end - 1])))
        --end;
    for (std::size_t t = start; t < end; ++t)
        if (isGap(gammaS[t]) || isGap(h1S[t]) || isGap(h2S[t]))
            throw std::runtime_error(
                "analysis: interior gap in smoothed classifier tracks");
    if (end - start < 2 * cfg.minBinLength)
        throw std::runtime_error(
            "analysis: too few evaluation points for trend segmentation (" +
            std::to_string(end - start) + ")");

    st.start = start;
    auto trim = [&](const std::vector<double>& v) {
        return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(start),
                                   v.begin() + static_cast<std::ptrdiff_t>(end));
    };
    st.gammaS = trim(gammaS);
    st.hq1S = trim(h1S);
    st.hq2S = trim(h2S);

    const std::vector<double>* driver = &st.hq1S;
    if (cfg.binDriver == BinDriver::Q2) driver = &st.hq2S;
    if (cfg.binDriver == BinDriver::Gamma) driver = &st.gammaS;
    st.penalty = std::isnan(cfg.cpaPenalty)
                     ? defaultPenalty(*driver, cfg.cpaPenaltyScale)
                     : cfg.cpaPenalty;

    st.seg.breakpoints = segmentTrends(*driver, st.penalty, cfg.minBinLength);
    st.seg.slopeQ1 = binSlopes(st.hq1S, st.seg.breakpoints, &st.seg.seQ1);
    st.seg.slopeQ2 = binSlopes(st.hq2S, st.seg.breakpoints, &st.seg.seQ2);

    // Surrogate slope spreads under the real binning, averaged over
    // replicates; per-bin slopes kept from the first replicate for audit.
    std::vector<std::vector<double>> s1S, s2S;
    for (std::size_t r = 0; r < in.surrQ1.size(); ++r) {
        s1S.push_back(trim(smoothTrack(in.surrQ1[r], cfg.smooth)));
        s2S.push_back(trim(smoothTrack(in.surrQ2[r], cfg.smooth)));
    }

    // The spread needs two bins with surrogate coverage. A single-trend
    // segmentation (common on featureless series) or leading surrogate gaps
    // can leave fewer; fall back to a uniform partition at a comparable
    // scale so the dispersion stays estimable.
    auto usableBins = [](const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<std::size_t>& bps) {
        std::vector<double> sa = binSlopes(a, bps);
        std::vector<double> sb = binSlopes(b, bps);
        std::size_t u = 0;
        for (std::size_t i = 0; i < sa.size(); ++i)
            if (!isGap(sa[i]) && !isGap(sb[i])) ++u;
        return u;
    };
    std::vector<std::size_t> spreadBps = st.seg.breakpoints;
    if (usableBins(s1S[0], s2S[0], spreadBps) < 2) {
        std::size_t len = end - start;
        std::size_t k = std::max<std::size_t>(
            2, std::min<std::size_t>(8, len / (2 * cfg.minBinLength)));
        spreadBps.clear();
        for (std::size_t i = 0; i <= k; ++i) spreadBps.push_back(i * len / k);
    }

    double sumDiff = 0, sumAbs = 0;
    SlopeSpread first;
    for (std::size_t r = 0; r < in.surrQ1.size(); ++r) {
        SlopeSpread sp = surrogateSlopeSpread(s1S[r], s2S[r], spreadBps);
        if (r == 0) first = sp;
        sumDiff += sp.sigmaDiff;
        sumAbs += sp.sigmaAbsDiff;
    }
    st.spread = first;
    st.spread.sigmaDiff = sumDiff / static_cast<double>(in.surrQ1.size());
    st.spread.sigmaAbsDiff = sumAbs / static_cast<double>(in.surrQ1.size());

    ClassifierConfig ccfg = cfg.classifier;
    ccfg.metric = metric;
    std::vector<std::size_t> idx(real.timeIndex.begin() + static_cast<std::ptrdiff_t>(start),
                                 real.timeIndex.begin() + static_cast<std::ptrdiff_t>(end));
    std::vector<Date> times(real.times.begin() + static_cast<std::ptrdiff_t>(start),
                            real.times.begin() + static_cast<std::ptrdiff_t>(end));
    st.timeline = classify(st.gammaS, st.seg, st.spread, st.hq1S, st.hq2S, idx,
                           times, ccfg);
    return st;
}

}  // namespace

AnalysisResult runAnalysis(const PriceSeries& series, const AnalysisConfig& cfg) {
    cfg.validate();
    std::size_t n = series.size();
    std::size_t dt = cfg.ghe.dt;
    if (n < 2 * dt)
        throw std::invalid_argument(
            "analysis: series must cover at least 2*dt days so the surrogate "
            "reference has full windows");

    AnalysisResult res;
    res.cfg = cfg;
    res.series = series;
    res.vol = weightedVolatility(series, dt, cfg.ghe.theta);

    GheConfig unionCfg = cfg.ghe;
    unionCfg.qGrid = cfg.unionQGrid();
    res.real = gheSeries(series, unionCfg);

    // Surrogate windows live on its own shorter axis (offset dt-1); evaluate
    // at exactly those real end indices it can cover so tracks align by date.
    std::size_t offset = res.vol.firstIndex();
    std::vector<std::size_t> coveredLocal;
    std::size_t skipped = 0;
    for (std::size_t e : res.real.timeIndex) {
        if (e >= offset && e - offset >= dt - 1)
            coveredLocal.push_back(e - offset);
        else
            ++skipped;
    }
    if (coveredLocal.size() < 2)
        throw std::invalid_argument(
            "analysis: surrogate covers fewer than 2 evaluation points");
    res.alignedOffset = skipped;

    std::vector<GheSurface> surrAligned;
    surrAligned.reserve(cfg.surrogateReps);
    for (std::size_t r = 0; r < cfg.surrogateReps; ++r) {
        SurrogateSeries sr = generateSurrogate(series, res.vol, cfg.seed + r);
        GheSurface local = gheSeriesAt(sr.base, unionCfg, coveredLocal);
        surrAligned.push_back(alignSurface(local, offset, res.real, skipped));
        if (r == 0) res.surrogate = std::move(sr);
    }
    res.surr = surrAligned[0];

    std::size_t nQ = res.real.nQ();
    res.sigmaQ.assign(nQ, 0.0);
    for (const auto& s : surrAligned) {
        auto sig = surrogateSigma(s);
        for (std::size_t k = 0; k < nQ; ++k) res.sigmaQ[k] += sig[k];
    }
    for (double& s : res.sigmaQ) s /= static_cast<double>(surrAligned.size());

    res.stdReal = standardize(res.real, res.sigmaQ);
    res.stdSurr = standardize(res.surr, res.sigmaQ);
    res.width = widthTrack(res.real, cfg.q1, cfg.q2, res.sigmaQ);
    res.widthSurrStd = widthTrack(res.surr, cfg.q1, cfg.q2, res.sigmaQ).Wstd;

    if (cfg.computeCurvature) {
        res.curvReal = curvatureTrack(res.real, cfg.bLo, cfg.bHi);
        double sumB = 0;
        for (const auto& s : surrAligned) {
            auto c = curvatureTrack(s, cfg.bLo, cfg.bHi);
            double sb = sampleStdFinite(c.B);
            if (!(sb > 0))
                throw std::runtime_error("analysis: degenerate surrogate curvature");
            sumB += sb;
        }
        res.sigmaB = sumB / static_cast<double>(surrAligned.size());
        res.curvRealStd.resize(res.curvReal.B.size());
        for (std::size_t t = 0; t < res.curvReal.B.size(); ++t)
            res.curvRealStd[t] =
                isGap(res.curvReal.B[t]) ? kNaN : res.curvReal.B[t] / res.sigmaB;
        auto c0 = curvatureTrack(res.surr, cfg.bLo, cfg.bHi);
        res.curvSurrStd.resize(c0.B.size());
        for (std::size_t t = 0; t < c0.B.size(); ++t)
            res.curvSurrStd[t] = isGap(c0.B[t]) ? kNaN : c0.B[t] / res.sigmaB;
    }

    // Width-metric stage.
    {
        StageInputs in;
        in.q1 = cfg.q1;
        in.q2 = cfg.q2;
        in.gammaRaw = res.width.Wstd;
        in.hq1Raw = res.stdReal.tracks[res.stdReal.qIndex(cfg.q1)];
        in.hq2Raw = res.stdReal.tracks[res.stdReal.qIndex(cfg.q2)];
        for (const auto& s : surrAligned) {
            auto sstd = standardize(s, res.sigmaQ);
            in.surrQ1.push_back(sstd.tracks[sstd.qIndex(cfg.q1)]);
            in.surrQ2.push_back(sstd.tracks[sstd.qIndex(cfg.q2)]);
        }
        res.widthStage = buildStage(in, cfg, MultiscalingMetric::Width, res.real);
    }

    // Curvature-metric stage: magnitude gamma' = -B', extremes at the
    // curvature grid endpoints.
    if (cfg.computeCurvature) {
        StageInputs in;
        in.q1 = cfg.bLo;
        in.q2 = cfg.bHi;
        in.gammaRaw.resize(res.curvRealStd.size());
        for (std::size_t t = 0; t < res.curvRealStd.size(); ++t)
            in.gammaRaw[t] = isGap(res.curvRealStd[t]) ? kNaN : -res.curvRealStd[t];
        in.hq1Raw = res.stdReal.tracks[res.stdReal.qIndex(cfg.bLo)];
        in.hq2Raw = res.stdReal.tracks[res.stdReal.qIndex(cfg.bHi)];
        for (const auto& s : surrAligned) {
            auto sstd = standardize(s, res.sigmaQ);
            in.surrQ1.push_back(sstd.tracks[sstd.qIndex(cfg.bLo)]);
            in.surrQ2.push_back(sstd.tracks[sstd.qIndex(cfg.bHi)]);
        }
        res.curvStage = buildStage(in, cfg, MultiscalingMetric::Curvature, res.real);
    }

    return res;
}

}  // namespace mscale
