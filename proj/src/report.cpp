#include "mscale/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "mscale/stats.hpp"

using ordered_json = nlohmann::ordered_json;

namespace mscale {

double roundSig(double x, int digits) {
    if (!std::isfinite(x)) return x;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

namespace {

constexpr int kSigDigits = 6;

ordered_json jnum(double x) {
    if (!std::isfinite(x)) return nullptr;
    return roundSig(x, kSigDigits);
}

// Exact double (config echo), still null for non-finite.
ordered_json jexact(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

ordered_json jdvec(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(jnum(x));
    return a;
}

ordered_json jexactVec(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(jexact(x));
    return a;
}

template <typename T>
ordered_json jivec(const std::vector<T>& v) {
    ordered_json a = ordered_json::array();
    for (T x : v) a.push_back(static_cast<std::uint64_t>(x));
    return a;
}

ordered_json jbvec(const std::vector<bool>& v) {
    ordered_json a = ordered_json::array();
    for (bool x : v) a.push_back(x);
    return a;
}

ordered_json jsvec(const std::vector<std::string>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& x : v) a.push_back(x);
    return a;
}

double pdouble(const ordered_json& j) {
    if (j.is_null()) return kNaN;
    return j.get<double>();
}

std::vector<double> pdvec(const ordered_json& j) {
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(pdouble(x));
    return v;
}

std::vector<std::size_t> pzvec(const ordered_json& j) {
    std::vector<std::size_t> v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(x.get<std::size_t>());
    return v;
}

std::vector<bool> pbvec(const ordered_json& j) {
    std::vector<bool> v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(x.get<bool>());
    return v;
}

std::vector<std::string> psvec(const ordered_json& j) {
    std::vector<std::string> v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(x.get<std::string>());
    return v;
}

const char* smoothModeName(SmoothMode m) {
    return m == SmoothMode::Centered ? "centered" : "causal";
}

SmoothMode smoothModeFromName(const std::string& s) {
    if (s == "centered") return SmoothMode::Centered;
    if (s == "causal") return SmoothMode::Causal;
    throw std::invalid_argument("unknown smoothing mode: " + s);
}

const char* metricName(MultiscalingMetric m) {
    return m == MultiscalingMetric::Width ? "width" : "curvature";
}

MultiscalingMetric metricFromName(const std::string& s) {
    if (s == "width") return MultiscalingMetric::Width;
    if (s == "curvature") return MultiscalingMetric::Curvature;
    throw std::invalid_argument("unknown multiscaling metric: " + s);
}

const char* binDriverName(BinDriver b) {
    switch (b) {
        case BinDriver::Q1: return "q1";
        case BinDriver::Q2: return "q2";
        case BinDriver::Gamma: return "gamma";
    }
    return "q1";
}

BinDriver binDriverFromName(const std::string& s) {
    if (s == "q1") return BinDriver::Q1;
    if (s == "q2") return BinDriver::Q2;
    if (s == "gamma") return BinDriver::Gamma;
    throw std::invalid_argument("unknown bin driver: " + s);
}

ordered_json configToJson(const AnalysisConfig& c) {
    ordered_json j;
    j["dt"] = c.ghe.dt;
    j["theta"] = jexact(c.ghe.theta);
    j["step"] = c.ghe.step;
    j["tauMax"] = c.ghe.tauMax;
    j["tauMaxRange"] = jivec(c.ghe.tauMaxRange);
    j["qGrid"] = jexactVec(c.ghe.qGrid);
    j["q1"] = jexact(c.q1);
    j["q2"] = jexact(c.q2);
    j["computeCurvature"] = c.computeCurvature;
    j["bLo"] = jexact(c.bLo);
    j["bHi"] = jexact(c.bHi);
    j["bCount"] = c.bCount;
    j["smooth"] = {{"windowPoints", c.smooth.windowPoints},
                   {"order", c.smooth.order},
                   {"mode", smoothModeName(c.smooth.mode)}};
    j["cpaPenalty"] = jexact(c.cpaPenalty);
    j["cpaPenaltyScale"] = jexact(c.cpaPenaltyScale);
    j["minBinLength"] = c.minBinLength;
    j["binDriver"] = binDriverName(c.binDriver);
    j["classifier"] = {{"phiL", jexact(c.classifier.phiL)},
                       {"phiH", jexact(c.classifier.phiH)},
                       {"phiS", jexact(c.classifier.phiS)},
                       {"metric", metricName(c.classifier.metric)}};
    j["seed"] = c.seed;
    j["surrogateReps"] = c.surrogateReps;
    return j;
}

AnalysisConfig configFromJson(const ordered_json& j) {
    AnalysisConfig c;
    c.ghe.dt = j.at("dt").get<std::size_t>();
    c.ghe.theta = pdouble(j.at("theta"));
    c.ghe.step = j.at("step").get<std::size_t>();
    c.ghe.tauMax = j.at("tauMax").get<std::size_t>();
    c.ghe.tauMaxRange = pzvec(j.at("tauMaxRange"));
    c.ghe.qGrid = pdvec(j.at("qGrid"));
    c.q1 = pdouble(j.at("q1"));
    c.q2 = pdouble(j.at("q2"));
    c.computeCurvature = j.at("computeCurvature").get<bool>();
    c.bLo = pdouble(j.at("bLo"));
    c.bHi = pdouble(j.at("bHi"));
    c.bCount = j.at("bCount").get<std::size_t>();
    const auto& sm = j.at("smooth");
    c.smooth.windowPoints = sm.at("windowPoints").get<std::size_t>();
    c.smooth.order = sm.at("order").get<int>();
    c.smooth.mode = smoothModeFromName(sm.at("mode").get<std::string>());
    c.cpaPenalty = pdouble(j.at("cpaPenalty"));
    c.cpaPenaltyScale = pdouble(j.at("cpaPenaltyScale"));
    c.minBinLength = j.at("minBinLength").get<std::size_t>();
    c.binDriver = binDriverFromName(j.at("binDriver").get<std::string>());
    const auto& cl = j.at("classifier");
    c.classifier.phiL = pdouble(cl.at("phiL"));
    c.classifier.phiH = pdouble(cl.at("phiH"));
    c.classifier.phiS = pdouble(cl.at("phiS"));
    c.classifier.metric = metricFromName(cl.at("metric").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.surrogateReps = j.at("surrogateReps").get<std::size_t>();
    return c;
}

ordered_json stageToJson(const StageReport& s) {
    ordered_json j;
    j["q1"] = jexact(s.q1);
    j["q2"] = jexact(s.q2);
    j["start"] = s.start;
    j["penalty"] = jnum(s.penalty);
    j["tracks"] = {{"gamma", jdvec(s.gammaS)},
                   {"hq1", jdvec(s.hq1S)},
                   {"hq2", jdvec(s.hq2S)}};
    j["segmentation"] = {{"breakpoints", jivec(s.breakpoints)},
                         {"slopeQ1", jdvec(s.slopeQ1)},
                         {"seQ1", jdvec(s.seQ1)},
                         {"slopeQ2", jdvec(s.slopeQ2)},
                         {"seQ2", jdvec(s.seQ2)}};
    j["surrogateSpread"] = {{"sigmaDiff", jnum(s.sigmaDiff)},
                            {"sigmaAbsDiff", jnum(s.sigmaAbsDiff)},
                            {"slopesQ1", jdvec(s.surrSlopesQ1)},
                            {"slopesQ2", jdvec(s.surrSlopesQ2)},
                            {"binUsed", jbvec(s.binUsed)}};
    j["timeline"] = {{"labels", jsvec(s.labels)},
                     {"gamma", jdvec(s.gammaUsed)},
                     {"eq16", jdvec(s.eq16)},
                     {"eq17", jdvec(s.eq17)},
                     {"bin", jivec(s.bin)},
                     {"reversed", jbvec(s.reversed)}};
    ordered_json spans = ordered_json::array();
    for (const auto& sp : s.spans)
        spans.push_back({{"label", sp.label},
                         {"fromIndex", sp.fromIndex},
                         {"toIndex", sp.toIndex},
                         {"fromDate", sp.fromDate},
                         {"toDate", sp.toDate},
                         {"points", sp.points}});
    j["spans"] = spans;
    return j;
}

StageReport stageFromJson(const ordered_json& j) {
    StageReport s;
    s.q1 = pdouble(j.at("q1"));
    s.q2 = pdouble(j.at("q2"));
    s.start = j.at("start").get<std::size_t>();
    s.penalty = pdouble(j.at("penalty"));
    const auto& tr = j.at("tracks");
    s.gammaS = pdvec(tr.at("gamma"));
    s.hq1S = pdvec(tr.at("hq1"));
    s.hq2S = pdvec(tr.at("hq2"));
    const auto& sg = j.at("segmentation");
    s.breakpoints = pzvec(sg.at("breakpoints"));
    s.slopeQ1 = pdvec(sg.at("slopeQ1"));
    s.seQ1 = pdvec(sg.at("seQ1"));
    s.slopeQ2 = pdvec(sg.at("slopeQ2"));
    s.seQ2 = pdvec(sg.at("seQ2"));
    const auto& sp = j.at("surrogateSpread");
    s.sigmaDiff = pdouble(sp.at("sigmaDiff"));
    s.sigmaAbsDiff = pdouble(sp.at("sigmaAbsDiff"));
    s.surrSlopesQ1 = pdvec(sp.at("slopesQ1"));
    s.surrSlopesQ2 = pdvec(sp.at("slopesQ2"));
    s.binUsed = pbvec(sp.at("binUsed"));
    const auto& tl = j.at("timeline");
    s.labels = psvec(tl.at("labels"));
    s.gammaUsed = pdvec(tl.at("gamma"));
    s.eq16 = pdvec(tl.at("eq16"));
    s.eq17 = pdvec(tl.at("eq17"));
    s.bin = pzvec(tl.at("bin"));
    s.reversed = pbvec(tl.at("reversed"));
    for (const auto& e : j.at("spans")) {
        StageSpan span;
        span.label = e.at("label").get<std::string>();
        span.fromIndex = e.at("fromIndex").get<std::size_t>();
        span.toIndex = e.at("toIndex").get<std::size_t>();
        span.fromDate = e.at("fromDate").get<std::string>();
        span.toDate = e.at("toDate").get<std::string>();
        span.points = e.at("points").get<std::size_t>();
        s.spans.push_back(std::move(span));
    }
    return s;
}

StageReport stageFromResult(const MetricStage& st) {
    StageReport s;
    s.q1 = st.q1;
    s.q2 = st.q2;
    s.start = st.start;
    s.penalty = st.penalty;
    s.gammaS = st.gammaS;
    s.hq1S = st.hq1S;
    s.hq2S = st.hq2S;
    s.breakpoints = st.seg.breakpoints;
    s.slopeQ1 = st.seg.slopeQ1;
    s.seQ1 = st.seg.seQ1;
    s.slopeQ2 = st.seg.slopeQ2;
    s.seQ2 = st.seg.seQ2;
    s.sigmaDiff = st.spread.sigmaDiff;
    s.sigmaAbsDiff = st.spread.sigmaAbsDiff;
    s.surrSlopesQ1 = st.spread.slopesQ1;
    s.surrSlopesQ2 = st.spread.slopesQ2;
    s.binUsed = st.spread.binUsed;
    const auto& tl = st.timeline;
    s.labels.reserve(tl.size());
    for (PatternLabel l : tl.labels) s.labels.push_back(labelName(l));
    s.gammaUsed = tl.gammaUsed;
    s.eq16 = tl.eq16;
    s.eq17 = tl.eq17;
    s.bin = tl.bin;
    s.reversed.assign(tl.reversed.begin(), tl.reversed.end());
    // Condense runs of one label into spans.
    std::size_t i = 0;
    while (i < tl.size()) {
        std::size_t jEnd = i + 1;
        while (jEnd < tl.size() && tl.labels[jEnd] == tl.labels[i]) ++jEnd;
        StageSpan span;
        span.label = labelName(tl.labels[i]);
        span.fromIndex = tl.timeIndex[i];
        span.toIndex = tl.timeIndex[jEnd - 1];
        span.fromDate = formatDate(tl.times[i]);
        span.toDate = formatDate(tl.times[jEnd - 1]);
        span.points = jEnd - i;
        s.spans.push_back(std::move(span));
        i = jEnd;
    }
    return s;
}

}  // namespace

AnalysisReport buildReport(const AnalysisResult& res, const InputProvenance& input) {
    AnalysisReport r;
    r.input = input;
    r.cfg = res.cfg;
    r.timeIndex = res.real.timeIndex;
    r.dates.reserve(res.real.times.size());
    for (const auto& d : res.real.times) r.dates.push_back(formatDate(d));
    r.alignedOffset = res.alignedOffset;
    r.qGrid = res.real.qGrid;
    r.sigmaQ = res.sigmaQ;
    r.sigmaB = res.sigmaB;
    r.hq1Std = res.stdReal.tracks[res.stdReal.qIndex(res.cfg.q1)];
    r.hq2Std = res.stdReal.tracks[res.stdReal.qIndex(res.cfg.q2)];
    r.widthStd = res.width.Wstd;
    r.widthSurrStd = res.widthSurrStd;
    r.curvStd = res.curvRealStd;
    r.curvSurrStd = res.curvSurrStd;
    r.width = stageFromResult(res.widthStage);
    if (res.curvStage) r.curvature = stageFromResult(*res.curvStage);
    return r;
}

std::string renderReport(const AnalysisReport& r) {
    ordered_json j;
    j["schema"] = r.schema;
    j["generator"] = {{"name", r.generator}, {"version", r.version}};
    j["input"] = {{"path", r.input.path},     {"sha256", r.input.sha256},
                  {"rows", r.input.rows},     {"droppedRows", r.input.droppedRows},
                  {"firstDate", r.input.firstDate}, {"lastDate", r.input.lastDate}};
    j["config"] = configToJson(r.cfg);
    j["axis"] = {{"timeIndex", jivec(r.timeIndex)},
                 {"dates", jsvec(r.dates)},
                 {"alignedOffset", r.alignedOffset}};
    j["standardization"] = {{"qGrid", jexactVec(r.qGrid)},
                            {"sigmaQ", jdvec(r.sigmaQ)},
                            {"sigmaB", jnum(r.sigmaB)}};
    j["tracks"] = {{"hq1Std", jdvec(r.hq1Std)},
                   {"hq2Std", jdvec(r.hq2Std)},
                   {"widthStd", jdvec(r.widthStd)},
                   {"widthSurrStd", jdvec(r.widthSurrStd)},
                   {"curvStd", jdvec(r.curvStd)},
                   {"curvSurrStd", jdvec(r.curvSurrStd)}};
    j["widthStage"] = stageToJson(r.width);
    j["curvatureStage"] = r.curvature ? stageToJson(*r.curvature) : ordered_json(nullptr);
    return j.dump(2) + "\n";
}

AnalysisReport parseReport(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    AnalysisReport r;
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kReportSchema)
        throw std::invalid_argument("unsupported report schema: " + r.schema);
    r.generator = j.at("generator").at("name").get<std::string>();
    r.version = j.at("generator").at("version").get<std::string>();
    const auto& in = j.at("input");
    r.input.path = in.at("path").get<std::string>();
    r.input.sha256 = in.at("sha256").get<std::string>();
    r.input.rows = in.at("rows").get<std::size_t>();
    r.input.droppedRows = in.at("droppedRows").get<std::size_t>();
    r.input.firstDate = in.at("firstDate").get<std::string>();
    r.input.lastDate = in.at("lastDate").get<std::string>();
    r.cfg = configFromJson(j.at("config"));
    const auto& ax = j.at("axis");
    r.timeIndex = pzvec(ax.at("timeIndex"));
    r.dates = psvec(ax.at("dates"));
    r.alignedOffset = ax.at("alignedOffset").get<std::size_t>();
    const auto& st = j.at("standardization");
    r.qGrid = pdvec(st.at("qGrid"));
    r.sigmaQ = pdvec(st.at("sigmaQ"));
    r.sigmaB = pdouble(st.at("sigmaB"));
    const auto& tr = j.at("tracks");
    r.hq1Std = pdvec(tr.at("hq1Std"));
    r.hq2Std = pdvec(tr.at("hq2Std"));
    r.widthStd = pdvec(tr.at("widthStd"));
    r.widthSurrStd = pdvec(tr.at("widthSurrStd"));
    r.curvStd = pdvec(tr.at("curvStd"));
    r.curvSurrStd = pdvec(tr.at("curvSurrStd"));
    r.width = stageFromJson(j.at("widthStage"));
    if (!j.at("curvatureStage").is_null())
        r.curvature = stageFromJson(j.at("curvatureStage"));
    return r;
}

ScanResult scanDt(const PriceSeries& series, std::span<const std::size_t> dtList,
                  double q1, double q2, const GheConfig& base, std::uint64_t seed) {
    if (dtList.empty()) throw std::invalid_argument("scan: empty dt list");
    for (std::size_t i = 1; i < dtList.size(); ++i)
        if (dtList[i] <= dtList[i - 1])
            throw std::invalid_argument("scan: dt list must be strictly increasing");
    if (!(q1 > 0) || !(q2 > q1))
        throw std::invalid_argument("scan: need 0 < q1 < q2");

    ScanResult out;
    out.q1 = q1;
    out.q2 = q2;
    for (std::size_t i = 0; i < dtList.size(); ++i) {
        std::size_t dt = dtList[i];
        if (series.size() < 2 * dt)
            throw std::invalid_argument(
                "scan: series too short for dt=" + std::to_string(dt) +
                " (needs " + std::to_string(2 * dt) + " rows)");
        GheConfig cfg = base;
        cfg.dt = dt;
        cfg.theta = static_cast<double>(dt);
        cfg.qGrid = {q1, q2};
        cfg.validate();

        ScanRow row;
        row.dt = dt;
        row.theta = cfg.theta;

        GheSurface real = gheSeries(series, cfg);
        std::vector<double> absW;
        for (std::size_t t = 0; t < real.nTimes(); ++t) {
            double w = real.h(t, 0) - real.h(t, 1);
            if (std::isfinite(w)) absW.push_back(std::fabs(w));
        }
        row.nWindows = absW.size();
        if (!absW.empty()) row.meanAbsW = mean(absW);
        if (absW.size() >= 2)
            row.semAbsW = sampleStd(absW) / std::sqrt(static_cast<double>(absW.size()));

        VolatilitySeries vol = weightedVolatility(series, dt, cfg.theta);
        SurrogateSeries surr = generateSurrogate(series, vol, seed + i);
        std::size_t offset = vol.firstIndex();
        std::vector<std::size_t> coveredLocal;
        for (std::size_t e : real.timeIndex)
            if (e >= offset && e - offset >= dt - 1) coveredLocal.push_back(e - offset);
        if (!coveredLocal.empty()) {
            GheSurface s = gheSeriesAt(surr.base, cfg, coveredLocal);
            std::vector<double> absWs;
            for (std::size_t t = 0; t < s.nTimes(); ++t) {
                double w = s.h(t, 0) - s.h(t, 1);
                if (std::isfinite(w)) absWs.push_back(std::fabs(w));
            }
            if (!absWs.empty()) row.meanAbsWsurr = mean(absWs);
            if (absWs.size() >= 2)
                row.semAbsWsurr =
                    sampleStd(absWs) / std::sqrt(static_cast<double>(absWs.size()));
        }
        out.rows.push_back(row);
    }

    // Plateau reference: the mean |W| across long windows, where the
    // estimate has stopped drifting with dt.
    double sum = 0;
    std::size_t cnt = 0;
    for (const auto& r : out.rows)
        if (r.dt >= 250 && std::isfinite(r.meanAbsW)) {
            sum += r.meanAbsW;
            ++cnt;
            out.plateauDts.push_back(r.dt);
        }
    if (cnt > 0) {
        out.plateau = sum / static_cast<double>(cnt);
    } else {
        out.plateau = out.rows.back().meanAbsW;
        out.plateauDts.push_back(out.rows.back().dt);
    }

    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        if (i + 1 == out.rows.size()) {
            out.rows[i].improvementPerDay = 0.0;
            continue;
        }
        double gapHere = std::fabs(out.rows[i].meanAbsW - out.plateau);
        double gapNext = std::fabs(out.rows[i + 1].meanAbsW - out.plateau);
        double days = static_cast<double>(out.rows[i + 1].dt - out.rows[i].dt);
        out.rows[i].improvementPerDay =
            gapHere > 0 ? (gapHere - gapNext) / gapHere / days * 100.0 : 0.0;
    }
    return out;
}

std::string renderScan(const ScanResult& r) {
    ordered_json j;
    j["schema"] = "mscale-scan/1";
    j["generator"] = {{"name", kProgramName}, {"version", kProgramVersion}};
    j["q1"] = jexact(r.q1);
    j["q2"] = jexact(r.q2);
    j["plateau"] = jnum(r.plateau);
    j["plateauDts"] = jivec(r.plateauDts);
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"dt", row.dt},
                        {"theta", jexact(row.theta)},
                        {"nWindows", row.nWindows},
                        {"meanAbsW", jnum(row.meanAbsW)},
                        {"semAbsW", jnum(row.semAbsW)},
                        {"meanAbsWsurr", jnum(row.meanAbsWsurr)},
                        {"semAbsWsurr", jnum(row.semAbsWsurr)},
                        {"improvementPerDay", jnum(row.improvementPerDay)}});
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

PriceSeries deleteEvents(const PriceSeries& s, std::span<const Date> dates) {
    std::set<Date> toDelete(dates.begin(), dates.end());
    for (const Date& d : toDelete)
        if (!std::binary_search(s.dates.begin(), s.dates.end(), d))
            throw std::invalid_argument("delete: date not in series: " + formatDate(d));

    std::vector<Date> keptDates;
    std::vector<double> keptClose;
    keptDates.reserve(s.size());
    keptClose.reserve(s.size());
    double shift = 0;  // cumulative log return removed so far
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (toDelete.count(s.dates[i])) {
            if (i > 0) shift += s.logReturn[i - 1];
            continue;
        }
        keptDates.push_back(s.dates[i]);
        keptClose.push_back(std::exp(s.logPrice[i] - shift));
    }
    return makePriceSeries(std::move(keptDates), std::move(keptClose));
}

}  // namespace mscale
