#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "mscale/report.hpp"
#include "mscale/rng.hpp"
#include "mscale/sha256.hpp"
#include "mscale/svg_render.hpp"
#include "mscale/synth.hpp"

using namespace mscale;

namespace {

PriceSeries grw(std::size_t n, std::uint64_t seed) {
    SynthSpec spec;
    spec.kind = SynthKind::RandomWalk;
    spec.length = n;
    spec.seed = seed;
    spec.sigma = 0.01;
    return generate(spec);
}

}  // namespace

TEST_CASE("roundSig: value, idempotence, non-finite passthrough") {
    CHECK(roundSig(1.23456789, 6) == 1.23457);
    CHECK(roundSig(0.000123456789, 6) == 0.000123457);
    CHECK(roundSig(123456789.0, 6) == 123457000.0);
    CHECK(roundSig(-1.23456789, 6) == -1.23457);
    CHECK(roundSig(0.0, 6) == 0.0);
    CHECK(roundSig(2.5, 2) == 2.5);
    CHECK(std::isnan(roundSig(kNaN, 6)));
    double inf = std::numeric_limits<double>::infinity();
    CHECK(roundSig(inf, 6) == inf);
    CHECK(roundSig(-inf, 6) == -inf);

    Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
        double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform() * 12 - 6);
        double once = roundSig(x, 6);
        CHECK(roundSig(once, 6) == once);
    }
}

TEST_CASE("sha256 known answers and streaming") {
    CHECK(sha256Hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256Hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256Hex("The quick brown fox jumps over the lazy dog") ==
          "d7a8fbb307d7809469ca9abcb0082e4f8d5651e46d3cdb762d02d0bf37c9e592");

    // One million 'a' processed in odd-sized chunks exercises the buffering.
    std::string block(997, 'a');
    Sha256 h;
    std::size_t fed = 0;
    while (fed < 1000000) {
        std::size_t take = std::min<std::size_t>(block.size(), 1000000 - fed);
        h.update(block.data(), take);
        fed += take;
    }
    CHECK(h.hexDigest() ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
    CHECK_THROWS_AS(h.update("x", 1), std::logic_error);

    auto path = std::filesystem::temp_directory_path() / "mscale_sha_test.bin";
    {
        std::ofstream out(path, std::ios::binary);
        out << "abc";
    }
    CHECK(sha256File(path.string()) == sha256Hex("abc"));
    std::filesystem::remove(path);
    CHECK_THROWS(sha256File((path / "missing").string()));
}

TEST_CASE("hand-built report survives a render/parse/render cycle") {
    AnalysisReport r;
    r.input.path = "example.csv";
    r.input.sha256 = sha256Hex("example");
    r.input.rows = 12;
    r.input.droppedRows = 1;
    r.input.firstDate = "2020-01-06";
    r.input.lastDate = "2020-01-21";
    r.timeIndex = {249, 254};
    r.dates = {"2020-12-01", "2020-12-08"};
    r.alignedOffset = 0;
    r.qGrid = {0.1, 4.0};
    r.sigmaQ = {0.0361234567, 0.0432412345};  // exercises 6-digit rounding
    r.sigmaB = kNaN;                          // serializes as null
    r.hq1Std = {1.234567891, kNaN};
    r.hq2Std = {0.5, -0.25};
    r.widthStd = {0.1, 0.2};
    r.widthSurrStd = {kNaN, 0.05};
    r.width.q1 = 0.1;
    r.width.q2 = 4.0;
    r.width.start = 0;
    r.width.penalty = 0.123456789;
    r.width.gammaS = {0.5, kNaN};
    r.width.hq1S = {1.0, 1.1};
    r.width.hq2S = {0.9, 0.8};
    r.width.breakpoints = {0, 2};
    r.width.slopeQ1 = {0.0123456789};
    r.width.seQ1 = {0.001};
    r.width.slopeQ2 = {-0.01};
    r.width.seQ2 = {0.002};
    r.width.sigmaDiff = 0.005;
    r.width.sigmaAbsDiff = 0.004;
    r.width.surrSlopesQ1 = {0.01, kNaN};
    r.width.surrSlopesQ2 = {0.008, 0.002};
    r.width.binUsed = {true, false};
    r.width.labels = {"S", "rM"};
    r.width.gammaUsed = {0.1, 2.0};
    r.width.eq16 = {0.5, 4.2};
    r.width.eq17 = {0.4, 3.8};
    r.width.bin = {0, 0};
    r.width.reversed = {false, true};
    StageSpan span;
    span.label = "S";
    span.fromIndex = 249;
    span.toIndex = 254;
    span.fromDate = "2020-12-01";
    span.toDate = "2020-12-08";
    span.points = 2;
    r.width.spans = {span};
    // curvature stage intentionally absent

    std::string t1 = renderReport(r);
    CHECK(t1.back() == '\n');
    CHECK(t1.find("\"curvatureStage\": null") != std::string::npos);
    CHECK(t1.find("null") != std::string::npos);

    AnalysisReport p = parseReport(t1);
    CHECK(p.schema == kReportSchema);
    CHECK(p.input.path == "example.csv");
    CHECK(p.timeIndex == r.timeIndex);
    CHECK(p.sigmaQ[0] == roundSig(0.0361234567, 6));
    CHECK(std::isnan(p.sigmaB));
    CHECK(std::isnan(p.hq1Std[1]));
    CHECK(std::isnan(p.widthSurrStd[0]));
    CHECK(!p.curvature.has_value());
    CHECK(p.width.labels == r.width.labels);
    CHECK(p.width.binUsed == r.width.binUsed);
    CHECK(p.width.spans.size() == 1);
    CHECK(p.width.spans[0].toDate == "2020-12-08");

    CHECK(renderReport(p) == t1);

    std::string bad = t1;
    auto pos = bad.find(kReportSchema);
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, std::string(kReportSchema).size(), "mscale-report/9");
    CHECK_THROWS(parseReport(bad));
    CHECK_THROWS(parseReport("{ not json"));
}

TEST_CASE("full analysis: replay determinism, report round trip, panels") {
    PriceSeries s = grw(1200, 42);
    AnalysisConfig cfg;
    cfg.ghe.dt = 60;
    cfg.ghe.theta = 60;
    cfg.ghe.step = 5;
    cfg.ghe.qGrid = {0.1, 4.0};
    cfg.bCount = 5;  // keep the union grid small
    cfg.seed = 777;

    AnalysisResult r1 = runAnalysis(s, cfg);
    AnalysisResult r2 = runAnalysis(s, cfg);

    InputProvenance prov;
    prov.path = "synthetic";
    prov.sha256 = sha256Hex("synthetic");
    prov.rows = s.size();
    prov.droppedRows = 0;
    prov.firstDate = formatDate(s.dates.front());
    prov.lastDate = formatDate(s.dates.back());

    std::string rep1 = renderReport(buildReport(r1, prov));
    std::string rep2 = renderReport(buildReport(r2, prov));
    CHECK(rep1 == rep2);

    AnalysisReport parsed = parseReport(rep1);
    CHECK(renderReport(parsed) == rep1);
    CHECK(parsed.generator == kProgramName);
    CHECK(parsed.version == kProgramVersion);
    CHECK(parsed.cfg.ghe.dt == 60);
    CHECK(parsed.cfg.seed == 777);
    CHECK(parsed.timeIndex == r1.real.timeIndex);
    CHECK(parsed.curvature.has_value());
    for (const auto& name : parsed.width.labels) CHECK_NOTHROW(labelFromName(name));
    // The timeline's own axis starts `start` points into the report axis.
    CHECK(parsed.width.labels.size() + parsed.width.start <= parsed.timeIndex.size());
    CHECK(parsed.width.breakpoints.back() == parsed.width.labels.size());

    std::string svg1 = renderPanels(r1);
    std::string svg2 = renderPanels(r2);
    CHECK(svg1 == svg2);
    CHECK(svg1.rfind("<svg", 0) == 0);
    CHECK(svg1.find("</svg>") != std::string::npos);
    // Legend holds every pattern that appears in either stage.
    std::set<PatternLabel> present(r1.widthStage.timeline.labels.begin(),
                                   r1.widthStage.timeline.labels.end());
    if (r1.curvStage)
        present.insert(r1.curvStage->timeline.labels.begin(),
                       r1.curvStage->timeline.labels.end());
    for (PatternLabel l : present) {
        std::string entry = std::string(">") + labelName(l) + "</text>";
        CHECK(svg1.find(entry) != std::string::npos);
    }

    AnalysisResult empty;
    CHECK_THROWS(renderPanels(empty));
}

TEST_CASE("event deletion preserves surviving day-over-day returns") {
    std::vector<Date> dates;
    std::vector<double> close;
    Rng rng(99);
    double lp = std::log(100.0);
    for (int i = 0; i < 12; ++i) {
        dates.push_back(fromSerialDay(18260 + 2 * i));
        lp += rng.normal(0.0, 0.02);
        close.push_back(std::exp(lp));
    }
    PriceSeries s = makePriceSeries(dates, close);

    SUBCASE("single interior day") {
        std::vector<Date> del{dates[3]};
        PriceSeries m = deleteEvents(s, del);
        REQUIRE(m.size() == 11);
        CHECK(m.close[0] == doctest::Approx(s.close[0]).epsilon(1e-12));
        CHECK(m.dates[3] == dates[4]);
        // Expected returns: all originals except the one into day 3.
        std::vector<double> expect;
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            if (i + 1 != 3) expect.push_back(s.logReturn[i]);
        REQUIRE(m.logReturn.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(std::fabs(m.logReturn[i] - expect[i]) < 1e-12);
    }

    SUBCASE("consecutive pair") {
        std::vector<Date> del{dates[6], dates[7]};
        PriceSeries m = deleteEvents(s, del);
        REQUIRE(m.size() == 10);
        std::vector<double> expect;
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            if (i + 1 != 6 && i + 1 != 7) expect.push_back(s.logReturn[i]);
        REQUIRE(m.logReturn.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(std::fabs(m.logReturn[i] - expect[i]) < 1e-12);
    }

    SUBCASE("first day has no inbound return") {
        std::vector<Date> del{dates[0]};
        PriceSeries m = deleteEvents(s, del);
        REQUIRE(m.size() == 11);
        CHECK(m.close[0] == doctest::Approx(s.close[1]).epsilon(1e-12));
        for (std::size_t i = 0; i < m.logReturn.size(); ++i)
            CHECK(std::fabs(m.logReturn[i] - s.logReturn[i + 1]) < 1e-12);
    }

    SUBCASE("absent date") {
        std::vector<Date> del{fromSerialDay(18261)};  // between rows
        CHECK_THROWS_AS(deleteEvents(s, del), std::invalid_argument);
    }
}

TEST_CASE("window-length scan") {
    PriceSeries s = grw(700, 11);
    GheConfig base;
    std::vector<std::size_t> dts{60, 100};
    ScanResult sc = scanDt(s, dts, 0.1, 4.0, base, 999);

    REQUIRE(sc.rows.size() == 2);
    CHECK(sc.q1 == 0.1);
    CHECK(sc.rows[0].dt == 60);
    CHECK(sc.rows[0].theta == 60.0);
    CHECK(sc.rows[1].dt == 100);
    CHECK(sc.rows[0].nWindows > 100);
    CHECK(std::isfinite(sc.rows[0].meanAbsW));
    CHECK(sc.rows[0].meanAbsW > 0);
    CHECK(std::isfinite(sc.rows[0].semAbsW));
    CHECK(std::isfinite(sc.rows[0].meanAbsWsurr));
    // No row reaches the long-window plateau region; the last row stands in.
    CHECK(sc.plateau == sc.rows.back().meanAbsW);
    REQUIRE(sc.plateauDts.size() == 1);
    CHECK(sc.plateauDts[0] == 100);
    CHECK(sc.rows.back().improvementPerDay == 0.0);
    CHECK(std::isfinite(sc.rows[0].improvementPerDay));

    std::string text = renderScan(sc);
    CHECK(text.find("mscale-scan/1") != std::string::npos);
    auto j = nlohmann::json::parse(text);
    CHECK(j.at("rows").size() == 2);
    CHECK(j.at("q1").get<double>() == 0.1);
    CHECK(j.at("rows")[0].at("dt").get<int>() == 60);

    CHECK_THROWS(scanDt(s, std::vector<std::size_t>{100, 60}, 0.1, 4.0, base, 1));
    CHECK_THROWS(scanDt(s, std::vector<std::size_t>{60, 60}, 0.1, 4.0, base, 1));
    CHECK_THROWS(scanDt(s, std::vector<std::size_t>{}, 0.1, 4.0, base, 1));
    CHECK_THROWS(scanDt(s, std::vector<std::size_t>{400}, 0.1, 4.0, base, 1));
    CHECK_THROWS(scanDt(s, dts, 4.0, 0.1, base, 1));
}
