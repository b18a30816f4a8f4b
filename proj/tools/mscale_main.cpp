// Command line front end: analyze, scan-dt, delete-events, synth, validate.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mscale/pipeline.hpp"
#include "mscale/report.hpp"
#include "mscale/sha256.hpp"
#include "mscale/svg_render.hpp"
#include "mscale/synth.hpp"
#include "mscale/validate.hpp"

using namespace mscale;

namespace {

struct IngestArgs {
    std::string dateCol = "date";
    std::string closeCol = "close";
    std::string dateFormat = "%Y-%m-%d";
    std::string delimiter = ",";

    void attach(CLI::App* cmd) {
        cmd->add_option("--date-col", dateCol, "date column name");
        cmd->add_option("--close-col", closeCol, "close column name");
        cmd->add_option("--date-format", dateFormat,
                        "date pattern (%Y %m %d %b and literals)");
        cmd->add_option("--delimiter", delimiter,
                        "field delimiter (single character, or 'tab')");
    }

    char delim() const {
        if (delimiter == "tab" || delimiter == "\\t") return '\t';
        if (delimiter.size() != 1)
            throw CLI::ValidationError("--delimiter", "needs a single character");
        return delimiter[0];
    }

    LoadOptions loadOptions(std::size_t minRows) const {
        LoadOptions lo;
        lo.dateColumn = dateCol;
        lo.closeColumn = closeCol;
        lo.dateFormat = dateFormat;
        lo.delimiter = delim();
        lo.minValidRows = minRows;
        return lo;
    }
};

void writeOut(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string priceCsv(const PriceSeries& s) {
    std::string out = "date,close\n";
    char buf[96];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g\n", formatDate(s.dates[i]).c_str(),
                      s.close[i]);
        out += buf;
    }
    return out;
}

SmoothMode smoothModeFromName(const std::string& s) {
    if (s == "centered") return SmoothMode::Centered;
    if (s == "causal") return SmoothMode::Causal;
    throw CLI::ValidationError("--smooth-mode", "expected centered|causal");
}

BinDriver binDriverFromName(const std::string& s) {
    if (s == "q1") return BinDriver::Q1;
    if (s == "q2") return BinDriver::Q2;
    if (s == "gamma") return BinDriver::Gamma;
    throw CLI::ValidationError("--bin-driver", "expected q1|q2|gamma");
}

MultiscalingMetric metricFromName(const std::string& s) {
    if (s == "width") return MultiscalingMetric::Width;
    if (s == "curvature") return MultiscalingMetric::Curvature;
    throw CLI::ValidationError("--metric", "expected width|curvature");
}

SynthKind kindFromCli(const std::string& s) {
    return synthKindFromName(s == "rw" ? "randomWalk" : s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-dependent multiscaling analysis of daily price series"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kProgramVersion);

    // ---- analyze ----
    auto* an = app.add_subcommand(
        "analyze", "compute exponent tracks, patterns, report and plot");
    std::string anInput, anOut, anPlot, anTitle;
    IngestArgs anIngest;
    AnalysisConfig cfg;
    std::string smoothMode = "centered", binDriver = "q1", metric = "width";
    std::size_t tauMaxArg = cfg.ghe.tauMax;
    double thetaArg = cfg.ghe.theta;
    an->add_option("input", anInput, "delimited daily close file")->required();
    anIngest.attach(an);
    auto* dtOpt = an->add_option("--dt", cfg.ghe.dt, "window length (points)");
    auto* thOpt = an->add_option("--theta", thetaArg,
                                 "weight decay scale (default: dt)");
    an->add_option("--step", cfg.ghe.step, "evaluation stride (points)");
    an->add_option("--tau-max", tauMaxArg, "largest structure-function lag");
    an->add_option("--q-grid", cfg.ghe.qGrid, "width-stage moment orders")
        ->delimiter(',');
    an->add_option("--q1", cfg.q1, "low moment order of the width pair");
    an->add_option("--q2", cfg.q2, "high moment order of the width pair");
    an->add_flag("--curvature,!--no-curvature", cfg.computeCurvature,
                 "also run the curvature stage");
    an->add_option("--b-lo", cfg.bLo, "curvature fit: lowest q");
    an->add_option("--b-hi", cfg.bHi, "curvature fit: highest q");
    an->add_option("--b-count", cfg.bCount, "curvature fit: grid size");
    an->add_option("--smooth-window", cfg.smooth.windowPoints,
                   "smoothing window (evaluation points)");
    an->add_option("--smooth-order", cfg.smooth.order, "smoothing poly order");
    an->add_option("--smooth-mode", smoothMode, "centered|causal");
    an->add_option("--penalty", cfg.cpaPenalty,
                   "segmentation penalty (default: derived)");
    an->add_option("--penalty-scale", cfg.cpaPenaltyScale,
                   "scale of the derived penalty");
    an->add_option("--min-bin", cfg.minBinLength, "minimum bin length (points)");
    an->add_option("--bin-driver", binDriver, "track segmented: q1|q2|gamma");
    an->add_option("--phi-l", cfg.classifier.phiL, "lower magnitude threshold");
    an->add_option("--phi-h", cfg.classifier.phiH, "upper magnitude threshold");
    an->add_option("--phi-s", cfg.classifier.phiS, "slope-test threshold");
    an->add_option("--metric", metric, "primary magnitude: width|curvature");
    an->add_option("--seed", cfg.seed, "surrogate RNG seed");
    an->add_option("--reps", cfg.surrogateReps, "surrogate replicates");
    an->add_option("-o,--out", anOut, "report path (default: stdout)");
    an->add_option("--plot", anPlot, "also write summary panels (SVG)");
    an->add_option("--title", anTitle, "plot title");

    // ---- scan-dt ----
    auto* sc = app.add_subcommand(
        "scan-dt", "width vs window length, against the surrogate");
    std::string scInput, scOut;
    IngestArgs scIngest;
    std::vector<std::size_t> dtList;
    double scQ1 = 0.1, scQ2 = 4.0;
    std::uint64_t scSeed = 12345;
    GheConfig scBase;
    sc->add_option("input", scInput, "delimited daily close file")->required();
    scIngest.attach(sc);
    sc->add_option("--dt-list", dtList, "window lengths, increasing")
        ->delimiter(',')
        ->required();
    sc->add_option("--q1", scQ1, "low moment order");
    sc->add_option("--q2", scQ2, "high moment order");
    sc->add_option("--step", scBase.step, "evaluation stride (points)");
    sc->add_option("--seed", scSeed, "surrogate RNG seed");
    sc->add_option("-o,--out", scOut, "output path (default: stdout)");

    // ---- delete-events ----
    auto* de = app.add_subcommand(
        "delete-events", "splice out given dates, preserving other returns");
    std::string deInput, deOut;
    IngestArgs deIngest;
    std::vector<std::string> deDates;
    de->add_option("input", deInput, "delimited daily close file")->required();
    deIngest.attach(de);
    de->add_option("--dates", deDates, "dates to remove (input date format)")
        ->delimiter(',')
        ->required();
    de->add_option("-o,--out", deOut, "output CSV path (default: stdout)");

    // ---- synth ----
    auto* sy = app.add_subcommand("synth", "generate a synthetic close series");
    SynthSpec spec;
    std::string syKind = "rw", syOut, syStartDate = "1970-01-01";
    std::vector<std::string> sySegments;
    sy->add_option("--kind", syKind, "rw|fbm|cascade|piecewise");
    sy->add_option("--length", spec.length, "number of points");
    sy->add_option("--seed", spec.seed, "RNG seed");
    sy->add_option("--sigma", spec.sigma, "daily log increment scale");
    sy->add_option("--hurst", spec.hurst, "fbm exponent");
    sy->add_option("--intermittency", spec.intermittency,
                   "cascade log-multiplier variance");
    sy->add_option("--segments", sySegments,
                   "piecewise regimes as kind:length pairs")
        ->delimiter(',');
    sy->add_option("--start-price", spec.startPrice, "first close");
    sy->add_option("--start-date", syStartDate, "first date (ISO)");
    sy->add_option("-o,--out", syOut, "output CSV path (default: stdout)");

    // ---- validate ----
    auto* va = app.add_subcommand("validate", "run the acceptance suite");
    ValidateOptions vopts;
    IngestArgs vaIngest;
    va->add_option("--data", vopts.dataPath,
                   "reference daily close file for the optional checks");
    vaIngest.attach(va);
    va->add_option("--only", vopts.only, "criterion ids to run")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (an->parsed()) {
            cfg.ghe.theta = thOpt->count() ? thetaArg
                            : dtOpt->count() ? static_cast<double>(cfg.ghe.dt)
                                             : cfg.ghe.theta;
            if (tauMaxArg != cfg.ghe.tauMax) {
                cfg.ghe.tauMax = tauMaxArg;
                cfg.ghe.tauMaxRange.clear();
                for (std::size_t m = tauMaxArg >= 5 ? 5 : 2; m <= tauMaxArg; ++m)
                    cfg.ghe.tauMaxRange.push_back(m);
            }
            cfg.smooth.mode = smoothModeFromName(smoothMode);
            cfg.binDriver = binDriverFromName(binDriver);
            cfg.classifier.metric = metricFromName(metric);
            LoadResult lr =
                loadPriceSeries(anInput, anIngest.loadOptions(2 * cfg.ghe.dt));
            AnalysisResult res = runAnalysis(lr.series, cfg);
            InputProvenance prov;
            prov.path = anInput;
            prov.sha256 = sha256File(anInput);
            prov.rows = lr.series.size();
            prov.droppedRows = lr.droppedRows;
            prov.firstDate = formatDate(lr.series.dates.front());
            prov.lastDate = formatDate(lr.series.dates.back());
            writeOut(anOut, renderReport(buildReport(res, prov)));
            if (!anPlot.empty()) {
                PlotOptions po;
                if (!anTitle.empty()) po.title = anTitle;
                writeOut(anPlot, renderPanels(res, po));
            }
        } else if (sc->parsed()) {
            std::size_t maxDt = dtList.empty() ? 2 : dtList.back();
            LoadResult lr =
                loadPriceSeries(scInput, scIngest.loadOptions(2 * maxDt));
            writeOut(scOut, renderScan(
                                scanDt(lr.series, dtList, scQ1, scQ2, scBase, scSeed)));
        } else if (de->parsed()) {
            LoadResult lr = loadPriceSeries(deInput, deIngest.loadOptions(2));
            std::vector<Date> dates;
            for (const auto& s : deDates)
                dates.push_back(parseDate(s, deIngest.dateFormat));
            writeOut(deOut, priceCsv(deleteEvents(lr.series, dates)));
        } else if (sy->parsed()) {
            spec.kind = kindFromCli(syKind);
            spec.startDate = parseDate(syStartDate);
            for (const auto& s : sySegments) {
                auto colon = s.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("--segments entry needs kind:length");
                SynthSegment seg;
                seg.kind = kindFromCli(s.substr(0, colon));
                seg.length = static_cast<std::size_t>(
                    std::stoull(s.substr(colon + 1)));
                seg.sigma = spec.sigma;
                seg.hurst = spec.hurst;
                seg.intermittency = spec.intermittency;
                spec.segments.push_back(seg);
            }
            writeOut(syOut, priceCsv(generate(spec)));
        } else if (va->parsed()) {
            vopts.dateColumn = vaIngest.dateCol;
            vopts.closeColumn = vaIngest.closeCol;
            vopts.dateFormat = vaIngest.dateFormat;
            vopts.delimiter = vaIngest.delim();
            auto results = runAcceptance(vopts);
            for (const auto& r : results)
                std::printf("%s criterion %2d%s %s — %s\n",
                            criterionStatusName(r.status), r.id,
                            r.optional ? " (optional)" : "", r.name.c_str(),
                            r.detail.c_str());
            return allMandatoryPassed(results) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
