#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mscale/pipeline.hpp"

namespace mscale {

inline constexpr const char* kProgramName = "mscale";
inline constexpr const char* kProgramVersion = "1.0.0";
inline constexpr const char* kReportSchema = "mscale-report/1";

// Round to `digits` significant decimal digits (shortest %g form re-parsed),
// so serialized numbers survive a parse/render cycle unchanged. Non-finite
// values pass through.
double roundSig(double x, int digits);

struct InputProvenance {
    std::string path;
    std::string sha256;
    std::size_t rows = 0;
    std::size_t droppedRows = 0;
    std::string firstDate;
    std::string lastDate;
};

struct StageSpan {
    std::string label;
    std::size_t fromIndex = 0, toIndex = 0;  // series end indices, inclusive
    std::string fromDate, toDate;
    std::size_t points = 0;
};

struct StageReport {
    double q1 = 0, q2 = 0;
    std::size_t start = 0;  // offset into the report time axis
    double penalty = 0;
    std::vector<double> gammaS, hq1S, hq2S;
    std::vector<std::size_t> breakpoints;
    std::vector<double> slopeQ1, seQ1, slopeQ2, seQ2;
    double sigmaDiff = 0, sigmaAbsDiff = 0;
    std::vector<double> surrSlopesQ1, surrSlopesQ2;
    std::vector<bool> binUsed;
    std::vector<std::string> labels;
    std::vector<double> gammaUsed, eq16, eq17;
    std::vector<std::size_t> bin;
    std::vector<bool> reversed;
    std::vector<StageSpan> spans;
};

struct AnalysisReport {
    std::string schema = kReportSchema;
    std::string generator = kProgramName;
    std::string version = kProgramVersion;
    InputProvenance input;
    AnalysisConfig cfg;
    std::vector<std::size_t> timeIndex;
    std::vector<std::string> dates;
    std::size_t alignedOffset = 0;
    std::vector<double> qGrid;  // union analysis grid
    std::vector<double> sigmaQ;
    double sigmaB = kNaN;
    std::vector<double> hq1Std, hq2Std;
    std::vector<double> widthStd, widthSurrStd;
    std::vector<double> curvStd, curvSurrStd;
    StageReport width;
    std::optional<StageReport> curvature;
};

AnalysisReport buildReport(const AnalysisResult& res, const InputProvenance& input);

// Two-space indented JSON, trailing newline, non-finite numbers as null.
// Track values are rounded to 6 significant digits before serialization, so
// renderReport(parseReport(text)) == text for any text renderReport produced.
std::string renderReport(const AnalysisReport& r);
AnalysisReport parseReport(const std::string& text);

// ---- window-length scan ----------------------------------------------------

struct ScanRow {
    std::size_t dt = 0;
    double theta = 0;
    std::size_t nWindows = 0;
    double meanAbsW = kNaN;   // time-mean |H_q1 - H_q2|, unstandardized
    double semAbsW = kNaN;
    double meanAbsWsurr = kNaN;
    double semAbsWsurr = kNaN;
    double improvementPerDay = kNaN;  // % of remaining plateau gap closed per day
};

struct ScanResult {
    double q1 = 0, q2 = 0;
    std::vector<ScanRow> rows;
    double plateau = kNaN;               // reference |W| level
    std::vector<std::size_t> plateauDts;  // rows averaged into the plateau
};

// Re-estimates the width at each window length (theta = dt), against a
// volatility-matched surrogate, to show where lengthening the window stops
// paying. dtList must be strictly increasing; each dt needs 2*dt points.
ScanResult scanDt(const PriceSeries& series, std::span<const std::size_t> dtList,
                  double q1, double q2, const GheConfig& base, std::uint64_t seed);

std::string renderScan(const ScanResult& r);

// ---- event deletion --------------------------------------------------------

// Removes the given dates and splices the series: every surviving
// day-over-day log return is preserved, the deleted days' returns vanish.
// Throws if a date is not present.
PriceSeries deleteEvents(const PriceSeries& s, std::span<const Date> dates);

}  // namespace mscale
