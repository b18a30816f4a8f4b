#include "mscale/price_series.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mscale/ghe.hpp"
#include "mscale/stats.hpp"

namespace mscale {

PriceSeries makePriceSeries(std::vector<Date> dates, std::vector<double> close) {
    if (dates.size() != close.size())
        throw std::invalid_argument("price series: dates/close size mismatch");
    if (close.size() < 2)
        throw std::invalid_argument("price series: need at least 2 rows");
    for (std::size_t i = 0; i < close.size(); ++i) {
        if (!(close[i] > 0.0) || !std::isfinite(close[i]))
            throw std::invalid_argument("price series: non-positive close at row " +
                                        std::to_string(i));
        if (i > 0 && !(dates[i - 1] < dates[i]))
            throw std::invalid_argument(
                "price series: dates not strictly increasing at row " +
                std::to_string(i) + " (" + formatDate(dates[i]) + ")");
    }
    PriceSeries s;
    s.dates = std::move(dates);
    s.close = std::move(close);
    s.logPrice.resize(s.close.size());
    for (std::size_t i = 0; i < s.close.size(); ++i) s.logPrice[i] = std::log(s.close[i]);
    s.logReturn.resize(s.close.size() - 1);
    for (std::size_t i = 0; i + 1 < s.close.size(); ++i)
        s.logReturn[i] = s.logPrice[i + 1] - s.logPrice[i];
    return s;
}

namespace {

std::vector<std::string> splitLine(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) {
        // Trim surrounding whitespace and CR.
        std::size_t a = field.find_first_not_of(" \t\r");
        std::size_t b = field.find_last_not_of(" \t\r");
        out.push_back(a == std::string::npos ? std::string()
                                             : field.substr(a, b - a + 1));
    }
    return out;
}

}  // namespace

LoadResult loadPriceSeries(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file");
    auto header = splitLine(line, opts.delimiter);
    std::size_t dateCol = header.size(), closeCol = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == opts.dateColumn) dateCol = i;
        if (header[i] == opts.closeColumn) closeCol = i;
    }
    if (dateCol == header.size())
        throw std::runtime_error(path + ": header lacks date column '" +
                                 opts.dateColumn + "'");
    if (closeCol == header.size())
        throw std::runtime_error(path + ": header lacks close column '" +
                                 opts.closeColumn + "'");

    std::vector<Date> dates;
    std::vector<double> closes;
    std::size_t dropped = 0;
    std::size_t lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = splitLine(line, opts.delimiter);
        if (fields.size() <= dateCol || fields[dateCol].empty())
            throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                                     ": missing date field");
        Date d;
        try {
            d = parseDate(fields[dateCol], opts.dateFormat);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineNo) + ": " +
                                     e.what());
        }
        double c = kNaN;
        if (fields.size() > closeCol && !fields[closeCol].empty()) {
            const std::string& f = fields[closeCol];
            char* end = nullptr;
            c = std::strtod(f.c_str(), &end);
            if (end != f.c_str() + f.size()) c = kNaN;
        }
        if (!std::isfinite(c) || c <= 0.0) {
            ++dropped;
            continue;
        }
        if (!dates.empty() && !(dates.back() < d))
            throw std::runtime_error(path + ":" + std::to_string(lineNo) +
                                     ": dates not strictly increasing (" +
                                     formatDate(d) + ")");
        dates.push_back(d);
        closes.push_back(c);
    }
    if (dates.size() < opts.minValidRows)
        throw std::runtime_error(
            path + ": only " + std::to_string(dates.size()) +
            " valid rows after dropping " + std::to_string(dropped) +
            ", need at least " + std::to_string(opts.minValidRows));

    LoadResult r;
    r.series = makePriceSeries(std::move(dates), std::move(closes));
    r.droppedRows = dropped;
    return r;
}

VolatilitySeries weightedVolatility(const PriceSeries& series, std::size_t dt,
                                    double theta) {
    std::size_t n = series.size();
    if (dt < 3) throw std::invalid_argument("weightedVolatility: dt must be >= 3");
    if (n < dt + 1)
        throw std::invalid_argument("weightedVolatility: series shorter than dt + 1");
    WeightKernel kernel = buildKernel(dt, theta);

    VolatilitySeries vol;
    vol.dt = dt;
    vol.theta = theta;
    vol.value.resize(n - dt + 1);

    // Window ending at index e holds dt prices and dt-1 returns; return
    // r[e-s] = logPrice[e-s] - logPrice[e-s-1] gets weight w[s], s = 0..dt-2.
    std::size_t m = dt - 1;
    std::vector<double> weighted(m);
    for (std::size_t e = dt - 1; e < n; ++e) {
        for (std::size_t s = 0; s < m; ++s) {
            double r = series.logPrice[e - s] - series.logPrice[e - s - 1];
            weighted[s] = r * kernel.w[s];
        }
        vol.value[e - (dt - 1)] = sampleStd(weighted);
    }
    return vol;
}

}  // namespace mscale
