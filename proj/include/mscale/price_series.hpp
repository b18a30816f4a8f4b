#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mscale/date.hpp"

namespace mscale {

// Daily close series. Dates strictly increasing, closes strictly positive,
// logReturn[i] = logPrice[i+1] - logPrice[i].
struct PriceSeries {
    std::vector<Date> dates;
    std::vector<double> close;
    std::vector<double> logPrice;
    std::vector<double> logReturn;

    std::size_t size() const { return close.size(); }
};

// Validates and derives logPrice / logReturn.
PriceSeries makePriceSeries(std::vector<Date> dates, std::vector<double> close);

struct LoadOptions {
    std::string dateColumn = "date";
    std::string closeColumn = "close";
    std::string dateFormat = "%Y-%m-%d";
    char delimiter = ',';
    // Rows that must survive cleaning; callers analysing with window dt pass
    // dt + 2.
    std::size_t minValidRows = 2;
};

struct LoadResult {
    PriceSeries series;
    std::size_t droppedRows = 0;  // non-positive or missing closes
};

// Reads a delimited text file with a header line. Unparseable dates abort
// with the offending line number; non-positive/missing closes are dropped
// and counted; non-increasing dates abort.
LoadResult loadPriceSeries(const std::string& path, const LoadOptions& opts = {});

// Exponentially weighted rolling volatility: value[i] is the sample standard
// deviation (N-1) of the weight-multiplied log returns over the dt-price
// trailing window ending at series index dt-1+i. The most recent return in
// the window is multiplied by the largest weight.
struct VolatilitySeries {
    std::size_t dt = 0;
    double theta = 0;
    // value[i] corresponds to series index dt-1+i; size = n - dt + 1.
    std::vector<double> value;

    std::size_t firstIndex() const { return dt - 1; }
    double atSeriesIndex(std::size_t idx) const { return value.at(idx - (dt - 1)); }
};

VolatilitySeries weightedVolatility(const PriceSeries& series, std::size_t dt,
                                    double theta);

}  // namespace mscale
