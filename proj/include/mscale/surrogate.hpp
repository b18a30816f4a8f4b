#pragma once

#include <cstdint>

#include "mscale/price_series.hpp"

namespace mscale {

// Volatility-matched random walk: anchored at the real close on the first
// date where the rolling volatility is defined, then each day-to-day log
// change is an independent Normal(0, V(t)) draw, V(t) taken at the arrival
// date. Carries the real date axis from that first date onward.
struct SurrogateSeries {
    PriceSeries base;
    std::size_t offset = 0;  // real series index of base row 0
    std::uint64_t seed = 0;
};

SurrogateSeries generateSurrogate(const PriceSeries& real,
                                  const VolatilitySeries& vol,
                                  std::uint64_t seed);

}  // namespace mscale
