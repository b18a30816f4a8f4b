#include "mscale/surrogate.hpp"

#include <cmath>
#include <stdexcept>

#include "mscale/rng.hpp"

namespace mscale {

SurrogateSeries generateSurrogate(const PriceSeries& real,
                                  const VolatilitySeries& vol,
                                  std::uint64_t seed) {
    std::size_t n = real.size();
    if (vol.dt < 2 || n < vol.dt)
        throw std::invalid_argument("surrogate: volatility/series mismatch");
    if (vol.value.size() != n - vol.dt + 1)
        throw std::invalid_argument("surrogate: volatility length mismatch");
    for (double v : vol.value)
        if (!(v >= 0) || !std::isfinite(v))
            throw std::invalid_argument("surrogate: volatility must be finite and >= 0");

    std::size_t offset = vol.firstIndex();
    std::size_t len = n - offset;
    Rng rng(seed);

    std::vector<double> logPrice(len);
    logPrice[0] = real.logPrice[offset];
    for (std::size_t k = 1; k < len; ++k)
        logPrice[k] = logPrice[k - 1] + rng.normal(0.0, vol.value[k]);

    std::vector<Date> dates(real.dates.begin() + static_cast<std::ptrdiff_t>(offset),
                            real.dates.end());
    std::vector<double> close(len);
    for (std::size_t k = 0; k < len; ++k) close[k] = std::exp(logPrice[k]);

    SurrogateSeries s;
    s.base = makePriceSeries(std::move(dates), std::move(close));
    s.offset = offset;
    s.seed = seed;
    return s;
}

}  // namespace mscale
