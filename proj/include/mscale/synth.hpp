#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mscale/date.hpp"
#include "mscale/price_series.hpp"

namespace mscale {

enum class SynthKind { RandomWalk, Fbm, Cascade, Piecewise };

const char* synthKindName(SynthKind k);
SynthKind synthKindFromName(const std::string& name);

struct SynthSegment {
    SynthKind kind = SynthKind::RandomWalk;
    std::size_t length = 0;       // data points contributed by this regime
    double sigma = 0.01;          // daily log increment scale
    double hurst = 0.5;           // fbm only
    double intermittency = 0.36;  // cascade only: variance of log multiplier
};

struct SynthSpec {
    SynthKind kind = SynthKind::RandomWalk;
    std::size_t length = 4096;
    std::uint64_t seed = 1;
    double sigma = 0.01;
    double hurst = 0.5;
    double intermittency = 0.36;
    std::vector<SynthSegment> segments;  // piecewise only
    double startPrice = 100.0;
    Date startDate{1970, 1, 1};

    void validate() const;
};

// Deterministic per seed. Dates are synthetic weekdays from startDate.
// Piecewise series have a continuous log price across regime joins.
PriceSeries generate(const SynthSpec& spec);

// Unit-variance fractional Gaussian noise by circulant embedding of the exact
// autocovariance (embedding padded to a power of two). Exposed for the
// distribution self-tests.
std::vector<double> fractionalGaussianNoise(std::size_t n, double hurst,
                                            std::uint64_t seed);

// Interior (theoretical) autocovariance of unit-variance fGn at lag k.
double fgnAutocovariance(double hurst, std::size_t lag);

}  // namespace mscale
