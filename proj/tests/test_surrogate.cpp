#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "mscale/ghe.hpp"
#include "mscale/price_series.hpp"
#include "mscale/rng.hpp"
#include "mscale/stats.hpp"
#include "mscale/surrogate.hpp"
#include "mscale/synth.hpp"

using namespace mscale;

namespace {

PriceSeries heteroskedastic(std::size_t n, std::uint64_t seed, double period) {
    Rng rng(seed);
    std::vector<Date> d;
    std::vector<double> c;
    double lp = std::log(100.0);
    for (std::size_t i = 0; i < n; ++i) {
        d.push_back(fromSerialDay(static_cast<std::int64_t>(i)));
        c.push_back(std::exp(lp));
        double sigma =
            0.005 + 0.0075 * (1.0 + std::sin(2.0 * std::numbers::pi *
                                             static_cast<double>(i) / period));
        lp += rng.normal(0, sigma);
    }
    return makePriceSeries(std::move(d), std::move(c));
}

VolatilitySeries constantVol(std::size_t n, std::size_t dt, double level) {
    VolatilitySeries v;
    v.dt = dt;
    v.theta = static_cast<double>(dt);
    v.value.assign(n - dt + 1, level);
    return v;
}

}  // namespace

TEST_CASE("surrogate anchors at the first covered real close") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 700;
    sp.seed = 33;
    PriceSeries real = generate(sp);
    VolatilitySeries vol = weightedVolatility(real, 250, 250.0);
    SurrogateSeries s = generateSurrogate(real, vol, 1);
    CHECK(s.offset == 249);
    CHECK(s.base.size() == real.size() - 249);
    CHECK(s.base.dates.front() == real.dates[249]);
    CHECK(s.base.dates.back() == real.dates.back());
    CHECK(s.base.close[0] == doctest::Approx(real.close[249]).epsilon(1e-12));
}

TEST_CASE("zero volatility freezes the surrogate") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 600;
    sp.seed = 3;
    PriceSeries real = generate(sp);
    SurrogateSeries s = generateSurrogate(real, constantVol(600, 250, 0.0), 9);
    for (double r : s.base.logReturn) CHECK(r == 0.0);
}

TEST_CASE("constant volatility reproduces the requested daily scale") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 10250;
    sp.seed = 44;
    PriceSeries real = generate(sp);
    SurrogateSeries s = generateSurrogate(real, constantVol(10250, 250, 0.01), 7);
    double sd = sampleStd(s.base.logReturn);
    CHECK(sd > 0.0097);
    CHECK(sd < 0.0103);
    CHECK(std::fabs(mean(s.base.logReturn)) < 3e-4);
}

TEST_CASE("same seed, same bytes; different seed, different path") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 800;
    sp.seed = 5;
    PriceSeries real = generate(sp);
    VolatilitySeries vol = weightedVolatility(real, 250, 250.0);
    SurrogateSeries a = generateSurrogate(real, vol, 42);
    SurrogateSeries b = generateSurrogate(real, vol, 42);
    SurrogateSeries c = generateSurrogate(real, vol, 43);
    CHECK(a.base.close == b.base.close);
    CHECK(a.base.close != c.base.close);
}

TEST_CASE("surrogate volatility profile tracks the source") {
    PriceSeries real = heteroskedastic(12000, 77, 4000.0);
    std::size_t dt = 250;
    VolatilitySeries realVol = weightedVolatility(real, dt, 250.0);
    SurrogateSeries s = generateSurrogate(real, realVol, 11);
    VolatilitySeries surrVol = weightedVolatility(s.base, dt, 250.0);
    // surrVol value j sits at real index 2*(dt-1) + j.
    std::vector<double> a, b;
    for (std::size_t j = 0; j < surrVol.value.size(); ++j) {
        a.push_back(realVol.value[dt - 1 + j]);
        b.push_back(surrVol.value[j]);
    }
    CHECK(pearson(a, b) > 0.9);
}

TEST_CASE("surrogate of a constant-volatility series scores H near one half") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 1600;
    sp.seed = 21;
    PriceSeries real = generate(sp);
    SurrogateSeries s = generateSurrogate(real, constantVol(1600, 250, 0.01), 13);
    GheConfig cfg;
    cfg.qGrid = {1.0};
    GheSurface surf = gheSeries(s.base, cfg);
    double h1 = meanFinite(surf.track(0));
    CHECK(h1 > 0.44);
    CHECK(h1 < 0.56);
}

TEST_CASE("misaligned volatility is rejected") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 600;
    sp.seed = 1;
    PriceSeries real = generate(sp);
    VolatilitySeries vol = weightedVolatility(real, 250, 250.0);
    vol.value.pop_back();
    CHECK_THROWS_AS(generateSurrogate(real, vol, 1), std::invalid_argument);
    VolatilitySeries neg = constantVol(600, 250, 0.01);
    neg.value[5] = -1e-9;
    CHECK_THROWS_AS(generateSurrogate(real, neg, 1), std::invalid_argument);
}
