#include "doctest.h"

#include <cmath>
#include <vector>

#include "mscale/ghe.hpp"
#include "mscale/stats.hpp"
#include "mscale/synth.hpp"

using namespace mscale;

TEST_CASE("generation is deterministic per seed and sensitive to it") {
    SynthSpec sp;
    sp.kind = SynthKind::Cascade;
    sp.length = 1024;
    sp.seed = 5;
    PriceSeries a = generate(sp);
    PriceSeries b = generate(sp);
    CHECK(a.close == b.close);
    CHECK(a.dates == b.dates);
    sp.seed = 6;
    PriceSeries c = generate(sp);
    CHECK(a.close != c.close);
}

TEST_CASE("generated series basics: weekday dates, positive closes, start") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 600;
    sp.seed = 2;
    sp.startPrice = 55.0;
    sp.startDate = Date{1990, 7, 2};
    PriceSeries s = generate(sp);
    REQUIRE(s.size() == 600);
    CHECK(s.close[0] == doctest::Approx(55.0));
    CHECK(s.dates[0] == Date{1990, 7, 2});
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s.close[i] > 0);
        CHECK(weekdayIndex(s.dates[i]) < 5);
        if (i) CHECK(s.dates[i - 1] < s.dates[i]);
    }
}

TEST_CASE("random walk increments have the requested scale") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 20000;
    sp.seed = 12;
    sp.sigma = 0.02;
    PriceSeries s = generate(sp);
    CHECK(sampleStd(s.logReturn) == doctest::Approx(0.02).epsilon(0.03));
    CHECK(std::fabs(mean(s.logReturn)) < 0.001);
}

TEST_CASE("fGn sample autocovariance tracks the exact formula") {
    const std::size_t n = 20000;
    for (double hurst : {0.3, 0.7}) {
        std::vector<double> g =
            fractionalGaussianNoise(n, hurst, 100 + std::size_t(hurst * 10));
        REQUIRE(g.size() == n);
        for (std::size_t lag = 0; lag <= 10; ++lag) {
            double acc = 0;
            for (std::size_t i = 0; i + lag < n; ++i) acc += g[i] * g[i + lag];
            double sample = acc / static_cast<double>(n - lag);
            CHECK(std::fabs(sample - fgnAutocovariance(hurst, lag)) < 0.03);
        }
    }
}

TEST_CASE("fGn autocovariance formula sanity") {
    // Unit variance at lag 0; H = 0.5 is white noise.
    CHECK(fgnAutocovariance(0.7, 0) == doctest::Approx(1.0));
    CHECK(fgnAutocovariance(0.5, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fgnAutocovariance(0.5, 7) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fgnAutocovariance(0.7, 1) ==
          doctest::Approx(std::pow(2.0, 0.4) - 1.0));  // 2^(2H-1) - 1
    CHECK(fgnAutocovariance(0.3, 1) == doctest::Approx(std::pow(2.0, -0.4) - 1.0));
    CHECK(fgnAutocovariance(0.3, 1) < 0);  // anti-persistent
}

TEST_CASE("fbm series carries its exponent through the estimator") {
    SynthSpec sp;
    sp.kind = SynthKind::Fbm;
    sp.length = 4096;
    sp.hurst = 0.3;
    sp.seed = 19;
    PriceSeries s = generate(sp);
    GheConfig cfg;
    cfg.qGrid = {1.0};
    GheSurface surf = gheSeries(s, cfg);
    double h1 = meanFinite(surf.track(0));
    CHECK(h1 > 0.22);
    CHECK(h1 < 0.38);
}

TEST_CASE("cascade shows static multiscaling: H falls with q") {
    SynthSpec sp;
    sp.kind = SynthKind::Cascade;
    sp.length = 8192;
    sp.seed = 8;
    PriceSeries s = generate(sp);
    GheConfig cfg;
    cfg.dt = 2048;
    cfg.theta = 1e12;  // uniform window: static exponents
    cfg.step = 512;
    cfg.qGrid = {1.0, 4.0};
    GheSurface surf = gheSeries(s, cfg);
    double h1 = meanFinite(surf.track(0));
    double h4 = meanFinite(surf.track(1));
    CHECK(h1 - h4 > 0.05);
}

TEST_CASE("piecewise composites join continuously and honor lengths") {
    SynthSpec sp;
    sp.kind = SynthKind::Piecewise;
    sp.seed = 4;
    SynthSegment a;
    a.kind = SynthKind::RandomWalk;
    a.length = 400;
    a.sigma = 0.01;
    SynthSegment b;
    b.kind = SynthKind::Cascade;
    b.length = 200;
    b.sigma = 0.01;
    sp.segments = {a, b};
    PriceSeries s = generate(sp);
    REQUIRE(s.size() == 600);
    // No jump at the join: the boundary return is an ordinary draw.
    CHECK(std::fabs(s.logPrice[400] - s.logPrice[399]) < 0.1);
    for (double c : s.close) CHECK(c > 0);
}

TEST_CASE("spec validation rejects broken requests") {
    SynthSpec sp;
    sp.kind = SynthKind::Fbm;
    sp.hurst = 1.2;
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = SynthSpec{};
    sp.length = 100;  // below the minimum
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = SynthSpec{};
    sp.kind = SynthKind::Piecewise;  // no segments given
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    CHECK_NOTHROW(SynthSpec{}.validate());
}
