#include "doctest.h"

#include <cmath>
#include <span>
#include <vector>

#include "mscale/ghe.hpp"
#include "mscale/rng.hpp"
#include "mscale/stats.hpp"
#include "mscale/synth.hpp"

using namespace mscale;

namespace {

PriceSeries grwSeries(std::size_t n, std::uint64_t seed, double sigma = 0.01) {
    Rng rng(seed);
    std::vector<Date> d;
    std::vector<double> c;
    double lp = std::log(100.0);
    for (std::size_t i = 0; i < n; ++i) {
        d.push_back(fromSerialDay(static_cast<std::int64_t>(i)));
        c.push_back(std::exp(lp));
        lp += sigma * rng.normal();
    }
    return makePriceSeries(std::move(d), std::move(c));
}

PriceSeries linearLogSeries(std::size_t n, double slope) {
    std::vector<Date> d;
    std::vector<double> c;
    for (std::size_t i = 0; i < n; ++i) {
        d.push_back(fromSerialDay(static_cast<std::int64_t>(i)));
        c.push_back(std::exp(1.0 + slope * static_cast<double>(i)));
    }
    return makePriceSeries(std::move(d), std::move(c));
}

}  // namespace

TEST_CASE("weight kernel: normalization, ratio, closed-form first weight") {
    for (double theta : {5.0, 100.0, 250.0, 1234.5}) {
        for (std::size_t dt : {10ul, 250ul, 777ul}) {
            WeightKernel k = buildKernel(dt, theta);
            REQUIRE(k.w.size() == dt);
            REQUIRE(k.prefix.size() == dt + 1);
            CHECK(std::fabs(k.prefix[dt] - 1.0) <= 1e-14);
            for (std::size_t s = 0; s + 1 < dt; s += 7)
                CHECK(k.w[s] / k.w[s + 1] ==
                      doctest::Approx(std::exp(1.0 / theta)).epsilon(1e-12));
            double w0 = std::expm1(-1.0 / theta) /
                        std::expm1(-static_cast<double>(dt) / theta);
            CHECK(k.w[0] == doctest::Approx(w0).epsilon(1e-13));
            // prefix[m] accumulates the first m weights
            double run = 0;
            for (std::size_t m = 0; m <= dt; ++m) {
                CHECK(std::fabs(k.prefix[m] - run) <= 1e-13);
                if (m < dt) run += k.w[m];
            }
        }
    }
}

TEST_CASE("weight kernel: characteristic decay across one window") {
    WeightKernel k = buildKernel(250, 250.0);
    double ratio = k.w[249] / k.w[0];
    CHECK(ratio == doctest::Approx(std::exp(-249.0 / 250.0)).epsilon(1e-12));
    CHECK(ratio == doctest::Approx(0.36935).epsilon(5e-4));  // frozen value
}

TEST_CASE("weight kernel: huge theta approaches the uniform window") {
    std::size_t dt = 100;
    WeightKernel k = buildKernel(dt, 1e12);
    for (double w : k.w) CHECK(w == doctest::Approx(1.0 / double(dt)).epsilon(1e-6));
}

TEST_CASE("structure function of an exact linear log price is (c*tau)^q") {
    std::size_t dt = 120;
    double c = 0.003;
    PriceSeries s = linearLogSeries(400, c);
    WeightKernel k = buildKernel(dt, 80.0);
    std::span<const double> window(s.logPrice.data() + 100, dt);
    for (double q : {0.1, 1.0, 2.0, 4.0})
        for (std::size_t tau : {1ul, 5ul, 19ul}) {
            double want = std::pow(c * static_cast<double>(tau), q);
            CHECK(structureFunction(window, k, q, tau) ==
                  doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("structure function of a constant window is zero and flags a gap") {
    std::vector<double> flat(300, 7.7);
    WeightKernel k = buildKernel(250, 250.0);
    CHECK(structureFunction(std::span<const double>(flat.data(), 250), k, 2.0, 5) ==
          0.0);
    GheConfig cfg;
    HqEstimate e =
        estimateHq(std::span<const double>(flat.data(), 250), k, 1.0, cfg);
    CHECK(e.gap);
}

TEST_CASE("fit layer: xi = tau^(0.5 q) gives h = 0.5 exactly") {
    GheConfig cfg;
    for (double q : {0.1, 1.0, 4.0}) {
        std::vector<double> xi(cfg.tauMax);
        for (std::size_t t = 1; t <= cfg.tauMax; ++t)
            xi[t - 1] = std::pow(static_cast<double>(t), 0.5 * q);
        HqEstimate e = fitHqFromXi(xi, q, cfg.tauMaxRange);
        CHECK(!e.gap);
        CHECK(e.h == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(e.err <= 1e-7);  // cancellation floor of the SE formula, / q
        CHECK(e.quality == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("linear trend scores H = 1 at every q") {
    PriceSeries s = linearLogSeries(900, 0.002);
    GheConfig cfg;
    GheSurface surf = gheSeries(s, cfg);
    for (std::size_t t = 0; t < surf.nTimes(); ++t)
        for (std::size_t qi = 0; qi < surf.nQ(); ++qi)
            CHECK(surf.h(t, qi) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("surface evaluation schedule and day counts") {
    PriceSeries s = grwSeries(260, 3);
    GheConfig cfg;  // dt 250, step 5
    GheSurface surf = gheSeries(s, cfg);
    REQUIRE(surf.nTimes() == 3);
    CHECK(surf.timeIndex == std::vector<std::size_t>{249, 254, 259});
    CHECK(surf.times[0] == s.dates[249]);
    CHECK(surf.qGrid == cfg.qGrid);

    // Caller-chosen end indices match the stride surface row for row.
    GheSurface at = gheSeriesAt(s, cfg, std::vector<std::size_t>{249, 259});
    CHECK(at.h(0, 1) == surf.h(0, 1));
    CHECK(at.h(1, 3) == surf.h(2, 3));
    CHECK(at.timeIndex == std::vector<std::size_t>{249, 259});
}

TEST_CASE("H estimates are invariant under a global price rescale") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 600;
    sp.seed = 9;
    PriceSeries s = generate(sp);
    std::vector<double> scaled = s.close;
    for (double& c : scaled) c *= 12.5;
    PriceSeries s2 = makePriceSeries(s.dates, scaled);
    GheConfig cfg;
    GheSurface a = gheSeries(s, cfg);
    GheSurface b = gheSeries(s2, cfg);
    REQUIRE(a.H.size() == b.H.size());
    for (std::size_t i = 0; i < a.H.size(); ++i)
        CHECK(std::fabs(a.H[i] - b.H[i]) <= 1e-10);
}

TEST_CASE("huge theta reproduces the unweighted structure function") {
    PriceSeries s = grwSeries(300, 17);
    std::size_t dt = 200, e = 280, tau = 7;
    double q = 2.0;
    WeightKernel k = buildKernel(dt, 1e12);
    std::span<const double> window(s.logPrice.data() + (e - dt + 1), dt);
    double acc = 0;
    std::size_t cnt = dt - tau;
    for (std::size_t j = 0; j < cnt; ++j) {
        double d = std::fabs(window[dt - 1 - j] - window[dt - 1 - j - tau]);
        acc += std::pow(d, q);
    }
    double plain = acc / static_cast<double>(cnt);
    CHECK(structureFunction(window, k, q, tau) ==
          doctest::Approx(plain).epsilon(1e-9));
}

TEST_CASE("windowed fast route equals the naive structure function") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 700;
    sp.seed = 23;
    PriceSeries s = generate(sp);
    GheConfig cfg;
    cfg.qGrid = {0.1, 0.7, 1.0, 2.2, 4.0};
    WeightKernel k = buildKernel(cfg.dt, cfg.theta);
    Rng rng(99);
    for (int it = 0; it < 50; ++it) {
        std::size_t e = cfg.dt - 1 +
                        static_cast<std::size_t>(
                            rng.uniform() * double(s.size() - cfg.dt));
        std::vector<double> xi = structureFunctionsAt(s, cfg, e);
        std::span<const double> window(s.logPrice.data() + (e - cfg.dt + 1),
                                       cfg.dt);
        std::size_t qi =
            static_cast<std::size_t>(rng.uniform() * double(cfg.qGrid.size()));
        std::size_t tau =
            1 + static_cast<std::size_t>(rng.uniform() * double(cfg.tauMax));
        double naive = structureFunction(window, k, cfg.qGrid[qi], tau);
        double fast = xi[(tau - 1) * cfg.qGrid.size() + qi];
        CHECK(fast == doctest::Approx(naive).epsilon(1e-10));
    }
}

TEST_CASE("a plain random walk scores H near one half") {
    SynthSpec sp;
    sp.kind = SynthKind::RandomWalk;
    sp.length = 2000;
    sp.seed = 41;
    PriceSeries s = generate(sp);
    GheConfig cfg;
    GheSurface surf = gheSeries(s, cfg);
    double h1 = meanFinite(surf.track(surf.qIndex(1.0)));
    CHECK(h1 > 0.45);
    CHECK(h1 < 0.55);
}

TEST_CASE("config validation rejects broken setups") {
    GheConfig cfg;
    cfg.dt = 15;  // < tauMax + 2
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GheConfig{};
    cfg.qGrid = {1.0, 0.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GheConfig{};
    cfg.qGrid = {-0.5, 1.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GheConfig{};
    cfg.tauMaxRange = {5, 25};  // above tauMax
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GheConfig{};
    cfg.theta = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_NOTHROW(GheConfig{}.validate());
}
