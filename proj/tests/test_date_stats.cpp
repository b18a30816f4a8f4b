#include "doctest.h"

#include <cmath>
#include <vector>

#include "mscale/date.hpp"
#include "mscale/rng.hpp"
#include "mscale/stats.hpp"

using namespace mscale;

TEST_CASE("serial day round trip and known anchors") {
    CHECK(toSerialDay({1970, 1, 1}) == 0);
    CHECK(toSerialDay({1970, 1, 2}) == 1);
    CHECK(toSerialDay({1969, 12, 31}) == -1);
    CHECK(toSerialDay({2000, 3, 1}) == 11017);  // leap year 2000
    CHECK(toSerialDay({1987, 10, 19}) == 6500);
    for (std::int64_t d = -200000; d <= 200000; d += 37) {
        Date x = fromSerialDay(d);
        CHECK(isValidDate(x));
        CHECK(toSerialDay(x) == d);
    }
}

TEST_CASE("weekday index") {
    CHECK(weekdayIndex({1970, 1, 1}) == 3);   // Thursday
    CHECK(weekdayIndex({1987, 10, 19}) == 0); // Black Monday
    CHECK(weekdayIndex({2026, 8, 16}) == 6);  // Sunday
}

TEST_CASE("date validation rejects impossible dates") {
    CHECK(isValidDate({2024, 2, 29}));
    CHECK(!isValidDate({2023, 2, 29}));
    CHECK(!isValidDate({2023, 4, 31}));
    CHECK(!isValidDate({2023, 13, 1}));
    CHECK(!isValidDate({2023, 0, 10}));
    CHECK(!isValidDate({2023, 6, 0}));
}

TEST_CASE("date parse and format") {
    CHECK(parseDate("1987-10-19") == Date{1987, 10, 19});
    CHECK(formatDate({1987, 10, 19}) == "1987-10-19");
    CHECK(formatDate({452, 3, 7}) == "0452-03-07");
    CHECK(parseDate("10/19/1987", "%m/%d/%Y") == Date{1987, 10, 19});
    CHECK(parseDate("3/7/1952", "%m/%d/%Y") == Date{1952, 3, 7});
    CHECK(parseDate("19-Oct-1987", "%d-%b-%Y") == Date{1987, 10, 19});
    CHECK(parseDate("19-OCT-1987", "%d-%b-%Y") == Date{1987, 10, 19});
    CHECK_THROWS_AS(parseDate("1987-13-19"), std::invalid_argument);
    CHECK_THROWS_AS(parseDate("1987/10/19"), std::invalid_argument);
    CHECK_THROWS_AS(parseDate("not a date"), std::invalid_argument);
    CHECK_THROWS_AS(parseDate("19-Xyz-1987", "%d-%b-%Y"), std::invalid_argument);
}

TEST_CASE("date ordering") {
    CHECK(Date{1987, 10, 16} < Date{1987, 10, 19});
    CHECK(Date{1987, 9, 30} < Date{1987, 10, 1});
    CHECK(Date{1986, 12, 31} < Date{1987, 1, 1});
}

TEST_CASE("mean, std, pearson basics") {
    std::vector<double> xs{1, 2, 3, 4};
    CHECK(mean(xs) == doctest::Approx(2.5));
    CHECK(sampleStd(xs) == doctest::Approx(std::sqrt(5.0 / 3.0)));
    std::vector<double> withGaps{1, kNaN, 3, kNaN};
    CHECK(meanFinite(withGaps) == doctest::Approx(2.0));
    std::vector<double> a{1, 2, 3, 4, 5}, b{2, 4, 6, 8, 10}, c{5, 4, 3, 2, 1};
    CHECK(pearson(a, b) == doctest::Approx(1.0));
    CHECK(pearson(a, c) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(mean(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("line fit recovers exact lines and flags degenerate input") {
    std::vector<double> x{0, 1, 2, 3, 4, 5}, y;
    for (double xi : x) y.push_back(3.0 - 0.25 * xi);
    LinearFit f = fitLine(x, y);
    CHECK(f.slope == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.slopeSE == doctest::Approx(0.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    std::vector<double> flat{1, 1, 1, 1};
    CHECK_THROWS_AS(fitLine(flat, flat), std::invalid_argument);

    // Indexed fit skips gaps and uses the original index as abscissa.
    std::vector<double> g{0.0, kNaN, 2.0, kNaN, 4.0};
    LinearFit fi = fitLineIndexed(g, 0, g.size());
    CHECK(fi.n == 3);
    CHECK(fi.slope == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("slope standard error matches the textbook formula") {
    // y = 2x + noise laid out by hand; compare against a direct evaluation.
    std::vector<double> x{0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<double> y{0.1, 2.0, 4.2, 5.9, 8.1, 10.0, 12.2, 13.9};
    LinearFit f = fitLine(x, y);
    double mx = mean(x);
    double rss = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        rss += e * e;
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    CHECK(f.slopeSE ==
          doctest::Approx(std::sqrt(rss / (double(x.size()) - 2) / sxx))
              .epsilon(1e-12));
}

TEST_CASE("rng is deterministic and its normals have the right moments") {
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    Rng r(2025);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        double z = r.normal();
        s += z;
        s2 += z * z;
    }
    double m = s / n, v = s2 / n - m * m;
    CHECK(std::fabs(m) < 0.01);
    CHECK(v == doctest::Approx(1.0).epsilon(0.02));
}
