#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace mscale {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline bool isGap(double v) { return std::isnan(v); }

// Compensated (Kahan) summation.
inline double kahanSum(std::span<const double> xs) {
    double sum = 0.0, c = 0.0;
    for (double x : xs) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty input");
    return kahanSum(xs) / static_cast<double>(xs.size());
}

// Sample standard deviation (N-1 denominator).
inline double sampleStd(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("sampleStd: need at least 2 values");
    double m = mean(xs);
    double acc = 0.0, c = 0.0;
    for (double x : xs) {
        double d = (x - m) * (x - m) - c;
        double t = acc + d;
        c = (t - acc) - d;
        acc = t;
    }
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

// Mean / sample std over finite entries only. Throw if too few.
inline std::vector<double> finiteValues(std::span<const double> xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs)
        if (!isGap(x)) out.push_back(x);
    return out;
}

inline double meanFinite(std::span<const double> xs) {
    auto v = finiteValues(xs);
    return mean(v);
}

inline double sampleStdFinite(std::span<const double> xs) {
    auto v = finiteValues(xs);
    return sampleStd(v);
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("pearson: size mismatch or too short");
    double ma = mean(a), mb = mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0 || sbb <= 0)
        throw std::invalid_argument("pearson: zero variance input");
    return sab / std::sqrt(saa * sbb);
}

struct LinearFit {
    double slope = kNaN;
    double intercept = kNaN;
    double slopeSE = kNaN;
    double r2 = kNaN;
    std::size_t n = 0;
};

// OLS of y on x. Needs n >= 2 and non-degenerate x.
// With n == 2 the fit is exact: slopeSE = 0, r2 = 1.
inline LinearFit fitLine(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fitLine: size mismatch");
    std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fitLine: need at least 2 points");
    double mx = mean(x), my = mean(y);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0) throw std::invalid_argument("fitLine: degenerate abscissa");
    LinearFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = syy - f.slope * sxy;
    if (rss < 0) rss = 0;  // roundoff
    if (n > 2) {
        f.slopeSE = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
        f.r2 = syy > 0 ? 1.0 - rss / syy : 1.0;
    } else {
        f.slopeSE = 0.0;
        f.r2 = 1.0;
    }
    return f;
}

// OLS of y on its integer index, skipping gaps. Returns n = number of finite
// points used; callers must check n before trusting slope.
inline LinearFit fitLineIndexed(std::span<const double> y, std::size_t first,
                                std::size_t last) {
    std::vector<double> xs, ys;
    xs.reserve(last - first);
    ys.reserve(last - first);
    for (std::size_t i = first; i < last; ++i) {
        if (!isGap(y[i])) {
            xs.push_back(static_cast<double>(i));
            ys.push_back(y[i]);
        }
    }
    if (xs.size() < 2) {
        LinearFit f;
        f.n = xs.size();
        return f;
    }
    return fitLine(xs, ys);
}

}  // namespace mscale
