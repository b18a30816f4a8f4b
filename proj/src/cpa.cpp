#include "mscale/cpa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mscale/stats.hpp"

namespace mscale {

std::size_t TrendSegmentation::binOf(std::size_t idx) const {
    if (breakpoints.size() < 2 || idx >= breakpoints.back())
        throw std::out_of_range("binOf: index outside segmentation");
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), idx);
    return static_cast<std::size_t>(it - breakpoints.begin()) - 1;
}

namespace {

// Prefix moments with the global point index as abscissa; long double keeps
// the central-moment cancellation harmless at series lengths ~1e4.
struct SegmentCost {
    std::vector<long double> sx, sy, sxx, sxy, syy;

    explicit SegmentCost(std::span<const double> y) {
        std::size_t n = y.size();
        sx.assign(n + 1, 0);
        sy.assign(n + 1, 0);
        sxx.assign(n + 1, 0);
        sxy.assign(n + 1, 0);
        syy.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            long double x = static_cast<long double>(i);
            long double v = y[i];
            sx[i + 1] = sx[i] + x;
            sy[i + 1] = sy[i] + v;
            sxx[i + 1] = sxx[i] + x * x;
            sxy[i + 1] = sxy[i] + x * v;
            syy[i + 1] = syy[i] + v * v;
        }
    }

    // Linear-fit RSS on [i, j), j - i >= 2.
    double rss(std::size_t i, std::size_t j) const {
        long double m = static_cast<long double>(j - i);
        long double dx = sx[j] - sx[i];
        long double dy = sy[j] - sy[i];
        long double cxx = (sxx[j] - sxx[i]) - dx * dx / m;
        long double cxy = (sxy[j] - sxy[i]) - dx * dy / m;
        long double cyy = (syy[j] - syy[i]) - dy * dy / m;
        if (cxx <= 0) return static_cast<double>(cyy > 0 ? cyy : 0);
        long double r = cyy - cxy * cxy / cxx;
        return static_cast<double>(r > 0 ? r : 0);
    }
};

}  // namespace

std::vector<std::size_t> segmentTrends(std::span<const double> y, double penalty,
                                       std::size_t minBinLength) {
    std::size_t n = y.size();
    if (minBinLength < 3)
        throw std::invalid_argument("segmentTrends: minBinLength must be >= 3");
    if (n < 2 * minBinLength)
        throw std::invalid_argument("segmentTrends: track shorter than two bins");
    if (!(penalty >= 0) || !std::isfinite(penalty))
        throw std::invalid_argument("segmentTrends: penalty must be finite and >= 0");
    for (double v : y)
        if (isGap(v) || !std::isfinite(v))
            throw std::invalid_argument("segmentTrends: track has gaps");

    SegmentCost cost(y);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> F(n + 1, kInf);
    std::vector<std::size_t> prev(n + 1, 0);
    F[0] = 0;

    struct Cand {
        std::size_t idx;
        std::size_t removableAt;  // earliest j where pruning may take effect
    };
    std::vector<Cand> cands{{0, std::numeric_limits<std::size_t>::max()}};

    for (std::size_t j = minBinLength; j <= n; ++j) {
        double best = kInf;
        std::size_t arg = 0;
        // Drop candidates whose deferred removal is now effective. A pruned
        // start i is dominated by some later start only once that start is
        // itself usable, i.e. minBinLength points on.
        std::erase_if(cands, [j](const Cand& c) { return c.removableAt <= j; });
        for (const Cand& c : cands) {
            if (j - c.idx < minBinLength) continue;
            double v = F[c.idx] + cost.rss(c.idx, j);
            if (v < best) {
                best = v;
                arg = c.idx;
            }
        }
        if (best == kInf) continue;  // no feasible start yet
        F[j] = best + penalty;
        prev[j] = arg;
        for (Cand& c : cands) {
            if (j - c.idx < minBinLength) continue;
            if (F[c.idx] + cost.rss(c.idx, j) >= F[j])
                c.removableAt = std::min(c.removableAt, j + minBinLength);
        }
        if (j + minBinLength <= n && std::isfinite(F[j]))
            cands.push_back({j, std::numeric_limits<std::size_t>::max()});
    }

    std::vector<std::size_t> bps{n};
    std::size_t cur = n;
    while (cur != 0) {
        cur = prev[cur];
        bps.push_back(cur);
    }
    std::reverse(bps.begin(), bps.end());
    return bps;
}

double defaultPenalty(std::span<const double> y, double scale) {
    LinearFit f = fitLineIndexed(y, 0, y.size());
    if (f.n < 3) throw std::invalid_argument("defaultPenalty: track too short");
    // Residual variance recovered from the slope SE identity.
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!isGap(y[i])) {
            xs.push_back(static_cast<double>(i));
            ys.push_back(y[i]);
        }
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (f.intercept + f.slope * xs[i]);
        rss += r * r;
    }
    double sigma2 = rss / static_cast<double>(xs.size() - 2);
    return scale * sigma2 * std::log(static_cast<double>(xs.size()));
}

std::vector<double> binSlopes(std::span<const double> y,
                              std::span<const std::size_t> breakpoints,
                              std::vector<double>* se) {
    if (breakpoints.size() < 2 || breakpoints.front() != 0 ||
        breakpoints.back() != y.size())
        throw std::invalid_argument("binSlopes: malformed breakpoints");
    std::size_t nb = breakpoints.size() - 1;
    std::vector<double> slopes(nb, kNaN);
    if (se) se->assign(nb, kNaN);
    for (std::size_t i = 0; i < nb; ++i) {
        LinearFit f = fitLineIndexed(y, breakpoints[i], breakpoints[i + 1]);
        if (f.n < 3) continue;
        slopes[i] = f.slope;
        if (se) (*se)[i] = f.slopeSE;
    }
    return slopes;
}

TrendSegmentation sharedSegmentation(std::span<const double> trackQ1,
                                     std::span<const double> trackQ2,
                                     double penalty, std::size_t minBinLength) {
    if (trackQ1.size() != trackQ2.size())
        throw std::invalid_argument("sharedSegmentation: track length mismatch");
    TrendSegmentation seg;
    seg.breakpoints = segmentTrends(trackQ1, penalty, minBinLength);
    seg.slopeQ1 = binSlopes(trackQ1, seg.breakpoints, &seg.seQ1);
    seg.slopeQ2 = binSlopes(trackQ2, seg.breakpoints, &seg.seQ2);
    for (std::size_t i = 0; i < seg.nBins(); ++i)
        if (isGap(seg.slopeQ1[i]) || isGap(seg.slopeQ2[i]))
            throw std::invalid_argument("sharedSegmentation: bin with too few points");
    return seg;
}

SlopeSpread surrogateSlopeSpread(std::span<const double> surrQ1,
                                 std::span<const double> surrQ2,
                                 std::span<const std::size_t> breakpoints) {
    if (surrQ1.size() != surrQ2.size())
        throw std::invalid_argument("surrogateSlopeSpread: track length mismatch");
    SlopeSpread sp;
    sp.slopesQ1 = binSlopes(surrQ1, breakpoints);
    sp.slopesQ2 = binSlopes(surrQ2, breakpoints);
    std::size_t nb = sp.slopesQ1.size();
    sp.binUsed.resize(nb);
    std::vector<double> diffs, absDiffs;
    for (std::size_t i = 0; i < nb; ++i) {
        bool ok = !isGap(sp.slopesQ1[i]) && !isGap(sp.slopesQ2[i]);
        sp.binUsed[i] = ok;
        if (ok) {
            diffs.push_back(std::fabs(sp.slopesQ1[i] - sp.slopesQ2[i]));
            absDiffs.push_back(std::fabs(sp.slopesQ1[i]) - std::fabs(sp.slopesQ2[i]));
        }
    }
    if (diffs.size() < 2)
        throw std::invalid_argument(
            "surrogateSlopeSpread: fewer than 2 bins with surrogate coverage");
    sp.sigmaDiff = sampleStd(diffs);
    sp.sigmaAbsDiff = sampleStd(absDiffs);
    return sp;
}

}  // namespace mscale
