#include "mscale/proxies.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mscale/stats.hpp"

namespace mscale {

std::vector<double> surrogateSigma(const GheSurface& surr) {
    std::vector<double> out(surr.nQ());
    for (std::size_t k = 0; k < surr.nQ(); ++k) {
        auto vals = finiteValues(surr.track(k));
        if (vals.size() < 2)
            throw std::invalid_argument(
                "surrogateSigma: fewer than 2 finite estimates at q = " +
                std::to_string(surr.qGrid[k]));
        double s = sampleStd(vals);
        if (!(s > 0))
            throw std::invalid_argument(
                "surrogateSigma: zero dispersion at q = " +
                std::to_string(surr.qGrid[k]));
        out[k] = s;
    }
    return out;
}

std::size_t StandardizedSurface::qIndex(double q) const {
    for (std::size_t i = 0; i < qGrid.size(); ++i)
        if (std::fabs(qGrid[i] - q) < 1e-9) return i;
    throw std::invalid_argument("q = " + std::to_string(q) +
                                " not in standardized grid");
}

StandardizedSurface standardize(const GheSurface& s, std::span<const double> sigma) {
    if (sigma.size() != s.nQ())
        throw std::invalid_argument("standardize: sigma/grid size mismatch");
    for (double sg : sigma)
        if (!(sg > 0)) throw std::invalid_argument("standardize: sigma must be > 0");
    StandardizedSurface out;
    out.qGrid = s.qGrid;
    out.timeIndex = s.timeIndex;
    out.times = s.times;
    out.tracks.resize(s.nQ());
    for (std::size_t k = 0; k < s.nQ(); ++k) {
        out.tracks[k].resize(s.nTimes());
        for (std::size_t t = 0; t < s.nTimes(); ++t) {
            double h = s.h(t, k);
            out.tracks[k][t] = isGap(h) ? kNaN : (h - 0.5) / sigma[k];
        }
    }
    return out;
}

WidthTracks widthTrack(const GheSurface& s, double q1, double q2,
                       std::span<const double> sigma) {
    if (sigma.size() != s.nQ())
        throw std::invalid_argument("widthTrack: sigma/grid size mismatch");
    std::size_t i1 = s.qIndex(q1), i2 = s.qIndex(q2);
    WidthTracks w;
    w.q1 = q1;
    w.q2 = q2;
    w.pooledSigma = std::sqrt(sigma[i1] * sigma[i1] + sigma[i2] * sigma[i2]);
    if (!(w.pooledSigma > 0))
        throw std::invalid_argument("widthTrack: degenerate pooled sigma");
    w.W.resize(s.nTimes());
    w.Wstd.resize(s.nTimes());
    for (std::size_t t = 0; t < s.nTimes(); ++t) {
        double a = s.h(t, i1), b = s.h(t, i2);
        if (isGap(a) || isGap(b)) {
            w.W[t] = kNaN;
            w.Wstd[t] = kNaN;
        } else {
            w.W[t] = a - b;
            w.Wstd[t] = w.W[t] / w.pooledSigma;
        }
    }
    return w;
}

CurvatureTracks curvatureTrack(const GheSurface& s, double qLo, double qHi) {
    CurvatureTracks c;
    c.qLo = qLo;
    c.qHi = qHi;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < s.nQ(); ++k) {
        if (s.qGrid[k] >= qLo - 1e-12 && s.qGrid[k] <= qHi + 1e-12) {
            idx.push_back(k);
            c.qUsed.push_back(s.qGrid[k]);
        }
    }
    if (idx.size() < 3)
        throw std::invalid_argument(
            "curvatureTrack: need at least 3 grid points inside the fit range");

    c.B.resize(s.nTimes());
    c.A.resize(s.nTimes());
    c.r2.resize(s.nTimes());
    std::vector<double> hs(idx.size());
    for (std::size_t t = 0; t < s.nTimes(); ++t) {
        bool gap = false;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            hs[j] = s.h(t, idx[j]);
            if (isGap(hs[j])) gap = true;
        }
        if (gap) {
            c.B[t] = kNaN;
            c.A[t] = kNaN;
            c.r2[t] = kNaN;
            continue;
        }
        LinearFit f = fitLine(c.qUsed, hs);
        c.B[t] = f.slope;
        c.A[t] = f.intercept;
        c.r2[t] = f.r2;
    }
    return c;
}

}  // namespace mscale
