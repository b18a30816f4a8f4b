#pragma once

#include <span>
#include <vector>

#include "mscale/ghe.hpp"

namespace mscale {

// Sample standard deviation (N-1) of each q track over the surface timeline,
// gaps skipped. Throws if any q has fewer than 2 finite entries or zero
// dispersion (a degenerate noise reference cannot standardize anything).
std::vector<double> surrogateSigma(const GheSurface& surr);

struct StandardizedSurface {
    std::vector<double> qGrid;
    std::vector<std::size_t> timeIndex;
    std::vector<Date> times;
    std::vector<std::vector<double>> tracks;  // [qi][t], NaN where the input gapped

    std::size_t qIndex(double q) const;
};

// H'_q(t) = (H_q(t) - 0.5) / sigma[qi], entry-wise; gaps propagate.
StandardizedSurface standardize(const GheSurface& s, std::span<const double> sigma);

struct WidthTracks {
    double q1 = 0, q2 = 0;
    double pooledSigma = 0;       // sqrt(sigma_q1^2 + sigma_q2^2)
    std::vector<double> W;        // H_q1 - H_q2
    std::vector<double> Wstd;     // W / pooledSigma
};

// sigma entries align with s.qGrid.
WidthTracks widthTrack(const GheSurface& s, double q1, double q2,
                       std::span<const double> sigma);

struct CurvatureTracks {
    double qLo = 0, qHi = 0;
    std::vector<double> qUsed;    // grid points inside [qLo, qHi]
    std::vector<double> B;        // per-time slope of H_q vs q
    std::vector<double> A;        // per-time intercept
    std::vector<double> r2;
};

// Per-time OLS of H_q against q over the grid points inside [qLo, qHi]
// (at least 3 required). Rows with any gap in the used tracks become gaps.
CurvatureTracks curvatureTrack(const GheSurface& s, double qLo, double qHi);

}  // namespace mscale
