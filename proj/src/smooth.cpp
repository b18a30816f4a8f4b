#include "mscale/smooth.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "mscale/stats.hpp"

namespace mscale {

void SmoothConfig::validate() const {
    if (order < 1 || order > 4)
        throw std::invalid_argument("smooth config: order must lie in [1, 4]");
    if (windowPoints < static_cast<std::size_t>(order) + 2)
        throw std::invalid_argument("smooth config: windowPoints must be >= order + 2");
}

namespace {

// Least-squares polynomial value at x = 0 from points (x_j, y_j), solved by
// normal equations with partial-pivot elimination. Abscissas are window
// offsets (|x| < windowPoints) so the moment matrix stays well conditioned.
double polyValueAtZero(const std::vector<double>& xs, const std::vector<double>& ys,
                       int order) {
    int m = order + 1;
    std::array<std::array<double, 6>, 5> a{};  // [m][m+1] augmented
    std::array<double, 9> moments{};           // sums of x^0 .. x^{2*order}
    std::array<double, 5> rhs{};
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double p = 1.0;
        for (int k = 0; k <= 2 * order; ++k) {
            moments[static_cast<std::size_t>(k)] += p;
            p *= xs[j];
        }
        p = 1.0;
        for (int k = 0; k <= order; ++k) {
            rhs[static_cast<std::size_t>(k)] += p * ys[j];
            p *= xs[j];
        }
    }
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c)
            a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                moments[static_cast<std::size_t>(r + c)];
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)] =
            rhs[static_cast<std::size_t>(r)];
    }
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::fabs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::fabs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(piv)]);
        double d = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        if (d == 0.0) return kNaN;
        for (int r = col + 1; r < m; ++r) {
            double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / d;
            for (int c = col; c <= m; ++c)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
        }
    }
    std::array<double, 5> coef{};
    for (int r = m - 1; r >= 0; --r) {
        double v = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)];
        for (int c = r + 1; c < m; ++c)
            v -= a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] *
                 coef[static_cast<std::size_t>(c)];
        coef[static_cast<std::size_t>(r)] =
            v / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
    }
    return coef[0];  // polynomial value at x = 0
}

}  // namespace

std::vector<double> smoothTrack(std::span<const double> y, const SmoothConfig& cfg) {
    cfg.validate();
    std::size_t n = y.size();
    std::vector<double> out(n, kNaN);
    if (n == 0) return out;

    std::size_t back, fwd;
    if (cfg.mode == SmoothMode::Centered) {
        back = cfg.windowPoints / 2;
        fwd = cfg.windowPoints - 1 - back;
    } else {
        back = cfg.windowPoints - 1;
        fwd = 0;
    }

    std::vector<double> xs, ys;
    xs.reserve(cfg.windowPoints);
    ys.reserve(cfg.windowPoints);
    std::size_t need = static_cast<std::size_t>(cfg.order) + 2;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i >= back ? i - back : 0;
        std::size_t hi = std::min(n - 1, i + fwd);
        xs.clear();
        ys.clear();
        for (std::size_t j = lo; j <= hi; ++j) {
            if (!isGap(y[j])) {
                xs.push_back(static_cast<double>(j) - static_cast<double>(i));
                ys.push_back(y[j]);
            }
        }
        if (xs.size() < need) continue;
        out[i] = polyValueAtZero(xs, ys, cfg.order);
    }
    return out;
}

}  // namespace mscale
