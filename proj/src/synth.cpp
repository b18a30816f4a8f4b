#include "mscale/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "mscale/rng.hpp"
#include "mscale/stats.hpp"

namespace mscale {

namespace {

// In-place iterative radix-2 Cooley-Tukey, forward sign e^{-2pi i/n}.
void fft(std::vector<std::complex<double>>& a) {
    std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::size_t nextPow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<Date> weekdayDates(Date start, std::size_t n) {
    std::vector<Date> out;
    out.reserve(n);
    std::int64_t s = toSerialDay(start);
    while (out.size() < n) {
        Date d = fromSerialDay(s);
        if (weekdayIndex(d) < 5) out.push_back(d);
        ++s;
    }
    return out;
}

// Log-normal binomial cascade measure over 2^K cells, normalized to unit
// mean. intermittency = variance of the log multiplier.
std::vector<double> cascadeMeasure(std::size_t nCells, double intermittency,
                                   Rng& rng) {
    double s = std::sqrt(intermittency);
    std::vector<double> cells{1.0};
    while (cells.size() < nCells) {
        std::vector<double> next(cells.size() * 2);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            next[2 * i] = cells[i] * std::exp(s * rng.normal() - intermittency / 2);
            next[2 * i + 1] = cells[i] * std::exp(s * rng.normal() - intermittency / 2);
        }
        cells.swap(next);
    }
    double m = mean(cells);
    for (double& c : cells) c /= m;
    return cells;
}

std::vector<double> cascadeIncrements(std::size_t n, double sigma,
                                      double intermittency, Rng& rng) {
    std::vector<double> mu = cascadeMeasure(nextPow2(n), intermittency, rng);
    std::vector<double> inc(n);
    for (std::size_t i = 0; i < n; ++i)
        inc[i] = sigma * std::sqrt(mu[i]) * rng.normal();
    return inc;
}

std::vector<double> fgnFromRng(std::size_t n, double hurst, Rng& rng) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw std::invalid_argument("fgn: hurst must lie in (0, 1)");
    if (n == 0) return {};
    std::size_t m = nextPow2(std::max<std::size_t>(2 * n, 2));
    std::vector<std::complex<double>> c(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t k = std::min(j, m - j);
        c[j] = fgnAutocovariance(hurst, k);
    }
    fft(c);
    std::vector<double> lambda(m);
    double maxL = 0;
    for (std::size_t k = 0; k < m; ++k) {
        lambda[k] = c[k].real();
        maxL = std::max(maxL, lambda[k]);
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (lambda[k] < 0) {
            if (lambda[k] < -1e-8 * maxL)
                throw std::runtime_error("fgn: circulant embedding not nonnegative");
            lambda[k] = 0;
        }
    }

    std::vector<std::complex<double>> v(m);
    v[0] = std::sqrt(lambda[0]) * rng.normal();
    v[m / 2] = std::sqrt(lambda[m / 2]) * rng.normal();
    for (std::size_t k = 1; k < m / 2; ++k) {
        double re = rng.normal(), im = rng.normal();
        double amp = std::sqrt(lambda[k] / 2.0);
        v[k] = std::complex<double>(amp * re, amp * im);
        v[m - k] = std::conj(v[k]);
    }
    fft(v);
    std::vector<double> out(n);
    double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t t = 0; t < n; ++t) out[t] = v[t].real() * norm;
    return out;
}

std::vector<double> segmentIncrements(const SynthSegment& seg, std::size_t count,
                                      Rng& rng) {
    switch (seg.kind) {
        case SynthKind::RandomWalk: {
            std::vector<double> inc(count);
            for (double& x : inc) x = seg.sigma * rng.normal();
            return inc;
        }
        case SynthKind::Fbm: {
            std::vector<double> g = fgnFromRng(count, seg.hurst, rng);
            for (double& x : g) x *= seg.sigma;
            return g;
        }
        case SynthKind::Cascade:
            return cascadeIncrements(count, seg.sigma, seg.intermittency, rng);
        case SynthKind::Piecewise:
            throw std::invalid_argument("piecewise segments cannot nest");
    }
    throw std::logic_error("unreachable");
}

}  // namespace

const char* synthKindName(SynthKind k) {
    switch (k) {
        case SynthKind::RandomWalk: return "randomWalk";
        case SynthKind::Fbm: return "fbm";
        case SynthKind::Cascade: return "cascade";
        case SynthKind::Piecewise: return "piecewise";
    }
    throw std::logic_error("unreachable");
}

SynthKind synthKindFromName(const std::string& name) {
    if (name == "randomWalk") return SynthKind::RandomWalk;
    if (name == "fbm") return SynthKind::Fbm;
    if (name == "cascade") return SynthKind::Cascade;
    if (name == "piecewise") return SynthKind::Piecewise;
    throw std::invalid_argument("unknown synthetic kind '" + name + "'");
}

double fgnAutocovariance(double hurst, std::size_t lag) {
    double k = static_cast<double>(lag);
    double h2 = 2.0 * hurst;
    if (lag == 0) return 1.0;
    return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) +
                  std::pow(k - 1.0, h2));
}

std::vector<double> fractionalGaussianNoise(std::size_t n, double hurst,
                                            std::uint64_t seed) {
    Rng rng(seed);
    return fgnFromRng(n, hurst, rng);
}

void SynthSpec::validate() const {
    if (kind == SynthKind::Piecewise) {
        if (segments.empty())
            throw std::invalid_argument("synth: piecewise needs segments");
        std::size_t total = 0;
        for (const auto& s : segments) {
            if (s.kind == SynthKind::Piecewise)
                throw std::invalid_argument("synth: piecewise segments cannot nest");
            if (s.length < 2)
                throw std::invalid_argument("synth: segment length must be >= 2");
            if (!(s.sigma > 0))
                throw std::invalid_argument("synth: sigma must be > 0");
            if (s.kind == SynthKind::Fbm && !(s.hurst > 0 && s.hurst < 1))
                throw std::invalid_argument("synth: hurst must lie in (0, 1)");
            if (s.kind == SynthKind::Cascade && !(s.intermittency > 0))
                throw std::invalid_argument("synth: intermittency must be > 0");
            total += s.length;
        }
        if (total < 512)
            throw std::invalid_argument("synth: total length must be >= 512");
        return;
    }
    if (length < 512) throw std::invalid_argument("synth: length must be >= 512");
    if (!(sigma > 0)) throw std::invalid_argument("synth: sigma must be > 0");
    if (kind == SynthKind::Fbm && !(hurst > 0 && hurst < 1))
        throw std::invalid_argument("synth: hurst must lie in (0, 1)");
    if (kind == SynthKind::Cascade && !(intermittency > 0))
        throw std::invalid_argument("synth: intermittency must be > 0");
    if (!(startPrice > 0))
        throw std::invalid_argument("synth: startPrice must be > 0");
}

PriceSeries generate(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    std::vector<SynthSegment> segs;
    if (spec.kind == SynthKind::Piecewise) {
        segs = spec.segments;
    } else {
        segs.push_back(SynthSegment{spec.kind, spec.length, spec.sigma, spec.hurst,
                                    spec.intermittency});
    }

    std::vector<double> logPrice;
    logPrice.push_back(std::log(spec.startPrice));
    bool first = true;
    for (const auto& seg : segs) {
        // The first segment's first point is the anchor; later segments join
        // continuously, contributing seg.length increments.
        std::size_t count = first ? seg.length - 1 : seg.length;
        first = false;
        std::vector<double> inc = segmentIncrements(seg, count, rng);
        for (double dx : inc) logPrice.push_back(logPrice.back() + dx);
    }

    std::vector<double> close(logPrice.size());
    for (std::size_t i = 0; i < close.size(); ++i) close[i] = std::exp(logPrice[i]);
    std::vector<Date> dates = weekdayDates(spec.startDate, close.size());
    return makePriceSeries(std::move(dates), std::move(close));
}

}  // namespace mscale
