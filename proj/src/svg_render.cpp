#include "mscale/svg_render.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <vector>

#include "mscale/smooth.hpp"

namespace mscale {

namespace {

#if defined(__GNUC__)
__attribute__((format(printf, 2, 3)))
#endif
void appendf(std::string& out, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    int k = std::vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    if (k > 0) out.append(buf, std::min<std::size_t>(static_cast<std::size_t>(k),
                                                     sizeof(buf) - 1));
}

std::string fmtCoord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmtTick(double v) {
    if (v == 0) v = 0;  // normalize -0
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::vector<double> niceTicks(double lo, double hi, int target) {
    double range = hi - lo;
    if (!(range > 0)) range = 1;
    double rough = range / target;
    double mag = std::pow(10.0, std::floor(std::log10(rough)));
    double norm = rough / mag;
    double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
    std::vector<double> out;
    double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 1e-9 * range; v += step)
        out.push_back(v == 0 ? 0.0 : v);
    return out;
}

const char* bandColor(PatternLabel base) {
    switch (base) {
        case PatternLabel::S: return "#d9d9d9";
        case PatternLabel::M: return "#4292c6";
        case PatternLabel::ML: return "#b3cde3";
        case PatternLabel::Am: return "#e6550d";
        case PatternLabel::Ap: return "#31a354";
        case PatternLabel::A0: return "#756bb1";
        case PatternLabel::mAm: return "#fdae6b";
        case PatternLabel::mAp: return "#a1d99b";
        case PatternLabel::mA0: return "#bcbddc";
        case PatternLabel::AL: return "#fec44f";
        case PatternLabel::mAL: return "#fee391";
        default: break;
    }
    return "#d9d9d9";
}

struct TrackPoint {
    double idx;  // series index
    double v;
};

// One polyline per contiguous finite run.
std::string pathFor(const std::vector<TrackPoint>& pts,
                    double (*xf)(double, const void*), const void* xc,
                    double lo, double hi, double top, double height) {
    std::string d;
    bool pen = false;
    for (const auto& p : pts) {
        if (!std::isfinite(p.v)) {
            pen = false;
            continue;
        }
        double x = xf(p.idx, xc);
        double y = top + height - (p.v - lo) / (hi - lo) * height;
        d += pen ? " L" : (d.empty() ? "M" : " M");
        d += fmtCoord(x);
        d += " ";
        d += fmtCoord(y);
        pen = true;
    }
    return d;
}

struct XMap {
    double marginL, plotW, maxIdx;
};

double xAt(double idx, const void* ctx) {
    const auto* m = static_cast<const XMap*>(ctx);
    return m->marginL + idx / m->maxIdx * m->plotW;
}

struct SeriesSpec {
    std::vector<TrackPoint> pts;
    const char* color;
    double widthPx;
    bool dashed;
    std::string name;  // inline legend entry; empty = hidden
};

}  // namespace

std::string renderPanels(const AnalysisResult& res, const PlotOptions& opts) {
    const MetricStage& ws = res.widthStage;
    if (ws.timeline.size() == 0)
        throw std::invalid_argument("plot: width-stage timeline is empty");
    bool curv = res.curvStage.has_value();
    if (curv && res.curvStage->timeline.size() == 0)
        throw std::invalid_argument("plot: curvature-stage timeline is empty");

    const PriceSeries& S = res.series;
    std::size_t n = S.size();
    const int W = opts.width;
    const int PH = opts.panelHeight;
    const double marginL = 64, marginR = 56;
    const double plotW = W - marginL - marginR;
    const int nPanels = curv ? 5 : 3;
    const int panelGap = 26;
    const int topY = 40;
    XMap xm{marginL, plotW, static_cast<double>(n - 1)};

    // Legend lists every label that occurs in either timeline, once.
    std::set<int> present;
    for (PatternLabel l : ws.timeline.labels) present.insert(static_cast<int>(l));
    if (curv)
        for (PatternLabel l : res.curvStage->timeline.labels)
            present.insert(static_cast<int>(l));
    const int legendItemW = 74, legendRowH = 20;
    int perRow = std::max(1, static_cast<int>((W - 2 * 16) / legendItemW));
    int legendRows = (static_cast<int>(present.size()) + perRow - 1) / perRow;
    const int panelsBottom = topY + nPanels * (PH + panelGap);
    const int legendTop = panelsBottom + 14;
    const int H = legendTop + legendRows * legendRowH + 16;

    std::string svg;
    svg.reserve(1 << 20);
    appendf(svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
            "viewBox=\"0 0 %d %d\" font-family=\"Helvetica, Arial, sans-serif\">\n",
            W, H, W, H);
    appendf(svg, "<rect width=\"%d\" height=\"%d\" fill=\"#ffffff\"/>\n", W, H);
    svg += "<defs><pattern id=\"revhatch\" width=\"6\" height=\"6\" "
           "patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">"
           "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#555555\" "
           "stroke-width=\"1.2\"/></pattern></defs>\n";
    appendf(svg,
            "<text x=\"%s\" y=\"24\" font-size=\"15\" fill=\"#222222\">%s</text>\n",
            fmtCoord(marginL).c_str(), opts.title.c_str());

    double halfStep = static_cast<double>(res.cfg.ghe.step) * 0.5;

    auto drawBands = [&](const PatternTimeline& tl, double top) {
        std::size_t i = 0;
        while (i < tl.size()) {
            std::size_t j = i + 1;
            while (j < tl.size() && tl.labels[j] == tl.labels[i]) ++j;
            double x0 = xAt(static_cast<double>(tl.timeIndex[i]) - halfStep, &xm);
            double x1 = xAt(static_cast<double>(tl.timeIndex[j - 1]) + halfStep, &xm);
            x0 = std::max(x0, marginL);
            x1 = std::min(x1, marginL + plotW);
            PatternLabel base = baseVariant(tl.labels[i]);
            appendf(svg,
                    "<rect x=\"%s\" y=\"%s\" width=\"%s\" height=\"%d\" fill=\"%s\" "
                    "fill-opacity=\"0.35\"/>\n",
                    fmtCoord(x0).c_str(), fmtCoord(top).c_str(),
                    fmtCoord(x1 - x0).c_str(), PH, bandColor(base));
            if (isReversedLabel(tl.labels[i]))
                appendf(svg,
                        "<rect x=\"%s\" y=\"%s\" width=\"%s\" height=\"%d\" "
                        "fill=\"url(#revhatch)\" fill-opacity=\"0.5\"/>\n",
                        fmtCoord(x0).c_str(), fmtCoord(top).c_str(),
                        fmtCoord(x1 - x0).c_str(), PH);
            i = j;
        }
    };

    auto drawPanel = [&](int slot, const char* caption,
                         const std::vector<SeriesSpec>& series,
                         const std::vector<double>& guides,
                         const PatternTimeline* bands, bool lastPanel) {
        double top = topY + slot * (PH + panelGap);
        // Data range.
        double lo = 1e300, hi = -1e300;
        for (const auto& sp : series)
            for (const auto& p : sp.pts)
                if (std::isfinite(p.v)) {
                    lo = std::min(lo, p.v);
                    hi = std::max(hi, p.v);
                }
        for (double g : guides) {
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
        if (!(lo < hi)) {
            lo -= 0.5;
            hi += 0.5;
        }
        double pad = (hi - lo) * 0.06;
        lo -= pad;
        hi += pad;

        appendf(svg,
                "<rect x=\"%s\" y=\"%s\" width=\"%s\" height=\"%d\" fill=\"none\" "
                "stroke=\"#888888\" stroke-width=\"1\"/>\n",
                fmtCoord(marginL).c_str(), fmtCoord(top).c_str(),
                fmtCoord(plotW).c_str(), PH);
        if (bands) drawBands(*bands, top);

        for (double tv : niceTicks(lo, hi, 4)) {
            double y = top + PH - (tv - lo) / (hi - lo) * PH;
            appendf(svg,
                    "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"#dddddd\" "
                    "stroke-width=\"0.6\"/>\n",
                    fmtCoord(marginL).c_str(), fmtCoord(y).c_str(),
                    fmtCoord(marginL + plotW).c_str(), fmtCoord(y).c_str());
            appendf(svg,
                    "<text x=\"%s\" y=\"%s\" font-size=\"10\" fill=\"#444444\" "
                    "text-anchor=\"end\">%s</text>\n",
                    fmtCoord(marginL - 6).c_str(), fmtCoord(y + 3.5).c_str(),
                    fmtTick(tv).c_str());
        }
        // Date ticks: gridlines on every panel, labels on the last one.
        for (int k = 0; k <= 5; ++k) {
            std::size_t idx = static_cast<std::size_t>(
                std::llround(static_cast<double>(k) * static_cast<double>(n - 1) / 5.0));
            double x = xAt(static_cast<double>(idx), &xm);
            appendf(svg,
                    "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"#eeeeee\" "
                    "stroke-width=\"0.6\"/>\n",
                    fmtCoord(x).c_str(), fmtCoord(top).c_str(), fmtCoord(x).c_str(),
                    fmtCoord(top + PH).c_str());
            if (lastPanel)
                appendf(svg,
                        "<text x=\"%s\" y=\"%s\" font-size=\"10\" fill=\"#444444\" "
                        "text-anchor=\"middle\">%s</text>\n",
                        fmtCoord(x).c_str(), fmtCoord(top + PH + 14).c_str(),
                        formatDate(S.dates[idx]).c_str());
        }
        for (double g : guides) {
            double y = top + PH - (g - lo) / (hi - lo) * PH;
            appendf(svg,
                    "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"#999999\" "
                    "stroke-width=\"0.8\" stroke-dasharray=\"2 3\"/>\n",
                    fmtCoord(marginL).c_str(), fmtCoord(y).c_str(),
                    fmtCoord(marginL + plotW).c_str(), fmtCoord(y).c_str());
        }
        for (const auto& sp : series) {
            std::string d = pathFor(sp.pts, xAt, &xm, lo, hi, top, PH);
            if (d.empty()) continue;
            appendf(svg,
                    "<path d=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"%s\"%s/>\n",
                    d.c_str(), sp.color, fmtCoord(sp.widthPx).c_str(),
                    sp.dashed ? " stroke-dasharray=\"5 3\"" : "");
        }
        appendf(svg,
                "<text x=\"%s\" y=\"%s\" font-size=\"11\" fill=\"#222222\">%s</text>\n",
                fmtCoord(marginL + 6).c_str(), fmtCoord(top + 14).c_str(), caption);
        // Inline legend, right-aligned.
        double lx = marginL + plotW - 8;
        for (auto it = series.rbegin(); it != series.rend(); ++it) {
            if (it->name.empty()) continue;
            double tw = 6.2 * static_cast<double>(it->name.size());
            lx -= tw;
            appendf(svg,
                    "<text x=\"%s\" y=\"%s\" font-size=\"10\" fill=\"#333333\">%s</text>\n",
                    fmtCoord(lx).c_str(), fmtCoord(top + 13).c_str(), it->name.c_str());
            lx -= 22;
            appendf(svg,
                    "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"%s\" "
                    "stroke-width=\"2\"%s/>\n",
                    fmtCoord(lx).c_str(), fmtCoord(top + 9.5).c_str(),
                    fmtCoord(lx + 18).c_str(), fmtCoord(top + 9.5).c_str(), it->color,
                    it->dashed ? " stroke-dasharray=\"5 3\"" : "");
            lx -= 14;
        }
        return top;
    };

    char nameBuf[96];

    // (a) price with volatility on a secondary axis.
    {
        std::vector<SeriesSpec> series;
        SeriesSpec price;
        price.color = "#1f77b4";
        price.widthPx = 1.2;
        price.dashed = false;
        price.name = "close";
        for (std::size_t i = 0; i < n; ++i)
            price.pts.push_back({static_cast<double>(i), S.close[i]});
        series.push_back(std::move(price));
        double top = drawPanel(0, "(a) price", series, {}, nullptr, false);

        // Volatility drawn on its own scale with right-hand ticks.
        double vlo = 1e300, vhi = -1e300;
        for (double v : res.vol.value)
            if (std::isfinite(v)) {
                vlo = std::min(vlo, v);
                vhi = std::max(vhi, v);
            }
        if (!(vlo < vhi)) {
            vlo -= 0.5;
            vhi += 0.5;
        }
        double vpad = (vhi - vlo) * 0.06;
        vlo -= vpad;
        vhi += vpad;
        std::vector<TrackPoint> vp;
        for (std::size_t i = 0; i < res.vol.value.size(); ++i)
            vp.push_back({static_cast<double>(res.vol.firstIndex() + i),
                          res.vol.value[i]});
        std::string d = pathFor(vp, xAt, &xm, vlo, vhi, top, PH);
        appendf(svg,
                "<path d=\"%s\" fill=\"none\" stroke=\"#d62728\" "
                "stroke-width=\"0.9\"/>\n",
                d.c_str());
        for (double tv : niceTicks(vlo, vhi, 3)) {
            double y = top + PH - (tv - vlo) / (vhi - vlo) * PH;
            appendf(svg,
                    "<text x=\"%s\" y=\"%s\" font-size=\"10\" fill=\"#d62728\" "
                    "text-anchor=\"start\">%s</text>\n",
                    fmtCoord(marginL + plotW + 6).c_str(), fmtCoord(y + 3.5).c_str(),
                    fmtTick(tv).c_str());
        }
        appendf(svg,
                "<text x=\"%s\" y=\"%s\" font-size=\"10\" fill=\"#d62728\">volatility"
                "</text>\n",
                fmtCoord(marginL + plotW - 148).c_str(), fmtCoord(top + 13).c_str());
    }

    // (b) standardized exponent tracks, width pair, width-metric bands.
    {
        std::vector<SeriesSpec> series;
        auto trimmedTrack = [&](const std::vector<double>& t, std::size_t start) {
            std::vector<TrackPoint> pts;
            for (std::size_t k = 0; k < t.size(); ++k)
                pts.push_back({static_cast<double>(res.real.timeIndex[start + k]), t[k]});
            return pts;
        };
        SeriesSpec h1;
        h1.pts = trimmedTrack(ws.hq1S, ws.start);
        h1.color = "#1f77b4";
        h1.widthPx = 1.5;
        h1.dashed = false;
        std::snprintf(nameBuf, sizeof(nameBuf), "H'(q=%g)", ws.q1);
        h1.name = nameBuf;
        SeriesSpec h2;
        h2.pts = trimmedTrack(ws.hq2S, ws.start);
        h2.color = "#d62728";
        h2.widthPx = 1.5;
        h2.dashed = false;
        std::snprintf(nameBuf, sizeof(nameBuf), "H'(q=%g)", ws.q2);
        h2.name = nameBuf;
        series.push_back(std::move(h1));
        series.push_back(std::move(h2));
        drawPanel(1, "(b) standardized exponents, width pair", series, {0.0},
                  &ws.timeline, false);
    }

    // (c) standardized width, real against surrogate.
    {
        std::vector<SeriesSpec> series;
        SeriesSpec raw;
        raw.color = "#9ecae1";
        raw.widthPx = 0.9;
        raw.dashed = false;
        raw.name = "W' raw";
        for (std::size_t t = 0; t < res.width.Wstd.size(); ++t)
            raw.pts.push_back(
                {static_cast<double>(res.real.timeIndex[t]), res.width.Wstd[t]});
        SeriesSpec sm;
        sm.color = "#1f77b4";
        sm.widthPx = 1.6;
        sm.dashed = false;
        sm.name = "W' smoothed";
        for (std::size_t k = 0; k < ws.gammaS.size(); ++k)
            sm.pts.push_back(
                {static_cast<double>(res.real.timeIndex[ws.start + k]), ws.gammaS[k]});
        SeriesSpec su;
        su.color = "#7f7f7f";
        su.widthPx = 0.9;
        su.dashed = true;
        su.name = "surrogate";
        for (std::size_t t = 0; t < res.widthSurrStd.size(); ++t)
            su.pts.push_back(
                {static_cast<double>(res.real.timeIndex[t]), res.widthSurrStd[t]});
        series.push_back(std::move(raw));
        series.push_back(std::move(sm));
        series.push_back(std::move(su));
        double phiL = res.cfg.classifier.phiL, phiH = res.cfg.classifier.phiH;
        drawPanel(2, "(c) standardized width vs surrogate", series,
                  {0.0, phiL, phiH, -phiL, -phiH}, nullptr, !curv);
    }

    if (curv) {
        const MetricStage& cs = *res.curvStage;
        // (d) exponent tracks over the curvature grid, curvature-metric bands.
        {
            auto bg = res.cfg.bGrid();
            double mid = 0.5 * (res.cfg.bLo + res.cfg.bHi);
            double qMid = bg[0];
            for (double q : bg)
                if (std::fabs(q - mid) < std::fabs(qMid - mid)) qMid = q;
            std::vector<double> midSm =
                smoothTrack(res.stdReal.tracks[res.stdReal.qIndex(qMid)], res.cfg.smooth);
            std::vector<SeriesSpec> series;
            auto fullTrack = [&](const std::vector<double>& t, std::size_t start) {
                std::vector<TrackPoint> pts;
                for (std::size_t k = 0; k < t.size(); ++k)
                    pts.push_back(
                        {static_cast<double>(res.real.timeIndex[start + k]), t[k]});
                return pts;
            };
            SeriesSpec lo;
            lo.pts = fullTrack(cs.hq1S, cs.start);
            lo.color = "#1f77b4";
            lo.widthPx = 1.5;
            lo.dashed = false;
            std::snprintf(nameBuf, sizeof(nameBuf), "H'(q=%g)", cs.q1);
            lo.name = nameBuf;
            SeriesSpec md;
            md.pts = fullTrack(midSm, 0);
            md.color = "#7f7f7f";
            md.widthPx = 1.0;
            md.dashed = false;
            std::snprintf(nameBuf, sizeof(nameBuf), "H'(q=%g)", qMid);
            md.name = nameBuf;
            SeriesSpec hi;
            hi.pts = fullTrack(cs.hq2S, cs.start);
            hi.color = "#d62728";
            hi.widthPx = 1.5;
            hi.dashed = false;
            std::snprintf(nameBuf, sizeof(nameBuf), "H'(q=%g)", cs.q2);
            hi.name = nameBuf;
            series.push_back(std::move(lo));
            series.push_back(std::move(md));
            series.push_back(std::move(hi));
            drawPanel(3, "(d) standardized exponents, curvature grid", series, {0.0},
                      &cs.timeline, false);
        }
        // (e) standardized curvature, real against surrogate.
        {
            std::vector<SeriesSpec> series;
            SeriesSpec raw;
            raw.color = "#c994c7";
            raw.widthPx = 0.9;
            raw.dashed = false;
            raw.name = "B' raw";
            for (std::size_t t = 0; t < res.curvRealStd.size(); ++t)
                raw.pts.push_back(
                    {static_cast<double>(res.real.timeIndex[t]), res.curvRealStd[t]});
            SeriesSpec sm;
            sm.color = "#756bb1";
            sm.widthPx = 1.6;
            sm.dashed = false;
            sm.name = "B' smoothed";
            for (std::size_t k = 0; k < cs.gammaS.size(); ++k)
                sm.pts.push_back({static_cast<double>(res.real.timeIndex[cs.start + k]),
                                  -cs.gammaS[k]});
            SeriesSpec su;
            su.color = "#7f7f7f";
            su.widthPx = 0.9;
            su.dashed = true;
            su.name = "surrogate";
            for (std::size_t t = 0; t < res.curvSurrStd.size(); ++t)
                su.pts.push_back(
                    {static_cast<double>(res.real.timeIndex[t]), res.curvSurrStd[t]});
            series.push_back(std::move(raw));
            series.push_back(std::move(sm));
            series.push_back(std::move(su));
            double phiL = res.cfg.classifier.phiL, phiH = res.cfg.classifier.phiH;
            drawPanel(4, "(e) standardized curvature vs surrogate", series,
                      {0.0, -phiL, -phiH}, nullptr, true);
        }
    }

    // Pattern legend: each label that appears, exactly once.
    {
        int col = 0, row = 0;
        for (int li : present) {
            auto l = static_cast<PatternLabel>(li);
            double x = 16 + col * legendItemW;
            double y = legendTop + row * legendRowH;
            appendf(svg,
                    "<rect x=\"%s\" y=\"%s\" width=\"16\" height=\"11\" fill=\"%s\" "
                    "fill-opacity=\"0.55\" stroke=\"#888888\" stroke-width=\"0.5\"/>\n",
                    fmtCoord(x).c_str(), fmtCoord(y).c_str(),
                    bandColor(baseVariant(l)));
            if (isReversedLabel(l))
                appendf(svg,
                        "<rect x=\"%s\" y=\"%s\" width=\"16\" height=\"11\" "
                        "fill=\"url(#revhatch)\" fill-opacity=\"0.6\"/>\n",
                        fmtCoord(x).c_str(), fmtCoord(y).c_str());
            appendf(svg,
                    "<text x=\"%s\" y=\"%s\" font-size=\"11\" fill=\"#222222\">%s"
                    "</text>\n",
                    fmtCoord(x + 21).c_str(), fmtCoord(y + 9.5).c_str(), labelName(l));
            if (++col == perRow) {
                col = 0;
                ++row;
            }
        }
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace mscale
