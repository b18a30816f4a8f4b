#pragma once

#include <string>

#include "mscale/pipeline.hpp"

namespace mscale {

struct PlotOptions {
    int width = 1180;
    int panelHeight = 180;
    std::string title = "multiscaling temporal patterns";
};

// Stacked summary panels: (a) price and rolling volatility, (b) standardized
// exponent tracks for the width pair with pattern bands, (c) standardized
// width against its surrogate, and with curvature enabled (d) exponent
// tracks over the curvature grid with pattern bands and (e) standardized
// curvature against its surrogate. Output bytes are deterministic for
// identical inputs. Throws if a stage timeline is empty.
std::string renderPanels(const AnalysisResult& res, const PlotOptions& opts = {});

}  // namespace mscale
