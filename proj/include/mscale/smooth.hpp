#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mscale {

enum class SmoothMode { Centered, Causal };

struct SmoothConfig {
    std::size_t windowPoints = 48;
    int order = 2;
    SmoothMode mode = SmoothMode::Centered;

    void validate() const;
};

// Local least-squares polynomial smoother. Centered mode splits the window
// windowPoints/2 back, remainder-1 forward (48 -> 24 back, 23 forward, self
// included); causal mode uses only the trailing windowPoints samples. Edge
// windows shrink one-sided. A point is produced when its window holds at
// least order+2 finite samples (gaps bridged), otherwise the output gaps.
std::vector<double> smoothTrack(std::span<const double> y, const SmoothConfig& cfg);

}  // namespace mscale
