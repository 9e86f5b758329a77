#pragma once

#include "optivmd/fmap.hpp"
#include "optivmd/search.hpp"

#include <string>

namespace optivmd {

// Standalone SVG heatmap of one channel, viridis-like 8-stop ramp,
// deterministic byte output.
std::string heatmap_svg(const FeatureMap& map, size_t channel);

// Accuracy surface over the (K, alpha) grid with the best cell annotated.
std::string surface_svg(const SearchReport& report);

// 8-stop color ramp sample for v in [0, 1], as "#rrggbb".
std::string ramp_color(double v);

}  // namespace optivmd
