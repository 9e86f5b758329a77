#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace optivmd {

/// H x W x C feature tensor with values in [0, 1].
struct FeatureMap {
    size_t H = 0, W = 0, C = 0;
    std::vector<float> data;  // row-major (h, w, c)
    std::vector<std::string> channel_names;
    std::vector<std::pair<double, double>> scaling;  // per-channel (min, max) before normalization

    float& at(size_t h, size_t w, size_t c) { return data[(h * W + w) * C + c]; }
    float at(size_t h, size_t w, size_t c) const { return data[(h * W + w) * C + c]; }
};

// FMAP container: "FMAP", version u8 = 1, u32 H/W/C little-endian,
// C null-terminated channel names, then H*W*C little-endian f32.
void write_fmap(const std::string& path, const FeatureMap& map);
FeatureMap read_fmap(const std::string& path);

}  // namespace optivmd
