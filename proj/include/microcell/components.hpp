#pragma once

#include <vector>

#include "microcell/image.hpp"

namespace microcell {

struct PixelCoord {
    int row = 0;
    int col = 0;
    bool operator==(const PixelCoord&) const = default;
};

/// One maximal 4-connected foreground region.
struct Component {
    int id = 0;
    std::vector<PixelCoord> pixels;  // raster order
    int min_row = 0, min_col = 0, max_row = 0, max_col = 0;
    double centroid_row = 0.0, centroid_col = 0.0;

    int area_px() const { return int(pixels.size()); }
};

/// Decomposition of a mask's foreground; ids 1..k in raster order of each
/// component's first pixel.
struct ComponentSet {
    int width = 0;
    int height = 0;
    std::vector<Component> components;

    size_t size() const { return components.size(); }
    bool empty() const { return components.empty(); }
};

/// 4-connected labeling (neighbors are (i±1,j) and (i,j±1)).
ComponentSet label_components(const BinaryMask& mask);

BinaryMask mask_from_components(const ComponentSet& set);

}  // namespace microcell
