#pragma once

#include <cstdint>

#include "microcell/components.hpp"

namespace microcell {

/// Black background, one seeded pseudo-random color per component.
/// Deterministic for a fixed seed; colors are pairwise distinct.
RGBImage render_labels(const ComponentSet& components, uint32_t seed);

/// Pixel classes: only in a -> red, only in b -> blue, both -> white,
/// neither -> black.
RGBImage render_diff(const BinaryMask& a, const BinaryMask& b);

}  // namespace microcell
