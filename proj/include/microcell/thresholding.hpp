#pragma once

#include <array>
#include <cstdint>

#include "microcell/image.hpp"

namespace microcell {

struct Histogram256 {
    std::array<uint64_t, 256> counts{};
    uint64_t total = 0;
};

enum class ThresholdMethod { minimum_error, yen };

Histogram256 histogram(const GrayImage& img8);

/// Exhaustive scan over all 256 candidate levels.
/// minimum_error minimizes the Kittler-Illingworth two-Gaussian criterion;
/// yen maximizes the maximum-correlation criterion. Splits with an empty
/// class are skipped; a histogram with fewer than two occupied bins is an
/// error. Ties across a criterion plateau resolve to the median optimal
/// level. Invariant under scaling all counts by a constant.
int compute_threshold(const Histogram256& hist, ThresholdMethod method);

enum class Foreground { above, below };

/// above: foreground where v > level; below: foreground where v <= level.
BinaryMask apply_threshold(const GrayImage& img8, int level, Foreground fg = Foreground::above);

}  // namespace microcell
