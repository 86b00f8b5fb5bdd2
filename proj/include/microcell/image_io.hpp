#pragma once

#include <string>

#include "microcell/image.hpp"

namespace microcell {

/// Read a single-channel PGM (P2/P5), PNG or single-page TIFF file.
/// Throws std::runtime_error for unreadable files, multi-channel input or
/// unsupported bit depths.
GrayImage load_gray(const std::string& path);

/// Same loaders, but any nonzero intensity becomes foreground.
BinaryMask load_mask(const std::string& path);

/// 8-bit grayscale PNG.
void save_gray_png(const GrayImage& img, const std::string& path);

/// Mask convention on disk: 0 = background, 255 = foreground.
void save_mask_png(const BinaryMask& mask, const std::string& path);

void save_rgb_png(const RGBImage& img, const std::string& path);

}  // namespace microcell
