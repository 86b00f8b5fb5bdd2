#pragma once

#include <cstdint>
#include <vector>

namespace microcell {

/// Single-channel intensity image, row-major. Values are stored in 16 bits
/// regardless of bit_depth; every value must be < 2^bit_depth.
struct GrayImage {
    int width = 0;
    int height = 0;
    int bit_depth = 8;  // 8 or 16
    std::vector<uint16_t> pixels;
    double pixel_size_um = 1.0;

    GrayImage() = default;
    GrayImage(int w, int h, int depth, uint16_t fill = 0, double px_um = 1.0);

    uint16_t at(int row, int col) const { return pixels[size_t(row) * width + col]; }
    uint16_t& at(int row, int col) { return pixels[size_t(row) * width + col]; }
    size_t pixel_count() const { return pixels.size(); }
};

/// Three 8-bit channels sharing one geometry.
struct RGBImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> r, g, b;

    RGBImage() = default;
    RGBImage(int w, int h);
};

/// Row-major boolean grid; 1 = foreground.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false);

    bool at(int row, int col) const { return bits[size_t(row) * width + col] != 0; }
    void set(int row, int col, bool v) { bits[size_t(row) * width + col] = v ? 1 : 0; }
    size_t foreground_count() const;

    bool operator==(const BinaryMask&) const = default;
};

/// Linear min-max stretch of a 16-bit image onto [0,255], round half up.
/// A constant image maps to all zeros.
GrayImage to_8bit(const GrayImage& img);

/// Pad bottom/right with zeros (false) so both dimensions become multiples
/// of m. Content stays at the top-left, so pixel coordinates are unchanged.
GrayImage pad_to_multiple(const GrayImage& img, int m = 32);
BinaryMask pad_to_multiple(const BinaryMask& mask, int m = 32);

/// Crop back to the original (pre-padding) dimensions.
GrayImage crop(const GrayImage& img, int width, int height);
BinaryMask crop(const BinaryMask& mask, int width, int height);

/// Segmentation-network input layout: R = cell image, G = B = fluorescence.
RGBImage compose_fluor_input(const GrayImage& cells8, const GrayImage& fluor8);

}  // namespace microcell
