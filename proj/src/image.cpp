#include "microcell/image.hpp"

#include <algorithm>
#include <stdexcept>

namespace microcell {

GrayImage::GrayImage(int w, int h, int depth, uint16_t fill, double px_um)
    : width(w), height(h), bit_depth(depth), pixels(size_t(w) * h, fill), pixel_size_um(px_um) {
    if (w < 0 || h < 0) throw std::invalid_argument("negative image dimensions");
    if (depth != 8 && depth != 16) throw std::invalid_argument("bit depth must be 8 or 16");
    if (px_um <= 0.0) throw std::invalid_argument("pixel size must be positive");
}

RGBImage::RGBImage(int w, int h)
    : width(w), height(h), r(size_t(w) * h, 0), g(size_t(w) * h, 0), b(size_t(w) * h, 0) {}

BinaryMask::BinaryMask(int w, int h, bool fill)
    : width(w), height(h), bits(size_t(w) * h, fill ? 1 : 0) {}

size_t BinaryMask::foreground_count() const {
    return size_t(std::count_if(bits.begin(), bits.end(), [](uint8_t b) { return b != 0; }));
}

GrayImage to_8bit(const GrayImage& img) {
    if (img.bit_depth != 16) throw std::invalid_argument("to_8bit expects a 16-bit image");
    GrayImage out(img.width, img.height, 8, 0, img.pixel_size_um);
    if (img.pixels.empty()) return out;
    auto [mn_it, mx_it] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    const int64_t mn = *mn_it, mx = *mx_it;
    const int64_t range = mx - mn;
    if (range == 0) return out;  // constant image -> all zeros
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        // round half up in exact integer arithmetic
        const int64_t v = img.pixels[i] - mn;
        out.pixels[i] = uint16_t((v * 255 * 2 + range) / (2 * range));
    }
    return out;
}

namespace {
int next_multiple(int v, int m) { return ((v + m - 1) / m) * m; }
}  // namespace

GrayImage pad_to_multiple(const GrayImage& img, int m) {
    if (m < 1) throw std::invalid_argument("pad multiple must be >= 1");
    const int w = next_multiple(img.width, m), h = next_multiple(img.height, m);
    if (w == img.width && h == img.height) return img;
    GrayImage out(w, h, img.bit_depth, 0, img.pixel_size_um);
    for (int row = 0; row < img.height; ++row)
        std::copy_n(&img.pixels[size_t(row) * img.width], img.width, &out.pixels[size_t(row) * w]);
    return out;
}

BinaryMask pad_to_multiple(const BinaryMask& mask, int m) {
    if (m < 1) throw std::invalid_argument("pad multiple must be >= 1");
    const int w = next_multiple(mask.width, m), h = next_multiple(mask.height, m);
    if (w == mask.width && h == mask.height) return mask;
    BinaryMask out(w, h);
    for (int row = 0; row < mask.height; ++row)
        std::copy_n(&mask.bits[size_t(row) * mask.width], mask.width, &out.bits[size_t(row) * w]);
    return out;
}

GrayImage crop(const GrayImage& img, int width, int height) {
    if (width > img.width || height > img.height) throw std::invalid_argument("crop larger than image");
    GrayImage out(width, height, img.bit_depth, 0, img.pixel_size_um);
    for (int row = 0; row < height; ++row)
        std::copy_n(&img.pixels[size_t(row) * img.width], width, &out.pixels[size_t(row) * width]);
    return out;
}

BinaryMask crop(const BinaryMask& mask, int width, int height) {
    if (width > mask.width || height > mask.height) throw std::invalid_argument("crop larger than mask");
    BinaryMask out(width, height);
    for (int row = 0; row < height; ++row)
        std::copy_n(&mask.bits[size_t(row) * mask.width], width, &out.bits[size_t(row) * width]);
    return out;
}

RGBImage compose_fluor_input(const GrayImage& cells8, const GrayImage& fluor8) {
    if (cells8.width != fluor8.width || cells8.height != fluor8.height)
        throw std::invalid_argument("cell and fluorescence image dimensions differ");
    if (cells8.bit_depth != 8 || fluor8.bit_depth != 8)
        throw std::invalid_argument("compose_fluor_input expects 8-bit inputs");
    RGBImage out(cells8.width, cells8.height);
    for (size_t i = 0; i < cells8.pixels.size(); ++i) {
        out.r[i] = uint8_t(cells8.pixels[i]);
        out.g[i] = uint8_t(fluor8.pixels[i]);
        out.b[i] = uint8_t(fluor8.pixels[i]);
    }
    return out;
}

}  // namespace microcell
