#include "microcell/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <stdexcept>

namespace microcell {

namespace {

cv::Mat read_single_channel(const std::string& path) {
    cv::Mat m = cv::imread(path, cv::IMREAD_UNCHANGED);
    if (m.empty()) throw std::runtime_error("unreadable image file: " + path);
    if (m.channels() != 1)
        throw std::runtime_error("multi-channel input not supported: " + path);
    if (m.depth() != CV_8U && m.depth() != CV_16U)
        throw std::runtime_error("unsupported bit depth (want 8 or 16 bit unsigned): " + path);
    return m;
}

}  // namespace

GrayImage load_gray(const std::string& path) {
    cv::Mat m = read_single_channel(path);
    GrayImage img(m.cols, m.rows, m.depth() == CV_8U ? 8 : 16);
    for (int row = 0; row < m.rows; ++row) {
        if (m.depth() == CV_8U) {
            const uint8_t* src = m.ptr<uint8_t>(row);
            for (int col = 0; col < m.cols; ++col) img.at(row, col) = src[col];
        } else {
            const uint16_t* src = m.ptr<uint16_t>(row);
            for (int col = 0; col < m.cols; ++col) img.at(row, col) = src[col];
        }
    }
    return img;
}

BinaryMask load_mask(const std::string& path) {
    cv::Mat m = read_single_channel(path);
    BinaryMask mask(m.cols, m.rows);
    for (int row = 0; row < m.rows; ++row) {
        if (m.depth() == CV_8U) {
            const uint8_t* src = m.ptr<uint8_t>(row);
            for (int col = 0; col < m.cols; ++col) mask.set(row, col, src[col] != 0);
        } else {
            const uint16_t* src = m.ptr<uint16_t>(row);
            for (int col = 0; col < m.cols; ++col) mask.set(row, col, src[col] != 0);
        }
    }
    return mask;
}

void save_gray_png(const GrayImage& img, const std::string& path) {
    if (img.bit_depth != 8) throw std::invalid_argument("save_gray_png expects an 8-bit image");
    cv::Mat m(img.height, img.width, CV_8UC1);
    for (int row = 0; row < img.height; ++row)
        for (int col = 0; col < img.width; ++col)
            m.at<uint8_t>(row, col) = uint8_t(img.at(row, col));
    if (!cv::imwrite(path, m)) throw std::runtime_error("failed to write " + path);
}

void save_mask_png(const BinaryMask& mask, const std::string& path) {
    cv::Mat m(mask.height, mask.width, CV_8UC1);
    for (int row = 0; row < mask.height; ++row)
        for (int col = 0; col < mask.width; ++col)
            m.at<uint8_t>(row, col) = mask.at(row, col) ? 255 : 0;
    if (!cv::imwrite(path, m)) throw std::runtime_error("failed to write " + path);
}

void save_rgb_png(const RGBImage& img, const std::string& path) {
    cv::Mat m(img.height, img.width, CV_8UC3);
    for (int row = 0; row < img.height; ++row)
        for (int col = 0; col < img.width; ++col) {
            const size_t i = size_t(row) * img.width + col;
            m.at<cv::Vec3b>(row, col) = cv::Vec3b(img.b[i], img.g[i], img.r[i]);  // BGR
        }
    if (!cv::imwrite(path, m)) throw std::runtime_error("failed to write " + path);
}

}  // namespace microcell
