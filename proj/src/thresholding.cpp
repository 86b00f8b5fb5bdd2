#include "microcell/thresholding.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace microcell {

Histogram256 histogram(const GrayImage& img8) {
    if (img8.bit_depth != 8) throw std::invalid_argument("histogram expects an 8-bit image");
    Histogram256 h;
    for (uint16_t v : img8.pixels) ++h.counts[v];
    h.total = img8.pixel_count();
    return h;
}

namespace {

// Kittler & Illingworth criterion for the split [0..t] / [t+1..255].
// Class variances carry a 1/12 quantization floor so pure delta-peak
// histograms stay scoreable.
double minimum_error_criterion(const std::array<double, 256>& p, int t) {
    double w0 = 0.0, m0 = 0.0, w1 = 0.0, m1 = 0.0;
    for (int v = 0; v <= t; ++v) {
        w0 += p[v];
        m0 += p[v] * v;
    }
    for (int v = t + 1; v < 256; ++v) {
        w1 += p[v];
        m1 += p[v] * v;
    }
    if (w0 <= 0.0 || w1 <= 0.0) return std::numeric_limits<double>::infinity();
    m0 /= w0;
    m1 /= w1;
    double v0 = 0.0, v1 = 0.0;
    for (int v = 0; v <= t; ++v) v0 += p[v] * (v - m0) * (v - m0);
    for (int v = t + 1; v < 256; ++v) v1 += p[v] * (v - m1) * (v - m1);
    v0 = v0 / w0 + 1.0 / 12.0;
    v1 = v1 / w1 + 1.0 / 12.0;
    return 1.0 + 2.0 * (w0 * std::log(std::sqrt(v0)) + w1 * std::log(std::sqrt(v1))) -
           2.0 * (w0 * std::log(w0) + w1 * std::log(w1));
}

// Yen's maximum-correlation criterion (to be maximized); returned negated
// so both methods minimize.
double yen_criterion(const std::array<double, 256>& p, int t) {
    double w0 = 0.0, g0 = 0.0, g1 = 0.0;
    for (int v = 0; v <= t; ++v) {
        w0 += p[v];
        g0 += p[v] * p[v];
    }
    for (int v = t + 1; v < 256; ++v) g1 += p[v] * p[v];
    const double w1 = 1.0 - w0;
    if (w0 <= 0.0 || w1 <= 0.0 || g0 <= 0.0 || g1 <= 0.0)
        return std::numeric_limits<double>::infinity();
    const double tc = -std::log(g0 * g1) + 2.0 * std::log(w0 * w1);
    return -tc;
}

}  // namespace

int compute_threshold(const Histogram256& hist, ThresholdMethod method) {
    int occupied = 0;
    for (uint64_t c : hist.counts)
        if (c > 0) ++occupied;
    if (occupied < 2) throw std::invalid_argument("degenerate histogram: fewer than 2 occupied bins");

    // normalize so the criterion depends only on the distribution
    std::array<double, 256> p{};
    for (int v = 0; v < 256; ++v) p[v] = double(hist.counts[v]) / double(hist.total);

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_levels;
    for (int t = 0; t < 256; ++t) {
        const double crit = method == ThresholdMethod::minimum_error
                                ? minimum_error_criterion(p, t)
                                : yen_criterion(p, t);
        if (!std::isfinite(crit)) continue;
        if (crit < best) {
            best = crit;
            best_levels.assign(1, t);
        } else if (crit == best) {
            best_levels.push_back(t);
        }
    }
    if (best_levels.empty()) throw std::invalid_argument("degenerate histogram: no valid split");
    return best_levels[best_levels.size() / 2];
}

BinaryMask apply_threshold(const GrayImage& img8, int level, Foreground fg) {
    if (img8.bit_depth != 8) throw std::invalid_argument("apply_threshold expects an 8-bit image");
    if (level < 0 || level > 255) throw std::invalid_argument("threshold level out of [0,255]");
    BinaryMask mask(img8.width, img8.height);
    for (size_t i = 0; i < img8.pixels.size(); ++i) {
        const bool above = img8.pixels[i] > level;
        mask.bits[i] = (fg == Foreground::above ? above : !above) ? 1 : 0;
    }
    return mask;
}

}  // namespace microcell
