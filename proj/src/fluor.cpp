#include "microcell/fluor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace microcell {

std::pair<double, double> cell_intensity_stats(const Component& cell, const GrayImage& fluor) {
    if (cell.pixels.empty()) throw std::invalid_argument("empty cell");
    double sum = 0.0;
    for (const auto& p : cell.pixels) {
        if (p.row < 0 || p.row >= fluor.height || p.col < 0 || p.col >= fluor.width)
            throw std::invalid_argument("cell pixel outside the fluorescence image");
        sum += fluor.at(p.row, p.col);
    }
    const double n = double(cell.pixels.size());
    const double mean = sum / n;
    double var = 0.0;
    for (const auto& p : cell.pixels) {
        const double d = fluor.at(p.row, p.col) - mean;
        var += d * d;
    }
    return {mean, std::sqrt(var / n)};
}

std::optional<double> cvi(double mean, double std_dev) {
    if (std_dev == 0.0) return std::nullopt;
    return mean / std_dev;
}

namespace {

void axis_projection_range(const Component& cell, const CellFrame& frame, ProfileAxis axis,
                           double& lo, double& hi) {
    bool first = true;
    for (const auto& p : cell.pixels) {
        double x, y;
        frame.to_frame(p.row, p.col, x, y);
        const double v = axis == ProfileAxis::horizontal ? x : y;
        if (first) {
            lo = hi = v;
            first = false;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
}

}  // namespace

std::vector<double> intensity_profile(const Component& cell, const CellFrame& frame,
                                      const GrayImage& fluor, ProfileAxis axis, ProfileAgg agg,
                                      int n) {
    if (n < 2) throw std::invalid_argument("profile needs at least 2 points");
    std::vector<double> out(size_t(n), 0.0);
    if (cell.pixels.empty()) return out;

    double lo = 0.0, hi = 0.0;
    axis_projection_range(cell, frame, axis, lo, hi);
    const double span = hi - lo;

    std::vector<double> sum(size_t(n), 0.0), mx(size_t(n), 0.0);
    std::vector<int> count(size_t(n), 0);
    for (const auto& p : cell.pixels) {
        double x, y;
        frame.to_frame(p.row, p.col, x, y);
        const double v = axis == ProfileAxis::horizontal ? x : y;
        int idx = span > 0.0 ? int((v - lo) / span * n) : 0;
        idx = std::clamp(idx, 0, n - 1);
        const double intensity = fluor.at(p.row, p.col);
        sum[idx] += intensity;
        mx[idx] = count[idx] ? std::max(mx[idx], intensity) : intensity;
        ++count[idx];
    }
    for (int i = 0; i < n; ++i) {
        if (!count[i]) continue;
        switch (agg) {
            case ProfileAgg::mean: out[i] = sum[i] / count[i]; break;
            case ProfileAgg::max: out[i] = mx[i]; break;
            case ProfileAgg::sum: out[i] = sum[i]; break;
        }
    }
    return out;
}

ClusterRecord cluster_metrics(const Component& cluster, const Component& cell,
                              const CellFrame& frame, const Midline& /*midline*/,
                              const GrayImage& fluor, double pixel_size_um, double polar_low,
                              double polar_high) {
    if (cluster.pixels.empty()) throw std::invalid_argument("empty cluster");

    ClusterRecord rec;
    rec.cluster_id = cluster.id;
    rec.size_um2 = double(cluster.area_px()) * pixel_size_um * pixel_size_um;

    double sum = 0.0, mx = -1.0;
    PixelCoord peak = cluster.pixels.front();
    for (const auto& p : cluster.pixels) {
        const double v = fluor.at(p.row, p.col);
        sum += v;
        if (v > mx) {  // raster order makes ties resolve to smallest (row, col)
            mx = v;
            peak = p;
        }
    }
    const double n = double(cluster.pixels.size());
    rec.mean_intensity = sum / n;
    rec.max_intensity = mx;
    rec.sum_intensity = sum;
    double var = 0.0;
    for (const auto& p : cluster.pixels) {
        const double d = fluor.at(p.row, p.col) - rec.mean_intensity;
        var += d * d;
    }
    rec.std_intensity = std::sqrt(var / n);

    // normalize the peak onto the cell's own pole-to-pole extent
    double x_lo, x_hi, y_lo, y_hi;
    axis_projection_range(cell, frame, ProfileAxis::horizontal, x_lo, x_hi);
    axis_projection_range(cell, frame, ProfileAxis::vertical, y_lo, y_hi);
    double px, py;
    frame.to_frame(peak.row, peak.col, px, py);
    rec.center_x = x_hi > x_lo ? std::clamp((px - x_lo) / (x_hi - x_lo), 0.0, 1.0) : 0.5;
    rec.center_y = y_hi > y_lo ? std::clamp((py - y_lo) / (y_hi - y_lo), 0.0, 1.0) : 0.5;
    rec.is_polar = rec.center_x < polar_low || rec.center_x > polar_high;
    return rec;
}

std::optional<int> leading_cluster(const std::vector<ClusterRecord>& clusters) {
    if (clusters.empty()) return std::nullopt;
    int best = 0;
    for (int i = 1; i < int(clusters.size()); ++i)
        if (clusters[i].max_intensity > clusters[best].max_intensity) best = i;
    return best;
}

}  // namespace microcell
