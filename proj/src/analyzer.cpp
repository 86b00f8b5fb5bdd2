#include "microcell/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "microcell/geometry.hpp"

namespace microcell {

namespace {

// pixels with a 4-neighbor outside the component (or on the image border);
// the minimum inter-component distance is always attained between these
std::vector<PixelCoord> boundary_pixels(const Component& c) {
    std::unordered_set<int64_t> members;
    members.reserve(c.pixels.size() * 2);
    auto key = [](int r, int cc) { return (int64_t(r) << 32) | uint32_t(cc); };
    for (const auto& p : c.pixels) members.insert(key(p.row, p.col));
    std::vector<PixelCoord> out;
    for (const auto& p : c.pixels) {
        if (!members.count(key(p.row - 1, p.col)) || !members.count(key(p.row + 1, p.col)) ||
            !members.count(key(p.row, p.col - 1)) || !members.count(key(p.row, p.col + 1)))
            out.push_back(p);
    }
    return out;
}

double bbox_gap(const Component& a, const Component& b) {
    const double dr = std::max({0, a.min_row - b.max_row, b.min_row - a.max_row});
    const double dc = std::max({0, a.min_col - b.max_col, b.min_col - a.max_col});
    return std::hypot(dr, dc);
}

}  // namespace

double component_distance(const Component& a, const Component& b) {
    const auto ba = boundary_pixels(a), bb = boundary_pixels(b);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : ba)
        for (const auto& q : bb) {
            const double d2 = double(p.row - q.row) * (p.row - q.row) +
                              double(p.col - q.col) * (p.col - q.col);
            if (d2 < best) best = d2;
        }
    return std::sqrt(best);
}

ComponentSet filter_by_size(const ComponentSet& cells, const AnalysisConfig& cfg) {
    ComponentSet out;
    out.width = cells.width;
    out.height = cells.height;
    for (const auto& comp : cells.components) {
        if (comp.area_px() < cfg.min_area_px) continue;
        if (cfg.min_length_um > 0.0 || cfg.min_width_um > 0.0) {
            if (comp.area_px() < 3) continue;  // too small to measure
            const CellFrame frame = fit_cell_frame(comp);
            const Midline midline = fit_midline(comp, frame);
            const CellMeasurements m = measure_cell(comp, midline, frame, cfg.pixel_size_um);
            if (cfg.min_length_um > 0.0 && m.length_um < cfg.min_length_um) continue;
            if (cfg.min_width_um > 0.0 && m.width_um < cfg.min_width_um) continue;
        }
        out.components.push_back(comp);
    }
    return out;
}

ComponentSet filter_by_proximity(const ComponentSet& cells, const AnalysisConfig& cfg) {
    const size_t n = cells.components.size();
    std::vector<char> removed(n, 0);
    if (cfg.min_gap_px > 0.0) {
        std::vector<std::vector<PixelCoord>> boundaries(n);
        for (size_t i = 0; i < n; ++i) boundaries[i] = boundary_pixels(cells.components[i]);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                if (bbox_gap(cells.components[i], cells.components[j]) > cfg.min_gap_px)
                    continue;
                double best = std::numeric_limits<double>::infinity();
                for (const auto& p : boundaries[i])
                    for (const auto& q : boundaries[j]) {
                        const double d2 = double(p.row - q.row) * (p.row - q.row) +
                                          double(p.col - q.col) * (p.col - q.col);
                        if (d2 < best) best = d2;
                    }
                // a pair separated by exactly the configured gap is too close:
                // a 1 px gap equals center distance 2
                if (std::sqrt(best) <= cfg.min_gap_px) {
                    removed[i] = 1;
                    removed[j] = 1;
                }
            }
        }
    }
    ComponentSet out;
    out.width = cells.width;
    out.height = cells.height;
    for (size_t i = 0; i < n; ++i)
        if (!removed[i]) out.components.push_back(cells.components[i]);
    return out;
}

namespace {

std::vector<int> cell_label_map(const ComponentSet& cells) {
    std::vector<int> label(size_t(cells.width) * cells.height, 0);
    for (const auto& cell : cells.components)
        for (const auto& p : cell.pixels) label[size_t(p.row) * cells.width + p.col] = cell.id;
    return label;
}

}  // namespace

ComponentSet filter_clusters(const ComponentSet& clusters, const ComponentSet& cells) {
    if (clusters.width != cells.width || clusters.height != cells.height)
        throw std::invalid_argument("cluster and cell sets cover different dimensions");
    const std::vector<int> label = cell_label_map(cells);
    ComponentSet out;
    out.width = clusters.width;
    out.height = clusters.height;
    for (const auto& cluster : clusters.components) {
        const bool touches = std::any_of(cluster.pixels.begin(), cluster.pixels.end(),
                                         [&](const PixelCoord& p) {
                                             return label[size_t(p.row) * clusters.width + p.col] != 0;
                                         });
        if (touches) out.components.push_back(cluster);
    }
    return out;
}

ClusterAssignment assign_clusters(const ComponentSet& clusters, const ComponentSet& cells) {
    if (clusters.width != cells.width || clusters.height != cells.height)
        throw std::invalid_argument("cluster and cell sets cover different dimensions");

    ClusterAssignment out;
    out.clusters_of_cell.resize(cells.components.size());
    out.cells_of_cluster.resize(clusters.components.size());

    std::vector<int> cell_index(size_t(cells.width) * cells.height, -1);
    for (size_t i = 0; i < cells.components.size(); ++i)
        for (const auto& p : cells.components[i].pixels)
            cell_index[size_t(p.row) * cells.width + p.col] = int(i);

    for (size_t k = 0; k < clusters.components.size(); ++k) {
        std::unordered_set<int> touched;
        for (const auto& p : clusters.components[k].pixels) {
            const int ci = cell_index[size_t(p.row) * clusters.width + p.col];
            if (ci >= 0) touched.insert(ci);
        }
        for (int ci : touched) {
            out.clusters_of_cell[ci].push_back(clusters.components[k].id);
            out.cells_of_cluster[k].push_back(cells.components[ci].id);
        }
    }
    for (auto& v : out.clusters_of_cell) std::sort(v.begin(), v.end());
    for (auto& v : out.cells_of_cluster) std::sort(v.begin(), v.end());
    return out;
}

}  // namespace microcell
