#pragma once

#include <vector>

#include "microcell/components.hpp"

namespace microcell {

struct AnalysisConfig {
    int min_area_px = 30;
    double min_length_um = 0.0;  // 0 disables the dimension checks
    double min_width_um = 0.0;
    double min_gap_px = 2.0;
    double pixel_size_um = 1.0;
    double polar_low = 0.25;
    double polar_high = 0.75;
    int profile_points = 20;
};

/// Which clusters touch which cells (pixel-wise). Indices refer to positions
/// in the filtered cell/cluster ComponentSets; ids are component ids.
struct ClusterAssignment {
    std::vector<std::vector<int>> clusters_of_cell;  // per cell: cluster ids, ascending
    std::vector<std::vector<int>> cells_of_cluster;  // per cluster: cell ids, ascending
};

/// Keep components meeting the minimum area and, when enabled, the measured
/// minimum length/width. Boundary-equal values are kept.
ComponentSet filter_by_size(const ComponentSet& cells, const AnalysisConfig& cfg);

/// Remove BOTH members of every pair whose minimal pixel-center distance is
/// within min_gap_px (a 1 px gap is center distance 2). Decisions are taken
/// on the original set and applied at once, so removals never cascade.
ComponentSet filter_by_proximity(const ComponentSet& cells, const AnalysisConfig& cfg);

/// Keep exactly the clusters sharing at least one pixel with some cell.
ComponentSet filter_clusters(const ComponentSet& clusters, const ComponentSet& cells);

/// Record every pixel-intersecting (cell, cluster) pair; a cluster touching
/// k cells is listed by all k of them.
ClusterAssignment assign_clusters(const ComponentSet& clusters, const ComponentSet& cells);

/// Minimal Euclidean distance between the pixel centers of two components.
double component_distance(const Component& a, const Component& b);

}  // namespace microcell
