#pragma once

#include <optional>
#include <string>
#include <vector>

#include "microcell/geometry.hpp"
#include "microcell/image.hpp"

namespace microcell {

enum class ProfileAxis { horizontal, vertical };  // cell-frame major / minor axis
enum class ProfileAgg { mean, max, sum };

/// One fluorescence cluster scored against its enclosing cell.
/// center is the cluster's max-intensity pixel in cell-frame coordinates
/// normalized to [0,1] along each axis (0 and 1 are the cell poles).
struct ClusterRecord {
    int cluster_id = 0;
    double size_um2 = 0.0;
    double center_x = 0.0;
    double center_y = 0.0;
    bool is_polar = false;  // center_x < polar_low or > polar_high, strictly
    double mean_intensity = 0.0;
    double std_intensity = 0.0;
    double max_intensity = 0.0;
    double sum_intensity = 0.0;
};

struct CellFluorStats {
    std::string channel_name;
    double mean = 0.0;
    double std_dev = 0.0;
    std::optional<double> cvi;  // mean / std, absent when std == 0
    // profiles[axis][agg], each profile_points long
    std::vector<double> profiles[2][3];
    int n_clusters = 0;
    bool has_clusters = false;
    std::vector<ClusterRecord> clusters;               // ascending cluster id
    std::optional<int> leading_cluster_index;          // 0-based into clusters
};

/// Population mean and standard deviation of the fluorescence over the
/// cell's pixels.
std::pair<double, double> cell_intensity_stats(const Component& cell, const GrayImage& fluor);

/// mean / std; reported CVI direction (not the conventional ratio).
std::optional<double> cvi(double mean, double std_dev);

/// Split the cell's extent along the chosen frame axis into n equal bins and
/// aggregate the intensities of the pixels projecting into each bin.
/// Empty bins yield 0.
std::vector<double> intensity_profile(const Component& cell, const CellFrame& frame,
                                      const GrayImage& fluor, ProfileAxis axis, ProfileAgg agg,
                                      int n = 20);

ClusterRecord cluster_metrics(const Component& cluster, const Component& cell,
                              const CellFrame& frame, const Midline& midline,
                              const GrayImage& fluor, double pixel_size_um,
                              double polar_low = 0.25, double polar_high = 0.75);

/// Index of the record with the highest max intensity; ties go to the lowest
/// index; empty input yields nullopt.
std::optional<int> leading_cluster(const std::vector<ClusterRecord>& clusters);

}  // namespace microcell
