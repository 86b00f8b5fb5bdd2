#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "microcell/analyzer.hpp"
#include "microcell/database.hpp"
#include "microcell/eval.hpp"
#include "microcell/image.hpp"
#include "microcell/thresholding.hpp"

namespace microcell {

struct ChannelSpec {
    std::string name;
    std::string image_path;
    std::string cluster_mask_path;  // empty: no cluster analysis for this channel
};

struct FrameSpec {
    int frame_id = 0;
    std::string cell_image_path;  // empty allowed where a command does not need it
    std::string cell_mask_path;
    std::vector<ChannelSpec> channels;
};

/// Batch description; the frame order defines the processing order.
struct RunManifest {
    std::vector<FrameSpec> frames;
    double pixel_size_um = 0.0;  // 0: not set by the manifest
    std::string config_json;     // optional "config" object, raw JSON text
};

/// Parse the manifest JSON. Relative paths are resolved against the manifest
/// file's directory. Frame ids must be unique and every referenced path must
/// exist; violations throw with the offending frame/channel named.
RunManifest load_manifest(const std::string& path);

struct PipelineOptions {
    AnalysisConfig analysis;
    uint32_t seed = 42;
    int jobs = 1;
};

/// Fully analyzed frame: kept cells plus their database rows.
struct FrameAnalysis {
    ComponentSet kept_cells;
    std::vector<CellRecord> records;
    std::vector<std::string> warnings;
};

struct ChannelData {
    std::string name;
    GrayImage fluor;
    bool has_clusters = false;
    BinaryMask cluster_mask;
};

/// The deterministic per-frame flow: size/proximity filtering, cluster
/// filtering and assignment, rod measurements, fluorescence statistics.
FrameAnalysis analyze_frame(const BinaryMask& cell_mask, const std::vector<ChannelData>& channels,
                            const AnalysisConfig& cfg, int frame_id);

int cmd_preprocess(const RunManifest& manifest, const std::string& out_dir,
                   const PipelineOptions& opts, std::ostream& log);

int cmd_segment(const RunManifest& manifest, ThresholdMethod method, bool post_filter,
                bool invert, const std::string& out_dir, const PipelineOptions& opts,
                std::ostream& log);

/// Exit status 0: valid prediction; 1: completed but invalid.
int cmd_evaluate(const std::string& pred_path, const std::string& gt1_path,
                 const std::string& gt2_path, const EvalConfig& cfg, bool render,
                 const std::string& out_dir, uint32_t seed, std::ostream& log);

int cmd_analyze(const RunManifest& manifest, const std::string& out_dir,
                const PipelineOptions& opts, std::ostream& log);

}  // namespace microcell
