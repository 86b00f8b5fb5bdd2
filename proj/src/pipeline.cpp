#include "microcell/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "microcell/fluor.hpp"
#include "microcell/geometry.hpp"
#include "microcell/image_io.hpp"
#include "microcell/render.hpp"

namespace fs = std::filesystem;

namespace microcell {

namespace {

std::string resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) return p;
    fs::path path(p);
    return (path.is_absolute() ? path : base / path).string();
}

void require_exists(const std::string& path, const std::string& what) {
    if (!fs::exists(path)) throw std::runtime_error(what + " does not exist: " + path);
}

}  // namespace

RunManifest load_manifest(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open manifest: " + path);
    nlohmann::json doc;
    try {
        file >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("manifest is not valid JSON: " + std::string(e.what()));
    }

    const fs::path base = fs::path(path).parent_path();
    RunManifest manifest;
    manifest.pixel_size_um = doc.value("pixel_size_um", 0.0);
    if (doc.contains("config")) manifest.config_json = doc.at("config").dump();

    std::vector<int> ids;
    for (const auto& jf : doc.value("frames", nlohmann::json::array())) {
        FrameSpec frame;
        if (!jf.contains("frame_id")) throw std::runtime_error("manifest frame missing frame_id");
        frame.frame_id = jf.at("frame_id").get<int>();
        frame.cell_image_path = resolve(base, jf.value("cell_image", ""));
        frame.cell_mask_path = resolve(base, jf.value("cell_mask", ""));
        const std::string where = "frame " + std::to_string(frame.frame_id);
        if (!frame.cell_image_path.empty())
            require_exists(frame.cell_image_path, where + " cell image");
        if (!frame.cell_mask_path.empty()) require_exists(frame.cell_mask_path, where + " cell mask");
        for (const auto& jc : jf.value("channels", nlohmann::json::array())) {
            ChannelSpec ch;
            ch.name = jc.value("name", "");
            if (ch.name.empty()) throw std::runtime_error(where + ": channel without a name");
            ch.image_path = resolve(base, jc.value("image", ""));
            ch.cluster_mask_path = resolve(base, jc.value("cluster_mask", ""));
            if (ch.image_path.empty())
                throw std::runtime_error(where + " channel " + ch.name + ": missing image path");
            require_exists(ch.image_path, where + " channel " + ch.name + " image");
            if (!ch.cluster_mask_path.empty())
                require_exists(ch.cluster_mask_path,
                               where + " channel " + ch.name + " cluster mask");
            frame.channels.push_back(std::move(ch));
        }
        ids.push_back(frame.frame_id);
        manifest.frames.push_back(std::move(frame));
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw std::runtime_error("manifest frame ids are not unique");
    return manifest;
}

FrameAnalysis analyze_frame(const BinaryMask& cell_mask, const std::vector<ChannelData>& channels,
                            const AnalysisConfig& cfg, int frame_id) {
    for (const auto& ch : channels) {
        if (ch.fluor.width != cell_mask.width || ch.fluor.height != cell_mask.height)
            throw std::runtime_error("channel " + ch.name + " image dimensions differ from mask");
        if (ch.has_clusters &&
            (ch.cluster_mask.width != cell_mask.width || ch.cluster_mask.height != cell_mask.height))
            throw std::runtime_error("channel " + ch.name + " cluster mask dimensions differ");
    }

    FrameAnalysis out;
    ComponentSet cells = label_components(cell_mask);
    cells = filter_by_size(cells, cfg);
    cells = filter_by_proximity(cells, cfg);
    out.kept_cells = cells;

    // per-channel cluster sets restricted to the kept cells
    std::vector<ComponentSet> keep_clusters(channels.size());
    std::vector<ClusterAssignment> assignments(channels.size());
    for (size_t ci = 0; ci < channels.size(); ++ci) {
        if (!channels[ci].has_clusters) continue;
        ComponentSet clusters = label_components(channels[ci].cluster_mask);
        keep_clusters[ci] = filter_clusters(clusters, cells);
        assignments[ci] = assign_clusters(keep_clusters[ci], cells);
    }

    std::vector<std::pair<int, CellMeasurements>> measurements;
    std::vector<std::vector<std::pair<int, CellFluorStats>>> channel_stats(channels.size());

    for (size_t i = 0; i < cells.components.size(); ++i) {
        const Component& cell = cells.components[i];
        const CellFrame frame = fit_cell_frame(cell);
        const Midline midline = fit_midline(cell, frame);
        const CellMeasurements m = measure_cell(cell, midline, frame, cfg.pixel_size_um);
        if (m.length_um < m.width_um)
            out.warnings.push_back("frame " + std::to_string(frame_id) + " cell " +
                                   std::to_string(cell.id) + ": length below width");
        measurements.emplace_back(cell.id, m);

        for (size_t ci = 0; ci < channels.size(); ++ci) {
            CellFluorStats stats;
            stats.channel_name = channels[ci].name;
            std::tie(stats.mean, stats.std_dev) = cell_intensity_stats(cell, channels[ci].fluor);
            stats.cvi = cvi(stats.mean, stats.std_dev);
            for (int axis = 0; axis < 2; ++axis)
                for (int agg = 0; agg < 3; ++agg)
                    stats.profiles[axis][agg] = intensity_profile(
                        cell, frame, channels[ci].fluor, ProfileAxis(axis), ProfileAgg(agg),
                        cfg.profile_points);
            if (channels[ci].has_clusters) {
                for (int cluster_id : assignments[ci].clusters_of_cell[i]) {
                    const auto& cluster_set = keep_clusters[ci].components;
                    auto it = std::find_if(cluster_set.begin(), cluster_set.end(),
                                           [&](const Component& k) { return k.id == cluster_id; });
                    stats.clusters.push_back(cluster_metrics(*it, cell, frame, midline,
                                                             channels[ci].fluor,
                                                             cfg.pixel_size_um, cfg.polar_low,
                                                             cfg.polar_high));
                }
            }
            stats.n_clusters = int(stats.clusters.size());
            stats.has_clusters = stats.n_clusters > 0;
            stats.leading_cluster_index = leading_cluster(stats.clusters);
            channel_stats[ci].emplace_back(cell.id, std::move(stats));
        }
    }
    out.records = build_records(cells, measurements, channel_stats, frame_id);
    return out;
}

namespace {

GrayImage load_gray_8bit(const std::string& path) {
    GrayImage img = load_gray(path);
    return img.bit_depth == 16 ? to_8bit(img) : img;
}

/// Run fn(frame_index) over a pool; per-frame errors are collected, not fatal.
std::vector<std::string> run_frames(size_t n, int jobs,
                                    const std::function<void(size_t)>& fn) {
    std::vector<std::string> errors(n);
    if (n == 0) return errors;
    const int workers = std::max(1, std::min<int>(jobs, int(n)));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return errors;
}

int report_frame_errors(const std::vector<std::string>& errors, std::ostream& log) {
    int failed = 0;
    for (const auto& e : errors)
        if (!e.empty()) {
            log << "error: " << e << '\n';
            ++failed;
        }
    return failed;
}

}  // namespace

int cmd_preprocess(const RunManifest& manifest, const std::string& out_dir,
                   const PipelineOptions& opts, std::ostream& log) {
    if (manifest.frames.empty()) {
        log << "warning: manifest contains no frames, nothing to do\n";
        return 0;
    }
    const fs::path dir = fs::path(out_dir) / "preprocessed";
    fs::create_directories(dir);

    auto errors = run_frames(manifest.frames.size(), opts.jobs, [&](size_t i) {
        const FrameSpec& frame = manifest.frames[i];
        if (frame.cell_image_path.empty())
            throw std::runtime_error("frame " + std::to_string(frame.frame_id) +
                                     ": no cell image in manifest");
        GrayImage cells = pad_to_multiple(load_gray_8bit(frame.cell_image_path), 32);
        const std::string stem = "frame_" + std::to_string(frame.frame_id);
        save_gray_png(cells, (dir / (stem + "_cells.png")).string());
        for (const auto& ch : frame.channels) {
            GrayImage fluor = pad_to_multiple(load_gray_8bit(ch.image_path), 32);
            const RGBImage rgb = compose_fluor_input(cells, fluor);
            save_rgb_png(rgb, (dir / (stem + "_" + ch.name + ".png")).string());
        }
    });
    return report_frame_errors(errors, log) ? 1 : 0;
}

int cmd_segment(const RunManifest& manifest, ThresholdMethod method, bool post_filter,
                bool invert, const std::string& out_dir, const PipelineOptions& opts,
                std::ostream& log) {
    if (manifest.frames.empty()) {
        log << "warning: manifest contains no frames, nothing to do\n";
        return 0;
    }
    const fs::path dir = fs::path(out_dir) / "masks";
    fs::create_directories(dir);

    std::vector<std::string> warnings(manifest.frames.size());
    auto errors = run_frames(manifest.frames.size(), opts.jobs, [&](size_t i) {
        const FrameSpec& frame = manifest.frames[i];
        if (frame.cell_image_path.empty())
            throw std::runtime_error("frame " + std::to_string(frame.frame_id) +
                                     ": no cell image in manifest");
        const GrayImage img = load_gray_8bit(frame.cell_image_path);
        BinaryMask mask(img.width, img.height);
        try {
            const int level = compute_threshold(histogram(img), method);
            mask = apply_threshold(img, level,
                                   invert ? Foreground::below : Foreground::above);
        } catch (const std::invalid_argument& e) {
            warnings[i] = "frame " + std::to_string(frame.frame_id) + ": " + e.what() +
                          ", emitting blank mask";
        }
        if (post_filter) {
            ComponentSet cells = label_components(mask);
            cells = filter_by_size(cells, opts.analysis);
            cells = filter_by_proximity(cells, opts.analysis);
            mask = mask_from_components(cells);
        }
        save_mask_png(mask,
                      (dir / ("frame_" + std::to_string(frame.frame_id) + "_mask.png")).string());
    });
    for (const auto& w : warnings)
        if (!w.empty()) log << "warning: " << w << '\n';
    return report_frame_errors(errors, log) ? 1 : 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& gt1_path,
                 const std::string& gt2_path, const EvalConfig& cfg, bool render,
                 const std::string& out_dir, uint32_t seed, std::ostream& log) {
    const BinaryMask pred = load_mask(pred_path);
    const BinaryMask gt1 = load_mask(gt1_path);
    const BinaryMask gt2 = load_mask(gt2_path);
    if (pred.width != gt1.width || pred.height != gt1.height || pred.width != gt2.width ||
        pred.height != gt2.height)
        throw std::invalid_argument("mask dimensions differ between prediction and ground truths");

    const ComponentSet pd = label_components(pred);
    const GroundTruthPair pair =
        make_ground_truth_pair(label_components(gt1), label_components(gt2), cfg);
    const EvalReport report = validity(pd, pair, cfg);

    fs::create_directories(out_dir);
    {
        std::ofstream file(fs::path(out_dir) / "report.csv", std::ios::binary);
        if (!file) throw std::runtime_error("cannot write report.csv");
        file << eval_report_csv(report);
    }
    if (render) {
        const fs::path renders = fs::path(out_dir) / "renders";
        fs::create_directories(renders);
        save_rgb_png(render_labels(pd, seed), (renders / "frame_0_labels.png").string());
        save_rgb_png(render_labels(pair.g1, seed), (renders / "frame_1_labels.png").string());
        save_rgb_png(render_labels(pair.g2, seed), (renders / "frame_2_labels.png").string());
        save_rgb_png(render_diff(gt1, gt2), (renders / "frame_0_diff.png").string());
    }
    log << "union size " << report.union_size << ", avg l_ex " << report.avg_l_ex << ", d_ex "
        << report.d_ex << " -> " << (report.valid ? "valid" : "invalid") << '\n';
    return report.valid ? 0 : 1;
}

int cmd_analyze(const RunManifest& manifest, const std::string& out_dir,
                const PipelineOptions& opts, std::ostream& log) {
    if (manifest.frames.empty()) {
        log << "warning: manifest contains no frames, nothing to do\n";
        return 0;
    }
    for (const auto& frame : manifest.frames) {
        if (frame.cell_mask_path.empty())
            throw std::runtime_error("frame " + std::to_string(frame.frame_id) +
                                     ": analyze requires a cell mask");
        if (frame.channels.size() != manifest.frames.front().channels.size())
            throw std::runtime_error("channel lists differ between frames");
        for (size_t c = 0; c < frame.channels.size(); ++c)
            if (frame.channels[c].name != manifest.frames.front().channels[c].name)
                throw std::runtime_error("channel lists differ between frames");
    }

    fs::create_directories(fs::path(out_dir) / "renders");
    std::vector<FrameAnalysis> results(manifest.frames.size());
    auto errors = run_frames(manifest.frames.size(), opts.jobs, [&](size_t i) {
        const FrameSpec& frame = manifest.frames[i];
        const BinaryMask cell_mask = load_mask(frame.cell_mask_path);
        std::vector<ChannelData> channels;
        for (const auto& ch : frame.channels) {
            ChannelData data;
            data.name = ch.name;
            data.fluor = load_gray(ch.image_path);
            if (!ch.cluster_mask_path.empty()) {
                data.has_clusters = true;
                data.cluster_mask = load_mask(ch.cluster_mask_path);
            }
            channels.push_back(std::move(data));
        }
        results[i] = analyze_frame(cell_mask, channels, opts.analysis, frame.frame_id);
        save_rgb_png(render_labels(results[i].kept_cells, opts.seed + uint32_t(frame.frame_id)),
                     (fs::path(out_dir) / "renders" /
                      ("frame_" + std::to_string(frame.frame_id) + "_labels.png"))
                         .string());
    });

    DatabaseTable table;
    for (const auto& ch : manifest.frames.front().channels) table.channel_names.push_back(ch.name);
    for (const auto& result : results) {
        for (const auto& w : result.warnings) log << "warning: " << w << '\n';
        table.rows.insert(table.rows.end(), result.records.begin(), result.records.end());
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const CellRecord& a, const CellRecord& b) {
                         return a.frame_id != b.frame_id ? a.frame_id < b.frame_id : a.id < b.id;
                     });
    write_csv(table, (fs::path(out_dir) / "database.csv").string());

    const int failed = report_frame_errors(errors, log);
    if (failed) {
        log << failed << " frame(s) failed\n";
        return 1;
    }
    return 0;
}

}  // namespace microcell
