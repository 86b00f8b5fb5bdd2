#include "microcell/cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "microcell/pipeline.hpp"

namespace microcell {

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<double> pixel_size_um;
    std::optional<int> jobs;
    std::optional<uint32_t> seed;
};

struct AnalysisArgs {
    std::optional<int> min_area_px;
    std::optional<double> min_gap_px;
    std::optional<double> min_length_um;
    std::optional<double> min_width_um;
    std::optional<int> profile_points;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file; flags override its values");
    cmd->add_option("--pixel-size-um", args.pixel_size_um, "physical pixel size in micrometers");
    cmd->add_option("--jobs", args.jobs, "worker threads for per-frame processing");
    cmd->add_option("--seed", args.seed, "seed for the render palette");
}

void add_analysis(CLI::App* cmd, AnalysisArgs& args) {
    cmd->add_option("--min-area-px", args.min_area_px, "minimum cell area in pixels");
    cmd->add_option("--min-gap-px", args.min_gap_px, "minimum distance between cells in pixels");
    cmd->add_option("--min-length-um", args.min_length_um, "minimum cell length (0 disables)");
    cmd->add_option("--min-width-um", args.min_width_um, "minimum cell width (0 disables)");
    cmd->add_option("--profile-points", args.profile_points, "intensity profile sample count");
}

nlohmann::json load_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        file >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
    }
    return doc;
}

template <typename T>
T pick(const std::optional<T>& flag, const nlohmann::json& cfg, const char* key, T fallback) {
    if (flag) return *flag;
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return fallback;
}

// precedence: flag > --config file > manifest-embedded config > default
nlohmann::json merge_config(const nlohmann::json& file_cfg, const RunManifest& manifest) {
    if (manifest.config_json.empty()) return file_cfg;
    nlohmann::json merged = nlohmann::json::parse(manifest.config_json);
    merged.update(file_cfg);
    return merged;
}

PipelineOptions make_options(const CommonArgs& common, const AnalysisArgs& analysis,
                             const nlohmann::json& cfg, const RunManifest& manifest) {
    PipelineOptions opts;
    double px = pick<double>(common.pixel_size_um, cfg, "pixel_size_um", 0.0);
    if (px == 0.0) px = manifest.pixel_size_um;
    if (px == 0.0) px = 1.0;
    if (px <= 0.0) throw std::invalid_argument("pixel size must be positive");
    opts.analysis.pixel_size_um = px;
    opts.analysis.min_area_px = pick<int>(analysis.min_area_px, cfg, "min_area_px", 30);
    opts.analysis.min_gap_px = pick<double>(analysis.min_gap_px, cfg, "min_gap_px", 2.0);
    opts.analysis.min_length_um = pick<double>(analysis.min_length_um, cfg, "min_length_um", 0.0);
    opts.analysis.min_width_um = pick<double>(analysis.min_width_um, cfg, "min_width_um", 0.0);
    opts.analysis.profile_points = pick<int>(analysis.profile_points, cfg, "profile_points", 20);
    if (opts.analysis.min_area_px < 0 || opts.analysis.min_gap_px < 0 ||
        opts.analysis.min_length_um < 0 || opts.analysis.min_width_um < 0)
        throw std::invalid_argument("filter thresholds must be non-negative");
    if (opts.analysis.profile_points < 2)
        throw std::invalid_argument("--profile-points must be at least 2");
    opts.seed = pick<uint32_t>(common.seed, cfg, "seed", 42);
    opts.jobs = pick<int>(common.jobs, cfg, "jobs", 1);
    if (opts.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");
    return opts;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"microcell: segmentation scoring and single-cell analysis"};
    app.require_subcommand(1);

    // preprocess
    auto* pre = app.add_subcommand("preprocess",
                                   "8-bit conversion, padding and RGB composites for segmentation");
    std::string pre_manifest, pre_out;
    CommonArgs pre_common;
    pre->add_option("--manifest", pre_manifest, "run manifest (JSON)")->required();
    pre->add_option("--out", pre_out, "output directory")->required();
    add_common(pre, pre_common);

    // segment
    auto* seg = app.add_subcommand("segment", "baseline threshold segmentation of cell images");
    std::string seg_manifest, seg_out;
    std::string seg_method = "minimum_error";
    bool seg_post = false, seg_invert = false;
    CommonArgs seg_common;
    AnalysisArgs seg_analysis;
    seg->add_option("--manifest", seg_manifest, "run manifest (JSON)")->required();
    seg->add_option("--out", seg_out, "output directory")->required();
    seg->add_option("--method", seg_method, "minimum_error or yen")
        ->check(CLI::IsMember({"minimum_error", "yen"}));
    seg->add_flag("--post", seg_post, "apply size and proximity filtering to the masks");
    seg->add_flag("--invert", seg_invert, "foreground below the threshold (dark objects)");
    add_common(seg, seg_common);
    add_analysis(seg, seg_analysis);

    // evaluate
    auto* eva = app.add_subcommand("evaluate",
                                   "score a prediction mask against two ground-truth masks");
    std::string eva_pred, eva_gt1, eva_gt2, eva_out = ".";
    std::string eva_mode = "cell";
    std::optional<double> eva_T, eva_beta;
    bool eva_render = false;
    CommonArgs eva_common;
    eva->add_option("--pred", eva_pred, "prediction mask")->required();
    eva->add_option("--gt1", eva_gt1, "first ground-truth mask")->required();
    eva->add_option("--gt2", eva_gt2, "second ground-truth mask")->required();
    eva->add_option("--out", eva_out, "output directory for report.csv and renders");
    eva->add_option("--mode", eva_mode, "cell (T=0.8, beta=0.7) or fluor (T=0.6, beta=0.15)")
        ->check(CLI::IsMember({"cell", "fluor"}));
    eva->add_option("--iou-threshold", eva_T, "matching threshold, must exceed 0.5");
    eva->add_option("--beta", eva_beta, "false-positive weight in [0,1]");
    eva->add_flag("--render", eva_render, "emit label and diff renders");
    add_common(eva, eva_common);

    // analyze
    auto* ana = app.add_subcommand("analyze",
                                   "filters, rod measurements and fluorescence analytics to CSV");
    std::string ana_manifest, ana_out;
    CommonArgs ana_common;
    AnalysisArgs ana_analysis;
    ana->add_option("--manifest", ana_manifest, "run manifest (JSON)")->required();
    ana->add_option("--out", ana_out, "output directory")->required();
    add_common(ana, ana_common);
    add_analysis(ana, ana_analysis);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (pre->parsed()) {
            const RunManifest manifest = load_manifest(pre_manifest);
            const nlohmann::json cfg = merge_config(load_config(pre_common.config_path), manifest);
            return cmd_preprocess(manifest, pre_out, make_options(pre_common, {}, cfg, manifest),
                                  std::cerr);
        }
        if (seg->parsed()) {
            const RunManifest manifest = load_manifest(seg_manifest);
            const nlohmann::json cfg = merge_config(load_config(seg_common.config_path), manifest);
            if (seg->count("--method") == 0 && cfg.contains("method"))
                seg_method = cfg.at("method").get<std::string>();
            if (seg->count("--post") == 0 && cfg.contains("post"))
                seg_post = cfg.at("post").get<bool>();
            if (seg->count("--invert") == 0 && cfg.contains("invert"))
                seg_invert = cfg.at("invert").get<bool>();
            if (seg_method != "minimum_error" && seg_method != "yen")
                throw std::invalid_argument("unknown threshold method: " + seg_method);
            const ThresholdMethod method = seg_method == "yen" ? ThresholdMethod::yen
                                                               : ThresholdMethod::minimum_error;
            return cmd_segment(manifest, method, seg_post, seg_invert, seg_out,
                               make_options(seg_common, seg_analysis, cfg, manifest), std::cerr);
        }
        if (eva->parsed()) {
            const nlohmann::json cfg = load_config(eva_common.config_path);
            if (eva->count("--mode") == 0 && cfg.contains("mode"))
                eva_mode = cfg.at("mode").get<std::string>();
            EvalConfig eval_cfg = eva_mode == "fluor" ? EvalConfig::clusters() : EvalConfig::cells();
            eval_cfg.iou_threshold =
                pick<double>(eva_T, cfg, "iou_threshold", eval_cfg.iou_threshold);
            eval_cfg.beta = pick<double>(eva_beta, cfg, "beta", eval_cfg.beta);
            if (!(eval_cfg.iou_threshold > 0.5) || eval_cfg.iou_threshold > 1.0)
                throw std::invalid_argument("--iou-threshold must lie in (0.5, 1]");
            if (eval_cfg.beta < 0.0 || eval_cfg.beta > 1.0)
                throw std::invalid_argument("--beta must lie in [0, 1]");
            if (eva->count("--render") == 0 && cfg.contains("render"))
                eva_render = cfg.at("render").get<bool>();
            const uint32_t seed = pick<uint32_t>(eva_common.seed, cfg, "seed", 42);
            return cmd_evaluate(eva_pred, eva_gt1, eva_gt2, eval_cfg, eva_render, eva_out, seed,
                                std::cerr);
        }
        if (ana->parsed()) {
            const RunManifest manifest = load_manifest(ana_manifest);
            const nlohmann::json cfg = merge_config(load_config(ana_common.config_path), manifest);
            return cmd_analyze(manifest, ana_out, make_options(ana_common, ana_analysis, cfg, manifest),
                               std::cerr);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace microcell
