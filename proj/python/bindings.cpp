#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "microcell/analyzer.hpp"
#include "microcell/components.hpp"
#include "microcell/eval.hpp"
#include "microcell/geometry.hpp"
#include "microcell/image.hpp"
#include "microcell/thresholding.hpp"

namespace py = pybind11;
using namespace microcell;

namespace {

BinaryMask mask_from_array(const py::array& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("mask must be a 2D array");
    const py::array_t<uint8_t> a = py::cast<py::array_t<uint8_t>>(
        arr.attr("astype")(py::dtype::of<uint8_t>()));
    const auto r = a.unchecked<2>();
    BinaryMask mask(int(r.shape(1)), int(r.shape(0)));
    for (py::ssize_t i = 0; i < r.shape(0); ++i)
        for (py::ssize_t j = 0; j < r.shape(1); ++j) mask.set(int(i), int(j), r(i, j) != 0);
    return mask;
}

GrayImage gray_from_array(const py::array& arr, double pixel_size_um = 1.0) {
    if (arr.ndim() != 2) throw std::invalid_argument("image must be a 2D array");
    const int depth = arr.itemsize() == 1 ? 8 : 16;
    const py::array_t<uint16_t> a = py::cast<py::array_t<uint16_t>>(
        arr.attr("astype")(py::dtype::of<uint16_t>()));
    const auto r = a.unchecked<2>();
    GrayImage img(int(r.shape(1)), int(r.shape(0)), depth, 0, pixel_size_um);
    for (py::ssize_t i = 0; i < r.shape(0); ++i)
        for (py::ssize_t j = 0; j < r.shape(1); ++j) img.at(int(i), int(j)) = r(i, j);
    return img;
}

py::array_t<uint8_t> mask_to_array(const BinaryMask& mask) {
    py::array_t<uint8_t> out({mask.height, mask.width});
    auto w = out.mutable_unchecked<2>();
    for (int i = 0; i < mask.height; ++i)
        for (int j = 0; j < mask.width; ++j) w(i, j) = mask.at(i, j) ? 1 : 0;
    return out;
}

py::dict report_to_dict(const EvalReport& report) {
    auto side = [](const PerGroundTruth& s) {
        py::dict d;
        d["tp"] = s.tp;
        d["fp"] = s.fp;
        d["fn"] = s.fn;
        d["precision"] = s.precision;
        d["recall"] = s.recall;
        d["f2"] = s.f_score;
        d["l_ex"] = s.l_ex;
        return d;
    };
    py::dict d;
    d["gt1"] = side(report.gt1);
    d["gt2"] = side(report.gt2);
    d["union_size"] = report.union_size;
    d["avg_l_ex"] = report.avg_l_ex;
    d["d_ex"] = report.d_ex;
    d["valid"] = report.valid;
    d["iou_threshold"] = report.config.iou_threshold;
    d["beta"] = report.config.beta;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Segmentation scoring and single-cell measurement primitives";

    m.def(
        "to_8bit",
        [](const py::array& img) {
            const GrayImage out = to_8bit(gray_from_array(img));
            py::array_t<uint8_t> arr({out.height, out.width});
            auto w = arr.mutable_unchecked<2>();
            for (int i = 0; i < out.height; ++i)
                for (int j = 0; j < out.width; ++j) w(i, j) = uint8_t(out.at(i, j));
            return arr;
        },
        py::arg("image"), "Min-max stretch a 16-bit image to 8 bits (round half up).");

    m.def(
        "pad_to_multiple",
        [](const py::array& mask, int multiple) {
            return mask_to_array(pad_to_multiple(mask_from_array(mask), multiple));
        },
        py::arg("mask"), py::arg("multiple") = 32,
        "Pad a mask with background so both dimensions divide `multiple`.");

    m.def(
        "label_components",
        [](const py::array& mask) {
            const ComponentSet set = label_components(mask_from_array(mask));
            py::array_t<int32_t> out({set.height, set.width});
            auto w = out.mutable_unchecked<2>();
            for (int i = 0; i < set.height; ++i)
                for (int j = 0; j < set.width; ++j) w(i, j) = 0;
            for (const auto& comp : set.components)
                for (const auto& p : comp.pixels) w(p.row, p.col) = comp.id;
            return out;
        },
        py::arg("mask"),
        "4-connected labeling; returns an int32 label map (0 = background, ids 1..k in "
        "raster order).");

    m.def(
        "evaluate_masks",
        [](const py::array& pred, const py::array& gt1, const py::array& gt2,
           const std::string& mode, std::optional<double> iou_threshold,
           std::optional<double> beta) {
            EvalConfig cfg = mode == "fluor" ? EvalConfig::clusters() : EvalConfig::cells();
            if (iou_threshold) cfg.iou_threshold = *iou_threshold;
            if (beta) cfg.beta = *beta;
            const GroundTruthPair pair =
                make_ground_truth_pair(label_components(mask_from_array(gt1)),
                                       label_components(mask_from_array(gt2)), cfg);
            const EvalReport report =
                validity(label_components(mask_from_array(pred)), pair, cfg);
            return report_to_dict(report);
        },
        py::arg("pred"), py::arg("gt1"), py::arg("gt2"), py::arg("mode") = "cell",
        py::arg("iou_threshold") = py::none(), py::arg("beta") = py::none(),
        "Score a prediction mask against two ground-truth masks.");

    m.def(
        "compute_threshold",
        [](const py::array& img, const std::string& method) {
            const Histogram256 h = histogram(gray_from_array(img));
            return compute_threshold(h, method == "yen" ? ThresholdMethod::yen
                                                        : ThresholdMethod::minimum_error);
        },
        py::arg("image"), py::arg("method") = "minimum_error",
        "Histogram threshold level ('minimum_error' or 'yen').");

    m.def(
        "apply_threshold",
        [](const py::array& img, int level, bool foreground_above) {
            return mask_to_array(apply_threshold(gray_from_array(img), level,
                                                 foreground_above ? Foreground::above
                                                                  : Foreground::below));
        },
        py::arg("image"), py::arg("level"), py::arg("foreground_above") = true);

    m.def(
        "pixel_bce",
        [](const py::array_t<double>& pr, const py::array& g, double eps) {
            const auto r = pr.unchecked<2>();
            ProbabilityMap map{int(r.shape(1)), int(r.shape(0)), {}};
            map.values.reserve(size_t(r.shape(0) * r.shape(1)));
            for (py::ssize_t i = 0; i < r.shape(0); ++i)
                for (py::ssize_t j = 0; j < r.shape(1); ++j) map.values.push_back(r(i, j));
            return pixel_bce(map, mask_from_array(g), eps);
        },
        py::arg("probabilities"), py::arg("mask"), py::arg("eps") = 1e-7);

    m.def(
        "pixel_jaccard_loss",
        [](const py::array_t<double>& pr, const py::array& g) {
            const auto r = pr.unchecked<2>();
            ProbabilityMap map{int(r.shape(1)), int(r.shape(0)), {}};
            map.values.reserve(size_t(r.shape(0) * r.shape(1)));
            for (py::ssize_t i = 0; i < r.shape(0); ++i)
                for (py::ssize_t j = 0; j < r.shape(1); ++j) map.values.push_back(r(i, j));
            return pixel_jaccard_loss(map, mask_from_array(g));
        },
        py::arg("probabilities"), py::arg("mask"));

    m.def(
        "measure_cells",
        [](const py::array& mask, double pixel_size_um, int min_area_px, double min_gap_px) {
            AnalysisConfig cfg;
            cfg.pixel_size_um = pixel_size_um;
            cfg.min_area_px = min_area_px;
            cfg.min_gap_px = min_gap_px;
            ComponentSet cells = label_components(mask_from_array(mask));
            cells = filter_by_size(cells, cfg);
            cells = filter_by_proximity(cells, cfg);
            py::list rows;
            for (const auto& cell : cells.components) {
                const CellFrame frame = fit_cell_frame(cell);
                const Midline midline = fit_midline(cell, frame);
                const CellMeasurements mm = measure_cell(cell, midline, frame, pixel_size_um);
                py::dict d;
                d["id"] = cell.id;
                d["area_px"] = cell.area_px();
                d["length_um"] = mm.length_um;
                d["width_um"] = mm.width_um;
                d["area_um2"] = mm.area_um2;
                d["radius_um"] = mm.radius_um;
                d["circumference_um"] = mm.circumference_um;
                d["surface_area_um2"] = mm.surface_area_um2;
                d["volume_um3"] = mm.volume_um3;
                rows.append(d);
            }
            return rows;
        },
        py::arg("mask"), py::arg("pixel_size_um") = 1.0, py::arg("min_area_px") = 30,
        py::arg("min_gap_px") = 2.0,
        "Size/proximity-filter a cell mask and measure every kept cell.");

    m.attr("__version__") = "0.1.0";
}
