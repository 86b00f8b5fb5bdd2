#include "microcell/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace microcell {

double iou(const Component& c1, const Component& c2) {
    if (c1.pixels.empty() || c2.pixels.empty())
        throw std::invalid_argument("IoU of an empty component");
    // bbox reject before counting pixels
    if (c1.max_row < c2.min_row || c2.max_row < c1.min_row ||
        c1.max_col < c2.min_col || c2.max_col < c1.min_col)
        return 0.0;
    // pixels are raster sorted, intersect by merge
    size_t i = 0, j = 0, inter = 0;
    auto less = [](const PixelCoord& a, const PixelCoord& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    };
    while (i < c1.pixels.size() && j < c2.pixels.size()) {
        if (less(c1.pixels[i], c2.pixels[j]))
            ++i;
        else if (less(c2.pixels[j], c1.pixels[i]))
            ++j;
        else {
            ++inter;
            ++i;
            ++j;
        }
    }
    const size_t uni = c1.pixels.size() + c2.pixels.size() - inter;
    return double(inter) / double(uni);
}

MatchTable match_components(const ComponentSet& a, const ComponentSet& b, double T) {
    if (!(T > 0.5))
        throw std::invalid_argument("matching threshold must exceed 0.5 for unique matches");
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("component sets cover different dimensions");

    // label map of b restricted to overlaps, so only touching pairs are scored
    std::vector<int> b_label(size_t(b.width) * b.height, -1);
    for (size_t bi = 0; bi < b.components.size(); ++bi)
        for (const auto& p : b.components[bi].pixels)
            b_label[size_t(p.row) * b.width + p.col] = int(bi);

    MatchTable table;
    std::vector<char> b_matched(b.components.size(), 0);
    for (size_t ai = 0; ai < a.components.size(); ++ai) {
        const Component& ca = a.components[ai];
        std::map<int, size_t> overlap;  // b index -> intersection size
        for (const auto& p : ca.pixels) {
            const int bi = b_label[size_t(p.row) * b.width + p.col];
            if (bi >= 0) ++overlap[bi];
        }
        bool matched = false;
        for (const auto& [bi, inter] : overlap) {
            const size_t uni = ca.pixels.size() + b.components[bi].pixels.size() - inter;
            const double score = double(inter) / double(uni);
            if (score >= T) {
                table.pairs.push_back({int(ai), bi, score});
                b_matched[bi] = 1;
                matched = true;
                break;  // T > 0.5 guarantees at most one partner
            }
        }
        if (!matched) table.unmatched_a.push_back(int(ai));
    }
    for (size_t bi = 0; bi < b.components.size(); ++bi)
        if (!b_matched[bi]) table.unmatched_b.push_back(int(bi));
    return table;
}

std::pair<int, int> unmatched_counts(const ComponentSet& pd, const ComponentSet& gt, double T) {
    const MatchTable table = match_components(pd, gt, T);
    return {int(table.unmatched_a.size()), int(table.unmatched_b.size())};
}

DetectionMetrics detection_metrics(int tp, int fp, int fn, double f_beta_param) {
    if (tp < 0 || fp < 0 || fn < 0) throw std::invalid_argument("negative detection counts");
    DetectionMetrics m;
    m.precision = (tp + fp) > 0 ? double(tp) / double(tp + fp) : 0.0;
    m.recall = (tp + fn) > 0 ? double(tp) / double(tp + fn) : 0.0;
    const double b2 = f_beta_param * f_beta_param;
    const double denom = b2 * m.precision + m.recall;
    m.f_score = denom > 0.0 ? (1.0 + b2) * m.precision * m.recall / denom : 0.0;
    return m;
}

GroundTruthPair make_ground_truth_pair(ComponentSet g1, ComponentSet g2, const EvalConfig& cfg) {
    GroundTruthPair pair;
    pair.gt_match = match_components(g1, g2, cfg.iou_threshold);
    pair.union_size =
        int(g1.components.size() + g2.components.size() - pair.gt_match.pairs.size());
    pair.g1 = std::move(g1);
    pair.g2 = std::move(g2);
    if (pair.union_size < 1)
        throw std::invalid_argument("ground-truth pair contains no objects");
    return pair;
}

double l_ex_error(const ComponentSet& pd, int gt_index, const GroundTruthPair& pair,
                  const EvalConfig& cfg) {
    if (gt_index != 1 && gt_index != 2) throw std::invalid_argument("gt_index must be 1 or 2");
    const ComponentSet& gt = gt_index == 1 ? pair.g1 : pair.g2;
    const auto [fp, fn] = unmatched_counts(pd, gt, cfg.iou_threshold);
    return (cfg.beta * fp + (1.0 - cfg.beta) * fn) / double(pair.union_size);
}

double d_ex_distance(const GroundTruthPair& pair, const EvalConfig& /*cfg*/) {
    // beta cancels out of the averaged mutual error, leaving half the
    // disagreed objects over the union; this form keeps the cancellation
    // exact in floating point as well
    return pair.disagreed_count() / (2.0 * pair.union_size);
}

EvalReport validity(const ComponentSet& pd, const GroundTruthPair& pair, const EvalConfig& cfg) {
    EvalReport report;
    report.config = cfg;
    report.union_size = pair.union_size;

    auto score = [&](const ComponentSet& gt) {
        PerGroundTruth s;
        const MatchTable table = match_components(pd, gt, cfg.iou_threshold);
        s.tp = int(table.pairs.size());
        s.fp = int(table.unmatched_a.size());
        s.fn = int(table.unmatched_b.size());
        const DetectionMetrics m = detection_metrics(s.tp, s.fp, s.fn);
        s.precision = m.precision;
        s.recall = m.recall;
        s.f_score = m.f_score;
        s.l_ex = (cfg.beta * s.fp + (1.0 - cfg.beta) * s.fn) / double(pair.union_size);
        return s;
    };
    report.gt1 = score(pair.g1);
    report.gt2 = score(pair.g2);
    report.avg_l_ex = (report.gt1.l_ex + report.gt2.l_ex) / 2.0;
    report.d_ex = d_ex_distance(pair, cfg);
    report.valid = report.avg_l_ex <= report.d_ex;
    return report;
}

double pixel_bce(const ProbabilityMap& pr, const BinaryMask& g, double eps) {
    if (pr.width != g.width || pr.height != g.height)
        throw std::invalid_argument("probability map and mask dimensions differ");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (pr.values.empty()) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i < pr.values.size(); ++i) {
        const double p = std::clamp(pr.values[i], eps, 1.0 - eps);
        const double y = g.bits[i] ? 1.0 : 0.0;
        sum += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
    return -sum / double(pr.values.size());
}

double pixel_jaccard_loss(const ProbabilityMap& pr, const BinaryMask& g) {
    if (pr.width != g.width || pr.height != g.height)
        throw std::invalid_argument("probability map and mask dimensions differ");
    double inter = 0.0, pr_sum = 0.0, g_sum = 0.0;
    for (size_t i = 0; i < pr.values.size(); ++i) {
        const double y = g.bits[i] ? 1.0 : 0.0;
        inter += pr.values[i] * y;
        pr_sum += pr.values[i];
        g_sum += y;
    }
    const double uni = pr_sum + g_sum - inter;
    if (uni == 0.0) return 0.0;  // both identically zero
    return 1.0 - inter / uni;
}

std::string eval_report_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "gt1 TP,gt1 FP,gt1 FN,gt1 Precision,gt1 Recall,gt1 F2-Score,gt1 l_ex,"
        << "gt2 TP,gt2 FP,gt2 FN,gt2 Precision,gt2 Recall,gt2 F2-Score,gt2 l_ex,"
        << "Avg. l_ex,d_ex,valid,iou_threshold,beta\n";
    auto put = [&](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        out << buf;
    };
    for (const PerGroundTruth* s : {&report.gt1, &report.gt2}) {
        out << s->tp << ',' << s->fp << ',' << s->fn << ',';
        put(s->precision);
        out << ',';
        put(s->recall);
        out << ',';
        put(s->f_score);
        out << ',';
        put(s->l_ex);
        out << ',';
    }
    put(report.avg_l_ex);
    out << ',';
    put(report.d_ex);
    out << ',' << (report.valid ? "true" : "false") << ',';
    put(report.config.iou_threshold);
    out << ',';
    put(report.config.beta);
    out << '\n';
    return out.str();
}

}  // namespace microcell
