#pragma once

#include <string>
#include <vector>

#include "microcell/components.hpp"

namespace microcell {

/// Matching threshold and false-positive weight. T must exceed 0.5 so that
/// component matching is one-to-one.
struct EvalConfig {
    double iou_threshold = 0.8;
    double beta = 0.7;

    static EvalConfig cells() { return {0.8, 0.7}; }
    static EvalConfig clusters() { return {0.6, 0.15}; }
};

struct MatchPair {
    int index_a = 0;
    int index_b = 0;
    double iou = 0.0;
};

struct MatchTable {
    std::vector<MatchPair> pairs;
    std::vector<int> unmatched_a;
    std::vector<int> unmatched_b;
};

/// Two reference segmentations of one image plus their mutual matching.
/// union_size is the number of distinct objects across both (the shared
/// denominator of every error on this image).
struct GroundTruthPair {
    ComponentSet g1;
    ComponentSet g2;
    MatchTable gt_match;
    int union_size = 0;

    /// Objects present in exactly one of the two segmentations.
    int disagreed_count() const {
        return int(gt_match.unmatched_a.size() + gt_match.unmatched_b.size());
    }
};

struct ProbabilityMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // each in [0,1]
};

struct PerGroundTruth {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    double l_ex = 0.0;
};

struct EvalReport {
    PerGroundTruth gt1;
    PerGroundTruth gt2;
    int union_size = 0;
    double avg_l_ex = 0.0;
    double d_ex = 0.0;
    bool valid = false;
    EvalConfig config;
};

double iou(const Component& c1, const Component& c2);

/// All (a,b) pairs with IoU >= T. Requires T > 0.5.
MatchTable match_components(const ComponentSet& a, const ComponentSet& b, double T);

/// (false positives in pd, false negatives w.r.t. gt) under threshold T.
std::pair<int, int> unmatched_counts(const ComponentSet& pd, const ComponentSet& gt, double T);

struct DetectionMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

/// Precision, recall and F_beta from object counts; 0/0 is defined as 0.
/// f_beta_param is the F-score beta (2 reproduces the reported F2 scores)
/// and is unrelated to EvalConfig::beta.
DetectionMetrics detection_metrics(int tp, int fp, int fn, double f_beta_param = 2.0);

GroundTruthPair make_ground_truth_pair(ComponentSet g1, ComponentSet g2, const EvalConfig& cfg);

/// (beta*FP + (1-beta)*FN) / union_size against ground truth 1 or 2. The
/// denominator always spans both ground truths.
double l_ex_error(const ComponentSet& pd, int gt_index, const GroundTruthPair& pair,
                  const EvalConfig& cfg);

/// Average mutual error of the two ground truths; equals
/// disagreed_count / (2 * union_size) for every beta.
double d_ex_distance(const GroundTruthPair& pair, const EvalConfig& cfg);

/// Full scoring of a prediction against a ground-truth pair.
/// valid <=> (l_ex(pd,G1)+l_ex(pd,G2))/2 <= d_ex(G1,G2).
EvalReport validity(const ComponentSet& pd, const GroundTruthPair& pair, const EvalConfig& cfg);

/// Mean binary cross-entropy with probabilities clamped to [eps, 1-eps].
double pixel_bce(const ProbabilityMap& pr, const BinaryMask& g, double eps = 1e-7);

/// 1 - soft Jaccard index; 0 when both inputs are identically zero.
double pixel_jaccard_loss(const ProbabilityMap& pr, const BinaryMask& g);

/// Two-line CSV (header + row) with the reported column order.
std::string eval_report_csv(const EvalReport& report);

}  // namespace microcell
