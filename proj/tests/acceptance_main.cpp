// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "microcell/analyzer.hpp"
#include "microcell/database.hpp"
#include "microcell/eval.hpp"
#include "microcell/fluor.hpp"
#include "microcell/geometry.hpp"
#include "microcell/image_io.hpp"
#include "microcell/pipeline.hpp"
#include "microcell/thresholding.hpp"
#include "testutil.hpp"

using namespace microcell;
using testutil::PairFixture;
using testutil::TempDir;

namespace {

struct Criterion {
    std::string name;
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void expect_near(double value, double target, double tol, const std::string& what) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s: %.6f vs %.6f (tol %.4g)", what.c_str(), value,
                      target, tol);
        expect(std::fabs(value - target) <= tol, buf);
    }
};

int failures = 0;

void run(int index, const std::string& name, const std::function<void(Criterion&)>& body) {
    Criterion c{name};
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail = std::string("exception: ") + e.what();
    }
    if (c.ok) {
        std::printf("PASS %2d: %s\n", index, name.c_str());
    } else {
        std::printf("FAIL %2d: %s [%s]\n", index, name.c_str(), c.detail.c_str());
        ++failures;
    }
    std::fflush(stdout);
}

double l_ex_from_fixture(const PairFixture& fixture, const GroundTruthPair& pair,
                         const EvalConfig& cfg, int gt_index, int fp, int fn) {
    const ComponentSet pd = label_components(fixture.prediction(gt_index, fp, fn));
    return l_ex_error(pd, gt_index, pair, cfg);
}

// ---------------------------------------------------------------------------
// criteria 1-2: published cluster-segmentation scores
// ---------------------------------------------------------------------------

void criterion_cluster_image1(Criterion& c) {
    const auto start = std::chrono::steady_clock::now();

    const EvalConfig cfg = EvalConfig::clusters();  // T=0.6, beta=0.15
    PairFixture fixture(24, 8, 104, 198);           // union 136
    const GroundTruthPair pair = fixture.pair(cfg);
    c.expect(pair.union_size == 136, "union size is not 136");

    c.expect_near(l_ex_from_fixture(fixture, pair, cfg, 1, 96, 1), 0.112, 0.001, "l_ex(96,1)");
    c.expect_near(l_ex_from_fixture(fixture, pair, cfg, 2, 52, 39), 0.301, 0.001, "l_ex(52,39)");
    c.expect_near(l_ex_from_fixture(fixture, pair, cfg, 1, 198, 1), 0.224, 0.001, "l_ex(198,1)");
    c.expect_near(l_ex_from_fixture(fixture, pair, cfg, 2, 51, 37), 0.287, 0.001, "l_ex(51,37)");

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + "s >= 1s");
}

void criterion_cluster_image2(Criterion& c) {
    const EvalConfig cfg = EvalConfig::clusters();
    PairFixture fixture(56, 4, 26, 14);  // union 86, 30 disagreed
    const GroundTruthPair pair = fixture.pair(cfg);
    c.expect(pair.union_size == 86, "union size is not 86");
    c.expect(pair.disagreed_count() == 30, "disagreed count is not 30");

    c.expect_near(l_ex_from_fixture(fixture, pair, cfg, 1, 0, 4), 0.039, 0.002, "l_ex(0,4)");
    c.expect_near(l_ex_from_fixture(fixture, pair, cfg, 2, 2, 28), 0.280, 0.002, "l_ex(2,28)");
    c.expect_near(l_ex_from_fixture(fixture, pair, cfg, 1, 14, 2), 0.044, 0.002, "l_ex(14,2)");
    c.expect_near(l_ex_from_fixture(fixture, pair, cfg, 2, 3, 25), 0.252, 0.002, "l_ex(3,25)");
    c.expect_near(d_ex_distance(pair, cfg), 0.174, 0.001, "d_ex");
}

// ---------------------------------------------------------------------------
// criteria 3-5: published cell-detection scores
// ---------------------------------------------------------------------------

struct CountRow {
    int tp, fp, fn;
    double precision, recall, f2;
};

// five models scored against each of the two reference segmentations
const std::vector<CountRow> kReference1 = {
    {0, 0, 155, 0.0, 0.0, 0.0},        {155, 245, 0, 0.388, 1.0, 0.760},
    {81, 34, 74, 0.704, 0.523, 0.551}, {43, 3, 112, 0.934, 0.277, 0.323},
    {69, 8, 86, 0.896, 0.445, 0.495},
};
const std::vector<CountRow> kReference2 = {
    {0, 0, 122, 0.0, 0.0, 0.0},        {122, 277, 0, 0.306, 1.0, 0.688},
    {83, 31, 39, 0.728, 0.680, 0.689}, {46, 3, 76, 0.938, 0.377, 0.428},
    {68, 11, 54, 0.861, 0.557, 0.600},
};

void criterion_detection_metrics(Criterion& c) {
    for (const auto* rows : {&kReference1, &kReference2}) {
        for (const CountRow& row : *rows) {
            const DetectionMetrics m = detection_metrics(row.tp, row.fp, row.fn);
            char tag[64];
            std::snprintf(tag, sizeof(tag), "(%d,%d,%d)", row.tp, row.fp, row.fn);
            c.expect_near(m.precision, row.precision, 0.001, std::string(tag) + " precision");
            c.expect_near(m.recall, row.recall, 0.001, std::string(tag) + " recall");
            c.expect_near(m.f_score, row.f2, 0.001, std::string(tag) + " F2");
        }
    }
}

struct Table1Averages {
    double blank, thresh_no_post, mask_rcnn, d_ex;
};

Table1Averages table1_averages() {
    const EvalConfig cfg = EvalConfig::cells();  // T=0.8, beta=0.7
    PairFixture fixture(108, 47, 14, 277);       // |G1|=155, |G2|=122, union 169
    const GroundTruthPair pair = fixture.pair(cfg);
    if (pair.union_size != 169) throw std::runtime_error("union size is not 169");

    auto avg = [&](int fp1, int fn1, int fp2, int fn2) {
        return (l_ex_from_fixture(fixture, pair, cfg, 1, fp1, fn1) +
                l_ex_from_fixture(fixture, pair, cfg, 2, fp2, fn2)) /
               2.0;
    };
    Table1Averages out;
    out.blank = avg(0, 155, 0, 122);
    out.thresh_no_post = avg(245, 0, 277, 0);
    out.mask_rcnn = avg(8, 86, 11, 54);
    out.d_ex = d_ex_distance(pair, cfg);
    return out;
}

void criterion_validity_verdicts(Criterion& c) {
    const Table1Averages t = table1_averages();
    c.expect_near(t.blank, 0.246, 0.006, "blank-mask average l_ex");
    c.expect_near(t.mask_rcnn, 0.163, 0.006, "Mask-RCNN average l_ex");
    c.expect_near(t.thresh_no_post, 1.081, 0.01, "unfiltered-threshold average l_ex");

    // verdicts under the pipeline's own d_ex
    c.expect(t.mask_rcnn <= t.d_ex, "Mask-RCNN should be valid");
    c.expect(t.blank > t.d_ex, "blank mask should be invalid");
    c.expect(t.thresh_no_post > t.d_ex, "unfiltered threshold should be invalid");
    // and unchanged under the published distance value
    const double published_d_ex = 0.174;
    c.expect(t.mask_rcnn <= published_d_ex, "Mask-RCNN valid under the published d_ex");
    c.expect(t.blank > published_d_ex, "blank mask invalid under the published d_ex");
    c.expect(t.thresh_no_post > published_d_ex,
             "unfiltered threshold invalid under the published d_ex");
}

void criterion_blank_ordering(Criterion& c) {
    const Table1Averages t = table1_averages();
    // the error metric ranks the blank mask above the unfiltered threshold...
    c.expect(t.blank < t.thresh_no_post, "blank avg l_ex should be below the threshold model's");
    // ...while F2 ranks it below, from the very same counts
    const double blank_f2_r1 = detection_metrics(0, 0, 155).f_score;
    const double blank_f2_r2 = detection_metrics(0, 0, 122).f_score;
    const double thresh_f2_r1 = detection_metrics(155, 245, 0).f_score;
    const double thresh_f2_r2 = detection_metrics(122, 277, 0).f_score;
    c.expect(blank_f2_r1 < thresh_f2_r1, "blank F2 should be below (reference 1)");
    c.expect(blank_f2_r2 < thresh_f2_r2, "blank F2 should be below (reference 2)");
}

// ---------------------------------------------------------------------------
// criterion 6: metric properties on random mask pairs
// ---------------------------------------------------------------------------

void criterion_metric_properties(Criterion& c) {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 200 && c.ok; ++trial) {
        auto [ma, mb] = testutil::random_blob_pair(128, 128, rng);
        const ComponentSet a = label_components(ma), b = label_components(mb);

        for (double T : {0.6, 0.8}) {
            const EvalConfig cfg{T, 0.7};
            const GroundTruthPair fwd = make_ground_truth_pair(a, b, cfg);
            const GroundTruthPair bwd = make_ground_truth_pair(b, a, cfg);

            const double d = d_ex_distance(fwd, cfg);
            c.expect(d == d_ex_distance(bwd, cfg), "d_ex symmetry broken");

            for (double beta : {0.0, 0.15, 0.5, 0.7, 1.0})
                c.expect(d_ex_distance(fwd, EvalConfig{T, beta}) == d,
                         "d_ex depends on beta");

            const double via_avg = (l_ex_error(fwd.g1, 2, fwd, cfg) +
                                    l_ex_error(fwd.g2, 1, fwd, cfg)) /
                                   2.0;
            c.expect(std::fabs(d - via_avg) <= 1e-12, "d_ex dual forms disagree");

            c.expect(validity(fwd.g1, fwd, cfg).valid, "G1 not valid for its own pair");
            c.expect(validity(fwd.g2, fwd, cfg).valid, "G2 not valid for its own pair");

            std::set<int> seen_a, seen_b;
            for (const auto& p : fwd.gt_match.pairs) {
                c.expect(seen_a.insert(p.index_a).second, "match not injective on A");
                c.expect(seen_b.insert(p.index_b).second, "match not injective on B");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// criterion 7: labeling against the flood-fill oracle
// ---------------------------------------------------------------------------

void criterion_labeling_oracle(Criterion& c) {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 1000 && c.ok; ++trial) {
        const BinaryMask mask = testutil::random_mask(64, 64, 0.3, rng);
        int oracle_count = 0;
        const std::vector<int> oracle = testutil::flood_fill_labels(mask, oracle_count);
        const ComponentSet set = label_components(mask);
        c.expect(int(set.size()) == oracle_count, "component count mismatch");
        std::vector<int> labels(mask.bits.size(), 0);
        for (const auto& comp : set.components)
            for (const auto& p : comp.pixels) labels[size_t(p.row) * mask.width + p.col] = comp.id;
        c.expect(labels == oracle, "per-pixel labels mismatch");
    }
}

// ---------------------------------------------------------------------------
// criterion 8: pixel losses
// ---------------------------------------------------------------------------

void criterion_pixel_losses(Criterion& c) {
    std::mt19937 rng(555);
    std::uniform_real_distribution<double> prob(0.0, 1.0);

    for (int trial = 0; trial < 100 && c.ok; ++trial) {
        const BinaryMask g = testutil::random_mask(8, 8, 0.5, rng);
        ProbabilityMap pr{8, 8, std::vector<double>(64)};
        for (auto& v : pr.values) v = prob(rng);

        // naive double-loop oracles
        double bce = 0.0, inter = 0.0, denom = 0.0;
        for (int r = 0; r < 8; ++r)
            for (int cc = 0; cc < 8; ++cc) {
                const size_t i = size_t(r) * 8 + cc;
                const double p = std::clamp(pr.values[i], 1e-7, 1.0 - 1e-7);
                bce += g.bits[i] ? std::log(p) : std::log(1.0 - p);
                inter += pr.values[i] * g.bits[i];
                denom += pr.values[i] + g.bits[i];
            }
        bce = -bce / 64.0;
        denom -= inter;
        const double jac = denom == 0.0 ? 0.0 : 1.0 - inter / denom;
        c.expect(std::fabs(pixel_bce(pr, g) - bce) <= 1e-12, "BCE differs from the oracle");
        c.expect(std::fabs(pixel_jaccard_loss(pr, g) - jac) <= 1e-12,
                 "Jaccard loss differs from the oracle");

        // uniform 0.5 map: ln 2 regardless of the mask
        const ProbabilityMap half{8, 8, std::vector<double>(64, 0.5)};
        c.expect(std::fabs(pixel_bce(half, g) - std::numbers::ln2) <= 1e-9,
                 "BCE at 0.5 is not ln 2");

        // binary map: 1 - IoU of the foregrounds
        BinaryMask p_mask = testutil::random_mask(8, 8, 0.5, rng);
        p_mask.set(0, 0, true);
        BinaryMask g2 = g;
        g2.set(1, 1, true);
        ProbabilityMap binary{8, 8, std::vector<double>(64)};
        for (size_t i = 0; i < 64; ++i) binary.values[i] = p_mask.bits[i] ? 1.0 : 0.0;
        size_t bi = 0, bu = 0;
        for (size_t i = 0; i < 64; ++i) {
            bi += p_mask.bits[i] && g2.bits[i];
            bu += p_mask.bits[i] || g2.bits[i];
        }
        c.expect(std::fabs(pixel_jaccard_loss(binary, g2) - (1.0 - double(bi) / double(bu))) <=
                     1e-12,
                 "binary Jaccard loss is not 1 - IoU");
    }
}

// ---------------------------------------------------------------------------
// criterion 9: threshold criteria against brute-force scans
// ---------------------------------------------------------------------------

double oracle_min_error(const Histogram256& h, int t) {
    const double n = double(h.total);
    double w0 = 0, w1 = 0, m0 = 0, m1 = 0, v0 = 0, v1 = 0;
    for (int i = 0; i <= t; ++i) {
        w0 += h.counts[i] / n;
        m0 += h.counts[i] / n * i;
    }
    for (int i = t + 1; i < 256; ++i) {
        w1 += h.counts[i] / n;
        m1 += h.counts[i] / n * i;
    }
    if (w0 <= 0 || w1 <= 0) return std::numeric_limits<double>::infinity();
    m0 /= w0;
    m1 /= w1;
    for (int i = 0; i <= t; ++i) v0 += h.counts[i] / n * (i - m0) * (i - m0);
    for (int i = t + 1; i < 256; ++i) v1 += h.counts[i] / n * (i - m1) * (i - m1);
    v0 = v0 / w0 + 1.0 / 12.0;
    v1 = v1 / w1 + 1.0 / 12.0;
    return 1 + 2 * (w0 * std::log(std::sqrt(v0)) + w1 * std::log(std::sqrt(v1))) -
           2 * (w0 * std::log(w0) + w1 * std::log(w1));
}

double oracle_yen(const Histogram256& h, int t) {
    const double n = double(h.total);
    double w0 = 0, g0 = 0, g1 = 0;
    for (int i = 0; i <= t; ++i) {
        const double p = h.counts[i] / n;
        w0 += p;
        g0 += p * p;
    }
    for (int i = t + 1; i < 256; ++i) g1 += (h.counts[i] / n) * (h.counts[i] / n);
    const double w1 = 1 - w0;
    if (w0 <= 0 || w1 <= 0 || g0 <= 0 || g1 <= 0)
        return -std::numeric_limits<double>::infinity();
    return -std::log(g0 * g1) + 2 * std::log(w0 * w1);
}

void criterion_thresholding(Criterion& c) {
    std::mt19937 rng(987654);
    std::uniform_real_distribution<double> mu0(40, 80), mu1(150, 210), sig(5, 20), w(0.25, 0.75);
    for (int trial = 0; trial < 100 && c.ok; ++trial) {
        Histogram256 h;
        std::normal_distribution<double> low(mu0(rng), sig(rng)), high(mu1(rng), sig(rng));
        std::bernoulli_distribution pick(w(rng));
        for (int i = 0; i < 10000; ++i) {
            const double v = pick(rng) ? low(rng) : high(rng);
            ++h.counts[std::clamp(int(std::lround(v)), 0, 255)];
        }
        h.total = 10000;

        // independent scans with the documented median-of-plateau tie rule
        auto scan = [&](const std::function<double(int)>& crit_at, double& optimum) {
            double best = std::numeric_limits<double>::infinity();
            std::vector<int> ties;
            for (int t = 0; t < 256; ++t) {
                const double crit = crit_at(t);
                if (!std::isfinite(crit)) continue;
                if (crit < best) {
                    best = crit;
                    ties.assign(1, t);
                } else if (crit == best) {
                    ties.push_back(t);
                }
            }
            optimum = best;
            return ties[ties.size() / 2];
        };
        double me_opt = 0.0, yen_opt = 0.0;
        const int best_me = scan([&](int t) { return oracle_min_error(h, t); }, me_opt);
        const int best_yen = scan([&](int t) { return -oracle_yen(h, t); }, yen_opt);

        const int got_me = compute_threshold(h, ThresholdMethod::minimum_error);
        const int got_yen = compute_threshold(h, ThresholdMethod::yen);
        c.expect(std::abs(got_me - best_me) <= 2, "minimum-error level off the criterion optimum");
        c.expect(std::abs(got_yen - best_yen) <= 2, "yen level off the criterion optimum");
        c.expect(std::fabs(oracle_min_error(h, got_me) - me_opt) <= 1e-12,
                 "minimum-error value not optimal");
        c.expect(std::fabs(-oracle_yen(h, got_yen) - yen_opt) <= 1e-12, "yen value not optimal");

        Histogram256 scaled = h;
        for (auto& cnt : scaled.counts) cnt *= 7;
        scaled.total *= 7;
        c.expect(compute_threshold(scaled, ThresholdMethod::minimum_error) == got_me,
                 "minimum-error not scale invariant");
        c.expect(compute_threshold(scaled, ThresholdMethod::yen) == got_yen,
                 "yen not scale invariant");
    }
}

// ---------------------------------------------------------------------------
// criterion 10: rod geometry
// ---------------------------------------------------------------------------

Component single_component(const BinaryMask& mask) {
    ComponentSet set = label_components(mask);
    if (set.size() != 1) throw std::runtime_error("expected exactly one component");
    return set.components[0];
}

CellMeasurements measure_mask(const BinaryMask& mask, double ps) {
    const Component c = single_component(mask);
    const CellFrame f = fit_cell_frame(c);
    return measure_cell(c, fit_midline(c, f), f, ps);
}

BinaryMask rotated_rect(double deg, double half_len, double half_wid, int canvas) {
    const double th = deg * std::numbers::pi / 180.0, ct = std::cos(th), st = std::sin(th);
    const double cr = canvas / 2.0 + 0.13, cc = canvas / 2.0 + 0.37;
    BinaryMask mask(canvas, canvas);
    for (int r = 0; r < canvas; ++r)
        for (int col = 0; col < canvas; ++col) {
            const double dr = r - cr, dc = col - cc;
            const double u = dc * ct + dr * st, v = -dc * st + dr * ct;
            if (std::fabs(u) < half_len && std::fabs(v) < half_wid) mask.set(r, col, true);
        }
    return mask;
}

void criterion_geometry(Criterion& c) {
    // 100 x 10 px rectangle at 0.1 um/px
    BinaryMask rect(120, 30);
    testutil::fill_rect(rect, 10, 10, 10, 100);
    const CellMeasurements m = measure_mask(rect, 0.1);
    c.expect_near(m.length_um, 10.0, 0.5, "rectangle length");
    c.expect_near(m.width_um, 1.0, 0.05, "rectangle width");
    c.expect_near(m.area_um2, 10.0, 0.5, "rectangle area");

    // rotation robustness within 5% of the unrotated rod
    const CellMeasurements base = measure_mask(rotated_rect(0, 50, 5, 140), 0.1);
    for (double deg : {15.0, 30.0, 45.0}) {
        const CellMeasurements rot = measure_mask(rotated_rect(deg, 50, 5, 140), 0.1);
        char tag[48];
        std::snprintf(tag, sizeof(tag), "rotation %g deg", deg);
        c.expect_near(rot.length_um, base.length_um, 0.05 * base.length_um,
                      std::string(tag) + " length");
        c.expect_near(rot.width_um, base.width_um, 0.05 * base.width_um,
                      std::string(tag) + " width");
    }

    // parabola arc length: y = x^2 over [0,1]
    const Midline parabola{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0};
    c.expect_near(arc_length(parabola), 1.47894, 1e-3, "parabola arc length");

    // spherocylinder identities on a measured rod, and the exact degenerate
    // sphere case
    const double r = m.radius_um;
    const double cylinder = std::max(m.length_um - 2.0 * r, 0.0);
    c.expect(std::fabs(m.surface_area_um2 -
                       (2 * std::numbers::pi * r * cylinder + 4 * std::numbers::pi * r * r)) <=
                 1e-12,
             "surface identity");
    c.expect(std::fabs(m.volume_um3 - (std::numbers::pi * r * r * cylinder +
                                       4.0 / 3.0 * std::numbers::pi * r * r * r)) <= 1e-12,
             "volume identity");
    const double rs = 1.7, sphere_cyl = std::max(2.0 * rs - 2.0 * rs, 0.0);
    c.expect(2 * std::numbers::pi * rs * sphere_cyl + 4 * std::numbers::pi * rs * rs ==
                 4 * std::numbers::pi * rs * rs,
             "sphere surface not exact");
    c.expect(std::numbers::pi * rs * rs * sphere_cyl +
                     4.0 / 3.0 * std::numbers::pi * rs * rs * rs ==
                 4.0 / 3.0 * std::numbers::pi * rs * rs * rs,
             "sphere volume not exact");
}

// ---------------------------------------------------------------------------
// criterion 11: fluorescence analytics
// ---------------------------------------------------------------------------

void criterion_fluorescence(Criterion& c) {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> value(0, 255), pos(2, 30), size(4, 12);

    for (int trial = 0; trial < 50 && c.ok; ++trial) {
        BinaryMask mask(64, 64);
        testutil::fill_rect(mask, pos(rng), pos(rng), size(rng) / 2 + 3, size(rng) + 8);
        const Component cell = single_component(mask);
        const CellFrame frame = fit_cell_frame(cell);
        GrayImage img(64, 64, 8);
        for (auto& v : img.pixels) v = uint16_t(value(rng));

        for (auto axis : {ProfileAxis::horizontal, ProfileAxis::vertical}) {
            const auto prof = intensity_profile(cell, frame, img, axis, ProfileAgg::sum);
            c.expect(prof.size() == 20, "profile length is not 20");
            double total = 0.0, direct = 0.0;
            for (double v : prof) total += v;
            for (const auto& p : cell.pixels) direct += img.at(p.row, p.col);
            c.expect(total == direct, "sum profile does not conserve the total");
        }
    }

    // strict polar boundary: x = 0.25 and x = 0.75 exactly are not polar
    BinaryMask cell_mask(30, 30);
    testutil::fill_rect(cell_mask, 10, 5, 4, 21);  // cols 5..25
    const Component cell = single_component(cell_mask);
    const CellFrame frame = fit_cell_frame(cell);
    const Midline midline = fit_midline(cell, frame);
    auto polar_at = [&](int col) {
        BinaryMask cm(30, 30);
        testutil::fill_rect(cm, 11, col, 1, 1);
        GrayImage img(30, 30, 8);
        img.at(11, col) = 99;
        return cluster_metrics(single_component(cm), cell, frame, midline, img, 1.0);
    };
    c.expect(polar_at(20).center_x == 0.75 && !polar_at(20).is_polar, "x=0.75 must not be polar");
    c.expect(polar_at(10).center_x == 0.25 && !polar_at(10).is_polar, "x=0.25 must not be polar");
    c.expect(polar_at(21).is_polar && polar_at(9).is_polar, "just past the boundary is polar");
}

// ---------------------------------------------------------------------------
// criterion 12: end-to-end determinism, schema and runtime
// ---------------------------------------------------------------------------

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MICROCELL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    std::stringstream ss;
    ss << file.rdbuf();
    return ss.str();
}

void write_synthetic_frame(const TempDir& dir, int id) {
    BinaryMask cells(160, 120), clusters(160, 120);
    GrayImage gfp(160, 120, 8, 15), rfp(160, 120, 8, 40);
    testutil::fill_rect(cells, 10, 10 + id, 8, 50);
    testutil::fill_rect(cells, 40, 20, 10, 60);
    testutil::fill_rect(cells, 70, 30, 8, 44);
    testutil::fill_rect(clusters, 12, 14 + id, 3, 3);
    testutil::fill_rect(clusters, 12, 40 + id, 3, 3);
    testutil::fill_rect(clusters, 44, 30, 4, 4);
    for (int r = 12; r < 15; ++r)
        for (int cc = 14 + id; cc < 17 + id; ++cc) gfp.at(r, cc) = uint16_t(150 + id);
    gfp.at(45, 31) = 222;
    const std::string tag = std::to_string(id);
    save_mask_png(cells, dir.str("cells_" + tag + ".png"));
    save_mask_png(clusters, dir.str("clusters_" + tag + ".png"));
    save_gray_png(gfp, dir.str("gfp_" + tag + ".png"));
    save_gray_png(rfp, dir.str("rfp_" + tag + ".png"));
}

void criterion_end_to_end(Criterion& c) {
    TempDir dir("acceptance_e2e");
    for (int i = 0; i < 3; ++i) write_synthetic_frame(dir, i);
    {
        std::ofstream out(dir.str("manifest.json"));
        out << "{\"pixel_size_um\":0.1,\"frames\":[";
        for (int i = 0; i < 3; ++i) {
            const std::string tag = std::to_string(i);
            out << (i ? "," : "") << "{\"frame_id\":" << i << ",\"cell_mask\":\"cells_" << tag
                << ".png\",\"channels\":[{\"name\":\"gfp\",\"image\":\"gfp_" << tag
                << ".png\",\"cluster_mask\":\"clusters_" << tag
                << ".png\"},{\"name\":\"rfp\",\"image\":\"rfp_" << tag << ".png\"}]}";
        }
        out << "]}";
    }
    const std::string base = "analyze --manifest " + dir.str("manifest.json");
    c.expect(run_cli(base + " --out " + dir.str("run1")) == 0, "first analyze run failed");
    c.expect(run_cli(base + " --out " + dir.str("run2") + " --jobs 3") == 0,
             "second analyze run failed");

    const std::string db1 = slurp(dir.str("run1/database.csv"));
    c.expect(!db1.empty(), "database.csv is empty");
    c.expect(db1 == slurp(dir.str("run2/database.csv")), "runs differ byte-wise");

    const std::string golden = slurp(std::string(MICROCELL_GOLDEN_DIR) + "/database_header.csv");
    const std::string header = db1.substr(0, db1.find('\n') + 1);
    c.expect(!golden.empty(), "golden header missing");
    c.expect(header == golden, "header does not match the golden file");

    // a 1024x1024 frame with 40 rods end to end in under 10 seconds
    TempDir big("acceptance_big");
    BinaryMask cells(1024, 1024), clusters(1024, 1024);
    GrayImage fluor(1024, 1024, 8, 25);
    for (int i = 0; i < 40; ++i) {
        const int r = 40 + (i / 5) * 120, cc = 40 + (i % 5) * 190;
        testutil::fill_rect(cells, r, cc, 14, 90);
        testutil::fill_rect(clusters, r + 4, cc + 6, 5, 5);
        for (int rr = r + 4; rr < r + 9; ++rr)
            for (int c2 = cc + 6; c2 < cc + 11; ++c2) fluor.at(rr, c2) = 210;
    }
    save_mask_png(cells, big.str("cells.png"));
    save_mask_png(clusters, big.str("clusters.png"));
    save_gray_png(fluor, big.str("fluor.png"));
    {
        std::ofstream out(big.str("manifest.json"));
        out << R"({"pixel_size_um":0.065,"frames":[{"frame_id":0,"cell_mask":"cells.png",)"
            << R"("channels":[{"name":"gfp","image":"fluor.png","cluster_mask":"clusters.png"}]}]})";
    }
    const auto start = std::chrono::steady_clock::now();
    c.expect(run_cli("analyze --manifest " + big.str("manifest.json") + " --out " +
                     big.str("out")) == 0,
             "large frame analyze failed");
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(elapsed < 10.0, "large frame took " + std::to_string(elapsed) + "s");

    const std::string big_db = slurp(big.str("out/database.csv"));
    c.expect(std::count(big_db.begin(), big_db.end(), '\n') == 41, "expected 40 rows");
}

}  // namespace

int main() {
    run(1, "cluster scores, validation image 1 (union 136)", criterion_cluster_image1);
    run(2, "cluster scores, validation image 2 (union 86, d_ex)", criterion_cluster_image2);
    run(3, "detection precision/recall/F2 for all published counts", criterion_detection_metrics);
    run(4, "cell validity verdicts (union 169)", criterion_validity_verdicts);
    run(5, "blank-mask ordering: l_ex and F2 disagree as published", criterion_blank_ordering);
    run(6, "metric property suite on 200 random mask pairs", criterion_metric_properties);
    run(7, "component labeling vs flood-fill oracle (1000 masks)", criterion_labeling_oracle);
    run(8, "pixel losses vs naive oracles", criterion_pixel_losses);
    run(9, "threshold criteria vs brute-force scans", criterion_thresholding);
    run(10, "rod geometry: rectangle, rotations, arc length, sphere", criterion_geometry);
    run(11, "fluorescence profiles and polar boundary", criterion_fluorescence);
    run(12, "end-to-end determinism, schema and runtime", criterion_end_to_end);

    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
