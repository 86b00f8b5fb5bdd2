#include "microcell/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace microcell {

CellFrame fit_cell_frame(const Component& c) {
    if (c.area_px() < 3) throw std::invalid_argument("cell frame needs at least 3 pixels");

    CellFrame f;
    f.centroid_row = c.centroid_row;
    f.centroid_col = c.centroid_col;

    double crr = 0.0, ccc = 0.0, crc = 0.0;
    for (const auto& p : c.pixels) {
        const double dr = p.row - f.centroid_row, dc = p.col - f.centroid_col;
        crr += dr * dr;
        ccc += dc * dc;
        crc += dr * dc;
    }
    const double n = double(c.area_px());
    crr /= n;
    ccc /= n;
    crc /= n;

    const double half_trace = (crr + ccc) / 2.0;
    const double half_diff = (crr - ccc) / 2.0;
    const double disc = std::sqrt(half_diff * half_diff + crc * crc);
    f.major_eigenvalue = half_trace + disc;
    f.minor_eigenvalue = half_trace - disc;

    if (disc <= 1e-12 * std::max(1.0, crr + ccc)) {
        // isotropic pixel cloud: column direction by convention
        f.major_row = 0.0;
        f.major_col = 1.0;
    } else if (crc == 0.0) {
        if (ccc >= crr) {
            f.major_row = 0.0;
            f.major_col = 1.0;
        } else {
            f.major_row = 1.0;
            f.major_col = 0.0;
        }
    } else {
        // (M - lambda I) v = 0 with v = (crc, lambda - crr)
        double vr = crc, vc = f.major_eigenvalue - crr;
        const double len = std::hypot(vr, vc);
        vr /= len;
        vc /= len;
        f.major_row = vr;
        f.major_col = vc;
    }
    if (f.major_col < 0.0 || (f.major_col == 0.0 && f.major_row < 0.0)) {
        f.major_row = -f.major_row;
        f.major_col = -f.major_col;
    }
    f.minor_row = -f.major_col;
    f.minor_col = f.major_row;
    return f;
}

namespace {

// Uniform transverse profile of half-width w has variance w^2/3, so the
// minor-eigenvalue estimate of the rod half-width is sqrt(3 lambda).
double half_width_estimate(const CellFrame& frame) {
    return std::max(0.5, std::sqrt(3.0 * std::max(0.0, frame.minor_eigenvalue)));
}

bool solve3(double A[3][4], double out[3]) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[pivot][col])) pivot = r;
        if (std::fabs(A[pivot][col]) < 1e-12) return false;
        std::swap(A[col], A[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double factor = A[r][col] / A[col][col];
            for (int k = col; k < 4; ++k) A[r][k] -= factor * A[col][k];
        }
    }
    for (int i = 0; i < 3; ++i) out[i] = A[i][3] / A[i][i];
    return true;
}

}  // namespace

Midline fit_midline(const Component& c, const CellFrame& frame) {
    std::vector<double> xs(c.pixels.size()), ys(c.pixels.size());
    double x_min = 0.0, x_max = 0.0;
    for (size_t i = 0; i < c.pixels.size(); ++i) {
        frame.to_frame(c.pixels[i].row, c.pixels[i].col, xs[i], ys[i]);
        if (i == 0) {
            x_min = x_max = xs[i];
        } else {
            x_min = std::min(x_min, xs[i]);
            x_max = std::max(x_max, xs[i]);
        }
    }

    Midline m;
    m.domain_min = x_min;
    m.domain_max = x_max;
    m.fit_span_min = x_min;
    m.fit_span_max = x_max;

    const double extent = x_max - x_min;
    if (extent <= 0.0) return m;  // single cross-section: straight fallback

    // bin width ~ cell width so the outermost bin centers sit about one
    // radius inside the poles (the length formula adds that back)
    const double bin_width = std::max(2.0 * half_width_estimate(frame), 1.0);
    const int n_bins = std::clamp(int(std::llround(extent / bin_width)), 3, 256);

    std::vector<double> sum_x(n_bins, 0.0), sum_y(n_bins, 0.0);
    std::vector<int> count(n_bins, 0);
    for (size_t i = 0; i < xs.size(); ++i) {
        int idx = int((xs[i] - x_min) / extent * n_bins);
        idx = std::clamp(idx, 0, n_bins - 1);
        sum_x[idx] += xs[i];
        sum_y[idx] += ys[i];
        ++count[idx];
    }

    std::vector<double> px, py;
    for (int i = 0; i < n_bins; ++i)
        if (count[i] > 0) {
            px.push_back(sum_x[i] / count[i]);
            py.push_back(sum_y[i] / count[i]);
        }
    if (px.size() < 3) return m;  // straight fallback through the centroid

    // least squares on x shifted to midspan for conditioning
    const double shift = (x_min + x_max) / 2.0;
    double s0 = double(px.size()), s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (size_t i = 0; i < px.size(); ++i) {
        const double u = px[i] - shift, y = py[i];
        const double u2 = u * u;
        s1 += u;
        s2 += u2;
        s3 += u2 * u;
        s4 += u2 * u2;
        t0 += y;
        t1 += u * y;
        t2 += u2 * y;
    }
    double A[3][4] = {{s4, s3, s2, t2}, {s3, s2, s1, t1}, {s2, s1, s0, t0}};
    double coef[3];
    if (solve3(A, coef)) {
        const double a = coef[0], b = coef[1], cc = coef[2];
        m.a = a;
        m.b = b - 2.0 * a * shift;
        m.c = a * shift * shift - b * shift + cc;
    }
    m.fit_span_min = px.front();
    m.fit_span_max = px.back();
    return m;
}

double arc_length_between(const Midline& m, double x0, double x1) {
    if (x1 < x0) std::swap(x0, x1);
    if (x1 == x0) return 0.0;
    constexpr int panels = 2048;  // composite Simpson, even count
    const double h = (x1 - x0) / panels;
    auto f = [&](double x) {
        const double s = m.slope(x);
        return std::sqrt(1.0 + s * s);
    };
    double sum = f(x0) + f(x1);
    for (int i = 1; i < panels; ++i) sum += f(x0 + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double arc_length(const Midline& m) { return arc_length_between(m, m.domain_min, m.domain_max); }

Contour trace_contour(const Component& c) {
    const int h = c.max_row - c.min_row + 1, w = c.max_col - c.min_col + 1;
    std::vector<uint8_t> grid(size_t(h) * w, 0);
    for (const auto& p : c.pixels) grid[size_t(p.row - c.min_row) * w + (p.col - c.min_col)] = 1;
    auto inside = [&](int r, int cc) {
        r -= c.min_row;
        cc -= c.min_col;
        if (r < 0 || r >= h || cc < 0 || cc >= w) return false;
        return grid[size_t(r) * w + cc] != 0;
    };

    Contour contour;
    auto add = [&](double r0, double c0, double r1, double c1) {
        const double len = std::hypot(r1 - r0, c1 - c0);
        contour.perimeter_px += len;
        contour.samples.push_back({(r0 + r1) / 2.0, (c0 + c1) / 2.0, len});
    };

    // marching squares over pixel centers; crossings at half-pixel midpoints
    for (int r = c.min_row - 1; r <= c.max_row; ++r) {
        for (int cc = c.min_col - 1; cc <= c.max_col; ++cc) {
            const int code = (inside(r, cc) ? 1 : 0) | (inside(r, cc + 1) ? 2 : 0) |
                             (inside(r + 1, cc + 1) ? 4 : 0) | (inside(r + 1, cc) ? 8 : 0);
            const double top_r = r, top_c = cc + 0.5;
            const double bot_r = r + 1, bot_c = cc + 0.5;
            const double lef_r = r + 0.5, lef_c = cc;
            const double rig_r = r + 0.5, rig_c = cc + 1;
            switch (code) {
                case 1: add(top_r, top_c, lef_r, lef_c); break;
                case 2: add(top_r, top_c, rig_r, rig_c); break;
                case 3: add(lef_r, lef_c, rig_r, rig_c); break;
                case 4: add(rig_r, rig_c, bot_r, bot_c); break;
                case 5:  // diagonal foreground counts as disconnected (4-connectivity)
                    add(top_r, top_c, lef_r, lef_c);
                    add(rig_r, rig_c, bot_r, bot_c);
                    break;
                case 6: add(top_r, top_c, bot_r, bot_c); break;
                case 7: add(lef_r, lef_c, bot_r, bot_c); break;
                case 8: add(lef_r, lef_c, bot_r, bot_c); break;
                case 9: add(top_r, top_c, bot_r, bot_c); break;
                case 10:
                    add(top_r, top_c, rig_r, rig_c);
                    add(lef_r, lef_c, bot_r, bot_c);
                    break;
                case 11: add(rig_r, rig_c, bot_r, bot_c); break;
                case 12: add(lef_r, lef_c, rig_r, rig_c); break;
                case 13: add(top_r, top_c, rig_r, rig_c); break;
                case 14: add(top_r, top_c, lef_r, lef_c); break;
                default: break;  // 0 and 15: no crossing
            }
        }
    }
    return contour;
}

namespace {

// d/dx of squared distance from (x0,y0) to the curve point (x, m(x))
double proj_derivative(const Midline& m, double x, double x0, double y0) {
    return (x - x0) + (m.eval(x) - y0) * m.slope(x);
}

}  // namespace

double distance_to_midline(const Midline& m, const CellFrame& frame, double row, double col,
                           double* foot_x) {
    double x0, y0;
    frame.to_frame(row, col, x0, y0);

    const double lo = m.domain_min, hi = m.domain_max;
    auto dist_at = [&](double x) { return std::hypot(x - x0, m.eval(x) - y0); };

    double best_x = std::clamp(x0, lo, hi);
    double best_d = dist_at(best_x);

    // coarse scan for projection roots, then Newton refinement
    constexpr int scan = 32;
    double prev_x = lo, prev_g = proj_derivative(m, lo, x0, y0);
    for (int i = 1; i <= scan; ++i) {
        const double x = lo + (hi - lo) * i / scan;
        const double g = proj_derivative(m, x, x0, y0);
        if (prev_g == 0.0 || (prev_g < 0.0) != (g < 0.0)) {
            double xr = (prev_x + x) / 2.0;
            for (int it = 0; it < 60; ++it) {
                const double gr = proj_derivative(m, xr, x0, y0);
                const double s = m.slope(xr);
                const double gp = 1.0 + s * s + (m.eval(xr) - y0) * 2.0 * m.a;
                if (gp == 0.0) break;
                const double step = gr / gp;
                xr -= step;
                xr = std::clamp(xr, prev_x, x);
                if (std::fabs(step) < 1e-9) break;
            }
            const double d = dist_at(std::clamp(xr, lo, hi));
            if (d < best_d) {
                best_d = d;
                best_x = std::clamp(xr, lo, hi);
            }
        }
        prev_x = x;
        prev_g = g;
    }
    for (double x : {lo, hi}) {
        const double d = dist_at(x);
        if (d < best_d) {
            best_d = d;
            best_x = x;
        }
    }
    if (foot_x) *foot_x = best_x;
    return best_d;
}

CellMeasurements measure_cell(const Component& c, const Midline& m, const CellFrame& frame,
                              double pixel_size_um) {
    if (pixel_size_um <= 0.0) throw std::invalid_argument("pixel size must be positive");

    const Contour contour = trace_contour(c);

    // mean perpendicular distance from the boundary to the midline; boundary
    // points whose projection clamps to a domain endpoint lie on the pole
    // caps and are excluded
    double num = 0.0, den = 0.0;
    double num_all = 0.0, den_all = 0.0;
    const double eps = 1e-9;
    for (const auto& s : contour.samples) {
        double foot = 0.0;
        const double d = distance_to_midline(m, frame, s.row, s.col, &foot);
        num_all += s.weight * d;
        den_all += s.weight;
        if (foot > m.domain_min + eps && foot < m.domain_max - eps) {
            num += s.weight * d;
            den += s.weight;
        }
    }
    double radius_px;
    if (den > 0.0)
        radius_px = num / den;
    else if (den_all > 0.0)
        radius_px = num_all / den_all;
    else
        radius_px = half_width_estimate(frame);

    const double arc_px = arc_length_between(m, m.fit_span_min, m.fit_span_max);

    CellMeasurements out;
    out.radius_um = radius_px * pixel_size_um;
    out.width_um = 2.0 * out.radius_um;
    out.length_um = (arc_px + 2.0 * radius_px) * pixel_size_um;
    out.area_um2 = double(c.area_px()) * pixel_size_um * pixel_size_um;
    out.circumference_um = contour.perimeter_px * pixel_size_um;

    const double r = out.radius_um;
    const double cylinder = std::max(out.length_um - 2.0 * r, 0.0);
    out.surface_area_um2 = 2.0 * std::numbers::pi * r * cylinder + 4.0 * std::numbers::pi * r * r;
    out.volume_um3 = std::numbers::pi * r * r * cylinder +
                     4.0 / 3.0 * std::numbers::pi * r * r * r;
    return out;
}

}  // namespace microcell
