#pragma once

#include <vector>

#include "microcell/components.hpp"

namespace microcell {

/// Principal-axis frame of a component's pixel centers. Axes are the
/// eigenvectors of the second central moment matrix, expressed as (row, col)
/// unit vectors; major_eigenvalue >= minor_eigenvalue.
struct CellFrame {
    double centroid_row = 0.0;
    double centroid_col = 0.0;
    double major_row = 0.0, major_col = 0.0;
    double minor_row = 0.0, minor_col = 0.0;
    double major_eigenvalue = 0.0;
    double minor_eigenvalue = 0.0;

    /// Image point -> frame coordinates (x along the major axis).
    void to_frame(double row, double col, double& x, double& y) const {
        const double dr = row - centroid_row, dc = col - centroid_col;
        x = dr * major_row + dc * major_col;
        y = dr * minor_row + dc * minor_col;
    }
};

/// Degree-2 midline y = a x^2 + b x + c in frame coordinates.
/// domain spans the pixel centers; fit_span spans the first..last
/// cross-section bin centers actually used for the fit.
struct Midline {
    double a = 0.0, b = 0.0, c = 0.0;
    double domain_min = 0.0, domain_max = 0.0;
    double fit_span_min = 0.0, fit_span_max = 0.0;

    double eval(double x) const { return (a * x + b) * x + c; }
    double slope(double x) const { return 2.0 * a * x + b; }
};

struct CellMeasurements {
    double length_um = 0.0;
    double width_um = 0.0;
    double area_um2 = 0.0;
    double radius_um = 0.0;
    double circumference_um = 0.0;
    double surface_area_um2 = 0.0;
    double volume_um3 = 0.0;
};

/// Requires at least 3 pixels. Collinear pixel sets (zero minor eigenvalue)
/// are allowed. Major axis sign: column component >= 0, ties broken by
/// row component >= 0.
CellFrame fit_cell_frame(const Component& c);

/// Bin the pixels along the major axis, take each bin's mean cross-section
/// center and least-squares fit the parabola. Fewer than 3 usable bins
/// falls back to a straight line through the centroid.
Midline fit_midline(const Component& c, const CellFrame& frame);

/// Curve length over [domain_min, domain_max] by composite Simpson
/// quadrature (relative error well under 1e-6).
double arc_length(const Midline& m);
double arc_length_between(const Midline& m, double x0, double x1);

/// Marching-squares boundary of a component: total polygon length in pixel
/// units plus sampled points (segment midpoints with their segment lengths).
struct ContourSample {
    double row = 0.0, col = 0.0;
    double weight = 0.0;  // segment length
};
struct Contour {
    double perimeter_px = 0.0;
    std::vector<ContourSample> samples;
};
Contour trace_contour(const Component& c);

/// Shortest distance from an image point to the midline curve restricted to
/// its domain, and the x of the nearest curve point (Newton projection).
double distance_to_midline(const Midline& m, const CellFrame& frame, double row, double col,
                           double* foot_x = nullptr);

/// Rod measurements: arc-length-based length with pole-cap extension,
/// contour-based mean radius, spherocylinder surface and volume.
CellMeasurements measure_cell(const Component& c, const Midline& m, const CellFrame& frame,
                              double pixel_size_um);

}  // namespace microcell
