#pragma once

// Hydrostatic quantities of the underwater hull, computed grid-natively with
// trapezoidal quadrature: displaced volume, wetted surface, midship section
// area, block and prismatic coefficients, slenderness ratio.

#include <cmath>
#include <vector>

#include "hullopt/common.hpp"
#include "hullopt/hull_form.hpp"

namespace hullopt {

struct HydrostaticsReport {
    double displaced_volume = 0.0;   // m^3
    double wetted_surface = 0.0;     // m^2
    double midship_area = 0.0;       // m^2
    double block_coefficient = 0.0;  // C_B
    double prismatic_coefficient = 0.0;  // C_P
    double slenderness = 0.0;        // L / volume^(1/3)
};

namespace detail {

inline std::vector<double> trapezoid_weights(const std::vector<double>& coords) {
    const std::size_t n = coords.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = coords[i + 1] - coords[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

inline double triangle_area(const double a[3], const double b[3], const double c[3]) {
    const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const double cx = u[1] * v[2] - u[2] * v[1];
    const double cy = u[2] * v[0] - u[0] * v[2];
    const double cz = u[0] * v[1] - u[1] * v[0];
    return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

}  // namespace detail

inline HydrostaticsReport hydrostatics(const HullForm& hull) {
    check_grid_structure(hull.grid);
    check_dimensions(hull.length, hull.length_to_beam, hull.beam_to_draft);
    const DimensionalGrid dims = dimensionalize(hull);
    const std::size_t ns = dims.x.size();
    const std::size_t nw = dims.z.size();

    const std::vector<double> wx = detail::trapezoid_weights(dims.x);
    const std::vector<double> wz = detail::trapezoid_weights(dims.z);

    // Displaced volume: 2 * integral of y over the centerplane.
    double half_volume = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        double column = 0.0;
        for (std::size_t j = 0; j < nw; ++j) column += wz[j] * dims.at(i, j);
        half_volume += wx[i] * column;
    }
    const double volume = 2.0 * half_volume;
    if (!(volume > 0.0)) {
        throw NumericalError("degenerate hull: displaced volume is not positive");
    }

    // Midship section area: transverse section nearest x* = 0.5; with an even
    // station count the two middle stations are averaged.
    double section = 0.0;
    if (ns % 2 == 1) {
        const std::size_t mid = ns / 2;
        for (std::size_t j = 0; j < nw; ++j) section += wz[j] * dims.at(mid, j);
    } else {
        const std::size_t lo = ns / 2 - 1;
        for (std::size_t j = 0; j < nw; ++j) {
            section += wz[j] * 0.5 * (dims.at(lo, j) + dims.at(lo + 1, j));
        }
    }
    const double midship_area = 2.0 * section;
    if (!(midship_area > 0.0)) {
        throw NumericalError("degenerate hull: midship section area is not positive");
    }

    // Wetted surface: bilinear panels between adjacent nodes, each split into
    // two triangles, doubled for the two sides of the hull.
    double surface = 0.0;
    for (std::size_t i = 0; i + 1 < ns; ++i) {
        for (std::size_t j = 0; j + 1 < nw; ++j) {
            const double p00[3] = {dims.x[i], dims.at(i, j), dims.z[j]};
            const double p01[3] = {dims.x[i], dims.at(i, j + 1), dims.z[j + 1]};
            const double p10[3] = {dims.x[i + 1], dims.at(i + 1, j), dims.z[j]};
            const double p11[3] = {dims.x[i + 1], dims.at(i + 1, j + 1), dims.z[j + 1]};
            surface += detail::triangle_area(p00, p10, p11);
            surface += detail::triangle_area(p00, p11, p01);
        }
    }
    surface *= 2.0;

    const double beam = hull.beam();
    const double draft = hull.draft();
    HydrostaticsReport report;
    report.displaced_volume = volume;
    report.wetted_surface = surface;
    report.midship_area = midship_area;
    report.block_coefficient = volume / (hull.length * beam * draft);
    report.prismatic_coefficient = volume / (midship_area * hull.length);
    report.slenderness = hull.length / std::cbrt(volume);
    return report;
}

}  // namespace hullopt
