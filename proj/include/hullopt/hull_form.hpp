#pragma once

// A hull form is a normalized offset grid plus the three quantities that
// dimensionalize it: length L, length-to-beam ratio, beam-to-draft ratio.

#include <vector>

#include "hullopt/common.hpp"
#include "hullopt/offset_grid.hpp"

namespace hullopt {

struct HullForm {
    OffsetGrid grid;
    double length = 0.0;        // L, meters
    double length_to_beam = 0.0;  // L/B
    double beam_to_draft = 0.0;   // B/T

    double beam() const { return length / length_to_beam; }
    double draft() const { return beam() / beam_to_draft; }
};

inline void check_dimensions(double length, double length_to_beam, double beam_to_draft) {
    if (!(length > 0.0) || !(length_to_beam > 0.0) || !(beam_to_draft > 0.0)) {
        throw ValidationError("hull dimensions L, L/B, B/T must all be positive");
    }
}

inline HullForm make_hull(OffsetGrid grid, double length, double length_to_beam,
                          double beam_to_draft) {
    check_dimensions(length, length_to_beam, beam_to_draft);
    check_grid_structure(grid);
    return HullForm{std::move(grid), length, length_to_beam, beam_to_draft};
}

// Dimensional surface samples: x per station, z per waterline, y per node
// (row-major by station, matching OffsetGrid).
struct DimensionalGrid {
    std::vector<double> x;  // meters, one per station
    std::vector<double> z;  // meters, one per waterline
    std::vector<double> y;  // meters, half-breadths per node

    double at(std::size_t station, std::size_t waterline) const {
        return y[station * z.size() + waterline];
    }
};

// x = x* L, y = y* B/2, z = z* T. Inverse of the offset normalization.
inline DimensionalGrid dimensionalize(const OffsetGrid& grid, double length,
                                      double length_to_beam, double beam_to_draft) {
    check_dimensions(length, length_to_beam, beam_to_draft);
    check_grid_structure(grid);
    const double beam = length / length_to_beam;
    const double draft = beam / beam_to_draft;
    DimensionalGrid out;
    out.x.resize(grid.n_stations());
    out.z.resize(grid.n_waterlines());
    out.y.resize(grid.n_nodes());
    for (std::size_t i = 0; i < grid.n_stations(); ++i) out.x[i] = grid.stations[i] * length;
    for (std::size_t j = 0; j < grid.n_waterlines(); ++j) out.z[j] = grid.waterlines[j] * draft;
    for (std::size_t k = 0; k < grid.n_nodes(); ++k) out.y[k] = grid.offsets[k] * (beam / 2.0);
    return out;
}

inline DimensionalGrid dimensionalize(const HullForm& hull) {
    return dimensionalize(hull.grid, hull.length, hull.length_to_beam, hull.beam_to_draft);
}

// Inverse of dimensionalize; recovers the normalized grid.
inline OffsetGrid normalize(const DimensionalGrid& dims, double length,
                            double length_to_beam, double beam_to_draft) {
    check_dimensions(length, length_to_beam, beam_to_draft);
    const double beam = length / length_to_beam;
    const double draft = beam / beam_to_draft;
    OffsetGrid grid;
    grid.stations.resize(dims.x.size());
    grid.waterlines.resize(dims.z.size());
    grid.offsets.resize(dims.y.size());
    for (std::size_t i = 0; i < dims.x.size(); ++i) grid.stations[i] = dims.x[i] / length;
    for (std::size_t j = 0; j < dims.z.size(); ++j) grid.waterlines[j] = dims.z[j] / draft;
    for (std::size_t k = 0; k < dims.y.size(); ++k) grid.offsets[k] = dims.y[k] / (beam / 2.0);
    return grid;
}

}  // namespace hullopt
