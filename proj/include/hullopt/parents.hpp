#pragma once

// Bundled parent hull fixtures. Four analytic hulls spanning block
// coefficients from 0.44 (Wigley) to 0.70 (full cargo form), all sampled on
// the same station/waterline template so they can seed a PCA basis directly.
// Real offset tables can be substituted through the offset-table file format.

#include <cmath>
#include <string>
#include <vector>

#include "hullopt/hull_form.hpp"
#include "hullopt/offset_grid.hpp"

namespace hullopt {

struct ParentHull {
    std::string name;
    double length;          // nominal L, meters
    double length_to_beam;  // L/B
    double beam_to_draft;   // B/T
    OffsetGrid grid;

    HullForm hull() const { return HullForm{grid, length, length_to_beam, beam_to_draft}; }
    HullForm hull_at(double L) const { return HullForm{grid, L, length_to_beam, beam_to_draft}; }
};

namespace detail {

// Separable hull family: y* = (1 - u^px)(1 - w^pz) with u = |2x* - 1| and
// w = -z*. px sets the longitudinal fullness (C_P = px/(px+1)), pz the
// sectional fullness (C_M = pz/(pz+1)). An optional fore-aft asymmetry
// factor skews the displacement distribution without changing C_B or the
// midship section.
inline OffsetGrid analytic_parent_grid(double px, double pz, double asymmetry,
                                       std::size_t n_stations, std::size_t n_waterlines) {
    OffsetGrid grid;
    grid.stations = linspace(0.0, 1.0, n_stations);
    grid.waterlines = linspace(-1.0, 0.0, n_waterlines);
    grid.offsets.resize(n_stations * n_waterlines);
    for (std::size_t i = 0; i < n_stations; ++i) {
        const double xi = 2.0 * grid.stations[i] - 1.0;
        const double longitudinal = 1.0 - std::pow(std::abs(xi), px);
        for (std::size_t j = 0; j < n_waterlines; ++j) {
            const double w = -grid.waterlines[j];
            const double sectional = 1.0 - std::pow(w, pz);
            const double skew = 1.0 + asymmetry * xi * (1.0 + grid.waterlines[j]);
            grid.at(i, j) = longitudinal * sectional * skew;
        }
    }
    return grid;
}

}  // namespace detail

// Fixed order; every grid shares the same template.
inline std::vector<ParentHull> bundled_parents(std::size_t n_stations = kDefaultStations,
                                               std::size_t n_waterlines = kDefaultWaterlines) {
    std::vector<ParentHull> parents;
    // Full cargo form, C_B ~ 0.60 (C_P ~ 0.615, C_M ~ 0.977).
    parents.push_back({"cargo_cb060", 122.0, 7.5, 2.5,
                       detail::analytic_parent_grid(1.6, 42.0, 0.0, n_stations, n_waterlines)});
    // Fuller cargo form, C_B ~ 0.70 (C_P ~ 0.710, C_M ~ 0.986).
    parents.push_back({"cargo_cb070", 122.0, 7.0, 2.5,
                       detail::analytic_parent_grid(2.45, 70.0, 0.0, n_stations, n_waterlines)});
    // Fine container form with fore-aft asymmetry, C_B ~ 0.56 (C_P ~ 0.583).
    parents.push_back({"container_cb056", 175.0, 6.9, 2.67,
                       detail::analytic_parent_grid(1.4, 28.0, 0.12, n_stations, n_waterlines)});
    // Wigley parabolic hull, C_B = 4/9.
    parents.push_back({"wigley", 100.0, 10.0, 1.6, wigley_grid(n_stations, n_waterlines)});
    return parents;
}

}  // namespace hullopt
