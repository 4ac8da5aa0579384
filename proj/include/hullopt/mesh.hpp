#pragma once

// Triangulated mesh export (Wavefront OBJ) of the dimensional hull surface,
// both sides, for external viewing.

#include <string>

#include "hullopt/common.hpp"
#include "hullopt/hull_form.hpp"

namespace hullopt {

inline std::string hull_obj(const HullForm& hull) {
    const DimensionalGrid dims = dimensionalize(hull);
    const std::size_t ns = dims.x.size();
    const std::size_t nw = dims.z.size();
    std::string out = "# hull surface exported by " + std::string(kToolVersion) + "\n";
    // Vertices: starboard block then mirrored port block, row-major by station.
    for (int side = 0; side < 2; ++side) {
        const double sign = side == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < ns; ++i) {
            for (std::size_t j = 0; j < nw; ++j) {
                out += "v " + fmt_double(dims.x[i]) + ' ' + fmt_double(sign * dims.at(i, j)) +
                       ' ' + fmt_double(dims.z[j]) + '\n';
            }
        }
    }
    auto vertex = [nw](std::size_t block, std::size_t i, std::size_t j, std::size_t ns_local) {
        return static_cast<long>(block * ns_local * nw + i * nw + j) + 1;  // OBJ is 1-based
    };
    for (std::size_t block = 0; block < 2; ++block) {
        for (std::size_t i = 0; i + 1 < ns; ++i) {
            for (std::size_t j = 0; j + 1 < nw; ++j) {
                const long v00 = vertex(block, i, j, ns);
                const long v01 = vertex(block, i, j + 1, ns);
                const long v10 = vertex(block, i + 1, j, ns);
                const long v11 = vertex(block, i + 1, j + 1, ns);
                if (block == 0) {
                    out += "f " + std::to_string(v00) + ' ' + std::to_string(v10) + ' ' +
                           std::to_string(v11) + '\n';
                    out += "f " + std::to_string(v00) + ' ' + std::to_string(v11) + ' ' +
                           std::to_string(v01) + '\n';
                } else {
                    // Reversed winding keeps the mirrored side outward-facing.
                    out += "f " + std::to_string(v00) + ' ' + std::to_string(v11) + ' ' +
                           std::to_string(v10) + '\n';
                    out += "f " + std::to_string(v00) + ' ' + std::to_string(v01) + ' ' +
                           std::to_string(v11) + '\n';
                }
            }
        }
    }
    return out;
}

inline void save_hull_obj(const std::string& path, const HullForm& hull) {
    write_file(path, hull_obj(hull));
}

}  // namespace hullopt
