#pragma once

// Normalized hull offset grids: half-breadths y* tabulated on a fixed
// station x waterline lattice. x* runs bow-to-stern in [0,1], z* runs
// keel-to-waterplane in [-1,0] (the free surface sits at z* = 0), and
// y* is the half-breadth normalized by B/2.

#include <cstddef>
#include <string>
#include <vector>

#include "hullopt/common.hpp"

namespace hullopt {

inline constexpr int kDefaultStations = 40;
inline constexpr int kDefaultWaterlines = 20;

// A normalized half-breadth above this is treated as a pathological
// reconstruction rather than a hull.
inline constexpr double kOffsetSanityCap = 1.5;

struct OffsetGrid {
    std::vector<double> stations;    // x*, strictly increasing, within [0,1]
    std::vector<double> waterlines;  // z*, strictly increasing, within [-1,0]
    std::vector<double> offsets;     // y*, row-major by station: offsets[i*n_waterlines()+j]

    std::size_t n_stations() const { return stations.size(); }
    std::size_t n_waterlines() const { return waterlines.size(); }
    std::size_t n_nodes() const { return offsets.size(); }

    double& at(std::size_t station, std::size_t waterline) {
        return offsets[station * waterlines.size() + waterline];
    }
    double at(std::size_t station, std::size_t waterline) const {
        return offsets[station * waterlines.size() + waterline];
    }

    bool same_template(const OffsetGrid& other) const {
        return stations == other.stations && waterlines == other.waterlines;
    }
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

// Structural invariants; throws ValidationError on violation. Offset *values*
// are checked separately by validate() below, which reports instead of
// throwing because reconstructed grids may legitimately need clamping.
inline void check_grid_structure(const OffsetGrid& grid) {
    if (grid.n_stations() < 2 || grid.n_waterlines() < 2) {
        throw ValidationError("offset grid needs at least 2 stations and 2 waterlines");
    }
    if (grid.offsets.size() != grid.n_stations() * grid.n_waterlines()) {
        throw ValidationError("offset matrix size does not match station/waterline counts");
    }
    for (std::size_t i = 1; i < grid.stations.size(); ++i) {
        if (!(grid.stations[i] > grid.stations[i - 1])) {
            throw ValidationError("stations must be strictly increasing");
        }
    }
    for (std::size_t j = 1; j < grid.waterlines.size(); ++j) {
        if (!(grid.waterlines[j] > grid.waterlines[j - 1])) {
            throw ValidationError("waterlines must be strictly increasing");
        }
    }
    for (double y : grid.offsets) {
        if (!std::isfinite(y)) throw ValidationError("offset values must be finite");
    }
}

struct ValidityReport {
    int negative_offsets = 0;
    int over_cap_offsets = 0;

    bool valid() const { return negative_offsets == 0 && over_cap_offsets == 0; }
};

// Pure diagnostics; never mutates.
inline ValidityReport validate(const OffsetGrid& grid) {
    ValidityReport report;
    for (double y : grid.offsets) {
        if (y < 0.0) ++report.negative_offsets;
        if (y > kOffsetSanityCap) ++report.over_cap_offsets;
    }
    return report;
}

struct ClampResult {
    OffsetGrid grid;
    int clamped_nodes = 0;
};

// Copy with negative offsets set to zero; the count records how many nodes
// changed so callers can log reconstruction quality.
inline ClampResult clamp_negative(const OffsetGrid& grid) {
    ClampResult result{grid, 0};
    for (double& y : result.grid.offsets) {
        if (y < 0.0) {
            y = 0.0;
            ++result.clamped_nodes;
        }
    }
    return result;
}

// The parabolic Wigley hull: y* = (1 - (2x* - 1)^2)(1 - z*^2). Analytic
// anchor for the hydrostatics and wave-resistance tests: C_B = 4/9,
// C_P = 2/3 in the limit of a fine grid.
inline OffsetGrid wigley_grid(std::size_t n_stations = kDefaultStations,
                              std::size_t n_waterlines = kDefaultWaterlines) {
    if (n_stations < 2 || n_waterlines < 2) {
        throw ValidationError("wigley_grid: need at least 2 stations and 2 waterlines");
    }
    OffsetGrid grid;
    grid.stations = linspace(0.0, 1.0, n_stations);
    grid.waterlines = linspace(-1.0, 0.0, n_waterlines);
    grid.offsets.resize(n_stations * n_waterlines);
    for (std::size_t i = 0; i < n_stations; ++i) {
        const double xi = 2.0 * grid.stations[i] - 1.0;
        for (std::size_t j = 0; j < n_waterlines; ++j) {
            const double zeta = grid.waterlines[j];
            grid.at(i, j) = (1.0 - xi * xi) * (1.0 - zeta * zeta);
        }
    }
    return grid;
}

// --- Offset-table file format -------------------------------------------
//
//   hullopt-offsets v1 <n_stations> <n_waterlines>
//   * z*_0 ... z*_{nw-1}
//   x*_0 y*_00 ... y*_0{nw-1}
//   ...
//
// First row carries the waterline coordinates, first column the station
// coordinates. This is also the ingestion path for externally supplied
// offset tables (e.g. digitized Series 60 / S175 data).

inline constexpr const char* kOffsetsMagic = "hullopt-offsets";
inline constexpr const char* kOffsetsVersion = "v1";

inline std::string serialize_offsets(const OffsetGrid& grid) {
    check_grid_structure(grid);
    std::string out;
    out += kOffsetsMagic;
    out += ' ';
    out += kOffsetsVersion;
    out += ' ' + std::to_string(grid.n_stations()) + ' ' + std::to_string(grid.n_waterlines()) + '\n';
    out += '*';
    for (double z : grid.waterlines) out += ' ' + fmt_double(z);
    out += '\n';
    for (std::size_t i = 0; i < grid.n_stations(); ++i) {
        out += fmt_double(grid.stations[i]);
        for (std::size_t j = 0; j < grid.n_waterlines(); ++j) {
            out += ' ' + fmt_double(grid.at(i, j));
        }
        out += '\n';
    }
    return out;
}

inline OffsetGrid parse_offsets(const std::string& text, const std::string& origin = "<string>") {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(origin + ": empty offset table");
    const auto header = split_ws(line);
    if (header.size() != 4 || header[0] != kOffsetsMagic) {
        throw ValidationError(origin + ": not a hullopt offset table");
    }
    if (header[1] != kOffsetsVersion) {
        throw ValidationError(origin + ": unsupported offset-table version '" + header[1] + "'");
    }
    const long ns = parse_long(header[2]);
    const long nw = parse_long(header[3]);
    if (ns < 2 || nw < 2) throw ValidationError(origin + ": grid dimensions out of range");

    OffsetGrid grid;
    if (!std::getline(in, line)) throw ValidationError(origin + ": missing waterline row");
    auto toks = split_ws(line);
    if (toks.size() != static_cast<std::size_t>(nw) + 1 || toks[0] != "*") {
        throw ValidationError(origin + ": malformed waterline row");
    }
    for (long j = 0; j < nw; ++j) grid.waterlines.push_back(parse_double(toks[static_cast<std::size_t>(j) + 1]));

    grid.offsets.reserve(static_cast<std::size_t>(ns * nw));
    for (long i = 0; i < ns; ++i) {
        if (!std::getline(in, line)) throw ValidationError(origin + ": truncated offset table");
        toks = split_ws(line);
        if (toks.size() != static_cast<std::size_t>(nw) + 1) {
            throw ValidationError(origin + ": station row has wrong number of offsets");
        }
        grid.stations.push_back(parse_double(toks[0]));
        for (long j = 0; j < nw; ++j) grid.offsets.push_back(parse_double(toks[static_cast<std::size_t>(j) + 1]));
    }
    check_grid_structure(grid);
    return grid;
}

inline void save_offsets(const std::string& path, const OffsetGrid& grid) {
    write_file(path, serialize_offsets(grid));
}

inline OffsetGrid load_offsets(const std::string& path) {
    return parse_offsets(read_file(path), path);
}

}  // namespace hullopt
