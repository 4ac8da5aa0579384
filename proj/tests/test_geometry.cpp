#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "hullopt/hull_form.hpp"
#include "hullopt/hydrostatics.hpp"
#include "hullopt/offset_grid.hpp"
#include "hullopt/parents.hpp"

using namespace hullopt;

namespace {

OffsetGrid box_barge(std::size_t ns, std::size_t nw) {
    OffsetGrid g;
    g.stations = linspace(0.0, 1.0, ns);
    g.waterlines = linspace(-1.0, 0.0, nw);
    g.offsets.assign(ns * nw, 1.0);
    return g;
}

// Independent wetted-surface oracle for the Wigley hull: high-resolution
// Simpson quadrature of 2 * integral sqrt(1 + (dy/dx)^2 + (dy/dz)^2) dx dz
// using the analytic derivatives of y = (B/2)(1 - xi^2)(1 - zeta^2).
double wigley_surface_oracle(double L, double B, double T, int nx = 401, int nz = 201) {
    auto integrand = [&](double x, double z) {
        const double xi = 2.0 * x / L - 1.0;
        const double zeta = z / T;
        const double dydx = -(2.0 * B / L) * xi * (1.0 - zeta * zeta);
        const double dydz = -(B / T) * (1.0 - xi * xi) * zeta;
        return std::sqrt(1.0 + dydx * dydx + dydz * dydz);
    };
    auto simpson_weight = [](int i, int n) {
        if (i == 0 || i == n - 1) return 1.0;
        return i % 2 == 1 ? 4.0 : 2.0;
    };
    const double hx = L / (nx - 1);
    const double hz = T / (nz - 1);
    double acc = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nz; ++j) {
            acc += simpson_weight(i, nx) * simpson_weight(j, nz) *
                   integrand(i * hx, -T + j * hz);
        }
    }
    return 2.0 * acc * hx * hz / 9.0;
}

}  // namespace

TEST_CASE("dimensionalize scales coordinates nodewise") {
    OffsetGrid g;
    g.stations = {0.0, 0.5, 1.0};
    g.waterlines = {-1.0, 0.0};
    g.offsets = {0.0, 0.0, 1.0, 0.5, 0.0, 0.0};
    const DimensionalGrid dims = dimensionalize(g, 100.0, 10.0, 2.5);
    // B = 10, T = 4: node (x*=0.5, y*=1.0, z*=-1.0) -> (50, 5, -4).
    CHECK(dims.x[1] == Catch::Approx(50.0));
    CHECK(dims.at(1, 0) == Catch::Approx(5.0));
    CHECK(dims.z[0] == Catch::Approx(-4.0));
}

TEST_CASE("dimensionalize of all-zero offsets stays zero") {
    OffsetGrid g = wigley_grid(10, 5);
    for (auto& y : g.offsets) y = 0.0;
    const DimensionalGrid dims = dimensionalize(g, 200.0, 8.0, 3.0);
    for (double y : dims.y) CHECK(y == 0.0);
}

TEST_CASE("wigley attains half-beam at the midship waterplane") {
    const HullForm hull = make_hull(wigley_grid(41, 21), 120.0, 8.0, 2.5);
    const DimensionalGrid dims = dimensionalize(hull);
    CHECK(dims.at(20, 20) == Catch::Approx(hull.beam() / 2.0));
}

TEST_CASE("dimensionalize rejects non-positive dimensions") {
    const OffsetGrid g = wigley_grid(10, 5);
    CHECK_THROWS_AS(dimensionalize(g, -1.0, 10.0, 2.5), ValidationError);
    CHECK_THROWS_AS(dimensionalize(g, 100.0, 0.0, 2.5), ValidationError);
    CHECK_THROWS_AS(dimensionalize(g, 100.0, 10.0, -2.0), ValidationError);
}

TEST_CASE("dimensionalize then normalize is the identity") {
    const OffsetGrid g = wigley_grid(40, 20);
    const OffsetGrid back = normalize(dimensionalize(g, 137.0, 7.3, 2.9), 137.0, 7.3, 2.9);
    for (std::size_t i = 0; i < g.n_stations(); ++i) {
        CHECK(std::abs(back.stations[i] - g.stations[i]) <= 1e-12);
    }
    for (std::size_t j = 0; j < g.n_waterlines(); ++j) {
        CHECK(std::abs(back.waterlines[j] - g.waterlines[j]) <= 1e-12);
    }
    for (std::size_t k = 0; k < g.n_nodes(); ++k) {
        CHECK(std::abs(back.offsets[k] - g.offsets[k]) <= 1e-12);
    }
}

TEST_CASE("wigley grid formula anchors") {
    const OffsetGrid g = wigley_grid(41, 21);
    CHECK(g.at(20, 20) == Catch::Approx(1.0));  // midship node (x*=0.5, z*=0)
    for (std::size_t j = 0; j < g.n_waterlines(); ++j) {
        CHECK(g.at(0, j) == 0.0);  // bow profile
        CHECK(g.at(40, j) == 0.0);
    }
    CHECK_THROWS_AS(wigley_grid(1, 20), ValidationError);
    CHECK_THROWS_AS(wigley_grid(40, 1), ValidationError);
}

TEST_CASE("wigley block coefficient converges to 4/9") {
    double prev_err = 1.0;
    for (std::size_t res : {20, 40, 80}) {
        const HullForm hull = make_hull(wigley_grid(res, res / 2), 100.0, 10.0, 2.5);
        const double cb = hydrostatics(hull).block_coefficient;
        const double err = std::abs(cb - 4.0 / 9.0);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 5e-4);
}

TEST_CASE("trapezoidal volume converges at second order on the wigley hull") {
    auto volume_error = [](std::size_t res) {
        const HullForm hull = make_hull(wigley_grid(res + 1, res / 2 + 1), 100.0, 10.0, 2.5);
        const double exact = (4.0 / 9.0) * 100.0 * 10.0 * 4.0;
        return std::abs(hydrostatics(hull).displaced_volume - exact);
    };
    const double e1 = volume_error(40);
    const double e2 = volume_error(80);
    CHECK(e1 / e2 == Catch::Approx(4.0).margin(0.5));
}

TEST_CASE("fine-grid wigley hydrostatics match the reference coefficients") {
    const HullForm hull = make_hull(wigley_grid(160, 80), 100.0, 10.0, 2.5);
    const HydrostaticsReport h = hydrostatics(hull);
    CHECK(std::abs(h.block_coefficient - 0.4444) < 0.002);
    CHECK(std::abs(h.prismatic_coefficient - 0.6667) < 0.002);
}

TEST_CASE("box barge hydrostatics are exact") {
    const HullForm hull = make_hull(box_barge(40, 20), 100.0, 10.0, 2.5);
    const HydrostaticsReport h = hydrostatics(hull);
    CHECK(h.displaced_volume == Catch::Approx(4000.0));
    CHECK(h.block_coefficient == Catch::Approx(1.0));
    CHECK(h.prismatic_coefficient == Catch::Approx(1.0));
    CHECK(h.midship_area == Catch::Approx(10.0 * 4.0));
}

TEST_CASE("panel wetted surface matches the analytic surface integral") {
    const double L = 100.0, LB = 10.0, BT = 2.5;
    const double B = L / LB, T = B / BT;
    const double oracle = wigley_surface_oracle(L, B, T);
    const HullForm hull = make_hull(wigley_grid(40, 20), L, LB, BT);
    const double panels = hydrostatics(hull).wetted_surface;
    CHECK(std::abs(panels - oracle) / oracle < 0.01);
}

TEST_CASE("hydrostatics scale laws") {
    const OffsetGrid g = wigley_grid(40, 20);
    const HydrostaticsReport h1 = hydrostatics(make_hull(g, 100.0, 10.0, 2.5));
    const double s = 2.37;
    const HydrostaticsReport h2 = hydrostatics(make_hull(g, 100.0 * s, 10.0, 2.5));
    CHECK(std::abs(h2.displaced_volume / h1.displaced_volume - s * s * s) < 1e-9 * s * s * s);
    CHECK(std::abs(h2.wetted_surface / h1.wetted_surface - s * s) < 1e-9 * s * s);
    CHECK(std::abs(h2.block_coefficient - h1.block_coefficient) < 1e-9);
    CHECK(std::abs(h2.prismatic_coefficient - h1.prismatic_coefficient) < 1e-9);
    CHECK(std::abs(h2.slenderness - h1.slenderness) < 1e-9 * h1.slenderness);
}

TEST_CASE("degenerate hull is rejected") {
    OffsetGrid g = wigley_grid(10, 5);
    for (auto& y : g.offsets) y = 0.0;
    CHECK_THROWS_AS(hydrostatics(make_hull(g, 100.0, 10.0, 2.5)), NumericalError);
}

TEST_CASE("parents stay within the block/prismatic ordering") {
    for (const auto& p : bundled_parents()) {
        const HydrostaticsReport h = hydrostatics(p.hull());
        INFO(p.name);
        CHECK(h.block_coefficient <= h.prismatic_coefficient + 1e-12);
        CHECK(h.block_coefficient > 0.0);
        CHECK(h.prismatic_coefficient <= 1.0 + 1e-12);
    }
}

TEST_CASE("validate reports without mutating; clamp fixes negatives") {
    OffsetGrid g = wigley_grid(40, 20);
    CHECK(validate(g).valid());

    OffsetGrid bad = g;
    bad.at(3, 4) = -0.01;
    const ValidityReport report = validate(bad);
    CHECK(report.negative_offsets == 1);
    CHECK(report.over_cap_offsets == 0);
    CHECK(bad.at(3, 4) == -0.01);  // untouched

    const ClampResult clamped = clamp_negative(bad);
    CHECK(clamped.clamped_nodes == 1);
    CHECK(clamped.grid.at(3, 4) == 0.0);
    for (std::size_t k = 0; k < g.n_nodes(); ++k) {
        if (k != 3 * 20 + 4) CHECK(clamped.grid.offsets[k] == bad.offsets[k]);
    }

    OffsetGrid tall = g;
    tall.at(5, 5) = kOffsetSanityCap + 0.1;
    CHECK(validate(tall).over_cap_offsets == 1);
}

TEST_CASE("grid structure invariants are enforced") {
    OffsetGrid g = wigley_grid(10, 5);
    OffsetGrid reversed = g;
    std::reverse(reversed.stations.begin(), reversed.stations.end());
    CHECK_THROWS_AS(check_grid_structure(reversed), ValidationError);

    OffsetGrid nan_grid = g;
    nan_grid.offsets[7] = std::nan("");
    CHECK_THROWS_AS(check_grid_structure(nan_grid), ValidationError);

    OffsetGrid short_grid = g;
    short_grid.offsets.pop_back();
    CHECK_THROWS_AS(check_grid_structure(short_grid), ValidationError);
}

TEST_CASE("offset table round-trips byte-identically") {
    const OffsetGrid g = bundled_parents()[2].grid;
    const std::string text = serialize_offsets(g);
    const OffsetGrid back = parse_offsets(text);
    CHECK(serialize_offsets(back) == text);
    CHECK(back.same_template(g));
    CHECK(back.offsets == g.offsets);
}

TEST_CASE("offset table parser rejects malformed input") {
    CHECK_THROWS_AS(parse_offsets("nonsense"), ValidationError);
    CHECK_THROWS_AS(parse_offsets("hullopt-offsets v9 2 2\n* 0 1\n"), ValidationError);
    const std::string truncated = "hullopt-offsets v1 3 2\n* -1 0\n0 0 0\n";
    CHECK_THROWS_AS(parse_offsets(truncated), ValidationError);
}
