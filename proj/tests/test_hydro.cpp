#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "hullopt/parents.hpp"
#include "hullopt/resistance.hpp"

using namespace hullopt;

namespace {

std::vector<std::pair<double, double>> linear_curve(double fn_lo, double fn_hi, int n, double a,
                                                    double b) {
    std::vector<std::pair<double, double>> curve;
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        curve.emplace_back(fn_lo + (fn_hi - fn_lo) * t, a + (b - a) * t);
    }
    return curve;
}

double wave_coefficient(const HullForm& hull, double fn, const WaveResistanceOptions& opts = {}) {
    const FlowConditions flow = FlowConditions::from_froude(fn, hull.length);
    const double s = hydrostatics(hull).wetted_surface;
    return wave_resistance(hull, flow, opts) / (0.5 * flow.density * flow.speed * flow.speed * s);
}

}  // namespace

TEST_CASE("ITTC line reproduces the reference values") {
    CHECK(std::abs(friction_coefficient(1e9) - 0.075 / 49.0) < 1e-12);
    CHECK(std::abs(friction_coefficient(1e9) - 1.53061e-3) < 1e-8);
    CHECK(friction_coefficient(1e7) == Catch::Approx(3.0e-3).epsilon(1e-12));
    CHECK(friction_coefficient(1e12) == Catch::Approx(7.5e-4).epsilon(1e-12));
}

TEST_CASE("ITTC line is monotone decreasing over the working range") {
    double prev = friction_coefficient(1e6);
    for (double e = 6.1; e <= 12.0; e += 0.1) {
        const double cf = friction_coefficient(std::pow(10.0, e));
        CHECK(cf < prev);
        prev = cf;
    }
}

TEST_CASE("ITTC line rejects the singular regime") {
    CHECK_THROWS_AS(friction_coefficient(100.0), NumericalError);
    CHECK_THROWS_AS(friction_coefficient(-5.0), NumericalError);
}

TEST_CASE("flow conditions are internally consistent") {
    const double L = 240.0;
    const FlowConditions flow = FlowConditions::from_froude(0.22, L);
    CHECK(std::abs(flow.froude - flow.speed / std::sqrt(flow.gravity * L)) < 1e-12);
    CHECK(std::abs(flow.reynolds - flow.speed * L / flow.kinematic_viscosity) <
          1e-12 * flow.reynolds);
    CHECK_THROWS_AS(FlowConditions::from_froude(-0.1, L), ValidationError);
    CHECK_THROWS_AS(FlowConditions::from_froude(0.2, 0.0), ValidationError);
}

TEST_CASE("frictional resistance composes the verified pieces") {
    const double L = 100.0, LB = 10.0, BT = 2.5;
    const HullForm hull = make_hull(wigley_grid(40, 20), L, LB, BT);
    const double fn = 0.2;
    const FlowConditions flow = FlowConditions::from_froude(fn, L);

    // Spreadsheet-style recomputation from first principles.
    const double u = fn * std::sqrt(9.81 * L);
    CHECK(std::abs(u - 6.2641839053) < 1e-8);
    const double re = u * L / 1.016e-6;
    const double cf = 0.075 / std::pow(std::log10(re) - 2.0, 2.0);
    const double s = hydrostatics(hull).wetted_surface;
    const double expected = 0.5 * 1000.0 * u * u * s * cf;
    CHECK(frictional_resistance(hull, flow) == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("doubling speed slightly less than quadruples friction") {
    const HullForm hull = make_hull(wigley_grid(40, 20), 100.0, 10.0, 2.5);
    const FlowConditions f1 = FlowConditions::from_froude(0.1, 100.0);
    const FlowConditions f2 = FlowConditions::from_froude(0.2, 100.0);
    const double ratio = frictional_resistance(hull, f2) / frictional_resistance(hull, f1);
    const double expected =
        4.0 * friction_coefficient(f2.reynolds) / friction_coefficient(f1.reynolds);
    CHECK(ratio == Catch::Approx(expected).epsilon(1e-12));
    CHECK(ratio < 4.0);
}

TEST_CASE("zero-surface hull propagates the degenerate error") {
    OffsetGrid g = wigley_grid(10, 5);
    for (auto& y : g.offsets) y = 0.0;
    const HullForm hull{g, 100.0, 10.0, 2.5};
    CHECK_THROWS_AS(frictional_resistance(hull, FlowConditions::from_froude(0.2, 100.0)),
                    NumericalError);
}

TEST_CASE("wave resistance vanishes against friction at low Froude numbers") {
    for (const auto& p : bundled_parents()) {
        const HullForm hull = p.hull();
        const FlowConditions flow = FlowConditions::from_froude(0.05, hull.length);
        const double rw = wave_resistance(hull, flow);
        const double rf = frictional_resistance(hull, flow);
        INFO(p.name);
        CHECK(rw >= 0.0);
        CHECK(rw / rf < 0.01);
    }
}

TEST_CASE("wave resistance is quadratic in the offsets") {
    const HullForm full = make_hull(wigley_grid(40, 20), 100.0, 10.0, 1.6);
    HullForm half = full;
    for (auto& y : half.grid.offsets) y *= 0.5;  // stays within the sanity cap when doubled
    for (double fn : {0.18, 0.25, 0.32}) {
        const FlowConditions flow = FlowConditions::from_froude(fn, 100.0);
        const double r_full = wave_resistance(full, flow);
        const double r_half = wave_resistance(half, flow);
        CHECK(std::abs(r_full / r_half - 4.0) < 1e-6);
    }
}

TEST_CASE("outer quadrature is self-convergent at default settings") {
    for (const auto& p : bundled_parents()) {
        const HullForm hull = p.hull();
        for (double fn : {0.15, 0.20, 0.25, 0.30, 0.35}) {
            const FlowConditions flow = FlowConditions::from_froude(fn, hull.length);
            const double base = wave_resistance(hull, flow, {256, 1e-14});
            const double halved = wave_resistance(hull, flow, {128, 1e-14});
            const double doubled = wave_resistance(hull, flow, {512, 1e-14});
            INFO(p.name << " Fn=" << fn);
            CHECK(std::abs(halved - base) <= 0.005 * base);
            CHECK(std::abs(doubled - base) <= 0.005 * base);
        }
    }
}

TEST_CASE("wigley wave-resistance curve shows the hump-hollow structure") {
    const HullForm hull = make_hull(wigley_grid(40, 20), 100.0, 10.0, 1.6);
    std::vector<double> cw;
    std::vector<double> fns;
    for (int i = 0; i <= 20; ++i) {
        fns.push_back(0.15 + 0.01 * i);
        cw.push_back(wave_coefficient(hull, fns.back()));
    }
    // A strict interior local maximum within Fn = 0.30 +/- 0.02.
    bool hump = false;
    double hollow_after_hump = 1e300;
    for (std::size_t i = 1; i + 1 < cw.size(); ++i) {
        if (cw[i] > cw[i - 1] && cw[i] > cw[i + 1] && std::abs(fns[i] - 0.30) <= 0.02) {
            hump = true;
            for (std::size_t j = i + 1; j < cw.size(); ++j) {
                hollow_after_hump = std::min(hollow_after_hump, cw[j]);
            }
            break;
        }
    }
    CHECK(hump);
    // Oscillation, not monotone decay: the post-hump hollow stays well above
    // zero and the band rises overall from its low-speed end.
    CHECK(hollow_after_hump > 0.25 * *std::max_element(cw.begin(), cw.end()));
    CHECK(cw.back() > cw.front());
}

TEST_CASE("default evaluation matches a high-resolution quadrature") {
    // Subject: 80x40 grid at default solver settings. Oracle: the same
    // transform evaluated on a 320x160 sampling with an 8x denser outer rule.
    const HullForm subject = make_hull(wigley_grid(80, 40), 100.0, 10.0, 1.6);
    const HullForm reference = make_hull(wigley_grid(320, 160), 100.0, 10.0, 1.6);
    for (int i = 0; i <= 20; i += 2) {
        const double fn = 0.15 + 0.01 * i;
        const FlowConditions flow = FlowConditions::from_froude(fn, 100.0);
        const double got = wave_resistance(subject, flow, {256, 1e-14});
        const double want = wave_resistance(reference, flow, {4096, 1e-14});
        INFO("Fn=" << fn);
        CHECK(std::abs(got - want) <= 0.01 * want);
    }
}

TEST_CASE("wave resistance rejects bad inputs") {
    const HullForm hull = make_hull(wigley_grid(40, 20), 100.0, 10.0, 1.6);
    FlowConditions flow = FlowConditions::from_froude(0.2, 100.0);
    flow.speed = 0.0;
    CHECK_THROWS_AS(wave_resistance(hull, flow), ValidationError);
    CHECK_THROWS_AS(wave_resistance(hull, FlowConditions::from_froude(0.2, 100.0), {4, 1e-14}),
                    ValidationError);
}

TEST_CASE("merit coefficient is positive and respects the Froude band") {
    const auto parents = bundled_parents();
    for (const auto& p : parents) {
        for (double fn : {0.15, 0.25, 0.35}) {
            const ResistanceBreakdown r = evaluate(p.hull(), fn);
            INFO(p.name << " Fn=" << fn);
            CHECK(r.merit_coefficient > 0.0);
            CHECK(r.total == r.frictional + r.wave);
        }
    }
    CHECK_THROWS_AS(evaluate(parents[0].hull(), 0.01), ValidationError);
    CHECK_THROWS_AS(evaluate(parents[0].hull(), 0.7), ValidationError);
}

TEST_CASE("fuller hulls pay more merit at high Froude numbers") {
    const auto parents = bundled_parents();
    const HullForm full_hull{parents[1].grid, 150.0, 8.0, 2.5};  // C_B ~ 0.70
    const HullForm lean_hull{parents[0].grid, 150.0, 8.0, 2.5};  // C_B ~ 0.60
    const double hi_full = evaluate(full_hull, 0.35).merit_coefficient;
    const double hi_lean = evaluate(lean_hull, 0.35).merit_coefficient;
    const double lo_full = evaluate(full_hull, 0.15).merit_coefficient;
    const double lo_lean = evaluate(lean_hull, 0.15).merit_coefficient;
    CHECK(hi_full > hi_lean);
    CHECK(hi_full / hi_lean > lo_full / lo_lean);  // the penalty grows with speed
}

TEST_CASE("merit coefficient is continuous in length at fixed Froude number") {
    const OffsetGrid g = wigley_grid(40, 20);
    double prev = evaluate(HullForm{g, 200.0, 8.0, 2.5}, 0.25).merit_coefficient;
    for (double L : {200.5, 201.0, 201.5}) {
        const double next = evaluate(HullForm{g, L, 8.0, 2.5}, 0.25).merit_coefficient;
        CHECK(std::abs(next - prev) < 0.01 * prev);
        prev = next;
    }
}

TEST_CASE("operational merit: uniform weight exactness") {
    const SpeedRange range{0.2, 0.3, 11, {}};
    const auto constant = linear_curve(0.2, 0.3, 11, 4.2e-3, 4.2e-3);
    CHECK(operational_merit(constant, range) == Catch::Approx(4.2e-3).epsilon(1e-12));

    const auto linear = linear_curve(0.2, 0.3, 11, 1.0e-3, 3.0e-3);
    CHECK(operational_merit(linear, range) == Catch::Approx(2.0e-3).epsilon(1e-12));
}

TEST_CASE("operational merit with tabulated weights matches fine quadrature") {
    // Weight doubled on the upper half of the band, zero on the lower half.
    SpeedRange range{0.2, 0.3, 11, {0, 0, 0, 0, 0, 10, 20, 20, 20, 20, 20}};
    range.check();
    const double a = 1.0e-3, b = 3.0e-3;
    const auto curve = linear_curve(0.2, 0.3, 11, a, b);
    const double beta = operational_merit(curve, range);

    // The operation is the trapezoid rule on the 11 points; check that
    // identity exactly.
    double by_hand = 0.0;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        by_hand += 0.5 * (curve[i + 1].first - curve[i].first) *
                   (range.weights[i] * curve[i].second +
                    range.weights[i + 1] * curve[i + 1].second);
    }
    CHECK(beta == Catch::Approx(by_hand).epsilon(1e-12));

    // Oracle: fine quadrature of the piecewise-linear weight times the linear
    // merit curve; the 11-point trapezoid must agree to quadrature accuracy.
    const int n = 100001;
    double acc = 0.0;
    auto weight_at = [&](double fn) {
        const double pos = (fn - 0.2) / 0.01;
        const std::size_t cell = std::min<std::size_t>(static_cast<std::size_t>(pos), 9);
        const double t = pos - static_cast<double>(cell);
        return range.weights[cell] * (1.0 - t) + range.weights[cell + 1] * t;
    };
    for (int i = 0; i < n; ++i) {
        const double fn = 0.2 + 0.1 * static_cast<double>(i) / (n - 1);
        const double ct = a + (b - a) * (fn - 0.2) / 0.1;
        const double w = weight_at(fn) * ct;
        acc += (i == 0 || i == n - 1) ? 0.5 * w : w;
    }
    const double oracle = acc * 0.1 / (n - 1);
    CHECK(beta == Catch::Approx(oracle).epsilon(0.01));
}

TEST_CASE("operational merit validates coverage and ordering") {
    const SpeedRange range{0.2, 0.3, 5, {}};
    CHECK_THROWS_AS(operational_merit(linear_curve(0.2, 0.28, 5, 1.0, 1.0), range),
                    ValidationError);
    CHECK_THROWS_AS(operational_merit(linear_curve(0.22, 0.3, 5, 1.0, 1.0), range),
                    ValidationError);
    auto unsorted = linear_curve(0.2, 0.3, 5, 1.0, 2.0);
    std::swap(unsorted[1], unsorted[2]);
    CHECK_THROWS_AS(operational_merit(unsorted, range), ValidationError);

    SpeedRange bad{0.3, 0.2, 5, {}};
    CHECK_THROWS_AS(bad.check(), ValidationError);
    SpeedRange wrong_weights{0.2, 0.3, 5, {1.0, 1.0, 1.0}};
    CHECK_THROWS_AS(wrong_weights.check(), ValidationError);
    SpeedRange unnormalized{0.2, 0.3, 5, {5.0, 5.0, 5.0, 5.0, 5.0}};
    CHECK_THROWS_AS(unnormalized.check(), ValidationError);
}

TEST_CASE("pointwise merit dominance implies beta dominance") {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 7;
        SpeedRange range{0.18, 0.32, n, {}};
        if (trial % 2 == 1) {
            // Random non-negative weights, normalized to integrate to 1.
            std::vector<double> w(static_cast<std::size_t>(n));
            for (auto& v : w) v = rng.uniform(0.0, 1.0);
            double integral = 0.0;
            const double h = (0.32 - 0.18) / (n - 1);
            for (int i = 0; i + 1 < n; ++i) {
                integral += 0.5 * h * (w[static_cast<std::size_t>(i)] + w[static_cast<std::size_t>(i) + 1]);
            }
            for (auto& v : w) v /= integral;
            range.weights = w;
        }
        std::vector<std::pair<double, double>> lo_curve, hi_curve;
        for (int i = 0; i < n; ++i) {
            const double fn = 0.18 + (0.32 - 0.18) * i / (n - 1);
            const double base = rng.uniform(1e-3, 5e-3);
            lo_curve.emplace_back(fn, base);
            hi_curve.emplace_back(fn, base + rng.uniform(0.0, 2e-3));
        }
        CHECK(operational_merit(lo_curve, range) <= operational_merit(hi_curve, range) + 1e-15);
    }
}

TEST_CASE("resistance curve export carries all columns") {
    const HullForm hull = make_hull(wigley_grid(40, 20), 100.0, 10.0, 1.6);
    const auto curve = resistance_curve(hull, 0.15, 0.35, 5);
    REQUIRE(curve.size() == 5);
    CHECK(curve.front().froude == Catch::Approx(0.15));
    CHECK(curve.back().froude == Catch::Approx(0.35));
    for (const auto& p : curve) {
        CHECK(p.total == Catch::Approx(p.frictional + p.wave));
        CHECK(p.merit > 0.0);
        CHECK(p.reynolds > 1e8);
    }
    const std::string csv = curve_csv(curve);
    CHECK(csv.rfind("Fn,U,Re,R_F,R_W,R_T,C_T\n", 0) == 0);
}
