#pragma once

// Calm-water performance of a hull: frictional + wave resistance, the merit
// coefficient R_T / (rho g V), and the operational merit integral over a
// Froude-number band.

#include <string>
#include <utility>
#include <vector>

#include "hullopt/flow.hpp"
#include "hullopt/hull_form.hpp"
#include "hullopt/hydrostatics.hpp"
#include "hullopt/michell.hpp"

namespace hullopt {

// Froude band accepted for evaluation; outside it either the wave solver's
// assumptions or the friction line's regime are stretched too far.
inline constexpr double kMinFroude = 0.05;
inline constexpr double kMaxFroude = 0.60;

struct ResistanceBreakdown {
    double frictional = 0.0;        // R_F, N
    double wave = 0.0;              // R_W, N
    double total = 0.0;             // R_T = R_F + R_W (form factor k = 0)
    double merit_coefficient = 0.0; // R_T / (rho g V)
};

inline double frictional_resistance(const HullForm& hull, const FlowConditions& flow) {
    const HydrostaticsReport h = hydrostatics(hull);
    return 0.5 * flow.density * flow.speed * flow.speed * h.wetted_surface *
           friction_coefficient(flow.reynolds);
}

inline ResistanceBreakdown evaluate(const HullForm& hull, double froude,
                                    const WaveResistanceOptions& wave_opts = {},
                                    const FluidConstants& fluid = {}) {
    if (!(froude >= kMinFroude && froude <= kMaxFroude)) {
        throw ValidationError("Froude number outside the supported band [0.05, 0.6]");
    }
    const FlowConditions flow = FlowConditions::from_froude(froude, hull.length, fluid);
    const HydrostaticsReport h = hydrostatics(hull);
    ResistanceBreakdown r;
    r.frictional = 0.5 * flow.density * flow.speed * flow.speed * h.wetted_surface *
                   friction_coefficient(flow.reynolds);
    r.wave = wave_resistance(hull, flow, wave_opts);
    r.total = r.frictional + r.wave;
    r.merit_coefficient = r.total / (flow.density * flow.gravity * h.displaced_volume);
    return r;
}

// Operational merit: integral of w(Fn) * merit coefficient over the band,
// trapezoidal on the supplied curve points. The curve must cover the band
// with samples at both endpoints.
inline double operational_merit(const std::vector<std::pair<double, double>>& curve,
                                const SpeedRange& range) {
    range.check();
    const std::vector<double> fns = range.grid();
    const double span = range.fn_upper - range.fn_lower;
    const double tol = 1e-9 * span;

    // Collect the curve points inside the band, in order.
    std::vector<std::pair<double, double>> inside;
    double prev = -1.0;
    for (const auto& [fn, ct] : curve) {
        if (!(fn > prev)) throw ValidationError("merit curve must have strictly increasing Fn");
        prev = fn;
        if (fn >= range.fn_lower - tol && fn <= range.fn_upper + tol) inside.push_back({fn, ct});
    }
    if (inside.size() < 2 || std::abs(inside.front().first - range.fn_lower) > tol ||
        std::abs(inside.back().first - range.fn_upper) > tol) {
        throw ValidationError("merit curve does not cover the requested speed range");
    }

    // Tabulated weights are defined on the range's own grid; require the
    // curve to be sampled there so weight and merit line up pointwise.
    if (!range.weights.empty()) {
        if (inside.size() != fns.size()) {
            throw ValidationError("tabulated weights require the curve on the range grid");
        }
        for (std::size_t i = 0; i < fns.size(); ++i) {
            if (std::abs(inside[i].first - fns[i]) > tol) {
                throw ValidationError("tabulated weights require the curve on the range grid");
            }
        }
    }

    double beta = 0.0;
    for (std::size_t i = 0; i + 1 < inside.size(); ++i) {
        const double h = inside[i + 1].first - inside[i].first;
        const double w0 = range.weights.empty() ? 1.0 / span : range.weights[i];
        const double w1 = range.weights.empty() ? 1.0 / span : range.weights[i + 1];
        beta += 0.5 * h * (w0 * inside[i].second + w1 * inside[i + 1].second);
    }
    return beta;
}

// --- Resistance-curve export -------------------------------------------

struct CurvePoint {
    double froude, speed, reynolds, frictional, wave, total, merit;
};

inline std::vector<CurvePoint> resistance_curve(const HullForm& hull, double fn_lower,
                                                double fn_upper, int n_points,
                                                const WaveResistanceOptions& wave_opts = {},
                                                const FluidConstants& fluid = {}) {
    if (n_points < 2) throw ValidationError("resistance curve needs at least 2 points");
    if (!(fn_lower < fn_upper)) throw ValidationError("resistance curve needs fn_lower < fn_upper");
    std::vector<CurvePoint> curve;
    curve.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double fn = fn_lower + (fn_upper - fn_lower) * static_cast<double>(i) / (n_points - 1);
        const FlowConditions flow = FlowConditions::from_froude(fn, hull.length, fluid);
        const ResistanceBreakdown r = evaluate(hull, fn, wave_opts, fluid);
        curve.push_back({fn, flow.speed, flow.reynolds, r.frictional, r.wave, r.total,
                         r.merit_coefficient});
    }
    return curve;
}

inline std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "Fn,U,Re,R_F,R_W,R_T,C_T\n";
    for (const auto& p : curve) {
        out += fmt_double(p.froude) + ',' + fmt_double(p.speed) + ',' + fmt_double(p.reynolds) +
               ',' + fmt_double(p.frictional) + ',' + fmt_double(p.wave) + ',' +
               fmt_double(p.total) + ',' + fmt_double(p.merit) + '\n';
    }
    return out;
}

}  // namespace hullopt
