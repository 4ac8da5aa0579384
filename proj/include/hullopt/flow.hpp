#pragma once

// Flow conditions and the ITTC friction line.

#include <cmath>
#include <vector>

#include "hullopt/common.hpp"

namespace hullopt {

// Fresh-water constants; the kinematic viscosity matches the value used for
// the resistance dataset.
struct FluidConstants {
    double density = 1000.0;              // rho, kg/m^3
    double gravity = 9.81;                // g, m/s^2
    double kinematic_viscosity = 1.016e-6;  // nu, m^2/s
};

struct FlowConditions {
    double speed = 0.0;     // U, m/s
    double froude = 0.0;    // Fn = U / sqrt(gL)
    double reynolds = 0.0;  // Re = UL / nu
    double density = 0.0;
    double kinematic_viscosity = 0.0;
    double gravity = 0.0;

    static FlowConditions from_froude(double froude, double length,
                                      const FluidConstants& fluid = {}) {
        if (!(froude > 0.0)) throw ValidationError("Froude number must be positive");
        if (!(length > 0.0)) throw ValidationError("hull length must be positive");
        FlowConditions flow;
        flow.speed = froude * std::sqrt(fluid.gravity * length);
        flow.froude = froude;
        flow.reynolds = flow.speed * length / fluid.kinematic_viscosity;
        flow.density = fluid.density;
        flow.kinematic_viscosity = fluid.kinematic_viscosity;
        flow.gravity = fluid.gravity;
        return flow;
    }
};

inline double reynolds_from_froude(double froude, double length,
                                   const FluidConstants& fluid = {}) {
    return froude * std::sqrt(fluid.gravity * length) * length / fluid.kinematic_viscosity;
}

// ITTC 1957 correlation line, C_F = 0.075 / (log10(Re) - 2)^2. Singular at
// log10(Re) = 2, so the regime below Re = 100 is rejected.
inline double friction_coefficient(double reynolds) {
    if (!(reynolds > 100.0)) {
        throw NumericalError("friction line is singular for Re <= 100");
    }
    const double denom = std::log10(reynolds) - 2.0;
    return 0.075 / (denom * denom);
}

// Operating Froude-number band with an optional tabulated weight function.
// An empty weights vector means the uniform distribution w = 1/(Fn_u - Fn_l).
// Tabulated weights are sampled at the n_points equispaced Froude numbers
// and must integrate to 1 over the band (trapezoidal) within 1e-6.
struct SpeedRange {
    double fn_lower = 0.0;
    double fn_upper = 0.0;
    int n_points = 0;
    std::vector<double> weights;

    void check() const {
        if (!(0.0 < fn_lower && fn_lower < fn_upper)) {
            throw ValidationError("speed range requires 0 < fn_lower < fn_upper");
        }
        if (n_points < 2) throw ValidationError("speed range needs at least 2 points");
        if (!weights.empty()) {
            if (weights.size() != static_cast<std::size_t>(n_points)) {
                throw ValidationError("tabulated weights must match n_points");
            }
            double integral = 0.0;
            const double h = (fn_upper - fn_lower) / (n_points - 1);
            for (int i = 0; i + 1 < n_points; ++i) {
                if (weights[static_cast<std::size_t>(i)] < 0.0 ||
                    weights[static_cast<std::size_t>(i) + 1] < 0.0) {
                    throw ValidationError("tabulated weights must be non-negative");
                }
                integral += 0.5 * h *
                            (weights[static_cast<std::size_t>(i)] +
                             weights[static_cast<std::size_t>(i) + 1]);
            }
            if (std::abs(integral - 1.0) > 1e-6) {
                throw ValidationError("tabulated weights must integrate to 1 over the band");
            }
        }
    }

    std::vector<double> grid() const {
        check();
        std::vector<double> fns(static_cast<std::size_t>(n_points));
        for (int i = 0; i < n_points; ++i) {
            fns[static_cast<std::size_t>(i)] =
                fn_lower + (fn_upper - fn_lower) * static_cast<double>(i) / (n_points - 1);
        }
        return fns;
    }

    double weight_at(int i) const {
        if (weights.empty()) return 1.0 / (fn_upper - fn_lower);
        return weights[static_cast<std::size_t>(i)];
    }
};

}  // namespace hullopt
