#pragma once

// Thin-ship (Michell) wave resistance.
//
// The linearized free-wave amplitude of a slender hull moving at speed U is
// a transform of the centerplane slope field:
//
//   P(l) + i Q(l) = integral over the centerplane of
//                   (dy/dx)(x,z) * exp(k0 l^2 z) * exp(i k0 l x) dx dz,
//   k0 = g / U^2,  l >= 1,
//
// and the radiated-wave drag is
//
//   R_W = (4 rho g^2) / (pi U^2) * integral_1^inf (P^2 + Q^2) l^2 / sqrt(l^2 - 1) dl.
//
// dy/dx comes from central differences on the station grid (one-sided at the
// ends). The surface integral treats the slope field as piecewise linear
// between grid nodes -- the same reconstruction the trapezoidal rule uses --
// but integrates the exp(k0 l^2 z) and exp(i k0 l x) kernels exactly on each
// interval (product integration). Sampling the kernels at the nodes instead
// is unusable here: the waterplane row then keeps a fixed quadrature weight,
// so the transform stops decaying in l and the outer integral diverges, and
// at large l the sampled x-kernel aliases against the station spacing. With
// product integration the discrete transform inherits the continuum decay
// and the result depends on the grid only through the slope reconstruction.
//
// The substitution l = sec(theta) maps the outer integral onto theta in
// [0, pi/2) with integrand (P^2 + Q^2) sec^3(theta); composite Gauss-Legendre
// panels are walked in ascending theta and truncated once the integrand has
// decayed below a fixed fraction of its running maximum.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "hullopt/common.hpp"
#include "hullopt/flow.hpp"
#include "hullopt/hull_form.hpp"
#include "hullopt/hydrostatics.hpp"

namespace hullopt {

struct WaveResistanceOptions {
    int n_theta = 256;          // total Gauss-Legendre nodes over theta in [0, pi/2)
    double truncation = 1e-14;  // stop once a panel's peak integrand falls below
                                // truncation * (largest integrand seen so far)
};

namespace detail {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr int kGaussOrder = 8;
inline constexpr double kGaussNodes[kGaussOrder] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363,
};
inline constexpr double kGaussWeights[kGaussOrder] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763,
};

// Centerplane slope dy/dx on the grid, central differences inside, one-sided
// at bow and stern. Row-major by station, like the grid.
inline std::vector<double> centerplane_slope(const DimensionalGrid& dims) {
    const std::size_t ns = dims.x.size();
    const std::size_t nw = dims.z.size();
    std::vector<double> slope(ns * nw);
    for (std::size_t j = 0; j < nw; ++j) {
        slope[0 * nw + j] = (dims.at(1, j) - dims.at(0, j)) / (dims.x[1] - dims.x[0]);
        for (std::size_t i = 1; i + 1 < ns; ++i) {
            slope[i * nw + j] =
                (dims.at(i + 1, j) - dims.at(i - 1, j)) / (dims.x[i + 1] - dims.x[i - 1]);
        }
        slope[(ns - 1) * nw + j] =
            (dims.at(ns - 1, j) - dims.at(ns - 2, j)) / (dims.x[ns - 1] - dims.x[ns - 2]);
    }
    return slope;
}

// Per-waterline weights W_j such that sum_j W_j f_j equals the integral of
// the piecewise-linear interpolant of f against exp(a z), a >= 0, z <= 0.
// Written in terms of exp(a z_j) <= 1 so nothing overflows; series fallback
// where the closed form would cancel.
inline void exponential_depth_weights(const std::vector<double>& z, double a,
                                      std::vector<double>& w) {
    const std::size_t nw = z.size();
    w.assign(nw, 0.0);
    for (std::size_t j = 0; j + 1 < nw; ++j) {
        const double h = z[j + 1] - z[j];
        const double t = a * h;
        const double e0 = std::exp(a * z[j]);
        const double e1 = std::exp(a * z[j + 1]);
        if (t < 1e-4) {
            w[j] += h * e0 * (0.5 + t / 6.0 + t * t / 24.0);
            w[j + 1] += h * e0 * (0.5 + t / 3.0 + t * t / 8.0);
        } else {
            w[j] += (h / (t * t)) * (e1 - e0 - t * e0);
            w[j + 1] += (h / (t * t)) * ((t - 1.0) * e1 + e0);
        }
    }
}

// phi0(t) = (e^t - 1 - t)/t^2, phi1(t) = ((t-1)e^t + 1)/t^2 for imaginary
// t = i*mu: the segment quadrature coefficients for a linear function
// against e^(i mu sigma), sigma in [0,1].
inline void oscillatory_segment_coeffs(double mu, std::complex<double>& c0,
                                       std::complex<double>& c1) {
    if (std::abs(mu) < 1e-4) {
        // Series in t = i*mu, accurate to O(mu^3) relative.
        const std::complex<double> t(0.0, mu);
        c0 = 0.5 + t / 6.0 + t * t / 24.0;
        c1 = 0.5 + t / 3.0 + t * t / 8.0;
    } else {
        const std::complex<double> t(0.0, mu);
        const std::complex<double> et = std::exp(t);
        c0 = (et - 1.0 - t) / (t * t);
        c1 = ((t - 1.0) * et + 1.0) / (t * t);
    }
}

}  // namespace detail

// Free-wave amplitude P + iQ at a single l = sec(theta).
inline std::complex<double> michell_amplitude(const DimensionalGrid& dims,
                                              const std::vector<double>& slope, double k0,
                                              double l, std::vector<double>& depth_scratch) {
    const std::size_t ns = dims.x.size();
    const std::size_t nw = dims.z.size();
    const double kz = k0 * l * l;
    const double kx = k0 * l;
    detail::exponential_depth_weights(dims.z, kz, depth_scratch);

    // Depth-integrated slope per station.
    std::vector<std::complex<double>> station(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        const double* row = slope.data() + i * nw;
        double column = 0.0;
        for (std::size_t j = 0; j < nw; ++j) column += depth_scratch[j] * row[j];
        station[i] = column;
    }

    // Longitudinal transform of the piecewise-linear station amplitudes.
    std::complex<double> amplitude(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < ns; ++i) {
        const double h = dims.x[i + 1] - dims.x[i];
        const double mu = kx * h;
        std::complex<double> c0, c1;
        detail::oscillatory_segment_coeffs(mu, c0, c1);
        const std::complex<double> phase =
            std::complex<double>(std::cos(kx * dims.x[i]), std::sin(kx * dims.x[i]));
        amplitude += h * phase * (station[i] * c0 + station[i + 1] * c1);
    }
    return amplitude;
}

inline double wave_resistance(const HullForm& hull, const FlowConditions& flow,
                              const WaveResistanceOptions& opts = {}) {
    check_grid_structure(hull.grid);
    if (!(flow.speed > 0.0)) throw ValidationError("wave resistance requires positive speed");
    if (opts.n_theta < detail::kGaussOrder) {
        throw ValidationError("wave resistance needs at least one quadrature panel");
    }

    const DimensionalGrid dims = dimensionalize(hull);
    const std::vector<double> slope = detail::centerplane_slope(dims);
    const double k0 = flow.gravity / (flow.speed * flow.speed);

    const int n_panels = opts.n_theta / detail::kGaussOrder;
    const double panel_width = (M_PI / 2.0) / n_panels;

    std::vector<double> depth_scratch;
    double integral = 0.0;
    double peak_integrand = 0.0;
    for (int panel = 0; panel < n_panels; ++panel) {
        const double mid = (panel + 0.5) * panel_width;
        const double half = 0.5 * panel_width;
        double panel_sum = 0.0;
        double panel_peak = 0.0;
        for (int node = 0; node < detail::kGaussOrder; ++node) {
            const double theta = mid + half * detail::kGaussNodes[node];
            const double sec = 1.0 / std::cos(theta);
            const std::complex<double> a = michell_amplitude(dims, slope, k0, sec, depth_scratch);
            const double integrand = std::norm(a) * sec * sec * sec;
            panel_sum += detail::kGaussWeights[node] * integrand;
            if (integrand > panel_peak) panel_peak = integrand;
        }
        integral += half * panel_sum;
        if (panel_peak > peak_integrand) peak_integrand = panel_peak;
        if (panel_peak < opts.truncation * peak_integrand) break;
    }

    const double coefficient =
        4.0 * flow.density * flow.gravity * flow.gravity / (M_PI * flow.speed * flow.speed);
    const double rw = coefficient * integral;
    if (!std::isfinite(rw)) {
        throw NumericalError("wave-resistance integrand is not finite");
    }
    return rw < 0.0 ? 0.0 : rw;
}

}  // namespace hullopt
