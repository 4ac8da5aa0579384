#pragma once

// PCA compression of hull offset grids: fit a basis on a set of parent
// grids, compress/reconstruct via principal scores, scale scores to [0,1]
// against the parent extremes, and sample new hull forms inside prescribed
// limits.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "hullopt/common.hpp"
#include "hullopt/hull_form.hpp"
#include "hullopt/hydrostatics.hpp"
#include "hullopt/offset_grid.hpp"

namespace hullopt {

inline constexpr const char* kPcaMagic = "hullopt-pca";
inline constexpr const char* kPcaVersion = "v1";

// Offsets flatten row-major by station (station index varies slowest); the
// serialized model records this so models from other conventions are not
// silently mixed.
inline constexpr const char* kFlatteningTag = "station-major";

struct PcaModel {
    std::vector<double> grid_stations;
    std::vector<double> grid_waterlines;
    Eigen::VectorXd means;               // per-node means, length l
    Eigen::MatrixXd basis;               // l x d, orthonormal columns
    Eigen::VectorXd score_min;           // raw parent score extremes, length d
    Eigen::VectorXd score_max;
    Eigen::VectorXd explained_variance;  // variance fractions, descending, length d
    int dropped_axes = 0;                // axes removed by rank deficiency

    int dim() const { return static_cast<int>(basis.cols()); }
    std::size_t n_nodes() const { return static_cast<std::size_t>(means.size()); }

    OffsetGrid grid_template() const {
        OffsetGrid g;
        g.stations = grid_stations;
        g.waterlines = grid_waterlines;
        g.offsets.assign(n_nodes(), 0.0);
        return g;
    }
};

// Per-parameter sampling limits: d scaled scores plus L/B and B/T.
struct SampleBounds {
    std::vector<std::pair<double, double>> lambda_bar;
    std::pair<double, double> length_to_beam{6.9, 9.0};
    std::pair<double, double> beam_to_draft{2.0, 3.5};

    static SampleBounds defaults(int d) {
        SampleBounds b;
        b.lambda_bar.assign(static_cast<std::size_t>(d), {0.0, 1.0});
        return b;
    }

    void check() const {
        for (const auto& [lo, hi] : lambda_bar) {
            if (!(lo <= hi)) throw ValidationError("score bounds inverted");
        }
        if (!(length_to_beam.first <= length_to_beam.second) ||
            !(beam_to_draft.first <= beam_to_draft.second)) {
            throw ValidationError("dimension-ratio bounds inverted");
        }
    }
};

// The five hull-form parameters plus the sampled length.
struct HullParams {
    std::vector<double> lambda_bar;
    double length_to_beam = 0.0;
    double beam_to_draft = 0.0;
    double length = 0.0;
};

namespace detail {

inline Eigen::VectorXd flatten(const OffsetGrid& grid) {
    return Eigen::Map<const Eigen::VectorXd>(grid.offsets.data(),
                                             static_cast<Eigen::Index>(grid.offsets.size()));
}

inline void require_template(const PcaModel& model, const OffsetGrid& grid) {
    if (grid.stations != model.grid_stations || grid.waterlines != model.grid_waterlines) {
        throw ValidationError("offset grid does not match the PCA grid template");
    }
}

}  // namespace detail

// Fit the compression on parent grids. d = -1 means the maximum, n - 1.
// The fit canonicalizes the parent order internally (lexicographic on the
// flattened offsets) so that permuting the inputs yields a byte-identical
// model; PCA itself is order-free, but floating-point sums are not.
inline PcaModel fit(const std::vector<OffsetGrid>& parents, int d = -1) {
    const std::size_t n = parents.size();
    if (n < 2) throw ValidationError("PCA fit needs at least 2 parent grids");
    for (const auto& g : parents) check_grid_structure(g);
    for (std::size_t i = 1; i < n; ++i) {
        if (!parents[i].same_template(parents[0])) {
            throw ValidationError("parent grids are not on a common station/waterline template");
        }
    }
    const int max_d = static_cast<int>(n) - 1;
    if (d == -1) d = max_d;
    if (d < 1 || d > max_d) {
        throw ValidationError("score count d must be in [1, n-1]");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return parents[a].offsets < parents[b].offsets;
    });

    const Eigen::Index l = static_cast<Eigen::Index>(parents[0].offsets.size());
    Eigen::MatrixXd data(static_cast<Eigen::Index>(n), l);
    for (std::size_t i = 0; i < n; ++i) {
        data.row(static_cast<Eigen::Index>(i)) = detail::flatten(parents[order[i]]).transpose();
    }

    PcaModel model;
    model.grid_stations = parents[0].stations;
    model.grid_waterlines = parents[0].waterlines;
    model.means = data.colwise().mean().transpose();
    Eigen::MatrixXd centered = data.rowwise() - model.means.transpose();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double total_variance = sigma.squaredNorm();
    if (!(total_variance > 0.0)) {
        throw ValidationError("parent grids are identical; no principal axes exist");
    }

    // Drop numerically-zero singular values inside the requested range.
    const double rank_tol = sigma(0) * 1e-12;
    int effective = 0;
    for (int j = 0; j < d; ++j) {
        if (sigma(j) > rank_tol) ++effective;
    }
    model.dropped_axes = d - effective;
    d = effective;
    if (d == 0) {
        throw ValidationError("parent set is rank deficient; no usable principal axes");
    }

    model.basis = svd.matrixV().leftCols(d);
    // Deterministic sign convention: the entry of largest magnitude in each
    // column is made positive.
    for (int j = 0; j < d; ++j) {
        Eigen::Index arg_max = 0;
        model.basis.col(j).cwiseAbs().maxCoeff(&arg_max);
        if (model.basis(arg_max, j) < 0.0) model.basis.col(j) = -model.basis.col(j);
    }

    model.explained_variance.resize(d);
    for (int j = 0; j < d; ++j) {
        model.explained_variance(j) = sigma(j) * sigma(j) / total_variance;
    }

    const Eigen::MatrixXd scores = centered * model.basis;  // n x d
    model.score_min = scores.colwise().minCoeff().transpose();
    model.score_max = scores.colwise().maxCoeff().transpose();
    for (int j = 0; j < d; ++j) {
        if (!(model.score_min(j) < model.score_max(j))) {
            throw ValidationError("degenerate score axis: parent extremes coincide");
        }
    }
    return model;
}

inline Eigen::VectorXd compress(const PcaModel& model, const OffsetGrid& grid) {
    check_grid_structure(grid);
    detail::require_template(model, grid);
    return model.basis.transpose() * (detail::flatten(grid) - model.means);
}

// Reconstruction without validity clamping; used by the linearity tests and
// as the building block for reconstruct().
inline OffsetGrid reconstruct_raw(const PcaModel& model, const Eigen::VectorXd& scores) {
    if (scores.size() != model.dim()) {
        throw ValidationError("score vector length does not match the model");
    }
    const Eigen::VectorXd flat = model.basis * scores + model.means;
    OffsetGrid grid = model.grid_template();
    Eigen::Map<Eigen::VectorXd>(grid.offsets.data(), flat.size()) = flat;
    return grid;
}

struct Reconstruction {
    OffsetGrid grid;
    ValidityReport validity;   // of the raw reconstruction
    int clamped_nodes = 0;
};

inline Reconstruction reconstruct(const PcaModel& model, const Eigen::VectorXd& scores) {
    Reconstruction out;
    OffsetGrid raw = reconstruct_raw(model, scores);
    out.validity = validate(raw);
    ClampResult clamped = clamp_negative(raw);
    out.grid = std::move(clamped.grid);
    out.clamped_nodes = clamped.clamped_nodes;
    return out;
}

// lambda_bar_j = (lambda_j - min_j) / (max_j - min_j).
inline Eigen::VectorXd scale_scores(const PcaModel& model, const Eigen::VectorXd& raw) {
    if (raw.size() != model.dim()) throw ValidationError("score vector length mismatch");
    return (raw - model.score_min).cwiseQuotient(model.score_max - model.score_min);
}

inline Eigen::VectorXd unscale_scores(const PcaModel& model, const Eigen::VectorXd& scaled) {
    if (scaled.size() != model.dim()) throw ValidationError("score vector length mismatch");
    return (model.score_min.array() +
            scaled.array() * (model.score_max - model.score_min).array())
        .matrix();
}

// Scaled score vector with construction-time range policy: strict rejects
// values outside [0,1] (beyond a small tolerance), clipped snaps them in.
struct ScoreVector {
    Eigen::VectorXd values;

    static ScoreVector strict(const Eigen::VectorXd& v, double tol = 1e-9) {
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            if (v(j) < -tol || v(j) > 1.0 + tol) {
                throw ValidationError("scaled score outside [0,1] in strict mode");
            }
        }
        ScoreVector s{v};
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            s.values(j) = std::clamp(v(j), 0.0, 1.0);
        }
        return s;
    }

    static ScoreVector clipped(const Eigen::VectorXd& v) {
        ScoreVector s{v};
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            s.values(j) = std::clamp(v(j), 0.0, 1.0);
        }
        return s;
    }
};

// Build the hull for explicit parameters: unscale, reconstruct, clamp,
// attach dimensions.
inline HullForm build_hull(const PcaModel& model, const HullParams& params) {
    if (params.lambda_bar.size() != static_cast<std::size_t>(model.dim())) {
        throw ValidationError("parameter vector length does not match the model");
    }
    const Eigen::VectorXd scaled = Eigen::Map<const Eigen::VectorXd>(
        params.lambda_bar.data(), static_cast<Eigen::Index>(params.lambda_bar.size()));
    Reconstruction rec = reconstruct(model, unscale_scores(model, scaled));
    return make_hull(std::move(rec.grid), params.length, params.length_to_beam,
                     params.beam_to_draft);
}

// Draw the five hull-form parameters plus length, each uniform in its bounds.
// Draw order: lambda_bar[0..d), L/B, B/T, L. Deterministic per seed.
inline HullParams sample_params(const PcaModel& model, const SampleBounds& bounds,
                                std::pair<double, double> length_range, std::uint64_t seed) {
    bounds.check();
    if (bounds.lambda_bar.size() != static_cast<std::size_t>(model.dim())) {
        throw ValidationError("score bounds do not match the model dimension");
    }
    if (!(length_range.first <= length_range.second) || !(length_range.first > 0.0)) {
        throw ValidationError("invalid length range");
    }
    Rng rng(seed);
    HullParams params;
    params.lambda_bar.reserve(bounds.lambda_bar.size());
    for (const auto& [lo, hi] : bounds.lambda_bar) params.lambda_bar.push_back(rng.uniform(lo, hi));
    params.length_to_beam = rng.uniform(bounds.length_to_beam.first, bounds.length_to_beam.second);
    params.beam_to_draft = rng.uniform(bounds.beam_to_draft.first, bounds.beam_to_draft.second);
    params.length = rng.uniform(length_range.first, length_range.second);
    return params;
}

inline HullForm sample_hull(const PcaModel& model, const SampleBounds& bounds,
                            std::pair<double, double> length_range, std::uint64_t seed) {
    return build_hull(model, sample_params(model, bounds, length_range, seed));
}

// --- Correlation study ----------------------------------------------------

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double correlation = 0.0;  // Pearson r
    int n = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw ValidationError("linear fit needs at least 2 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw ValidationError("linear fit rejected: no abscissa variance");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
    fit.n = static_cast<int>(n);
    return fit;
}

struct CorrelationPoint {
    double lambda1, block_coefficient, lambda2, prismatic_coefficient;
};

struct CorrelationReport {
    LinearFit lambda1_vs_cb;
    LinearFit lambda2_vs_cp;
    std::vector<CorrelationPoint> points;
};

// Least-squares fits of lambda_bar_1 vs C_B and lambda_bar_2 vs C_P across a
// fleet of hulls.
inline CorrelationReport correlation_report(const PcaModel& model,
                                            const std::vector<HullForm>& hulls) {
    if (hulls.size() < 10) throw ValidationError("correlation study needs at least 10 hulls");
    if (model.dim() < 2) throw ValidationError("correlation study needs at least 2 score axes");
    CorrelationReport report;
    std::vector<double> l1, cb, l2, cp;
    for (const auto& hull : hulls) {
        const Eigen::VectorXd scaled = scale_scores(model, compress(model, hull.grid));
        const HydrostaticsReport h = hydrostatics(hull);
        l1.push_back(scaled(0));
        cb.push_back(h.block_coefficient);
        l2.push_back(scaled(1));
        cp.push_back(h.prismatic_coefficient);
        report.points.push_back({scaled(0), h.block_coefficient, scaled(1),
                                 h.prismatic_coefficient});
    }
    report.lambda1_vs_cb = linear_fit(l1, cb);
    report.lambda2_vs_cp = linear_fit(l2, cp);
    return report;
}

inline std::string correlation_csv(const CorrelationReport& report) {
    std::string out;
    out += "# lambda1 vs C_B: slope " + fmt_double(report.lambda1_vs_cb.slope) + " intercept " +
           fmt_double(report.lambda1_vs_cb.intercept) + " r " +
           fmt_double(report.lambda1_vs_cb.correlation) + "\n";
    out += "# lambda2 vs C_P: slope " + fmt_double(report.lambda2_vs_cp.slope) + " intercept " +
           fmt_double(report.lambda2_vs_cp.intercept) + " r " +
           fmt_double(report.lambda2_vs_cp.correlation) + "\n";
    out += "lambda1,C_B,lambda2,C_P\n";
    for (const auto& p : report.points) {
        out += fmt_double(p.lambda1) + ',' + fmt_double(p.block_coefficient) + ',' +
               fmt_double(p.lambda2) + ',' + fmt_double(p.prismatic_coefficient) + '\n';
    }
    return out;
}

// --- Model file -------------------------------------------------------------

inline std::string serialize_pca(const PcaModel& model) {
    std::string out;
    out += std::string(kPcaMagic) + ' ' + kPcaVersion + '\n';
    out += std::string("flattening ") + kFlatteningTag + '\n';
    out += "grid " + std::to_string(model.grid_stations.size()) + ' ' +
           std::to_string(model.grid_waterlines.size()) + ' ' + std::to_string(model.dim()) +
           ' ' + std::to_string(model.dropped_axes) + '\n';
    auto emit_row = [&out](const char* tag, const double* data, std::size_t n) {
        out += tag;
        for (std::size_t i = 0; i < n; ++i) out += ' ' + fmt_double(data[i]);
        out += '\n';
    };
    emit_row("stations", model.grid_stations.data(), model.grid_stations.size());
    emit_row("waterlines", model.grid_waterlines.data(), model.grid_waterlines.size());
    emit_row("means", model.means.data(), model.n_nodes());
    emit_row("score_min", model.score_min.data(), static_cast<std::size_t>(model.dim()));
    emit_row("score_max", model.score_max.data(), static_cast<std::size_t>(model.dim()));
    emit_row("explained_variance", model.explained_variance.data(),
             static_cast<std::size_t>(model.dim()));
    for (Eigen::Index r = 0; r < model.basis.rows(); ++r) {
        out += "basis";
        for (Eigen::Index c = 0; c < model.basis.cols(); ++c) {
            out += ' ' + fmt_double(model.basis(r, c));
        }
        out += '\n';
    }
    return out;
}

inline std::string pca_digest(const PcaModel& model) { return digest_string(serialize_pca(model)); }

inline PcaModel parse_pca(const std::string& text, const std::string& origin = "<string>") {
    std::istringstream in(text);
    std::string line;
    auto next = [&](const char* what) {
        if (!std::getline(in, line)) {
            throw ValidationError(origin + ": truncated PCA model (missing " + what + ")");
        }
        return split_ws(line);
    };
    auto header = next("header");
    if (header.size() != 2 || header[0] != kPcaMagic || header[1] != kPcaVersion) {
        throw ValidationError(origin + ": not a hullopt PCA model (or unsupported version)");
    }
    auto flat = next("flattening");
    if (flat.size() != 2 || flat[0] != "flattening" || flat[1] != kFlatteningTag) {
        throw ValidationError(origin + ": incompatible offset flattening convention");
    }
    auto dims = next("grid");
    if (dims.size() != 5 || dims[0] != "grid") throw ValidationError(origin + ": malformed grid line");
    const long ns = parse_long(dims[1]);
    const long nw = parse_long(dims[2]);
    const long d = parse_long(dims[3]);
    const long dropped = parse_long(dims[4]);
    if (ns < 2 || nw < 2 || d < 1) throw ValidationError(origin + ": model dimensions out of range");

    auto read_vector = [&](const char* tag, long count) {
        auto toks = next(tag);
        if (toks.size() != static_cast<std::size_t>(count) + 1 || toks[0] != tag) {
            throw ValidationError(origin + ": malformed '" + tag + "' line");
        }
        Eigen::VectorXd v(count);
        for (long i = 0; i < count; ++i) v(i) = parse_double(toks[static_cast<std::size_t>(i) + 1]);
        return v;
    };

    PcaModel model;
    model.dropped_axes = static_cast<int>(dropped);
    const Eigen::VectorXd st = read_vector("stations", ns);
    const Eigen::VectorXd wl = read_vector("waterlines", nw);
    model.grid_stations.assign(st.data(), st.data() + st.size());
    model.grid_waterlines.assign(wl.data(), wl.data() + wl.size());
    model.means = read_vector("means", ns * nw);
    model.score_min = read_vector("score_min", d);
    model.score_max = read_vector("score_max", d);
    model.explained_variance = read_vector("explained_variance", d);
    model.basis.resize(ns * nw, d);
    for (long r = 0; r < ns * nw; ++r) {
        auto toks = next("basis");
        if (toks.size() != static_cast<std::size_t>(d) + 1 || toks[0] != "basis") {
            throw ValidationError(origin + ": malformed basis row");
        }
        for (long c = 0; c < d; ++c) {
            model.basis(r, c) = parse_double(toks[static_cast<std::size_t>(c) + 1]);
        }
    }
    return model;
}

inline void save_pca(const std::string& path, const PcaModel& model) {
    write_file(path, serialize_pca(model));
}

inline PcaModel load_pca(const std::string& path) { return parse_pca(read_file(path), path); }

}  // namespace hullopt
