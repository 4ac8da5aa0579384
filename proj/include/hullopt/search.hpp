#pragma once

// Design-space search for the hull minimizing the operational merit
// coefficient: repeated Monte-Carlo rounds with bound shrinking, followed by
// per-parameter coordinate refinement. The search machinery is generic over
// a batch evaluator (params -> beta) so it can be exercised with analytic
// test functions; overloads bind the MLP surrogate.

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hullopt/common.hpp"
#include "hullopt/hydrostatics.hpp"
#include "hullopt/mlp.hpp"
#include "hullopt/pca.hpp"
#include "hullopt/resistance.hpp"

namespace hullopt {

inline constexpr int kSearchParams = 5;  // lambda1, lambda2, lambda3, L/B, B/T

using Params5 = std::array<double, kSearchParams>;
using BatchEvaluator = std::function<std::vector<double>(const std::vector<Params5>&)>;

struct SearchSpace {
    std::array<std::pair<double, double>, kSearchParams> bounds;
    double length = 0.0;  // fixed hull length for the whole search
    SpeedRange speed_range;

    static SearchSpace defaults(double length, double fn_lower, double fn_upper,
                                int n_points = 5) {
        SearchSpace space;
        space.bounds = {{{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {7.0, 9.0}, {2.0, 3.1}}};
        space.length = length;
        space.speed_range = SpeedRange{fn_lower, fn_upper, n_points, {}};
        return space;
    }

    void check() const {
        for (const auto& [lo, hi] : bounds) {
            if (!(lo <= hi)) throw ValidationError("search bounds inverted");
        }
        if (!(length > 0.0)) throw ValidationError("search length must be positive");
        speed_range.check();
    }
};

struct SearchConfig {
    int n1 = 3000;          // candidates per Monte-Carlo round
    int n2 = 3000;          // candidates per coordinate sweep
    int k = 15;             // Monte-Carlo rounds
    double shrink_factor = 0.5;
    std::uint64_t seed = 1;
    double convergence_tol = 1e-4;  // relative beta improvement considered significant
    bool shuffle_axes = false;      // randomize the refinement sweep order per pass
    bool audit_log = false;         // record every evaluated candidate
    int max_refine_passes = 50;

    void check() const {
        if (n1 < 1 || n2 < 1 || k < 1) throw ValidationError("search sizes must be positive");
        if (!(shrink_factor > 0.0 && shrink_factor <= 1.0)) {
            throw ValidationError("shrink factor must be in (0, 1]");
        }
        if (!(convergence_tol >= 0.0)) throw ValidationError("convergence tolerance negative");
        if (max_refine_passes < 1) throw ValidationError("refinement needs at least one pass");
    }
};

struct CandidateRecord {
    Params5 params;
    double beta;
    int round;  // Monte-Carlo round or refinement pass, 1-based
};

struct SearchResult {
    Params5 best_params{};
    double best_beta = std::numeric_limits<double>::infinity();
    std::vector<double> beta_history;  // incumbent beta after each round/pass
    long evaluation_count = 0;
    long surrogate_warnings = 0;  // extrapolations or negative predictions
    std::vector<CandidateRecord> audit;
};

// Surrogate beta for one candidate: predict the merit coefficient at the
// range's equispaced Froude numbers and integrate with the range weight.
// Warnings (extrapolated features, non-positive predictions) are counted
// into *warnings when given.
inline double beta_of_candidate(const MlpModel& model, const Params5& params, double length,
                                const SpeedRange& range, long* warnings = nullptr,
                                const FluidConstants& fluid = {}) {
    const std::vector<double> fns = range.grid();
    std::vector<std::pair<double, double>> curve;
    curve.reserve(fns.size());
    for (double fn : fns) {
        double raw[kFeatureCount] = {params[0], params[1], params[2], params[3], params[4],
                                     fn, reynolds_from_froude(fn, length, fluid)};
        const Prediction p = predict_features(model, raw);
        if (warnings && (p.extrapolated || !(p.value > 0.0))) ++(*warnings);
        curve.push_back({fn, p.value});
    }
    return operational_merit(curve, range);
}

inline BatchEvaluator make_surrogate_evaluator(const MlpModel& model, const SearchSpace& space,
                                               long* warnings = nullptr,
                                               const FluidConstants& fluid = {}) {
    return [&model, space, warnings, fluid](const std::vector<Params5>& candidates) {
        std::vector<double> betas;
        betas.reserve(candidates.size());
        for (const auto& c : candidates) {
            betas.push_back(beta_of_candidate(model, c, space.length, space.speed_range,
                                              warnings, fluid));
        }
        return betas;
    };
}

// Monte-Carlo search with per-round bound shrinking. Each round draws n1
// uniform candidates in the current bounds (candidate-major, axis-minor draw
// order), updates the incumbent in evaluation order (first minimum wins
// ties), then shrinks every axis to a window of shrink_factor times its
// current width centered on the incumbent and clipped to the global bounds.
// Stops early when a round improves the incumbent by less than
// convergence_tol in relative terms.
inline SearchResult monte_carlo_search(const BatchEvaluator& evaluate, const SearchSpace& space,
                                       const SearchConfig& config) {
    space.check();
    config.check();
    Rng rng(config.seed);
    auto bounds = space.bounds;
    SearchResult result;

    std::vector<Params5> candidates(static_cast<std::size_t>(config.n1));
    for (int round = 1; round <= config.k; ++round) {
        for (auto& c : candidates) {
            for (int axis = 0; axis < kSearchParams; ++axis) {
                c[static_cast<std::size_t>(axis)] =
                    rng.uniform(bounds[static_cast<std::size_t>(axis)].first,
                                bounds[static_cast<std::size_t>(axis)].second);
            }
        }
        const std::vector<double> betas = evaluate(candidates);
        if (betas.size() != candidates.size()) {
            throw ValidationError("evaluator returned wrong number of betas");
        }
        const double before = result.best_beta;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (config.audit_log) result.audit.push_back({candidates[i], betas[i], round});
            if (betas[i] < result.best_beta) {
                result.best_beta = betas[i];
                result.best_params = candidates[i];
            }
        }
        result.evaluation_count += static_cast<long>(candidates.size());
        result.beta_history.push_back(result.best_beta);

        const double improvement =
            (before - result.best_beta) / std::max(std::abs(before), 1e-300);
        if (round > 1 && improvement < config.convergence_tol) break;

        for (int axis = 0; axis < kSearchParams; ++axis) {
            const auto a = static_cast<std::size_t>(axis);
            const double width = (bounds[a].second - bounds[a].first) * config.shrink_factor;
            const double center = result.best_params[a];
            bounds[a].first = std::max(space.bounds[a].first, center - 0.5 * width);
            bounds[a].second = std::min(space.bounds[a].second, center + 0.5 * width);
        }
    }
    return result;
}

// Coordinate refinement: sweep each parameter over n2 equispaced values
// across its global search range while the others stay fixed, keeping any
// improvement; repeat passes until no parameter improves beta by more than
// convergence_tol (relative).
inline SearchResult coordinate_refinement(const BatchEvaluator& evaluate,
                                          const SearchSpace& space, const SearchConfig& config,
                                          const Params5& incumbent_params,
                                          double incumbent_beta) {
    space.check();
    config.check();
    for (int axis = 0; axis < kSearchParams; ++axis) {
        const auto a = static_cast<std::size_t>(axis);
        if (incumbent_params[a] < space.bounds[a].first ||
            incumbent_params[a] > space.bounds[a].second) {
            throw ValidationError("refinement incumbent lies outside the search bounds");
        }
    }
    Rng rng(config.seed);
    SearchResult result;
    result.best_params = incumbent_params;
    result.best_beta = incumbent_beta;

    std::vector<int> axes(kSearchParams);
    std::iota(axes.begin(), axes.end(), 0);
    for (int pass = 1; pass <= config.max_refine_passes; ++pass) {
        if (config.shuffle_axes) rng.shuffle(axes);
        const double before = result.best_beta;
        for (int axis : axes) {
            const auto a = static_cast<std::size_t>(axis);
            const double lo = space.bounds[a].first;
            const double hi = space.bounds[a].second;
            std::vector<Params5> sweep;
            sweep.reserve(static_cast<std::size_t>(config.n2));
            for (int i = 0; i < config.n2; ++i) {
                Params5 p = result.best_params;
                p[a] = config.n2 == 1
                           ? lo
                           : lo + (hi - lo) * static_cast<double>(i) / (config.n2 - 1);
                sweep.push_back(p);
            }
            const std::vector<double> betas = evaluate(sweep);
            if (betas.size() != sweep.size()) {
                throw ValidationError("evaluator returned wrong number of betas");
            }
            for (std::size_t i = 0; i < sweep.size(); ++i) {
                if (config.audit_log) result.audit.push_back({sweep[i], betas[i], pass});
                if (betas[i] < result.best_beta) {
                    result.best_beta = betas[i];
                    result.best_params = sweep[i];
                }
            }
            result.evaluation_count += static_cast<long>(sweep.size());
        }
        result.beta_history.push_back(result.best_beta);
        const double improvement =
            (before - result.best_beta) / std::max(std::abs(before), 1e-300);
        if (improvement <= config.convergence_tol) break;
    }
    return result;
}

// MLP-bound overloads.
inline SearchResult monte_carlo_search(const MlpModel& model, const SearchSpace& space,
                                       const SearchConfig& config,
                                       const FluidConstants& fluid = {}) {
    long warnings = 0;
    SearchResult r = monte_carlo_search(make_surrogate_evaluator(model, space, &warnings, fluid),
                                        space, config);
    r.surrogate_warnings = warnings;
    return r;
}

inline SearchResult coordinate_refinement(const MlpModel& model, const SearchSpace& space,
                                          const SearchConfig& config,
                                          const Params5& incumbent_params, double incumbent_beta,
                                          const FluidConstants& fluid = {}) {
    long warnings = 0;
    SearchResult r =
        coordinate_refinement(make_surrogate_evaluator(model, space, &warnings, fluid), space,
                              config, incumbent_params, incumbent_beta);
    r.surrogate_warnings = warnings;
    return r;
}

struct OptimizeOutcome {
    SearchResult search;            // merged Monte-Carlo + refinement trace
    HullParams params;              // winning parameters with the fixed length
    HullForm hull;                  // reconstructed winner
    HydrostaticsReport hydrostatics;
    int clamped_nodes = 0;          // reconstruction clamping of the winner
    double surrogate_beta = 0.0;
    double hydro_beta = 0.0;        // ground-truth re-score of the winner
    double audit_delta = 0.0;       // |surrogate - hydro| / hydro
};

// Ground-truth beta of a hull over the range: resistance model at the same
// equispaced Froude numbers, integrated with the same weight.
inline double hydro_beta(const HullForm& hull, const SpeedRange& range,
                         const WaveResistanceOptions& wave_opts = {},
                         const FluidConstants& fluid = {}) {
    std::vector<std::pair<double, double>> curve;
    for (double fn : range.grid()) {
        curve.push_back({fn, evaluate(hull, fn, wave_opts, fluid).merit_coefficient});
    }
    return operational_merit(curve, range);
}

// Full optimization: Monte-Carlo search, coordinate refinement, winner
// reconstruction through the PCA model, and a ground-truth re-score with the
// resistance model for the audit delta. The surrogate must have been trained
// against this PCA model (digest match), otherwise the searched parameters
// and the reconstruction basis would disagree silently.
inline OptimizeOutcome optimize_hull(const MlpModel& model, const PcaModel& pca,
                                     const SearchSpace& space, const SearchConfig& config,
                                     const WaveResistanceOptions& wave_opts = {},
                                     const FluidConstants& fluid = {}) {
    space.check();
    config.check();
    if (pca.dim() != kScoreCount) {
        throw ValidationError("optimization requires a 3-score PCA model");
    }
    if (model.provenance.pca_digest != pca_digest(pca)) {
        throw ValidationError(
            "provenance mismatch: the surrogate was not trained against this PCA model");
    }

    OptimizeOutcome outcome;
    outcome.search = monte_carlo_search(model, space, config, fluid);
    SearchResult refined = coordinate_refinement(model, space, config, outcome.search.best_params,
                                                 outcome.search.best_beta, fluid);
    outcome.search.best_params = refined.best_params;
    outcome.search.best_beta = refined.best_beta;
    outcome.search.evaluation_count += refined.evaluation_count;
    outcome.search.surrogate_warnings += refined.surrogate_warnings;
    for (double b : refined.beta_history) outcome.search.beta_history.push_back(b);
    if (config.audit_log) {
        for (const auto& rec : refined.audit) outcome.search.audit.push_back(rec);
    }

    outcome.params.lambda_bar = {outcome.search.best_params[0], outcome.search.best_params[1],
                                 outcome.search.best_params[2]};
    outcome.params.length_to_beam = outcome.search.best_params[3];
    outcome.params.beam_to_draft = outcome.search.best_params[4];
    outcome.params.length = space.length;

    const Eigen::VectorXd scaled = Eigen::Map<const Eigen::VectorXd>(
        outcome.params.lambda_bar.data(), kScoreCount);
    Reconstruction rec = reconstruct(pca, unscale_scores(pca, scaled));
    outcome.clamped_nodes = rec.clamped_nodes;
    outcome.hull = make_hull(std::move(rec.grid), space.length, outcome.params.length_to_beam,
                             outcome.params.beam_to_draft);
    outcome.hydrostatics = hullopt::hydrostatics(outcome.hull);
    outcome.surrogate_beta = outcome.search.best_beta;
    outcome.hydro_beta = hydro_beta(outcome.hull, space.speed_range, wave_opts, fluid);
    outcome.audit_delta =
        std::abs(outcome.surrogate_beta - outcome.hydro_beta) / outcome.hydro_beta;
    return outcome;
}

}  // namespace hullopt
