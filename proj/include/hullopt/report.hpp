#pragma once

// Search report: structured record of an optimization run, with enough
// provenance to reproduce it.

#include <string>

#include <json.hpp>

#include "hullopt/common.hpp"
#include "hullopt/search.hpp"

namespace hullopt {

inline nlohmann::json search_report(const OptimizeOutcome& outcome, const SearchSpace& space,
                                    const SearchConfig& config, const std::string& pca_digest_hex,
                                    const std::string& model_digest_hex) {
    nlohmann::json j;
    j["report_version"] = "v1";
    j["tool_version"] = kToolVersion;
    j["provenance"] = {{"pca_digest", pca_digest_hex}, {"model_digest", model_digest_hex}};
    j["space"] = {
        {"length", space.length},
        {"fn_lower", space.speed_range.fn_lower},
        {"fn_upper", space.speed_range.fn_upper},
        {"n_speeds", space.speed_range.n_points},
        {"weight", space.speed_range.weights.empty() ? "uniform" : "tabulated"},
        {"bounds",
         {{"lambda1", {space.bounds[0].first, space.bounds[0].second}},
          {"lambda2", {space.bounds[1].first, space.bounds[1].second}},
          {"lambda3", {space.bounds[2].first, space.bounds[2].second}},
          {"L_over_B", {space.bounds[3].first, space.bounds[3].second}},
          {"B_over_T", {space.bounds[4].first, space.bounds[4].second}}}},
    };
    j["config"] = {{"n1", config.n1},
                   {"n2", config.n2},
                   {"k", config.k},
                   {"shrink_factor", config.shrink_factor},
                   {"seed", config.seed},
                   {"convergence_tol", config.convergence_tol},
                   {"shuffle_axes", config.shuffle_axes}};
    j["beta_history"] = outcome.search.beta_history;
    j["evaluation_count"] = outcome.search.evaluation_count;
    j["surrogate_warnings"] = outcome.search.surrogate_warnings;
    j["best"] = {{"lambda1", outcome.search.best_params[0]},
                 {"lambda2", outcome.search.best_params[1]},
                 {"lambda3", outcome.search.best_params[2]},
                 {"L_over_B", outcome.search.best_params[3]},
                 {"B_over_T", outcome.search.best_params[4]},
                 {"surrogate_beta", outcome.surrogate_beta},
                 {"hydro_beta", outcome.hydro_beta},
                 {"audit_delta", outcome.audit_delta},
                 {"clamped_nodes", outcome.clamped_nodes}};
    j["hydrostatics"] = {{"displaced_volume", outcome.hydrostatics.displaced_volume},
                         {"wetted_surface", outcome.hydrostatics.wetted_surface},
                         {"midship_area", outcome.hydrostatics.midship_area},
                         {"C_B", outcome.hydrostatics.block_coefficient},
                         {"C_P", outcome.hydrostatics.prismatic_coefficient},
                         {"slenderness", outcome.hydrostatics.slenderness}};
    return j;
}

inline std::string search_report_json(const OptimizeOutcome& outcome, const SearchSpace& space,
                                      const SearchConfig& config,
                                      const std::string& pca_digest_hex,
                                      const std::string& model_digest_hex) {
    return search_report(outcome, space, config, pca_digest_hex, model_digest_hex).dump(2) + "\n";
}

}  // namespace hullopt
