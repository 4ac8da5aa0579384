#pragma once

// Training-set generation: sample hulls from a PCA model, evaluate each at a
// grid of Froude numbers with the resistance model, and record one
// (hull-form parameters, L, Fn, Re) -> merit-coefficient row per evaluation.
//
// Seeding rule: hull i uses seed root_seed + i; the train/test split (by
// hull, never by row) uses seed root_seed + n_hulls, which no hull uses.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "hullopt/common.hpp"
#include "hullopt/parallel.hpp"
#include "hullopt/pca.hpp"
#include "hullopt/resistance.hpp"

namespace hullopt {

inline constexpr const char* kDatasetMagic = "hullopt-dataset";
inline constexpr const char* kDatasetVersion = "v1";

// The surrogate's feature order: lambda1, lambda2, lambda3, L/B, B/T, Fn, Re.
inline constexpr int kFeatureCount = 7;
inline constexpr int kScoreCount = 3;

struct PerformanceSample {
    long hull_id = 0;
    bool is_test = false;
    double lambda_bar[kScoreCount] = {0.0, 0.0, 0.0};
    double length_to_beam = 0.0;
    double beam_to_draft = 0.0;
    double length = 0.0;
    double froude = 0.0;
    double reynolds = 0.0;
    double merit = 0.0;  // target, must stay positive (MAPE-trained)

    void features(double out[kFeatureCount]) const {
        out[0] = lambda_bar[0];
        out[1] = lambda_bar[1];
        out[2] = lambda_bar[2];
        out[3] = length_to_beam;
        out[4] = beam_to_draft;
        out[5] = froude;
        out[6] = reynolds;
    }
};

struct DatasetConfig {
    int n_hulls = 200;
    double fn_lower = 0.15;
    double fn_upper = 0.35;
    int fn_count = 21;
    double test_fraction = 0.1105;  // ~125/1131
    std::uint64_t seed = 1;
    SampleBounds bounds;  // lambda_bar bounds filled in from the model if empty
    std::pair<double, double> length_range{150.0, 350.0};
    WaveResistanceOptions wave;
    FluidConstants fluid;
};

struct Dataset {
    DatasetConfig config;
    std::string pca_digest;
    std::vector<PerformanceSample> rows;

    std::size_t train_count() const {
        std::size_t n = 0;
        for (const auto& r : rows) n += r.is_test ? 0 : 1;
        return n;
    }
    std::size_t test_count() const { return rows.size() - train_count(); }
};

namespace detail {

inline std::vector<bool> split_by_hull(int n_hulls, double test_fraction, std::uint64_t seed) {
    if (n_hulls < 2) throw ValidationError("dataset needs at least 2 hulls to split");
    long n_test = std::lround(test_fraction * n_hulls);
    n_test = std::max(1L, std::min<long>(n_test, n_hulls - 1));
    std::vector<long> ids(static_cast<std::size_t>(n_hulls));
    std::iota(ids.begin(), ids.end(), 0L);
    Rng rng(seed);
    rng.shuffle(ids);
    std::vector<bool> is_test(static_cast<std::size_t>(n_hulls), false);
    for (long i = 0; i < n_test; ++i) is_test[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] = true;
    return is_test;
}

}  // namespace detail

// Rows for a single sampled hull: all fn_count speeds, hydro-evaluated.
inline std::vector<PerformanceSample> dataset_rows_for_hull(const PcaModel& model,
                                                            const DatasetConfig& config,
                                                            long hull_id) {
    SampleBounds bounds = config.bounds;
    if (bounds.lambda_bar.empty()) bounds = SampleBounds::defaults(model.dim());
    const HullParams params =
        sample_params(model, bounds, config.length_range, config.seed + static_cast<std::uint64_t>(hull_id));
    const HullForm hull = build_hull(model, params);

    std::vector<PerformanceSample> rows;
    rows.reserve(static_cast<std::size_t>(config.fn_count));
    for (int k = 0; k < config.fn_count; ++k) {
        const double fn = config.fn_lower +
                          (config.fn_upper - config.fn_lower) * static_cast<double>(k) /
                              (config.fn_count - 1);
        const ResistanceBreakdown r = evaluate(hull, fn, config.wave, config.fluid);
        PerformanceSample row;
        row.hull_id = hull_id;
        for (int j = 0; j < kScoreCount; ++j) row.lambda_bar[j] = params.lambda_bar[static_cast<std::size_t>(j)];
        row.length_to_beam = params.length_to_beam;
        row.beam_to_draft = params.beam_to_draft;
        row.length = params.length;
        row.froude = fn;
        row.reynolds = reynolds_from_froude(fn, params.length, config.fluid);
        row.merit = r.merit_coefficient;
        rows.push_back(row);
    }
    return rows;
}

inline Dataset generate_dataset(const PcaModel& model, const DatasetConfig& config,
                                unsigned n_threads = 0) {
    if (model.dim() != kScoreCount) {
        throw ValidationError("dataset schema requires a 3-score PCA model");
    }
    if (config.fn_count < 2) throw ValidationError("dataset needs at least 2 Froude numbers");
    if (!(config.fn_lower < config.fn_upper)) throw ValidationError("dataset Froude band inverted");

    const auto per_hull = parallel_map<std::vector<PerformanceSample>>(
        static_cast<std::size_t>(config.n_hulls),
        [&](std::size_t i) { return dataset_rows_for_hull(model, config, static_cast<long>(i)); },
        n_threads);

    const std::vector<bool> is_test = detail::split_by_hull(
        config.n_hulls, config.test_fraction, config.seed + static_cast<std::uint64_t>(config.n_hulls));

    Dataset dataset;
    dataset.config = config;
    dataset.pca_digest = pca_digest(model);
    dataset.rows.reserve(static_cast<std::size_t>(config.n_hulls) *
                         static_cast<std::size_t>(config.fn_count));
    for (std::size_t i = 0; i < per_hull.size(); ++i) {
        for (PerformanceSample row : per_hull[i]) {
            row.is_test = is_test[i];
            dataset.rows.push_back(row);
        }
    }
    return dataset;
}

// --- Dataset file ---------------------------------------------------------

inline std::string sample_row_csv(const PerformanceSample& r) {
    std::string out = std::to_string(r.hull_id);
    out += r.is_test ? ",test," : ",train,";
    out += fmt_double(r.lambda_bar[0]) + ',' + fmt_double(r.lambda_bar[1]) + ',' +
           fmt_double(r.lambda_bar[2]) + ',' + fmt_double(r.length_to_beam) + ',' +
           fmt_double(r.beam_to_draft) + ',' + fmt_double(r.length) + ',' +
           fmt_double(r.froude) + ',' + fmt_double(r.reynolds) + ',' + fmt_double(r.merit);
    return out;
}

inline PerformanceSample parse_sample_row(const std::string& line, const std::string& origin) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (cells.size() != 11) throw ValidationError(origin + ": dataset row has wrong arity");
    PerformanceSample row;
    row.hull_id = parse_long(cells[0]);
    if (cells[1] == "train") {
        row.is_test = false;
    } else if (cells[1] == "test") {
        row.is_test = true;
    } else {
        throw ValidationError(origin + ": unknown split tag '" + cells[1] + "'");
    }
    for (int j = 0; j < kScoreCount; ++j) {
        row.lambda_bar[j] = parse_double(cells[static_cast<std::size_t>(j) + 2]);
    }
    row.length_to_beam = parse_double(cells[5]);
    row.beam_to_draft = parse_double(cells[6]);
    row.length = parse_double(cells[7]);
    row.froude = parse_double(cells[8]);
    row.reynolds = parse_double(cells[9]);
    row.merit = parse_double(cells[10]);
    if (!(row.merit > 0.0)) {
        throw ValidationError(origin + ": non-positive merit coefficient in dataset");
    }
    return row;
}

inline std::string serialize_dataset(const Dataset& dataset) {
    const DatasetConfig& c = dataset.config;
    std::string out;
    out += std::string("# ") + kDatasetMagic + ' ' + kDatasetVersion + '\n';
    out += "# pca_digest " + dataset.pca_digest + '\n';
    out += "# seed " + std::to_string(c.seed) + " n_hulls " + std::to_string(c.n_hulls) +
           " fn " + fmt_double(c.fn_lower) + ' ' + fmt_double(c.fn_upper) + ' ' +
           std::to_string(c.fn_count) + " test_fraction " + fmt_double(c.test_fraction) + '\n';
    out += "# length_range " + fmt_double(c.length_range.first) + ' ' +
           fmt_double(c.length_range.second) + '\n';
    out += "# fluid rho " + fmt_double(c.fluid.density) + " g " + fmt_double(c.fluid.gravity) +
           " nu " + fmt_double(c.fluid.kinematic_viscosity) + '\n';
    out += "# wave n_theta " + std::to_string(c.wave.n_theta) + " truncation " +
           fmt_double(c.wave.truncation) + '\n';
    out += "hull_id,split,lambda1,lambda2,lambda3,L_over_B,B_over_T,L,Fn,Re,C_T\n";
    for (const auto& r : dataset.rows) {
        out += sample_row_csv(r);
        out += '\n';
    }
    return out;
}

inline Dataset parse_dataset(const std::string& text, const std::string& origin = "<string>") {
    std::istringstream in(text);
    std::string line;
    Dataset dataset;
    bool saw_magic = false;
    bool saw_columns = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto toks = split_ws(line);
            if (toks.size() >= 3 && toks[1] == kDatasetMagic) {
                if (toks[2] != kDatasetVersion) {
                    throw ValidationError(origin + ": unsupported dataset version");
                }
                saw_magic = true;
            } else if (toks.size() >= 3 && toks[1] == "pca_digest") {
                dataset.pca_digest = toks[2];
            } else if (toks.size() >= 11 && toks[1] == "seed") {
                dataset.config.seed = static_cast<std::uint64_t>(parse_long(toks[2]));
                dataset.config.n_hulls = static_cast<int>(parse_long(toks[4]));
                dataset.config.fn_lower = parse_double(toks[6]);
                dataset.config.fn_upper = parse_double(toks[7]);
                dataset.config.fn_count = static_cast<int>(parse_long(toks[8]));
                dataset.config.test_fraction = parse_double(toks[10]);
            } else if (toks.size() >= 4 && toks[1] == "length_range") {
                dataset.config.length_range = {parse_double(toks[2]), parse_double(toks[3])};
            } else if (toks.size() >= 8 && toks[1] == "fluid") {
                dataset.config.fluid.density = parse_double(toks[3]);
                dataset.config.fluid.gravity = parse_double(toks[5]);
                dataset.config.fluid.kinematic_viscosity = parse_double(toks[7]);
            } else if (toks.size() >= 6 && toks[1] == "wave") {
                dataset.config.wave.n_theta = static_cast<int>(parse_long(toks[3]));
                dataset.config.wave.truncation = parse_double(toks[5]);
            }
            continue;
        }
        if (!saw_columns) {
            if (line.rfind("hull_id,", 0) != 0) {
                throw ValidationError(origin + ": missing dataset column header");
            }
            saw_columns = true;
            continue;
        }
        dataset.rows.push_back(parse_sample_row(line, origin));
    }
    if (!saw_magic || !saw_columns) throw ValidationError(origin + ": not a hullopt dataset");
    return dataset;
}

inline void save_dataset(const std::string& path, const Dataset& dataset) {
    write_file(path, serialize_dataset(dataset));
}

inline Dataset load_dataset(const std::string& path) {
    return parse_dataset(read_file(path), path);
}

}  // namespace hullopt
