// hullopt: hull-form optimization pipeline driver.
//
//   parents        write the bundled parent offset tables + summary
//   fit-pca        fit the PCA compression on a directory of offset tables
//   gen-dataset    sample hulls and evaluate the resistance dataset
//   train          train the MLP surrogate on a dataset
//   optimize       search the design space for the minimum-beta hull
//   export-curves  resistance curve CSV for a hull or parameter set
//
// Stages hand off through files; an optional --manifest records content
// digests so a stage refuses inputs that do not descend from the recorded
// upstream artifacts. Exit codes: 0 success, 2 validation failure, 3 I/O
// failure, 4 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "hullopt/dataset.hpp"
#include "hullopt/manifest.hpp"
#include "hullopt/mesh.hpp"
#include "hullopt/mlp.hpp"
#include "hullopt/parents.hpp"
#include "hullopt/pca.hpp"
#include "hullopt/report.hpp"
#include "hullopt/resistance.hpp"
#include "hullopt/search.hpp"

namespace fs = std::filesystem;
using namespace hullopt;

namespace {

// Desk-scale training default; --paper-scale switches to the full settings.
constexpr int kDeskEpochs = 1500;
constexpr int kPaperEpochs = 8000;
constexpr int kDeskHulls = 200;
constexpr int kPaperHulls = 1131;

struct ManifestOption {
    std::string path;

    bool active() const { return !path.empty(); }
    Manifest open() const { return Manifest::load_or_create(path); }
};

void add_manifest_flag(CLI::App* cmd, ManifestOption& opt) {
    cmd->add_option("--manifest", opt.path, "pipeline manifest to verify and update");
}

std::vector<std::string> list_offset_files(const std::string& dir) {
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".offsets") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ValidationError("no .offsets files in " + dir);
    return files;
}

// Digest of a parent directory: file contents in sorted filename order.
std::string digest_offset_dir(const std::string& dir) {
    Digest d;
    for (const auto& f : list_offset_files(dir)) d.update(read_file(f));
    return d.hex();
}

void cmd_parents(const std::string& out_dir, int stations, int waterlines,
                 const ManifestOption& manifest_opt) {
    fs::create_directories(out_dir);
    const auto parents = bundled_parents(static_cast<std::size_t>(stations),
                                         static_cast<std::size_t>(waterlines));
    std::vector<OffsetGrid> grids;
    for (const auto& p : parents) grids.push_back(p.grid);
    const PcaModel provisional = fit(grids, -1);

    std::string summary =
        "name,L,L_over_B,B_over_T,C_B,C_P,slenderness,lambda1,lambda2,lambda3\n";
    for (const auto& p : parents) {
        const std::string path = (fs::path(out_dir) / (p.name + ".offsets")).string();
        save_offsets(path, p.grid);
        const HydrostaticsReport h = hydrostatics(p.hull());
        const Eigen::VectorXd lb = scale_scores(provisional, compress(provisional, p.grid));
        summary += p.name + ',' + fmt_double(p.length) + ',' + fmt_double(p.length_to_beam) +
                   ',' + fmt_double(p.beam_to_draft) + ',' + fmt_double(h.block_coefficient) +
                   ',' + fmt_double(h.prismatic_coefficient) + ',' + fmt_double(h.slenderness);
        for (int j = 0; j < provisional.dim(); ++j) summary += ',' + fmt_double(lb(j));
        summary += '\n';
        std::printf("wrote %s (C_B %.4f, C_P %.4f)\n", path.c_str(), h.block_coefficient,
                    h.prismatic_coefficient);
    }
    const std::string summary_path = (fs::path(out_dir) / "parents_summary.csv").string();
    write_file(summary_path, summary);
    std::printf("wrote %s\n", summary_path.c_str());

    if (manifest_opt.active()) {
        Manifest m = manifest_opt.open();
        m.record_with_digest("parents", out_dir, digest_offset_dir(out_dir));
        m.save(manifest_opt.path);
    }
}

void cmd_fit_pca(const std::string& parents_dir, int d, const std::string& out,
                 const ManifestOption& manifest_opt) {
    const auto files = list_offset_files(parents_dir);
    if (manifest_opt.active()) {
        manifest_opt.open().verify_digest("parents", parents_dir, digest_offset_dir(parents_dir));
    }
    std::vector<OffsetGrid> grids;
    for (const auto& f : files) grids.push_back(load_offsets(f));
    const PcaModel model = fit(grids, d);
    save_pca(out, model);
    std::printf("fitted PCA on %zu parents: d=%d, explained variance", grids.size(), model.dim());
    for (int j = 0; j < model.dim(); ++j) {
        std::printf(" %.4f%%", 100.0 * model.explained_variance(j));
    }
    if (model.dropped_axes > 0) {
        std::printf(" (warning: %d rank-deficient axes dropped)", model.dropped_axes);
    }
    std::printf("\nwrote %s\n", out.c_str());

    if (manifest_opt.active()) {
        Manifest m = manifest_opt.open();
        m.record("pca", out);
        m.save(manifest_opt.path);
    }
}

// Per-hull spool files make an interrupted generation resumable: a hull's
// part file is only visible once complete (written to a temp name, then
// renamed), and existing valid parts are reused on the next run.
std::vector<PerformanceSample> rows_for_hull_resumable(const PcaModel& model,
                                                       const DatasetConfig& config, long hull_id,
                                                       const std::string& parts_dir) {
    char name[32];
    std::snprintf(name, sizeof(name), "hull_%08ld.part", hull_id);
    const fs::path part = fs::path(parts_dir) / name;
    if (fs::exists(part)) {
        try {
            std::istringstream in(read_file(part.string()));
            std::string line;
            std::vector<PerformanceSample> rows;
            while (std::getline(in, line)) {
                if (!line.empty()) rows.push_back(parse_sample_row(line, part.string()));
            }
            if (rows.size() == static_cast<std::size_t>(config.fn_count)) return rows;
        } catch (const Error&) {
            // fall through and recompute a corrupt part
        }
    }
    const auto rows = dataset_rows_for_hull(model, config, hull_id);
    std::string text;
    for (const auto& r : rows) {
        text += sample_row_csv(r);
        text += '\n';
    }
    const fs::path tmp = part.string() + ".tmp";
    write_file(tmp.string(), text);
    fs::rename(tmp, part);
    return rows;
}

void cmd_gen_dataset(const std::string& pca_path, DatasetConfig config, unsigned threads,
                     const std::string& out, const ManifestOption& manifest_opt) {
    const PcaModel model = load_pca(pca_path);
    if (manifest_opt.active()) manifest_opt.open().verify("pca", pca_path);

    const std::string parts_dir = out + ".parts";
    fs::create_directories(parts_dir);

    const auto per_hull = parallel_map<std::vector<PerformanceSample>>(
        static_cast<std::size_t>(config.n_hulls),
        [&](std::size_t i) {
            return rows_for_hull_resumable(model, config, static_cast<long>(i), parts_dir);
        },
        threads);

    const auto is_test = detail::split_by_hull(config.n_hulls, config.test_fraction,
                                               config.seed + static_cast<std::uint64_t>(config.n_hulls));
    Dataset dataset;
    dataset.config = config;
    dataset.pca_digest = pca_digest(model);
    for (std::size_t i = 0; i < per_hull.size(); ++i) {
        for (PerformanceSample row : per_hull[i]) {
            row.is_test = is_test[i];
            dataset.rows.push_back(row);
        }
    }
    save_dataset(out, dataset);
    fs::remove_all(parts_dir);
    std::printf("wrote %s: %zu rows (%zu train / %zu test), %d hulls x %d speeds\n", out.c_str(),
                dataset.rows.size(), dataset.train_count(), dataset.test_count(), config.n_hulls,
                config.fn_count);

    if (manifest_opt.active()) {
        Manifest m = manifest_opt.open();
        m.record("dataset", out, config.seed);
        m.save(manifest_opt.path);
    }
}

void cmd_train(const std::string& dataset_path, TrainingConfig config, const std::string& out,
               std::string history_path, const ManifestOption& manifest_opt) {
    const Dataset dataset = load_dataset(dataset_path);
    if (manifest_opt.active()) manifest_opt.open().verify("dataset", dataset_path);

    auto [model, history] = train(dataset, config);
    model.provenance.dataset_digest = digest_string(serialize_dataset(dataset));
    model.provenance.pca_digest = dataset.pca_digest;
    save_mlp(out, model);
    if (history_path.empty()) history_path = out + ".history.csv";
    write_file(history_path, history_csv(history));
    std::printf("trained %d epochs; best test MAPE %.4f%% at epoch %d\nwrote %s and %s\n",
                config.epochs, history.best_test_mape, history.best_epoch, out.c_str(),
                history_path.c_str());

    if (manifest_opt.active()) {
        Manifest m = manifest_opt.open();
        m.record("model", out, config.seed);
        m.save(manifest_opt.path);
    }
}

void cmd_optimize(const std::string& pca_path, const std::string& model_path, SearchSpace space,
                  SearchConfig config, const std::string& out, std::string hull_out,
                  std::string mesh_out, const ManifestOption& manifest_opt) {
    const PcaModel pca = load_pca(pca_path);
    const MlpModel model = load_mlp(model_path);
    if (manifest_opt.active()) {
        Manifest m = manifest_opt.open();
        m.verify("pca", pca_path);
        m.verify("model", model_path);
    }

    const OptimizeOutcome outcome = optimize_hull(model, pca, space, config);
    write_file(out, search_report_json(outcome, space, config, pca_digest(pca),
                                       digest_string(serialize_mlp(model))));
    if (hull_out.empty()) hull_out = out + ".offsets";
    save_offsets(hull_out, outcome.hull.grid);
    if (mesh_out.empty()) mesh_out = out + ".obj";
    save_hull_obj(mesh_out, outcome.hull);

    std::printf("best parameters: lambda=(%.4f, %.4f, %.4f) L/B=%.3f B/T=%.3f\n",
                outcome.search.best_params[0], outcome.search.best_params[1],
                outcome.search.best_params[2], outcome.search.best_params[3],
                outcome.search.best_params[4]);
    std::printf("surrogate beta %.6e | hydro beta %.6e | audit delta %.2f%%\n",
                outcome.surrogate_beta, outcome.hydro_beta, 100.0 * outcome.audit_delta);
    std::printf("C_B %.4f C_P %.4f slenderness %.3f; %ld evaluations, %ld warnings\n",
                outcome.hydrostatics.block_coefficient,
                outcome.hydrostatics.prismatic_coefficient, outcome.hydrostatics.slenderness,
                outcome.search.evaluation_count, outcome.search.surrogate_warnings);
    std::printf("wrote %s, %s, %s\n", out.c_str(), hull_out.c_str(), mesh_out.c_str());

    if (manifest_opt.active()) {
        Manifest m = manifest_opt.open();
        m.record("report", out, config.seed);
        m.save(manifest_opt.path);
    }
}

void cmd_export_curves(const std::string& hull_path, const std::string& pca_path,
                       std::vector<double> lambda, double length, double lb, double bt,
                       double fn_min, double fn_max, int fn_count, const std::string& out) {
    HullForm hull;
    if (!hull_path.empty()) {
        hull = make_hull(load_offsets(hull_path), length, lb, bt);
    } else if (!pca_path.empty()) {
        const PcaModel pca = load_pca(pca_path);
        if (lambda.size() != static_cast<std::size_t>(pca.dim())) {
            throw ValidationError("--lambda needs exactly d values for this PCA model");
        }
        HullParams params{lambda, lb, bt, length};
        hull = build_hull(pca, params);
    } else {
        throw ValidationError("export-curves needs --hull or --pca with --lambda");
    }
    const auto curve = resistance_curve(hull, fn_min, fn_max, fn_count);
    write_file(out, curve_csv(curve));
    std::printf("wrote %s (%d points, Fn %.3f..%.3f)\n", out.c_str(), fn_count, fn_min, fn_max);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hull-form optimization pipeline (PCA + resistance model + MLP surrogate)"};
    app.require_subcommand(1);

    // parents
    auto* parents = app.add_subcommand("parents", "write the bundled parent offset tables");
    std::string parents_out = "parents";
    int parents_stations = kDefaultStations, parents_waterlines = kDefaultWaterlines;
    ManifestOption parents_manifest;
    parents->add_option("--out", parents_out, "output directory")->capture_default_str();
    parents->add_option("--stations", parents_stations)->capture_default_str();
    parents->add_option("--waterlines", parents_waterlines)->capture_default_str();
    add_manifest_flag(parents, parents_manifest);

    // fit-pca
    auto* fitpca = app.add_subcommand("fit-pca", "fit the PCA compression on parent tables");
    std::string fit_parents = "parents", fit_out = "pca_model.txt";
    int fit_d = -1;
    ManifestOption fit_manifest;
    fitpca->add_option("--parents", fit_parents, "directory of .offsets files")
        ->capture_default_str();
    fitpca->add_option("--d", fit_d, "number of principal scores (-1 = max, n-1)")
        ->capture_default_str();
    fitpca->add_option("--out", fit_out)->capture_default_str();
    add_manifest_flag(fitpca, fit_manifest);

    // gen-dataset
    auto* gen = app.add_subcommand("gen-dataset", "sample hulls and evaluate the dataset");
    std::string gen_pca = "pca_model.txt", gen_out = "dataset.csv";
    DatasetConfig gen_config;
    bool gen_paper_scale = false;
    unsigned gen_threads = 0;
    ManifestOption gen_manifest;
    gen->add_option("--pca", gen_pca)->capture_default_str();
    gen->add_option("--out", gen_out)->capture_default_str();
    gen->add_option("--n-hulls", gen_config.n_hulls, "hull count (desk default)")
        ->capture_default_str();
    gen->add_flag("--paper-scale", gen_paper_scale, "use the full 1131-hull fleet");
    gen->add_option("--fn-min", gen_config.fn_lower)->capture_default_str();
    gen->add_option("--fn-max", gen_config.fn_upper)->capture_default_str();
    gen->add_option("--fn-count", gen_config.fn_count)->capture_default_str();
    gen->add_option("--test-fraction", gen_config.test_fraction)->capture_default_str();
    gen->add_option("--L-min", gen_config.length_range.first)->capture_default_str();
    gen->add_option("--L-max", gen_config.length_range.second)->capture_default_str();
    gen->add_option("--seed", gen_config.seed)->capture_default_str();
    gen->add_option("--threads", gen_threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    add_manifest_flag(gen, gen_manifest);

    // train
    auto* tr = app.add_subcommand("train", "train the MLP surrogate");
    std::string train_dataset = "dataset.csv", train_out = "surrogate.txt", train_history;
    TrainingConfig train_config;
    train_config.epochs = 0;  // resolved below against --paper-scale
    bool train_paper_scale = false;
    tr->add_option("--dataset", train_dataset)->capture_default_str();
    tr->add_option("--out", train_out)->capture_default_str();
    tr->add_option("--history", train_history, "history CSV (default <out>.history.csv)");
    tr->add_option("--epochs", train_config.epochs, "0 = scale default")->capture_default_str();
    tr->add_option("--batch", train_config.batch_size)->capture_default_str();
    tr->add_option("--seed", train_config.seed)->capture_default_str();
    tr->add_flag("--paper-scale", train_paper_scale, "8000 epochs");
    ManifestOption train_manifest;
    add_manifest_flag(tr, train_manifest);

    // optimize
    auto* opt = app.add_subcommand("optimize", "search for the minimum-beta hull form");
    std::string opt_pca = "pca_model.txt", opt_model = "surrogate.txt",
                opt_out = "search_report.json", opt_hull, opt_mesh;
    double opt_length = 300.0, opt_fn_min = 0.20, opt_fn_max = 0.24;
    int opt_nu = 5;
    SearchConfig opt_config;
    std::vector<double> opt_lb = {7.0, 9.0}, opt_bt = {2.0, 3.1};
    opt->add_option("--pca", opt_pca)->capture_default_str();
    opt->add_option("--model", opt_model)->capture_default_str();
    opt->add_option("--out", opt_out)->capture_default_str();
    opt->add_option("--hull-out", opt_hull, "winning hull offsets (default <out>.offsets)");
    opt->add_option("--mesh-out", opt_mesh, "winning hull mesh (default <out>.obj)");
    opt->add_option("--L", opt_length, "hull length, meters")->capture_default_str();
    opt->add_option("--fn-min", opt_fn_min)->capture_default_str();
    opt->add_option("--fn-max", opt_fn_max)->capture_default_str();
    opt->add_option("--n-u", opt_nu, "Froude numbers per beta")->capture_default_str();
    opt->add_option("--lb-range", opt_lb, "L/B bounds")->expected(2)->capture_default_str();
    opt->add_option("--bt-range", opt_bt, "B/T bounds")->expected(2)->capture_default_str();
    opt->add_option("--n1", opt_config.n1)->capture_default_str();
    opt->add_option("--n2", opt_config.n2)->capture_default_str();
    opt->add_option("--k", opt_config.k)->capture_default_str();
    opt->add_option("--shrink", opt_config.shrink_factor)->capture_default_str();
    opt->add_option("--tol", opt_config.convergence_tol)->capture_default_str();
    opt->add_option("--seed", opt_config.seed)->capture_default_str();
    opt->add_flag("--shuffle-axes", opt_config.shuffle_axes,
                  "randomize the refinement sweep order");
    ManifestOption opt_manifest;
    add_manifest_flag(opt, opt_manifest);

    // export-curves
    auto* exp = app.add_subcommand("export-curves", "resistance curve CSV for one hull");
    std::string exp_hull, exp_pca, exp_out = "curve.csv";
    std::vector<double> exp_lambda;
    double exp_length = 100.0, exp_lb = 10.0, exp_bt = 1.6;
    double exp_fn_min = 0.15, exp_fn_max = 0.35;
    int exp_fn_count = 21;
    exp->add_option("--hull", exp_hull, "offset-table file");
    exp->add_option("--pca", exp_pca, "PCA model (with --lambda)");
    exp->add_option("--lambda", exp_lambda, "scaled scores")->expected(-1);
    exp->add_option("--L", exp_length)->capture_default_str();
    exp->add_option("--lb", exp_lb, "L/B")->capture_default_str();
    exp->add_option("--bt", exp_bt, "B/T")->capture_default_str();
    exp->add_option("--fn-min", exp_fn_min)->capture_default_str();
    exp->add_option("--fn-max", exp_fn_max)->capture_default_str();
    exp->add_option("--fn-count", exp_fn_count)->capture_default_str();
    exp->add_option("--out", exp_out)->capture_default_str();

    try {
        app.parse(argc, argv);
        if (*parents) {
            cmd_parents(parents_out, parents_stations, parents_waterlines, parents_manifest);
        } else if (*fitpca) {
            cmd_fit_pca(fit_parents, fit_d, fit_out, fit_manifest);
        } else if (*gen) {
            if (gen_paper_scale && gen_config.n_hulls == kDeskHulls) {
                gen_config.n_hulls = kPaperHulls;
            }
            cmd_gen_dataset(gen_pca, gen_config, gen_threads, gen_out, gen_manifest);
        } else if (*tr) {
            if (train_config.epochs == 0) {
                train_config.epochs = train_paper_scale ? kPaperEpochs : kDeskEpochs;
            }
            cmd_train(train_dataset, train_config, train_out, train_history, train_manifest);
        } else if (*opt) {
            SearchSpace space = SearchSpace::defaults(opt_length, opt_fn_min, opt_fn_max, opt_nu);
            space.bounds[3] = {opt_lb[0], opt_lb[1]};
            space.bounds[4] = {opt_bt[0], opt_bt[1]};
            cmd_optimize(opt_pca, opt_model, space, opt_config, opt_out, opt_hull, opt_mesh,
                         opt_manifest);
        } else if (*exp) {
            cmd_export_curves(exp_hull, exp_pca, exp_lambda, exp_length, exp_lb, exp_bt,
                              exp_fn_min, exp_fn_max, exp_fn_count, exp_out);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 3;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
