#pragma once

// From-scratch deep MLP surrogate: (lambda1, lambda2, lambda3, L/B, B/T,
// Fn, Re) -> merit coefficient. He initialization, ReLU hidden layers, a
// linear output head, Adam on MAPE loss, and best-test-error checkpointing.
//
// Input normalization: Re is log10-transformed, then every feature is
// min-max scaled to [0,1] with statistics taken from the training split
// only; the statistics travel with the model file. Raw Re spans ~1e8-1e10,
// which an He-initialized ReLU stack cannot digest directly.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hullopt/common.hpp"
#include "hullopt/dataset.hpp"
#include "hullopt/flow.hpp"

namespace hullopt {

inline constexpr const char* kMlpMagic = "hullopt-mlp";
inline constexpr const char* kMlpVersion = "v1";

struct AdamConfig {
    double alpha = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void check() const {
        if (!(alpha > 0.0) || !(epsilon > 0.0) || !(beta1 > 0.0 && beta1 < 1.0) ||
            !(beta2 > 0.0 && beta2 < 1.0)) {
            throw ValidationError("Adam constants out of range");
        }
    }
};

struct TrainingConfig {
    std::vector<int> layer_dims;  // empty = paper architecture (7, 36 x 32, 1)
    int epochs = 8000;
    int batch_size = 2000;
    AdamConfig adam;
    std::uint64_t seed = 1;

    void check() const {
        if (epochs < 1) throw ValidationError("training needs at least 1 epoch");
        if (batch_size < 1) throw ValidationError("batch size must be at least 1");
        adam.check();
    }
};

inline std::vector<int> paper_architecture() {
    std::vector<int> dims;
    dims.push_back(kFeatureCount);
    for (int i = 0; i < 36; ++i) dims.push_back(32);
    dims.push_back(1);
    return dims;
}

// Per-feature affine normalization. Feature kReynoldsFeature is
// log10-transformed first when the flag is set.
struct InputNorm {
    static constexpr int kReynoldsFeature = 6;

    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    bool log10_reynolds = false;

    static InputNorm identity(int n_features) {
        InputNorm norm;
        norm.lo = Eigen::VectorXd::Zero(n_features);
        norm.hi = Eigen::VectorXd::Ones(n_features);
        return norm;
    }

    double transform(int feature, double v) const {
        if (log10_reynolds && feature == kReynoldsFeature) return std::log10(v);
        return v;
    }

    // raw: rows x features -> normalized features x rows (column per sample).
    Eigen::MatrixXd apply(const Eigen::MatrixXd& raw) const {
        const Eigen::Index m = raw.rows();
        const Eigen::Index f = raw.cols();
        if (f != lo.size()) throw ValidationError("feature count does not match normalization");
        Eigen::MatrixXd out(f, m);
        for (Eigen::Index j = 0; j < f; ++j) {
            const double span = hi(j) - lo(j);
            for (Eigen::Index i = 0; i < m; ++i) {
                const double t = transform(static_cast<int>(j), raw(i, j));
                out(j, i) = span > 0.0 ? (t - lo(j)) / span : 0.0;
            }
        }
        return out;
    }

    // Denormalize one sample (inverse of apply, without the Re transform
    // inversion unless requested); used by the round-trip tests.
    double denormalize(int feature, double v) const {
        const double span = hi(feature) - lo(feature);
        const double t = lo(feature) + v * span;
        if (log10_reynolds && feature == kReynoldsFeature) return std::pow(10.0, t);
        return t;
    }

    bool in_range(int feature, double raw_value) const {
        const double t = transform(feature, raw_value);
        return t >= lo(feature) && t <= hi(feature);
    }
};

struct MlpProvenance {
    std::uint64_t seed = 0;
    int epochs = 0;
    int batch_size = 0;
    int best_epoch = 0;
    double best_test_mape = 0.0;
    std::string dataset_digest = "-";
    std::string pca_digest = "-";
};

struct MlpModel {
    std::vector<int> layer_dims;
    std::vector<Eigen::MatrixXd> weights;  // weights[k]: dims[k+1] x dims[k]
    std::vector<Eigen::VectorXd> biases;
    InputNorm input_norm;
    // The network regresses merit / output_scale (the mean train target);
    // MAPE is scale-free so losses are unaffected, but keeping the regressed
    // variable at O(1) keeps Adam's finite step size far below the signal.
    // predict() rescales back to raw merit.
    double output_scale = 1.0;
    MlpProvenance provenance;

    int n_layers() const { return static_cast<int>(weights.size()); }
    int input_dim() const { return layer_dims.front(); }
    int output_dim() const { return layer_dims.back(); }

    void check_dims() const {
        if (layer_dims.size() < 2) throw ValidationError("MLP needs input and output layers");
        if (weights.size() != layer_dims.size() - 1 || biases.size() != weights.size()) {
            throw ValidationError("MLP parameter count does not match layer dims");
        }
        for (std::size_t k = 0; k < weights.size(); ++k) {
            if (weights[k].rows() != layer_dims[k + 1] || weights[k].cols() != layer_dims[k] ||
                biases[k].size() != layer_dims[k + 1]) {
                throw ValidationError("MLP parameter shapes do not chain");
            }
        }
    }
};

// Zero-mean normal weights with variance 2/fan_in, zero biases. Draw order:
// layer by layer, row-major within each weight matrix.
inline MlpModel he_init(const std::vector<int>& layer_dims, std::uint64_t seed) {
    if (layer_dims.size() < 2) throw ValidationError("MLP needs input and output layers");
    for (int d : layer_dims) {
        if (d < 1) throw ValidationError("layer widths must be positive");
    }
    MlpModel model;
    model.layer_dims = layer_dims;
    model.input_norm = InputNorm::identity(layer_dims.front());
    Rng rng(seed);
    for (std::size_t k = 0; k + 1 < layer_dims.size(); ++k) {
        const int fan_in = layer_dims[k];
        const int fan_out = layer_dims[k + 1];
        const double stddev = std::sqrt(2.0 / fan_in);
        Eigen::MatrixXd w(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) w(r, c) = stddev * rng.normal();
        }
        model.weights.push_back(std::move(w));
        model.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    model.provenance.seed = seed;
    return model;
}

namespace detail {

// Forward pass keeping every activation; activations[0] is the normalized
// input, activations[k+1] the output of layer k.
inline void forward_cached(const MlpModel& model, const Eigen::MatrixXd& raw,
                           std::vector<Eigen::MatrixXd>& activations) {
    if (raw.cols() != model.input_dim()) {
        throw ValidationError("feature rows do not match the MLP input width");
    }
    const int n_layers = model.n_layers();
    activations.resize(static_cast<std::size_t>(n_layers) + 1);
    activations[0] = model.input_norm.apply(raw);
    for (int k = 0; k < n_layers; ++k) {
        Eigen::MatrixXd z =
            (model.weights[static_cast<std::size_t>(k)] * activations[static_cast<std::size_t>(k)])
                .colwise() +
            model.biases[static_cast<std::size_t>(k)];
        if (k + 1 < n_layers) z = z.cwiseMax(0.0);  // ReLU on hidden layers only
        activations[static_cast<std::size_t>(k) + 1] = std::move(z);
    }
}

}  // namespace detail

// Batched forward pass; returns one prediction per input row.
inline Eigen::VectorXd forward(const MlpModel& model, const Eigen::MatrixXd& raw) {
    model.check_dims();
    if (model.output_dim() != 1) throw ValidationError("forward expects a scalar output head");
    std::vector<Eigen::MatrixXd> activations;
    detail::forward_cached(model, raw, activations);
    return activations.back().row(0).transpose();
}

// Mean absolute percentage error, in percent.
inline double mape(const Eigen::VectorXd& predictions, const Eigen::VectorXd& targets) {
    if (predictions.size() != targets.size() || targets.size() == 0) {
        throw ValidationError("MAPE needs matching, non-empty prediction/target vectors");
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < targets.size(); ++i) {
        if (targets(i) == 0.0) throw ValidationError("MAPE undefined for zero targets");
        acc += std::abs((targets(i) - predictions(i)) / targets(i));
    }
    return 100.0 * acc / static_cast<double>(targets.size());
}

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

// Reverse-mode gradients of the batch MAPE. Subgradient conventions: ReLU'
// at 0 is 0, and d|r|/dr at r = 0 is 0. Returns the batch loss.
inline double backward(const MlpModel& model, const Eigen::MatrixXd& raw,
                       const Eigen::VectorXd& targets, Gradients& grads) {
    model.check_dims();
    if (model.output_dim() != 1) throw ValidationError("backward expects a scalar output head");
    if (raw.rows() != targets.size()) throw ValidationError("feature/target row counts differ");

    std::vector<Eigen::MatrixXd> activations;
    detail::forward_cached(model, raw, activations);
    const Eigen::Index m = raw.rows();
    const int n_layers = model.n_layers();

    double loss = 0.0;
    Eigen::MatrixXd delta(1, m);  // dL/d(output)
    for (Eigen::Index i = 0; i < m; ++i) {
        const double y = targets(i);
        if (y == 0.0) throw ValidationError("MAPE undefined for zero targets");
        const double r = y - activations.back()(0, i);
        loss += std::abs(r / y);
        const double sign_r = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
        delta(0, i) = 100.0 / static_cast<double>(m) * (-sign_r / std::abs(y));
    }
    loss *= 100.0 / static_cast<double>(m);

    grads.weights.resize(static_cast<std::size_t>(n_layers));
    grads.biases.resize(static_cast<std::size_t>(n_layers));
    for (int k = n_layers - 1; k >= 0; --k) {
        const auto ku = static_cast<std::size_t>(k);
        grads.weights[ku].noalias() = delta * activations[ku].transpose();
        grads.biases[ku] = delta.rowwise().sum();
        if (k > 0) {
            Eigen::MatrixXd next = model.weights[ku].transpose() * delta;
            // ReLU mask: the layer input activation is zero exactly where the
            // preactivation was clipped (or was exactly 0).
            next.array() *= (activations[ku].array() > 0.0).cast<double>();
            delta = std::move(next);
        }
    }
    return loss;
}

struct AdamState {
    std::vector<Eigen::MatrixXd> m_weights, v_weights;
    std::vector<Eigen::VectorXd> m_biases, v_biases;
    long step = 0;

    static AdamState zero_like(const MlpModel& model) {
        AdamState s;
        for (const auto& w : model.weights) {
            s.m_weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
            s.v_weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        }
        for (const auto& b : model.biases) {
            s.m_biases.push_back(Eigen::VectorXd::Zero(b.size()));
            s.v_biases.push_back(Eigen::VectorXd::Zero(b.size()));
        }
        return s;
    }
};

inline void adam_step(MlpModel& model, AdamState& state, const Gradients& grads,
                      const AdamConfig& config) {
    config.check();
    state.step += 1;
    const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
        auto& mw = state.m_weights[k];
        auto& vw = state.v_weights[k];
        mw = config.beta1 * mw + (1.0 - config.beta1) * grads.weights[k];
        vw = config.beta2 * vw +
             (1.0 - config.beta2) * grads.weights[k].cwiseProduct(grads.weights[k]);
        model.weights[k].array() -=
            config.alpha * (mw.array() / bias1) /
            ((vw.array() / bias2).sqrt() + config.epsilon);

        auto& mb = state.m_biases[k];
        auto& vb = state.v_biases[k];
        mb = config.beta1 * mb + (1.0 - config.beta1) * grads.biases[k];
        vb = config.beta2 * vb + (1.0 - config.beta2) * grads.biases[k].cwiseProduct(grads.biases[k]);
        model.biases[k].array() -=
            config.alpha * (mb.array() / bias1) /
            ((vb.array() / bias2).sqrt() + config.epsilon);
    }
}

struct TrainingHistory {
    std::vector<double> train_mape;  // running mean of batch losses per epoch
    std::vector<double> test_mape;   // full test evaluation per epoch
    int best_epoch = 0;              // 1-based
    double best_test_mape = std::numeric_limits<double>::infinity();
};

inline std::string history_csv(const TrainingHistory& history) {
    std::string out = "epoch,train_mape,test_mape\n";
    for (std::size_t e = 0; e < history.test_mape.size(); ++e) {
        out += std::to_string(e + 1) + ',' + fmt_double(history.train_mape[e]) + ',' +
               fmt_double(history.test_mape[e]) + '\n';
    }
    return out;
}

namespace detail {

struct FeatureSplit {
    Eigen::MatrixXd train_x, test_x;
    Eigen::VectorXd train_y, test_y;
};

inline FeatureSplit dataset_features(const Dataset& dataset) {
    std::size_t n_train = 0, n_test = 0;
    for (const auto& r : dataset.rows) (r.is_test ? n_test : n_train) += 1;
    if (n_train == 0 || n_test == 0) {
        throw ValidationError("training needs non-empty train and test splits");
    }
    FeatureSplit split;
    split.train_x.resize(static_cast<Eigen::Index>(n_train), kFeatureCount);
    split.test_x.resize(static_cast<Eigen::Index>(n_test), kFeatureCount);
    split.train_y.resize(static_cast<Eigen::Index>(n_train));
    split.test_y.resize(static_cast<Eigen::Index>(n_test));
    Eigen::Index it = 0, iv = 0;
    double features[kFeatureCount];
    for (const auto& r : dataset.rows) {
        if (!(r.merit > 0.0)) throw ValidationError("dataset targets must be positive");
        r.features(features);
        if (r.is_test) {
            for (int j = 0; j < kFeatureCount; ++j) split.test_x(iv, j) = features[j];
            split.test_y(iv++) = r.merit;
        } else {
            for (int j = 0; j < kFeatureCount; ++j) split.train_x(it, j) = features[j];
            split.train_y(it++) = r.merit;
        }
    }
    return split;
}

}  // namespace detail

// Minibatch Adam on MAPE with per-epoch test monitoring; returns the
// parameters of the epoch with the lowest test error. Normalization
// statistics come from the training split only, once, before training.
inline std::pair<MlpModel, TrainingHistory> train(const Dataset& dataset,
                                                  const TrainingConfig& config) {
    config.check();
    const std::vector<int> dims = config.layer_dims.empty() ? paper_architecture()
                                                            : config.layer_dims;
    if (dims.front() != kFeatureCount || dims.back() != 1) {
        throw ValidationError("surrogate architecture must map 7 features to 1 output");
    }
    detail::FeatureSplit split = detail::dataset_features(dataset);
    if (static_cast<Eigen::Index>(config.batch_size) > split.train_y.size()) {
        throw ValidationError("batch size exceeds the training split");
    }

    MlpModel model = he_init(dims, config.seed);
    model.input_norm.log10_reynolds = true;
    model.input_norm.lo.resize(kFeatureCount);
    model.input_norm.hi.resize(kFeatureCount);
    for (int j = 0; j < kFeatureCount; ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < split.train_x.rows(); ++i) {
            const double t = model.input_norm.transform(j, split.train_x(i, j));
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
        model.input_norm.lo(j) = lo;
        model.input_norm.hi(j) = hi;
    }
    model.provenance.epochs = config.epochs;
    model.provenance.batch_size = config.batch_size;
    model.output_scale = split.train_y.mean();
    if (!(model.output_scale > 0.0)) throw ValidationError("train targets must be positive");
    split.train_y /= model.output_scale;
    split.test_y /= model.output_scale;

    AdamState state = AdamState::zero_like(model);
    Gradients grads;
    TrainingHistory history;
    Rng shuffle_rng(config.seed + 1);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(split.train_y.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    std::vector<Eigen::MatrixXd> best_weights = model.weights;
    std::vector<Eigen::VectorXd> best_biases = model.biases;

    Eigen::MatrixXd batch_x;
    Eigen::VectorXd batch_y;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t count =
                std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), order.size() - start);
            batch_x.resize(static_cast<Eigen::Index>(count), kFeatureCount);
            batch_y.resize(static_cast<Eigen::Index>(count));
            for (std::size_t b = 0; b < count; ++b) {
                batch_x.row(static_cast<Eigen::Index>(b)) = split.train_x.row(order[start + b]);
                batch_y(static_cast<Eigen::Index>(b)) = split.train_y(order[start + b]);
            }
            const double loss = backward(model, batch_x, batch_y, grads);
            adam_step(model, state, grads, config.adam);
            epoch_loss += loss * static_cast<double>(count);
            seen += count;
        }
        history.train_mape.push_back(epoch_loss / static_cast<double>(seen));

        const double test_err = mape(forward(model, split.test_x), split.test_y);
        history.test_mape.push_back(test_err);
        if (test_err < history.best_test_mape) {
            history.best_test_mape = test_err;
            history.best_epoch = epoch;
            best_weights = model.weights;
            best_biases = model.biases;
        }
    }

    model.weights = std::move(best_weights);
    model.biases = std::move(best_biases);
    model.provenance.best_epoch = history.best_epoch;
    model.provenance.best_test_mape = history.best_test_mape;
    model.provenance.pca_digest = dataset.pca_digest.empty() ? "-" : dataset.pca_digest;
    model.provenance.dataset_digest = digest_string(serialize_dataset(dataset));
    return {std::move(model), std::move(history)};
}

// --- Prediction -------------------------------------------------------------

struct Prediction {
    double value = 0.0;
    // Some feature fell outside the training range; the value is an
    // extrapolation and silently unreliable.
    bool extrapolated = false;
};

inline Prediction predict_features(const MlpModel& model, const double raw[kFeatureCount]) {
    Eigen::MatrixXd row(1, kFeatureCount);
    for (int j = 0; j < kFeatureCount; ++j) row(0, j) = raw[j];
    Prediction p;
    p.value = forward(model, row)(0) * model.output_scale;
    for (int j = 0; j < kFeatureCount; ++j) {
        if (!model.input_norm.in_range(j, raw[j])) {
            p.extrapolated = true;
            break;
        }
    }
    return p;
}

// Re is derived from (L, Fn) exactly as the resistance model derives it.
inline Prediction predict(const MlpModel& model, const std::vector<double>& lambda_bar,
                          double length_to_beam, double beam_to_draft, double length,
                          double froude, const FluidConstants& fluid = {}) {
    if (lambda_bar.size() != static_cast<std::size_t>(kScoreCount)) {
        throw ValidationError("predict expects 3 scaled scores");
    }
    double raw[kFeatureCount] = {lambda_bar[0], lambda_bar[1], lambda_bar[2],
                                 length_to_beam, beam_to_draft, froude,
                                 reynolds_from_froude(froude, length, fluid)};
    return predict_features(model, raw);
}

// Batch prediction is a per-row loop on purpose: results are bit-identical
// for any external batching or scheduling of the same rows.
inline std::vector<Prediction> predict_batch(const MlpModel& model,
                                             const std::vector<std::array<double, kFeatureCount>>& rows) {
    std::vector<Prediction> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(predict_features(model, row.data()));
    return out;
}

// --- Model file -------------------------------------------------------------

inline std::string serialize_mlp(const MlpModel& model) {
    model.check_dims();
    std::string out;
    out += std::string(kMlpMagic) + ' ' + kMlpVersion + '\n';
    out += "layers " + std::to_string(model.layer_dims.size());
    for (int d : model.layer_dims) out += ' ' + std::to_string(d);
    out += '\n';
    out += std::string("norm_transform ") +
           (model.input_norm.log10_reynolds ? "log10_reynolds" : "none") + '\n';
    out += "norm_lo";
    for (Eigen::Index j = 0; j < model.input_norm.lo.size(); ++j) {
        out += ' ' + fmt_double(model.input_norm.lo(j));
    }
    out += "\nnorm_hi";
    for (Eigen::Index j = 0; j < model.input_norm.hi.size(); ++j) {
        out += ' ' + fmt_double(model.input_norm.hi(j));
    }
    out += '\n';
    out += "output_scale " + fmt_double(model.output_scale) + '\n';
    const MlpProvenance& p = model.provenance;
    out += "provenance seed " + std::to_string(p.seed) + " epochs " + std::to_string(p.epochs) +
           " batch " + std::to_string(p.batch_size) + " best_epoch " +
           std::to_string(p.best_epoch) + " best_test_mape " + fmt_double(p.best_test_mape) +
           '\n';
    out += "digests dataset " + p.dataset_digest + " pca " + p.pca_digest + '\n';
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
        const auto& w = model.weights[k];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            out += "W " + std::to_string(k) + ' ' + std::to_string(r);
            for (Eigen::Index c = 0; c < w.cols(); ++c) out += ' ' + fmt_double(w(r, c));
            out += '\n';
        }
        out += "b " + std::to_string(k);
        for (Eigen::Index r = 0; r < model.biases[k].size(); ++r) {
            out += ' ' + fmt_double(model.biases[k](r));
        }
        out += '\n';
    }
    return out;
}

inline MlpModel parse_mlp(const std::string& text, const std::string& origin = "<string>") {
    std::istringstream in(text);
    std::string line;
    auto next = [&](const char* what) {
        if (!std::getline(in, line)) {
            throw ValidationError(origin + ": truncated MLP model (missing " + std::string(what) + ")");
        }
        return split_ws(line);
    };
    auto header = next("header");
    if (header.size() != 2 || header[0] != kMlpMagic || header[1] != kMlpVersion) {
        throw ValidationError(origin + ": not a hullopt MLP model (or unsupported version)");
    }
    auto layers = next("layers");
    if (layers.size() < 4 || layers[0] != "layers") {
        throw ValidationError(origin + ": malformed layers line");
    }
    const long n_dims = parse_long(layers[1]);
    if (n_dims < 2 || layers.size() != static_cast<std::size_t>(n_dims) + 2) {
        throw ValidationError(origin + ": layer count mismatch");
    }
    MlpModel model;
    for (long i = 0; i < n_dims; ++i) {
        model.layer_dims.push_back(static_cast<int>(parse_long(layers[static_cast<std::size_t>(i) + 2])));
    }
    auto transform = next("norm_transform");
    if (transform.size() != 2 || transform[0] != "norm_transform") {
        throw ValidationError(origin + ": malformed norm_transform line");
    }
    model.input_norm.log10_reynolds = transform[1] == "log10_reynolds";
    auto read_norm = [&](const char* tag) {
        auto toks = next(tag);
        if (toks.size() != static_cast<std::size_t>(model.layer_dims.front()) + 1 ||
            toks[0] != tag) {
            throw ValidationError(origin + ": malformed '" + std::string(tag) + "' line");
        }
        Eigen::VectorXd v(model.layer_dims.front());
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            v(j) = parse_double(toks[static_cast<std::size_t>(j) + 1]);
        }
        return v;
    };
    model.input_norm.lo = read_norm("norm_lo");
    model.input_norm.hi = read_norm("norm_hi");
    auto scale_line = next("output_scale");
    if (scale_line.size() != 2 || scale_line[0] != "output_scale") {
        throw ValidationError(origin + ": malformed output_scale line");
    }
    model.output_scale = parse_double(scale_line[1]);
    auto prov = next("provenance");
    if (prov.size() != 11 || prov[0] != "provenance") {
        throw ValidationError(origin + ": malformed provenance line");
    }
    model.provenance.seed = static_cast<std::uint64_t>(parse_long(prov[2]));
    model.provenance.epochs = static_cast<int>(parse_long(prov[4]));
    model.provenance.batch_size = static_cast<int>(parse_long(prov[6]));
    model.provenance.best_epoch = static_cast<int>(parse_long(prov[8]));
    model.provenance.best_test_mape = parse_double(prov[10]);
    auto digests = next("digests");
    if (digests.size() != 5 || digests[0] != "digests") {
        throw ValidationError(origin + ": malformed digests line");
    }
    model.provenance.dataset_digest = digests[2];
    model.provenance.pca_digest = digests[4];

    for (std::size_t k = 0; k + 1 < model.layer_dims.size(); ++k) {
        const int rows = model.layer_dims[k + 1];
        const int cols = model.layer_dims[k];
        Eigen::MatrixXd w(rows, cols);
        for (int r = 0; r < rows; ++r) {
            auto toks = next("weight row");
            if (toks.size() != static_cast<std::size_t>(cols) + 3 || toks[0] != "W" ||
                parse_long(toks[1]) != static_cast<long>(k) || parse_long(toks[2]) != r) {
                throw ValidationError(origin + ": malformed weight row");
            }
            for (int c = 0; c < cols; ++c) w(r, c) = parse_double(toks[static_cast<std::size_t>(c) + 3]);
        }
        auto btoks = next("bias row");
        if (btoks.size() != static_cast<std::size_t>(rows) + 2 || btoks[0] != "b" ||
            parse_long(btoks[1]) != static_cast<long>(k)) {
            throw ValidationError(origin + ": malformed bias row");
        }
        Eigen::VectorXd b(rows);
        for (int r = 0; r < rows; ++r) b(r) = parse_double(btoks[static_cast<std::size_t>(r) + 2]);
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
    }
    model.check_dims();
    return model;
}

inline void save_mlp(const std::string& path, const MlpModel& model) {
    write_file(path, serialize_mlp(model));
}

inline MlpModel load_mlp(const std::string& path) { return parse_mlp(read_file(path), path); }

}  // namespace hullopt
