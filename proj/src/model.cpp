#include "taskprune/model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "taskprune/rng.hpp"

namespace taskprune {

namespace {

constexpr std::size_t kBatchSequences = 16;

double act_value(Nonlinearity nl, double z) {
    if (nl == Nonlinearity::kRelu) {
        return z > 0.0 ? z : 0.0;
    }
    // tanh form of GELU
    constexpr double c = 0.7978845608028654;  // sqrt(2/pi)
    constexpr double a = 0.044715;
    const double u = c * (z + a * z * z * z);
    return 0.5 * z * (1.0 + std::tanh(u));
}

double act_deriv(Nonlinearity nl, double z) {
    if (nl == Nonlinearity::kRelu) {
        return z > 0.0 ? 1.0 : 0.0;
    }
    constexpr double c = 0.7978845608028654;
    constexpr double a = 0.044715;
    const double u = c * (z + a * z * z * z);
    const double t = std::tanh(u);
    return 0.5 * (1.0 + t) + 0.5 * z * (1.0 - t * t) * c * (1.0 + 3.0 * a * z * z);
}

Matrix apply_act(Nonlinearity nl, const Matrix& z) {
    Matrix h(z.rows(), z.cols());
    for (std::size_t i = 0; i < z.size(); ++i) {
        h.data()[i] = static_cast<float>(act_value(nl, static_cast<double>(z.data()[i])));
    }
    return h;
}

// Inputs to each matmul layer (fc0..fcN-1, out), preactivations of the fc
// stack, and the logits.
struct ForwardTrace {
    std::vector<Matrix> inputs;
    std::vector<Matrix> preacts;
    Matrix logits;
};

ForwardTrace run_forward(const Model& model, std::span<const std::int32_t> tokens) {
    const ModelSpec& spec = model.spec();
    const Matrix& embed = model.layer("embed").weights;

    Matrix x(tokens.size(), spec.embed_dim);
    for (std::size_t r = 0; r < tokens.size(); ++r) {
        const std::int32_t t = tokens[r];
        if (t < 0 || static_cast<std::size_t>(t) >= spec.vocab_size) {
            throw InputError("token id " + std::to_string(t) + " out of range for vocab " +
                             std::to_string(spec.vocab_size));
        }
        std::copy_n(embed.row(static_cast<std::size_t>(t)).data(), spec.embed_dim,
                    x.row(r).data());
    }

    ForwardTrace trace;
    const std::size_t depth = spec.layer_dims.size();
    for (std::size_t k = 0; k < depth; ++k) {
        const Matrix& w = model.layer("fc" + std::to_string(k)).weights;
        trace.inputs.push_back(std::move(x));
        Matrix z = matmul_nt(trace.inputs.back(), w);
        x = apply_act(spec.nonlinearity, z);
        trace.preacts.push_back(std::move(z));
    }
    trace.inputs.push_back(std::move(x));
    trace.logits = matmul_nt(trace.inputs.back(), model.layer("out").weights);
    return trace;
}

std::vector<std::string> matmul_layer_names(const ModelSpec& spec) {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < spec.layer_dims.size(); ++k) {
        names.push_back("fc" + std::to_string(k));
    }
    names.push_back("out");
    return names;
}

}  // namespace

const char* nonlinearity_name(Nonlinearity n) {
    return n == Nonlinearity::kRelu ? "relu" : "gelu";
}

Nonlinearity parse_nonlinearity(const std::string& text) {
    if (text == "relu") return Nonlinearity::kRelu;
    if (text == "gelu") return Nonlinearity::kGeluTanh;
    throw InputError("unknown nonlinearity '" + text + "' (expected relu|gelu)");
}

void ModelSpec::validate() const {
    if (vocab_size == 0 || embed_dim == 0) {
        throw InputError("model spec needs vocab_size >= 1 and embed_dim >= 1");
    }
    if (layer_dims.empty()) {
        throw InputError("model spec needs at least one fc layer");
    }
    for (std::size_t d : layer_dims) {
        if (d == 0) {
            throw InputError("layer dims must be >= 1");
        }
    }
}

Model Model::init(const ModelSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, "init"));

    auto make = [&](const std::string& name, std::size_t rows, std::size_t cols, bool prunable) {
        Matrix w(rows, cols);
        const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
        for (auto& v : w.data()) {
            v = static_cast<float>(rng.uniform(-bound, bound));
        }
        return Layer{name, std::move(w), prunable};
    };

    std::vector<Layer> layers;
    layers.push_back(make("embed", spec.vocab_size, spec.embed_dim, false));
    std::size_t prev = spec.embed_dim;
    for (std::size_t k = 0; k < spec.layer_dims.size(); ++k) {
        layers.push_back(make("fc" + std::to_string(k), spec.layer_dims[k], prev, true));
        prev = spec.layer_dims[k];
    }
    layers.push_back(make("out", spec.vocab_size, prev, false));
    return from_layers(spec, std::move(layers));
}

Model Model::from_layers(ModelSpec spec, std::vector<Layer> layers) {
    spec.validate();
    const std::size_t depth = spec.layer_dims.size();
    if (layers.size() != depth + 2) {
        throw ShapeError("model expects embed, fc0..fc" + std::to_string(depth - 1) +
                         ", out layers");
    }
    auto expect = [&](std::size_t idx, const std::string& name, std::size_t rows,
                      std::size_t cols) {
        const Layer& l = layers[idx];
        if (l.name != name) {
            throw ShapeError("layer " + std::to_string(idx) + " must be named '" + name + "'");
        }
        if (l.weights.rows() != rows || l.weights.cols() != cols) {
            throw ShapeError("layer '" + name + "' must be " + std::to_string(rows) + "x" +
                             std::to_string(cols));
        }
        if (!all_finite(l.weights)) {
            throw NumericError("layer '" + name + "' has non-finite weights");
        }
    };
    expect(0, "embed", spec.vocab_size, spec.embed_dim);
    std::size_t prev = spec.embed_dim;
    for (std::size_t k = 0; k < depth; ++k) {
        expect(k + 1, "fc" + std::to_string(k), spec.layer_dims[k], prev);
        prev = spec.layer_dims[k];
    }
    expect(depth + 1, "out", spec.vocab_size, prev);
    if (layers[0].prunable) {
        throw InputError("the embedding lookup cannot be prunable");
    }

    Model m;
    m.spec_ = std::move(spec);
    m.layers_ = std::move(layers);
    return m;
}

const Layer& Model::layer(std::string_view name) const {
    for (const auto& l : layers_) {
        if (l.name == name) {
            return l;
        }
    }
    throw InputError("model has no layer named '" + std::string(name) + "'");
}

Layer& Model::layer(std::string_view name) {
    return const_cast<Layer&>(static_cast<const Model*>(this)->layer(name));
}

std::vector<std::string> Model::prunable_layer_names() const {
    std::vector<std::string> names;
    for (const auto& l : layers_) {
        if (l.prunable) {
            names.push_back(l.name);
        }
    }
    return names;
}

void Model::set_prunable(std::string_view name, bool prunable) {
    if (name == "embed" && prunable) {
        throw InputError("the embedding lookup cannot be prunable");
    }
    layer(name).prunable = prunable;
}

const Matrix& ActivationCapture::inputs_for(std::string_view layer_name) const {
    for (const auto& e : layers) {
        if (e.layer_name == layer_name) {
            return e.inputs;
        }
    }
    throw InputError("capture has no layer named '" + std::string(layer_name) + "'");
}

Matrix forward(const Model& model, std::span<const std::int32_t> tokens,
               ActivationCapture* capture) {
    ForwardTrace trace = run_forward(model, tokens);
    if (capture != nullptr) {
        const auto names = matmul_layer_names(model.spec());
        if (capture->layers.empty()) {
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (model.layer(names[i]).prunable) {
                    capture->layers.push_back({names[i], Matrix{}});
                }
            }
        }
        for (auto& entry : capture->layers) {
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (names[i] == entry.layer_name) {
                    entry.inputs.append_rows(trace.inputs[i]);
                }
            }
        }
    }
    return std::move(trace.logits);
}

const MatrixD& Gradients::grad_for(std::string_view layer_name) const {
    for (const auto& [name, g] : layers) {
        if (name == layer_name) {
            return g;
        }
    }
    throw InputError("no gradient for layer '" + std::string(layer_name) + "'");
}

double Gradients::rms() const {
    double sq = 0.0;
    std::size_t count = 0;
    for (const auto& [name, g] : layers) {
        for (double v : g.data()) {
            sq += v * v;
        }
        count += g.size();
    }
    return count == 0 ? 0.0 : std::sqrt(sq / static_cast<double>(count));
}

LossAndGrads compute_gradients(const Model& model, std::span<const std::int32_t> inputs,
                               std::span<const std::int32_t> targets) {
    if (inputs.size() != targets.size() || inputs.empty()) {
        throw InputError("compute_gradients needs matching, nonempty input/target spans");
    }
    const ModelSpec& spec = model.spec();
    const std::size_t batch = inputs.size();
    const std::size_t vocab = spec.vocab_size;
    const std::size_t depth = spec.layer_dims.size();
    ForwardTrace trace = run_forward(model, inputs);

    // Softmax cross-entropy and dlogits in double, log-sum-exp stabilized.
    MatrixD dlogits(batch, vocab);
    double loss = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        const std::int32_t target = targets[b];
        if (target < 0 || static_cast<std::size_t>(target) >= vocab) {
            throw InputError("target token id " + std::to_string(target) + " out of range");
        }
        double maxv = -HUGE_VAL;
        for (std::size_t t = 0; t < vocab; ++t) {
            maxv = std::max(maxv, static_cast<double>(trace.logits.at(b, t)));
        }
        double denom = 0.0;
        for (std::size_t t = 0; t < vocab; ++t) {
            denom += std::exp(static_cast<double>(trace.logits.at(b, t)) - maxv);
        }
        const double lse = maxv + std::log(denom);
        loss += lse - static_cast<double>(trace.logits.at(b, static_cast<std::size_t>(target)));
        const double inv_batch = 1.0 / static_cast<double>(batch);
        for (std::size_t t = 0; t < vocab; ++t) {
            const double p =
                std::exp(static_cast<double>(trace.logits.at(b, t)) - lse);
            dlogits.at(b, t) = p * inv_batch;
        }
        dlogits.at(b, static_cast<std::size_t>(target)) -= inv_batch;
    }
    loss /= static_cast<double>(batch);

    LossAndGrads out;
    out.loss = loss;
    auto& grads = out.grads.layers;
    grads.emplace_back("embed", MatrixD(spec.vocab_size, spec.embed_dim));
    for (std::size_t k = 0; k < depth; ++k) {
        const Matrix& w = model.layer("fc" + std::to_string(k)).weights;
        grads.emplace_back("fc" + std::to_string(k), MatrixD(w.rows(), w.cols()));
    }
    const Matrix& wout = model.layer("out").weights;
    grads.emplace_back("out", MatrixD(wout.rows(), wout.cols()));

    // dWout = dlogits^T . X_last ; dX = dlogits . Wout
    MatrixD& g_out = grads.back().second;
    const Matrix& x_last = trace.inputs[depth];
    for (std::size_t i = 0; i < wout.rows(); ++i) {
        for (std::size_t j = 0; j < wout.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t b = 0; b < batch; ++b) {
                acc += dlogits.at(b, i) * static_cast<double>(x_last.at(b, j));
            }
            g_out.at(i, j) = acc;
        }
    }
    MatrixD dx(batch, wout.cols());
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t j = 0; j < wout.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < wout.rows(); ++i) {
                acc += dlogits.at(b, i) * static_cast<double>(wout.at(i, j));
            }
            dx.at(b, j) = acc;
        }
    }

    for (std::size_t k = depth; k-- > 0;) {
        const Matrix& w = model.layer("fc" + std::to_string(k)).weights;
        const Matrix& x_in = trace.inputs[k];
        const Matrix& z = trace.preacts[k];
        MatrixD dz(batch, w.rows());
        for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t i = 0; i < w.rows(); ++i) {
                dz.at(b, i) =
                    dx.at(b, i) * act_deriv(spec.nonlinearity, static_cast<double>(z.at(b, i)));
            }
        }
        MatrixD& g_w = grads[k + 1].second;
        for (std::size_t i = 0; i < w.rows(); ++i) {
            for (std::size_t j = 0; j < w.cols(); ++j) {
                double acc = 0.0;
                for (std::size_t b = 0; b < batch; ++b) {
                    acc += dz.at(b, i) * static_cast<double>(x_in.at(b, j));
                }
                g_w.at(i, j) = acc;
            }
        }
        MatrixD dx_prev(batch, w.cols());
        for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t j = 0; j < w.cols(); ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < w.rows(); ++i) {
                    acc += dz.at(b, i) * static_cast<double>(w.at(i, j));
                }
                dx_prev.at(b, j) = acc;
            }
        }
        dx = std::move(dx_prev);
    }

    MatrixD& g_embed = grads.front().second;
    for (std::size_t b = 0; b < batch; ++b) {
        const auto t = static_cast<std::size_t>(inputs[b]);
        for (std::size_t e = 0; e < spec.embed_dim; ++e) {
            g_embed.at(t, e) += dx.at(b, e);
        }
    }
    return out;
}

namespace {

// All (input, target) next-token pairs of the given sequences.
void gather_pairs(const TokenCorpus& corpus, std::span<const std::size_t> which,
                  std::vector<std::int32_t>& inputs, std::vector<std::int32_t>& targets) {
    inputs.clear();
    targets.clear();
    for (std::size_t idx : which) {
        const auto& seq = corpus.sequences[idx];
        for (std::size_t p = 0; p + 1 < seq.size(); ++p) {
            inputs.push_back(seq[p]);
            targets.push_back(seq[p + 1]);
        }
    }
}

void sgd_step(Model& model, const Gradients& grads, double lr) {
    for (auto& layer : model.layers()) {
        const MatrixD& g = grads.grad_for(layer.name);
        for (std::size_t i = 0; i < layer.weights.size(); ++i) {
            layer.weights.data()[i] = static_cast<float>(
                static_cast<double>(layer.weights.data()[i]) - lr * g.data()[i]);
        }
    }
}

}  // namespace

TrainResult train_toy_model(const ModelSpec& spec, const TokenCorpus& corpus,
                            std::size_t steps, double lr) {
    if (steps == 0) {
        throw InputError("train_toy_model needs steps >= 1");
    }
    if (!(lr > 0.0) || !std::isfinite(lr)) {
        throw InputError("train_toy_model needs lr > 0");
    }
    if (corpus.sequences.empty()) {
        throw InputError("training corpus is empty");
    }

    std::vector<std::size_t> all_indices(corpus.sequences.size());
    for (std::size_t i = 0; i < all_indices.size(); ++i) {
        all_indices[i] = i;
    }
    std::vector<std::int32_t> inputs, targets;
    gather_pairs(corpus, all_indices, inputs, targets);
    if (inputs.empty()) {
        throw InputError("training corpus has no next-token pairs");
    }

    Model model = Model::init(spec);
    Rng rng(derive_seed(spec.seed, "train"));
    const std::size_t batch = std::min(kBatchSequences, corpus.sequences.size());

    std::vector<std::size_t> pick(batch);
    for (std::size_t step = 0; step < steps; ++step) {
        // without-replacement batch of sequences
        std::vector<std::size_t> pool = all_indices;
        for (std::size_t i = 0; i < batch; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
            pick[i] = pool[i];
        }
        gather_pairs(corpus, pick, inputs, targets);
        if (inputs.empty()) {
            continue;  // batch of length-1 sequences
        }
        LossAndGrads lg = compute_gradients(model, inputs, targets);
        if (!std::isfinite(lg.loss)) {
            throw TrainError("training diverged: loss is not finite", step);
        }
        sgd_step(model, lg.grads, lr);
    }

    gather_pairs(corpus, all_indices, inputs, targets);
    LossAndGrads final_lg = compute_gradients(model, inputs, targets);
    if (!std::isfinite(final_lg.loss)) {
        throw TrainError("training diverged: final loss is not finite", steps);
    }

    TrainResult result;
    result.model = std::move(model);
    result.final_loss = final_lg.loss;
    result.final_grad_norm = final_lg.grads.rms();
    result.steps = steps;
    return result;
}

Model apply_mask(const Model& model, const PruneMask& mask) {
    Model out = model;
    for (const auto& lm : mask.layers) {
        bool found = false;
        for (auto& layer : out.layers()) {
            if (layer.name != lm.name) {
                continue;
            }
            found = true;
            if (!layer.prunable) {
                throw MaskError("layer '" + lm.name + "' is not prunable");
            }
            if (lm.mask.rows() != layer.weights.rows() || lm.mask.cols() != layer.weights.cols()) {
                throw MaskError("mask shape mismatch on layer '" + lm.name + "'");
            }
            for (std::size_t i = 0; i < lm.mask.size(); ++i) {
                if (lm.mask.data()[i] != 0) {
                    layer.weights.data()[i] = 0.0f;
                }
            }
        }
        if (!found) {
            throw MaskError("model has no layer named '" + lm.name + "'");
        }
    }
    return out;
}

}  // namespace taskprune
