#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taskprune/corpus.hpp"
#include "taskprune/matrix.hpp"
#include "taskprune/sparsity_spec.hpp"

namespace taskprune {

enum class Nonlinearity { kRelu, kGeluTanh };

const char* nonlinearity_name(Nonlinearity n);
Nonlinearity parse_nonlinearity(const std::string& text);

struct ModelSpec {
    std::size_t vocab_size = 0;
    std::size_t embed_dim = 0;
    std::vector<std::size_t> layer_dims;  // hidden widths of the fc stack
    Nonlinearity nonlinearity = Nonlinearity::kRelu;
    std::uint64_t seed = 0;

    void validate() const;
};

// One named weight matrix, output rows x input columns.
struct Layer {
    std::string name;
    Matrix weights;
    bool prunable = false;
};

// Feed-forward next-token model: embedding lookup, fc stack with a
// nonlinearity, linear output projection. Layers are ordered embed,
// fc0..fcN-1, out.
class Model {
public:
    // Seeded init, uniform +-1/sqrt(fan_in) per matrix.
    static Model init(const ModelSpec& spec);

    // Builds from explicit layers; validates names, shapes and composition.
    static Model from_layers(ModelSpec spec, std::vector<Layer> layers);

    const ModelSpec& spec() const { return spec_; }
    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& layers() { return layers_; }

    const Layer& layer(std::string_view name) const;
    Layer& layer(std::string_view name);

    // Names of prunable layers in forward order.
    std::vector<std::string> prunable_layer_names() const;

    // The embedding is a lookup table with no input activations and stays
    // non-prunable; all other layers are configurable.
    void set_prunable(std::string_view name, bool prunable);

private:
    ModelSpec spec_;
    std::vector<Layer> layers_;
};

// Input rows of every prunable layer, appended in feed order across calls.
struct ActivationCapture {
    struct Entry {
        std::string layer_name;
        Matrix inputs;  // one row per token fed
    };
    std::vector<Entry> layers;

    const Matrix& inputs_for(std::string_view layer_name) const;
};

// Logits are (len(tokens) x vocab_size). When capture is non-null its
// per-layer matrices grow by len(tokens) rows.
Matrix forward(const Model& model, std::span<const std::int32_t> tokens,
               ActivationCapture* capture = nullptr);

// Per-layer weight gradients in double, same shapes as the weights.
struct Gradients {
    std::vector<std::pair<std::string, MatrixD>> layers;
    const MatrixD& grad_for(std::string_view layer_name) const;
    double rms() const;
};

// Mean next-token cross-entropy over (input, target) pairs plus its gradient.
// This is the exact code path the trainer steps on.
struct LossAndGrads {
    double loss = 0.0;
    Gradients grads;
};
LossAndGrads compute_gradients(const Model& model, std::span<const std::int32_t> inputs,
                               std::span<const std::int32_t> targets);

struct TrainResult {
    Model model;
    double final_loss = 0.0;       // full-corpus mean CE after the last step
    double final_grad_norm = 0.0;  // RMS of the full-corpus gradient after the last step
    std::size_t steps = 0;
};

// Plain SGD on mean next-token cross-entropy; deterministic given spec.seed.
TrainResult train_toy_model(const ModelSpec& spec, const TokenCorpus& corpus,
                            std::size_t steps, double lr);

// Returns a model whose masked weights are exactly 0.0f and whose unmasked
// weights are bit-identical to the input.
Model apply_mask(const Model& model, const PruneMask& mask);

}  // namespace taskprune
