#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "taskprune/masking.hpp"
#include "taskprune/model.hpp"
#include "taskprune/taskaware.hpp"

namespace taskprune {

// exp of mean next-token cross-entropy, accumulated in double.
double perplexity(const Model& model, const TokenCorpus& corpus);

// Fraction of next-token pairs where the argmax logit hits the target.
// Argmax ties break toward the lowest token id.
double next_token_accuracy(const Model& model, const TokenCorpus& corpus);

// Mean next-token cross-entropy (the log of perplexity, computed directly).
double mean_cross_entropy(const Model& model, const TokenCorpus& corpus);

struct EvalReport {
    double perplexity_general = 0.0;
    double perplexity_task = 0.0;
    double task_accuracy = 0.0;
    double task_loss = 0.0;  // mean next-token CE on the task held-out split
    SparsityReport sparsity;
    SparsitySpec spec;

    // Per-layer (shared, general-only, task-only) fractions; empty for
    // baseline rows that were produced without a partition.
    struct LayerFractions {
        std::string layer_name;
        std::array<double, 3> fractions;
    };
    std::vector<LayerFractions> partition_fractions;

    std::uint64_t seed = 0;
};

// Two corpora over one token-per-channel vocabulary. Channels carry planted
// shared / general-only / task-only labels; the general corpus walks the
// shared+general token set and the task corpus the shared+task set, so the
// planted structure is recoverable from activation norms.
struct SyntheticTaskPair {
    TokenCorpus general_train;
    TokenCorpus task_train;
    TokenCorpus general_eval;
    TokenCorpus task_eval;

    std::vector<GroupLabel> planted;  // one label per channel
    // Expected RMS |delta| of an exclusive channel on the identity probe
    // model; exclusive channels sit at +-gap and shared ones near 0.
    double planted_gap = 0.0;

    std::uint64_t seed = 0;
    std::size_t channels = 0;
    double overlap_fraction = 0.0;
};

struct PairOptions {
    std::size_t train_sequences = 128;
    std::size_t eval_sequences = 32;
    std::size_t sequence_length = 24;
    // Probability of following the cyclic successor inside the active token
    // set; the rest jumps uniformly. Keeps the corpora learnable while the
    // per-token marginal stays exactly uniform.
    double follow_prob = 0.85;
};

SyntheticTaskPair generate_task_pair(std::uint64_t seed, double overlap_fraction,
                                     std::size_t channels, const PairOptions& opt = {});

// Identity-embedding model over one token per channel; fc0 is the only
// prunable layer, so collected norms are exact per-channel token counts.
Model probe_model(std::size_t channels);

// Brute-force loss change from zeroing layer[i][j]: the loss is the mean
// squared deviation of the pruned layer's output from the unpruned output
// over the given activation rows. Re-runs the layer rather than using any
// score formula.
double exact_delta_loss_oracle(const Matrix& layer, const Matrix& activations, std::size_t i,
                               std::size_t j);

struct MethodRow {
    std::string method;  // "wanda" | "task_aware"
    double alpha = 0.0;  // grid value; 0 for the baseline row
    std::vector<double> layer_alphas;       // effective per-layer thresholds
    std::vector<double> layer_alpha_scales; // per-layer median |delta| rescale factors
    EvalReport report;
};

struct ComparisonTable {
    SparsitySpec spec;
    std::uint64_t seed = 0;
    std::vector<std::string> layer_names;
    std::vector<MethodRow> rows;
};

struct CompareOptions {
    NormMode norm_mode = NormMode::kRms;
    bool mean_normalize = true;
    // Scale grid alphas by the per-layer median |delta| so the paper-scale
    // grid stays meaningful on desk-scale norms. Factors land in the rows.
    bool rescale_alpha = true;
};

// Baseline Wanda (general calibration only) plus one task-aware row per grid
// alpha, evaluated on the pair's held-out splits. Deterministic given
// (model, pair, spec, grid).
ComparisonTable compare_methods(const SyntheticTaskPair& pair, const Model& model,
                                const SparsitySpec& spec, const std::vector<double>& alpha_grid,
                                const CompareOptions& opt = {});

}  // namespace taskprune
