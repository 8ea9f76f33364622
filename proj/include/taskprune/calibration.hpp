#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "taskprune/corpus.hpp"
#include "taskprune/model.hpp"

namespace taskprune {

// Per-channel squared-activation sums for one calibration source. Raw sums
// plus the token count are kept so both the mean form and the raw-sum form
// stay derivable downstream.
struct ActivationNorms {
    struct LayerNorms {
        std::string layer_name;
        std::vector<double> channel_sq_sums;  // length = layer input dim
    };

    SourceTag source_tag = SourceTag::kGeneral;
    std::vector<LayerNorms> layers;
    std::size_t token_count = 0;  // M, counted in token rows

    const LayerNorms& layer(const std::string& name) const;
};

// Runs the corpus through the model and folds every prunable layer's input
// rows into per-channel squared sums. The per-channel fold visits rows in
// global feed order, so the result matches col_sq_norms over a concatenated
// capture bit for bit.
ActivationNorms collect_norms(const Model& model, const TokenCorpus& corpus);

// Uniform sample of n sequences without replacement, deterministic given seed.
TokenCorpus sample_corpus(const TokenCorpus& full, std::size_t n, std::uint64_t seed);

}  // namespace taskprune
