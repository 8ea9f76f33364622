#include "taskprune/calibration.hpp"

#include "taskprune/parallel.hpp"
#include "taskprune/rng.hpp"

namespace taskprune {

const char* source_tag_name(SourceTag tag) {
    return tag == SourceTag::kGeneral ? "general" : "task";
}

const ActivationNorms::LayerNorms& ActivationNorms::layer(const std::string& name) const {
    for (const auto& l : layers) {
        if (l.layer_name == name) {
            return l;
        }
    }
    throw InputError("norms have no layer named '" + name + "'");
}

ActivationNorms collect_norms(const Model& model, const TokenCorpus& corpus) {
    if (corpus.sequences.empty()) {
        throw InputError("calibration corpus is empty");
    }
    const auto prunable = model.prunable_layer_names();

    ActivationNorms norms;
    norms.source_tag = corpus.source_tag;
    for (const auto& name : prunable) {
        norms.layers.push_back({name, std::vector<double>(model.layer(name).weights.cols(), 0.0)});
    }

    for (const auto& seq : corpus.sequences) {
        if (seq.empty()) {
            continue;
        }
        ActivationCapture capture;
        forward(model, seq, &capture);
        for (auto& ln : norms.layers) {
            const Matrix& x = capture.inputs_for(ln.layer_name);
            // Continue each channel's running fold row by row; never add
            // per-sequence subtotals, which would change the reduction order.
            parallel_for(x.cols(), [&](std::size_t c0, std::size_t c1) {
                for (std::size_t j = c0; j < c1; ++j) {
                    double acc = ln.channel_sq_sums[j];
                    for (std::size_t m = 0; m < x.rows(); ++m) {
                        const double v = static_cast<double>(x.at(m, j));
                        acc += v * v;
                    }
                    ln.channel_sq_sums[j] = acc;
                }
            });
        }
        norms.token_count += seq.size();
    }
    if (norms.token_count == 0) {
        throw InputError("calibration corpus has no tokens");
    }
    return norms;
}

TokenCorpus sample_corpus(const TokenCorpus& full, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw InputError("sample size must be >= 1");
    }
    if (n > full.sequences.size()) {
        throw InputError("sample size " + std::to_string(n) + " exceeds corpus size " +
                         std::to_string(full.sequences.size()));
    }
    Rng rng(seed);
    std::vector<std::size_t> pool(full.sequences.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i] = i;
    }
    TokenCorpus out;
    out.name = full.name + "/sample" + std::to_string(n);
    out.source_tag = full.source_tag;
    out.sequences.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
        out.sequences.push_back(full.sequences[pool[i]]);
    }
    return out;
}

}  // namespace taskprune
