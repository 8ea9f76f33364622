#include "taskprune/scoring.hpp"

#include <cmath>

#include "taskprune/parallel.hpp"

namespace taskprune {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::kGeneral: return "general";
        case Provenance::kTask: return "task";
        case Provenance::kMixed: return "mixed";
    }
    return "?";
}

const ScoreTensor::LayerScores& ScoreTensor::layer(const std::string& name) const {
    for (const auto& l : layers) {
        if (l.layer_name == name) {
            return l;
        }
    }
    throw ScoreError("scores have no layer named '" + name + "'");
}

MatrixD wanda_layer_scores(const Matrix& weights, const std::vector<double>& channel_sq_sums,
                           std::size_t token_count, bool mean_normalize) {
    if (channel_sq_sums.size() != weights.cols()) {
        throw ScoreError("channel statistics do not match the layer input dimension");
    }
    if (token_count == 0) {
        throw ScoreError("token count must be >= 1");
    }
    MatrixD s(weights.rows(), weights.cols());
    const double inv_m = 1.0 / static_cast<double>(token_count);
    parallel_for(weights.rows(), [&](std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0; i < r1; ++i) {
            for (std::size_t j = 0; j < weights.cols(); ++j) {
                const double a = mean_normalize ? channel_sq_sums[j] * inv_m : channel_sq_sums[j];
                const double w = static_cast<double>(weights.at(i, j));
                s.at(i, j) = a * w * w;
            }
        }
    });
    if (!all_finite(s)) {
        throw ScoreError("non-finite importance score");
    }
    return s;
}

ScoreTensor wanda_scores(const Model& model, const ActivationNorms& norms, bool mean_normalize) {
    ScoreTensor out;
    out.provenance =
        norms.source_tag == SourceTag::kGeneral ? Provenance::kGeneral : Provenance::kTask;
    for (const auto& name : model.prunable_layer_names()) {
        const auto& ln = norms.layer(name);
        out.layers.push_back({name, wanda_layer_scores(model.layer(name).weights,
                                                       ln.channel_sq_sums, norms.token_count,
                                                       mean_normalize)});
    }
    return out;
}

}  // namespace taskprune
