#pragma once

#include <string>
#include <vector>

#include "taskprune/calibration.hpp"
#include "taskprune/matrix.hpp"
#include "taskprune/model.hpp"

namespace taskprune {

enum class Provenance { kGeneral, kTask, kMixed };

const char* provenance_name(Provenance p);

// Nonnegative importance per weight, one matrix per prunable layer. Kept in
// double so rankings do not pick up spurious float ties.
struct ScoreTensor {
    struct LayerScores {
        std::string layer_name;
        MatrixD scores;
    };

    Provenance provenance = Provenance::kGeneral;
    std::vector<LayerScores> layers;

    const LayerScores& layer(const std::string& name) const;
};

// score[i][j] = A_j * W[i][j]^2 for one layer, where A_j is the channel's
// squared-activation sum, divided by the token count when mean_normalize is
// set.
MatrixD wanda_layer_scores(const Matrix& weights, const std::vector<double>& channel_sq_sums,
                           std::size_t token_count, bool mean_normalize);

// Activation-weighted squared-magnitude scores for every prunable layer from
// one calibration source.
ScoreTensor wanda_scores(const Model& model, const ActivationNorms& norms,
                         bool mean_normalize = true);

}  // namespace taskprune
