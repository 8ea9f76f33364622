#pragma once

#include <array>
#include <string>
#include <vector>

#include "taskprune/calibration.hpp"
#include "taskprune/scoring.hpp"

namespace taskprune {

enum class NormMode { kRawL2, kRms };

const char* norm_mode_name(NormMode m);
NormMode parse_norm_mode(const std::string& text);

enum class GroupLabel { kShared, kGeneralOnly, kTaskOnly };

const char* group_label_name(GroupLabel g);

// Per-channel difference between the general and task activation norms.
struct DeltaScores {
    struct LayerDeltas {
        std::string layer_name;
        std::vector<double> deltas;
    };

    NormMode norm_mode = NormMode::kRms;
    std::vector<LayerDeltas> layers;

    const LayerDeltas& layer(const std::string& name) const;
};

// Three-way channel assignment against the threshold alpha. The label sets
// are disjoint and cover every channel.
struct ChannelPartition {
    struct LayerLabels {
        std::string layer_name;
        std::vector<GroupLabel> labels;
        double alpha = 0.0;  // effective threshold used for this layer
    };

    NormMode norm_mode = NormMode::kRms;
    double alpha = 0.0;  // nominal threshold
    std::vector<LayerLabels> layers;

    const LayerLabels& layer(const std::string& name) const;

    // Fractions (shared, general-only, task-only) for one layer; sums to 1.
    std::array<double, 3> fractions(const std::string& name) const;
};

// RAW_L2 takes the difference of raw activation L2 norms; RMS divides each
// squared sum by its source's token count first, which keeps alpha comparable
// when the two corpora differ in token count.
DeltaScores delta_scores(const ActivationNorms& general, const ActivationNorms& task,
                         NormMode norm_mode = NormMode::kRms);

// delta > alpha -> general-only, delta < -alpha -> task-only, otherwise
// shared (boundary inclusive).
ChannelPartition partition_channels(const DeltaScores& deltas, double alpha);

// Per-layer alpha override, aligned with deltas.layers.
ChannelPartition partition_channels(const DeltaScores& deltas,
                                    const std::vector<double>& layer_alphas,
                                    double nominal_alpha);

// Column j of the mixed tensor takes s_g + s_t when shared, s_g when
// general-only, s_t when task-only.
ScoreTensor fuse_scores(const ScoreTensor& general, const ScoreTensor& task,
                        const ChannelPartition& partition);

}  // namespace taskprune
