#include "taskprune/taskaware.hpp"

#include <array>
#include <cmath>

namespace taskprune {

const char* norm_mode_name(NormMode m) {
    return m == NormMode::kRawL2 ? "raw_l2" : "rms";
}

NormMode parse_norm_mode(const std::string& text) {
    if (text == "raw_l2") return NormMode::kRawL2;
    if (text == "rms") return NormMode::kRms;
    throw InputError("unknown norm mode '" + text + "' (expected raw_l2|rms)");
}

const char* group_label_name(GroupLabel g) {
    switch (g) {
        case GroupLabel::kShared: return "shared";
        case GroupLabel::kGeneralOnly: return "general_only";
        case GroupLabel::kTaskOnly: return "task_only";
    }
    return "?";
}

const DeltaScores::LayerDeltas& DeltaScores::layer(const std::string& name) const {
    for (const auto& l : layers) {
        if (l.layer_name == name) {
            return l;
        }
    }
    throw PartitionError("delta scores have no layer named '" + name + "'");
}

const ChannelPartition::LayerLabels& ChannelPartition::layer(const std::string& name) const {
    for (const auto& l : layers) {
        if (l.layer_name == name) {
            return l;
        }
    }
    throw PartitionError("partition has no layer named '" + name + "'");
}

std::array<double, 3> ChannelPartition::fractions(const std::string& name) const {
    const auto& l = layer(name);
    std::array<std::size_t, 3> counts{0, 0, 0};
    for (GroupLabel g : l.labels) {
        counts[static_cast<std::size_t>(g)]++;
    }
    const double total = static_cast<double>(l.labels.size());
    return {counts[0] / total, counts[1] / total, counts[2] / total};
}

DeltaScores delta_scores(const ActivationNorms& general, const ActivationNorms& task,
                         NormMode norm_mode) {
    if (general.source_tag != SourceTag::kGeneral || task.source_tag != SourceTag::kTask) {
        throw PartitionError("delta_scores expects (general, task) norms in that order");
    }
    if (general.layers.size() != task.layers.size()) {
        throw PartitionError("norm layer sets differ between sources");
    }
    DeltaScores out;
    out.norm_mode = norm_mode;
    const double inv_mg = 1.0 / static_cast<double>(general.token_count);
    const double inv_mt = 1.0 / static_cast<double>(task.token_count);
    for (std::size_t li = 0; li < general.layers.size(); ++li) {
        const auto& g = general.layers[li];
        const auto& t = task.layers[li];
        if (g.layer_name != t.layer_name ||
            g.channel_sq_sums.size() != t.channel_sq_sums.size()) {
            throw PartitionError("norm shapes differ between sources on layer '" +
                                 g.layer_name + "'");
        }
        DeltaScores::LayerDeltas ld;
        ld.layer_name = g.layer_name;
        ld.deltas.resize(g.channel_sq_sums.size());
        for (std::size_t j = 0; j < ld.deltas.size(); ++j) {
            double gs = g.channel_sq_sums[j];
            double ts = t.channel_sq_sums[j];
            if (norm_mode == NormMode::kRms) {
                gs *= inv_mg;
                ts *= inv_mt;
            }
            ld.deltas[j] = std::sqrt(gs) - std::sqrt(ts);
        }
        out.layers.push_back(std::move(ld));
    }
    return out;
}

namespace {

GroupLabel label_for(double delta, double alpha) {
    if (delta > alpha) {
        return GroupLabel::kGeneralOnly;
    }
    if (delta < -alpha) {
        return GroupLabel::kTaskOnly;
    }
    return GroupLabel::kShared;  // |delta| == alpha lands here; "more than" is strict
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0) || std::isnan(alpha)) {
        throw PartitionError("alpha must be >= 0");
    }
}

}  // namespace

ChannelPartition partition_channels(const DeltaScores& deltas, double alpha) {
    check_alpha(alpha);
    ChannelPartition out;
    out.norm_mode = deltas.norm_mode;
    out.alpha = alpha;
    for (const auto& ld : deltas.layers) {
        ChannelPartition::LayerLabels ll;
        ll.layer_name = ld.layer_name;
        ll.alpha = alpha;
        ll.labels.reserve(ld.deltas.size());
        for (double d : ld.deltas) {
            ll.labels.push_back(label_for(d, alpha));
        }
        out.layers.push_back(std::move(ll));
    }
    return out;
}

ChannelPartition partition_channels(const DeltaScores& deltas,
                                    const std::vector<double>& layer_alphas,
                                    double nominal_alpha) {
    if (layer_alphas.size() != deltas.layers.size()) {
        throw PartitionError("need one alpha per layer");
    }
    check_alpha(nominal_alpha);
    ChannelPartition out;
    out.norm_mode = deltas.norm_mode;
    out.alpha = nominal_alpha;
    for (std::size_t li = 0; li < deltas.layers.size(); ++li) {
        check_alpha(layer_alphas[li]);
        const auto& ld = deltas.layers[li];
        ChannelPartition::LayerLabels ll;
        ll.layer_name = ld.layer_name;
        ll.alpha = layer_alphas[li];
        ll.labels.reserve(ld.deltas.size());
        for (double d : ld.deltas) {
            ll.labels.push_back(label_for(d, layer_alphas[li]));
        }
        out.layers.push_back(std::move(ll));
    }
    return out;
}

ScoreTensor fuse_scores(const ScoreTensor& general, const ScoreTensor& task,
                        const ChannelPartition& partition) {
    if (general.provenance != Provenance::kGeneral || task.provenance != Provenance::kTask) {
        throw FusionError("fuse_scores expects (general, task) score tensors in that order");
    }
    if (general.layers.size() != task.layers.size() ||
        general.layers.size() != partition.layers.size()) {
        throw FusionError("layer sets differ between inputs");
    }
    ScoreTensor out;
    out.provenance = Provenance::kMixed;
    for (std::size_t li = 0; li < general.layers.size(); ++li) {
        const auto& g = general.layers[li];
        const auto& t = task.layers[li];
        const auto& p = partition.layers[li];
        if (g.layer_name != t.layer_name || g.layer_name != p.layer_name ||
            !g.scores.same_shape(t.scores) || p.labels.size() != g.scores.cols()) {
            throw FusionError("shape mismatch on layer '" + g.layer_name + "'");
        }
        MatrixD mixed(g.scores.rows(), g.scores.cols());
        for (std::size_t i = 0; i < mixed.rows(); ++i) {
            for (std::size_t j = 0; j < mixed.cols(); ++j) {
                switch (p.labels[j]) {
                    case GroupLabel::kShared:
                        mixed.at(i, j) = g.scores.at(i, j) + t.scores.at(i, j);
                        break;
                    case GroupLabel::kGeneralOnly:
                        mixed.at(i, j) = g.scores.at(i, j);
                        break;
                    case GroupLabel::kTaskOnly:
                        mixed.at(i, j) = t.scores.at(i, j);
                        break;
                }
            }
        }
        out.layers.push_back({g.layer_name, std::move(mixed)});
    }
    return out;
}

}  // namespace taskprune
