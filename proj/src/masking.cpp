#include "taskprune/masking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace taskprune {

namespace {

// Sorts flat indices of one scope unit by (score, index) and marks the first
// k as pruned.
void prune_lowest(const MatrixD& scores, MaskMat& mask, std::size_t begin, std::size_t end,
                  std::size_t k) {
    std::vector<std::size_t> order(end - begin);
    std::iota(order.begin(), order.end(), begin);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double sa = scores.data()[a];
        const double sb = scores.data()[b];
        if (sa != sb) {
            return sa < sb;
        }
        return a < b;
    });
    for (std::size_t i = 0; i < k; ++i) {
        mask.data()[order[i]] = 1;
    }
}

void mask_unstructured_row(const MatrixD& scores, MaskMat& mask, double ratio) {
    const std::size_t k = static_cast<std::size_t>(
        std::floor(ratio * static_cast<double>(scores.cols())));
    for (std::size_t r = 0; r < scores.rows(); ++r) {
        prune_lowest(scores, mask, r * scores.cols(), (r + 1) * scores.cols(), k);
    }
}

void mask_unstructured_layer(const MatrixD& scores, MaskMat& mask, double ratio) {
    const std::size_t k = static_cast<std::size_t>(
        std::floor(ratio * static_cast<double>(scores.size())));
    prune_lowest(scores, mask, 0, scores.size(), k);
}

void mask_nm(const MatrixD& scores, MaskMat& mask, std::size_t n, std::size_t m) {
    for (std::size_t r = 0; r < scores.rows(); ++r) {
        for (std::size_t b = 0; b < scores.cols(); b += m) {
            const std::size_t len = std::min(m, scores.cols() - b);
            std::size_t drop = m - n;
            if (len < m) {
                // ragged tail keeps the proportional share
                drop = (m - n) * len / m;
            }
            prune_lowest(scores, mask, r * scores.cols() + b, r * scores.cols() + b + len, drop);
        }
    }
}

}  // namespace

PruneMask make_mask(const ScoreTensor& scores, const SparsitySpec& spec) {
    spec.validate();
    if (scores.layers.empty()) {
        throw MaskError("score tensor has no layers");
    }

    PruneMask mask;
    mask.spec = spec;
    for (const auto& ls : scores.layers) {
        mask.layers.push_back({ls.layer_name, MaskMat(ls.scores.rows(), ls.scores.cols()), 0});
    }

    if (spec.kind == SparsityKind::kNM) {
        for (std::size_t li = 0; li < scores.layers.size(); ++li) {
            mask_nm(scores.layers[li].scores, mask.layers[li].mask, spec.n, spec.m);
        }
    } else if (spec.scope == Scope::kRow) {
        for (std::size_t li = 0; li < scores.layers.size(); ++li) {
            mask_unstructured_row(scores.layers[li].scores, mask.layers[li].mask, spec.ratio);
        }
    } else if (spec.scope == Scope::kLayer) {
        for (std::size_t li = 0; li < scores.layers.size(); ++li) {
            mask_unstructured_layer(scores.layers[li].scores, mask.layers[li].mask, spec.ratio);
        }
    } else {
        // GLOBAL: one pool over all layers, keyed by (score, layer, flat).
        std::size_t total = 0;
        for (const auto& ls : scores.layers) {
            total += ls.scores.size();
        }
        struct Key {
            double score;
            std::size_t layer;
            std::size_t flat;
        };
        std::vector<Key> order;
        order.reserve(total);
        for (std::size_t li = 0; li < scores.layers.size(); ++li) {
            const auto& s = scores.layers[li].scores;
            for (std::size_t f = 0; f < s.size(); ++f) {
                order.push_back({s.data()[f], li, f});
            }
        }
        std::sort(order.begin(), order.end(), [](const Key& a, const Key& b) {
            if (a.score != b.score) return a.score < b.score;
            if (a.layer != b.layer) return a.layer < b.layer;
            return a.flat < b.flat;
        });
        const std::size_t k = static_cast<std::size_t>(
            std::floor(spec.ratio * static_cast<double>(total)));
        for (std::size_t i = 0; i < k; ++i) {
            mask.layers[order[i].layer].mask.data()[order[i].flat] = 1;
        }
    }

    for (auto& lm : mask.layers) {
        lm.pruned_count = 0;
        for (std::uint8_t v : lm.mask.data()) {
            lm.pruned_count += v;
        }
    }
    return mask;
}

SparsityReport sparsity_report(const PruneMask& mask) {
    SparsityReport report;
    for (const auto& lm : mask.layers) {
        std::size_t pruned = 0;
        for (std::uint8_t v : lm.mask.data()) {
            pruned += v;
        }
        if (pruned != lm.pruned_count) {
            throw MaskError("mask pruned_count is inconsistent on layer '" + lm.name + "'");
        }
        const std::size_t total = lm.mask.size();
        report.layers.push_back({lm.name, pruned, total,
                                 total == 0 ? 0.0
                                            : static_cast<double>(pruned) /
                                                  static_cast<double>(total)});
        report.pruned_total += pruned;
        report.weight_total += total;
    }
    report.fraction_total =
        report.weight_total == 0
            ? 0.0
            : static_cast<double>(report.pruned_total) / static_cast<double>(report.weight_total);
    return report;
}

}  // namespace taskprune
