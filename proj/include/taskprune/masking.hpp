#pragma once

#include <string>
#include <vector>

#include "taskprune/scoring.hpp"
#include "taskprune/sparsity_spec.hpp"

namespace taskprune {

// Prunes the lowest-scoring weights within each scope unit (unstructured) or
// within each aligned block of m along the input dimension (N:M). Ties break
// by ascending (layer index, row, column), so masks are reproducible across
// platforms and worker counts.
PruneMask make_mask(const ScoreTensor& scores, const SparsitySpec& spec);

struct SparsityReport {
    struct LayerEntry {
        std::string name;
        std::size_t pruned = 0;
        std::size_t total = 0;
        double fraction = 0.0;
    };
    std::vector<LayerEntry> layers;
    std::size_t pruned_total = 0;
    std::size_t weight_total = 0;
    double fraction_total = 0.0;
};

SparsityReport sparsity_report(const PruneMask& mask);

}  // namespace taskprune
