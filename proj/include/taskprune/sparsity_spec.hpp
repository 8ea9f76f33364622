#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "taskprune/matrix.hpp"

namespace taskprune {

enum class SparsityKind { kUnstructured, kNM };

// Pool within which unstructured scores are ranked.
enum class Scope { kRow, kLayer, kGlobal };

const char* scope_name(Scope s);
Scope parse_scope(const std::string& text);

struct SparsitySpec {
    SparsityKind kind = SparsityKind::kUnstructured;
    double ratio = 0.5;      // unstructured only, in (0,1)
    std::size_t n = 0;       // N:M only, 0 < n < m
    std::size_t m = 0;
    Scope scope = Scope::kLayer;  // unstructured only

    // Throws SpecError when invalid.
    void validate() const;

    double effective_sparsity() const;
    std::string to_string() const;
};

// Accepts "0.5" style ratios or "2:4" style N:M patterns.
SparsitySpec parse_sparsity(const std::string& text, Scope scope = Scope::kLayer);

// Boolean mask per prunable layer; true (1) means the weight is pruned.
struct PruneMask {
    struct LayerMask {
        std::string name;
        MaskMat mask;
        std::size_t pruned_count = 0;
    };

    std::vector<LayerMask> layers;
    SparsitySpec spec;

    const LayerMask& layer(const std::string& name) const;
};

}  // namespace taskprune
