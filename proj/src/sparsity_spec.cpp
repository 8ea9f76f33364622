#include "taskprune/sparsity_spec.hpp"

#include <cmath>
#include <cstdlib>

#include "taskprune/errors.hpp"

namespace taskprune {

const char* scope_name(Scope s) {
    switch (s) {
        case Scope::kRow: return "row";
        case Scope::kLayer: return "layer";
        case Scope::kGlobal: return "global";
    }
    return "?";
}

Scope parse_scope(const std::string& text) {
    if (text == "row") return Scope::kRow;
    if (text == "layer") return Scope::kLayer;
    if (text == "global") return Scope::kGlobal;
    throw SpecError("unknown scope '" + text + "' (expected row|layer|global)");
}

void SparsitySpec::validate() const {
    if (kind == SparsityKind::kUnstructured) {
        if (!std::isfinite(ratio) || ratio <= 0.0 || ratio >= 1.0) {
            throw SpecError("unstructured ratio must lie in (0,1)");
        }
    } else {
        if (n == 0 || m == 0 || n >= m) {
            throw SpecError("N:M sparsity requires 0 < N < M");
        }
    }
}

double SparsitySpec::effective_sparsity() const {
    if (kind == SparsityKind::kUnstructured) {
        return ratio;
    }
    return static_cast<double>(m - n) / static_cast<double>(m);
}

std::string SparsitySpec::to_string() const {
    if (kind == SparsityKind::kNM) {
        return std::to_string(n) + ":" + std::to_string(m);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", ratio);
    return buf;
}

SparsitySpec parse_sparsity(const std::string& text, Scope scope) {
    SparsitySpec spec;
    spec.scope = scope;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        spec.kind = SparsityKind::kNM;
        char* end = nullptr;
        const long n = std::strtol(text.c_str(), &end, 10);
        if (end != text.c_str() + colon || n < 0) {
            throw SpecError("cannot parse N in '" + text + "'");
        }
        const char* mbegin = text.c_str() + colon + 1;
        const long m = std::strtol(mbegin, &end, 10);
        if (end != text.c_str() + text.size() || m < 0 || end == mbegin) {
            throw SpecError("cannot parse M in '" + text + "'");
        }
        spec.n = static_cast<std::size_t>(n);
        spec.m = static_cast<std::size_t>(m);
    } else {
        char* end = nullptr;
        spec.kind = SparsityKind::kUnstructured;
        spec.ratio = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || text.empty()) {
            throw SpecError("cannot parse sparsity '" + text + "'");
        }
    }
    spec.validate();
    return spec;
}

const PruneMask::LayerMask& PruneMask::layer(const std::string& name) const {
    for (const auto& l : layers) {
        if (l.name == name) {
            return l;
        }
    }
    throw MaskError("mask has no layer named '" + name + "'");
}

}  // namespace taskprune
