#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace taskprune {

enum class SourceTag { kGeneral, kTask };

const char* source_tag_name(SourceTag tag);

// Pre-tokenized calibration/eval corpus. One entry per sequence.
struct TokenCorpus {
    std::string name;
    std::vector<std::vector<std::int32_t>> sequences;
    SourceTag source_tag = SourceTag::kGeneral;

    std::size_t token_count() const {
        std::size_t n = 0;
        for (const auto& s : sequences) {
            n += s.size();
        }
        return n;
    }
};

}  // namespace taskprune
