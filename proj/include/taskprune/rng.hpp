#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace taskprune {

// All randomness flows from one root seed through named sub-seeds. mt19937_64
// raw draws plus hand-rolled bounding are used instead of std distributions,
// whose output sequences are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Unbiased draw in [0, bound) via rejection sampling.
    std::uint64_t below(std::uint64_t bound);

    // 53-bit uniform in [0, 1).
    double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * real(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view s);

// Stage sub-seed: root seed XOR stable hash of the stage name.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stage);

}  // namespace taskprune
