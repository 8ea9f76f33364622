#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace taskprune {

// Error taxonomy mirrors the pipeline stages; the CLI maps these onto exit
// codes (usage 1, pipeline 2, I/O 3).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

struct InputError : Error {
    using Error::Error;
};

struct TrainError : Error {
    TrainError(const std::string& msg, std::size_t at_step)
        : Error(msg + " (step " + std::to_string(at_step) + ")"), step(at_step) {}
    std::size_t step;
};

struct ScoreError : Error {
    using Error::Error;
};

struct PartitionError : Error {
    using Error::Error;
};

struct FusionError : Error {
    using Error::Error;
};

struct MaskError : Error {
    using Error::Error;
};

struct SpecError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace taskprune
