#pragma once

#include <stdexcept>
#include <string>

namespace qnet {

// Malformed inputs: unreadable files, bad config values, graphs that
// violate a precondition of the operation they are passed to.
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quantities that are mathematically undefined for the given input
// (e.g. a critical threshold when the degree ratio does not exceed 1).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qnet
