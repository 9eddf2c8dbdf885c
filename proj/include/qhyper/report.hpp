#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhyper/scalar.hpp"

namespace qhyper {

struct TruncationInfo {
    std::size_t terms = 0;       // summands evaluated
    std::int64_t window = 0;     // |k| shell (unilateral) or half-width (bilateral) reached
    double tail_estimate = 0.0;  // bound on the neglected part when truncation stopped
};

/// One verification outcome: an identity instance, an orthogonality sweep or
/// a derivation replay.
struct VerificationReport {
    std::string id;
    std::size_t r = 0;
    std::uint64_t seed = 0;
    std::size_t trial = 0;
    Backend backend;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::optional<Scalar> lhs;
    std::optional<Scalar> rhs;
    double residual = 0.0;
    TruncationInfo truncation;
    bool pass = false;
    std::string detail;  // failure cause, or what was checked
};

}  // namespace qhyper
