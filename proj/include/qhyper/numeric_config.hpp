#pragma once

#include <cstddef>

namespace qhyper {

/// Truncation and pole-guard settings shared by every evaluator.
struct NumericConfig {
    /// Tolerance for truncated infinite products and series tails.
    double epsilon_tail = 1e-30;
    /// Hard cap on truncation length: product factors, unilateral shells,
    /// and twice the bilateral window half-width.
    std::size_t max_terms = 1024;
    /// Smallest admissible |denominator factor| in the Float backend.
    double pole_floor = 1e-60;

    /// Throws Error(Config) unless 0 < epsilon_tail < 1, max_terms >= 8 and
    /// pole_floor > 0.
    void validate() const;
};

}  // namespace qhyper
