#pragma once

// q-shifted factorials (a;q)_k for every integer k and k = infinity.

#include <cstddef>
#include <cstdint>
#include <span>

#include "qhyper/numeric_config.hpp"
#include "qhyper/scalar.hpp"

namespace qhyper {

/// (a;q)_k. For k < 0 this is 1 / prod_{j=1}^{-k} (1 - a q^{-j}); a vanishing
/// (Exact) or sub-pole_floor (Float) factor raises DivisionByZero.
Scalar qpoch(const Scalar& a, const Scalar& q, std::int64_t k, const NumericConfig& cfg = {});

/// 1 / (a;q)_k. Zero when k < 0 and some factor 1 - a q^{-j} vanishes; a
/// vanishing factor for k > 0 raises Pole.
Scalar qpoch_reciprocal(const Scalar& a, const Scalar& q, std::int64_t k,
                        const NumericConfig& cfg = {});

/// (a_1, ..., a_m; q)_k.
Scalar qpoch_multi(std::span<const Scalar> list, const Scalar& q, std::int64_t k,
                   const NumericConfig& cfg = {});

struct TruncatedProduct {
    Scalar value;
    std::size_t factors = 0;  // J, the number of factors multiplied
};

/// (a;q)_inf truncated at the first J with |a q^J| / (1 - |q|) < epsilon_tail.
/// Float backend only.
TruncatedProduct qpoch_inf(const Scalar& a, const Scalar& q, const NumericConfig& cfg = {});

/// Truncation length qpoch_inf would use, without multiplying anything.
std::size_t qpoch_inf_length(const Scalar& a, const Scalar& q, const NumericConfig& cfg);

/// True when x is a denominator factor too close to zero for cfg.
bool is_pole_factor(const Scalar& x, const NumericConfig& cfg);

/// numerator / denominator with the pole guard applied to the denominator.
Scalar checked_divide(const Scalar& numerator, const Scalar& denominator,
                      const NumericConfig& cfg, const char* what);

}  // namespace qhyper
