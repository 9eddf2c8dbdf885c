#pragma once

#include <random>

#include "qhyper/scalar.hpp"

namespace testing {

inline qhyper::Scalar Q(long num, long den = 1) { return qhyper::Scalar::exact(num, den); }

inline qhyper::Scalar F256(long num, long den = 1) {
    return qhyper::Scalar::exact(num, den).to(qhyper::Backend::floating(256));
}

// A nonzero rational ±p/s with p, s <= 16.
inline qhyper::Scalar random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> part(1, 16);
    std::uniform_int_distribution<int> sign(0, 1);
    return Q(sign(rng) ? part(rng) : -part(rng), part(rng));
}

}  // namespace testing
