#pragma once

// Scalar values in one of two arithmetic backends: exact rationals (GMP) or
// arbitrary-precision binary floats (MPFR). Mixing backends is an error.

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <string>
#include <variant>

#include "qhyper/errors.hpp"

namespace qhyper {

enum class BackendKind { Exact, Float };

struct Backend {
    BackendKind kind = BackendKind::Exact;
    unsigned precision_bits = 0;  // meaningful for Float only

    static Backend exact() noexcept { return {BackendKind::Exact, 0}; }
    static Backend floating(unsigned bits);

    bool is_exact() const noexcept { return kind == BackendKind::Exact; }
    std::string name() const;

    friend bool operator==(const Backend&, const Backend&) = default;
};

inline constexpr unsigned kMinPrecisionBits = 64;

/// Owning handle for an mpfr_t.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t precision);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    mpfr_ptr get() noexcept { return value_; }
    mpfr_srcptr get() const noexcept { return value_; }
    mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

private:
    mpfr_t value_;
};

class Scalar {
public:
    /// Exact zero.
    Scalar();
    explicit Scalar(mpq_class value);
    explicit Scalar(BigFloat value);

    static Scalar exact(long numerator, long denominator = 1);
    static Scalar from_rational(const mpq_class& value, Backend backend);
    static Scalar from_double(double value, Backend backend);
    static Scalar zero(Backend backend);
    static Scalar one(Backend backend);

    Backend backend() const;
    bool is_exact() const noexcept { return std::holds_alternative<mpq_class>(value_); }

    const mpq_class& rational() const;
    const BigFloat& real() const;

    /// Same value in another backend. Float -> Exact is an error.
    Scalar to(Backend backend) const;

    bool is_zero() const;
    int sign() const;
    Scalar abs() const;
    double to_double() const;
    /// |x| < bound, evaluated without rounding x to double.
    bool abs_less_than(double bound) const;
    /// Bitwise equality for Float, value equality for Exact.
    bool identical(const Scalar& other) const;

    /// Exact: "p/q" or "p". Float: scientific decimal carrying every bit.
    std::string to_string() const;

    Scalar& operator+=(const Scalar& rhs);
    Scalar& operator-=(const Scalar& rhs);
    Scalar& operator*=(const Scalar& rhs);
    Scalar& operator/=(const Scalar& rhs);

    friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
    friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
    friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
    friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }
    Scalar operator-() const;

    /// Value equality in a single backend.
    friend bool operator==(const Scalar& lhs, const Scalar& rhs);
    /// Total order on values; same-backend only.
    friend std::partial_ordering operator<=>(const Scalar& lhs, const Scalar& rhs);

private:
    std::variant<mpq_class, BigFloat> value_;
};

/// x^n by repeated multiplication (n >= 0) or its reciprocal (n < 0). The
/// operation order is fixed so cached power tables reproduce it bit for bit.
Scalar ipow(const Scalar& x, std::int64_t n);

/// 1 - x, the factor every q-shifted factorial is built from.
Scalar one_minus(const Scalar& x);

/// Relative discrepancy |lhs - rhs| / max(1, |rhs|) as a double.
double relative_residual(const Scalar& lhs, const Scalar& rhs);

}  // namespace qhyper
