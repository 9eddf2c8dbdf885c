#include "qhyper/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qhyper {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::Pole: return "PoleError";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::BackendMismatch: return "BackendMismatch";
        case ErrorKind::Range: return "RangeError";
        case ErrorKind::InfiniteDomain: return "InfiniteDomain";
        case ErrorKind::ConstraintViolated: return "ConstraintViolated";
        case ErrorKind::Schema: return "SchemaError";
        case ErrorKind::SamplingExhausted: return "SamplingExhausted";
        case ErrorKind::Mismatch: return "ReportedMismatch";
        case ErrorKind::Config: return "ConfigError";
    }
    return "Unknown";
}

Backend Backend::floating(unsigned bits) {
    if (bits < kMinPrecisionBits) {
        throw Error(ErrorKind::Config, "float precision must be at least 64 bits, got " +
                                           std::to_string(bits));
    }
    return {BackendKind::Float, bits};
}

std::string Backend::name() const {
    return is_exact() ? "exact" : "float" + std::to_string(precision_bits);
}

// ---------------------------------------------------------------------------
// BigFloat

BigFloat::BigFloat(mpfr_prec_t precision) {
    mpfr_init2(value_, precision);
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

// ---------------------------------------------------------------------------
// Scalar

namespace {

[[noreturn]] void mismatch(const char* op) {
    throw Error(ErrorKind::BackendMismatch, std::string("mixed exact and float operands in ") + op);
}

mpfr_prec_t joint_precision(const BigFloat& a, const BigFloat& b) {
    return std::max(a.precision(), b.precision());
}

template <typename ExactOp, typename FloatOp>
void combine(std::variant<mpq_class, BigFloat>& lhs, const std::variant<mpq_class, BigFloat>& rhs,
             const char* name, ExactOp exact_op, FloatOp float_op) {
    if (auto* l = std::get_if<mpq_class>(&lhs)) {
        const auto* r = std::get_if<mpq_class>(&rhs);
        if (r == nullptr) mismatch(name);
        exact_op(*l, *r);
        return;
    }
    const auto* r = std::get_if<BigFloat>(&rhs);
    if (r == nullptr) mismatch(name);
    auto& l = std::get<BigFloat>(lhs);
    BigFloat out(joint_precision(l, *r));
    float_op(out.get(), l.get(), r->get());
    l = std::move(out);
}

}  // namespace

Scalar::Scalar() : value_(mpq_class(0)) {}
Scalar::Scalar(mpq_class value) : value_(std::move(value)) {
    std::get<mpq_class>(value_).canonicalize();
}
Scalar::Scalar(BigFloat value) : value_(std::move(value)) {}

Scalar Scalar::exact(long numerator, long denominator) {
    if (denominator == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator in rational literal");
    return Scalar(mpq_class(numerator, denominator));
}

Scalar Scalar::from_rational(const mpq_class& value, Backend backend) {
    if (backend.is_exact()) return Scalar(value);
    BigFloat f(backend.precision_bits);
    mpfr_set_q(f.get(), value.get_mpq_t(), MPFR_RNDN);
    return Scalar(std::move(f));
}

Scalar Scalar::from_double(double value, Backend backend) {
    if (backend.is_exact()) {
        mpq_class q;
        mpq_set_d(q.get_mpq_t(), value);
        return Scalar(q);
    }
    BigFloat f(backend.precision_bits);
    mpfr_set_d(f.get(), value, MPFR_RNDN);
    return Scalar(std::move(f));
}

Scalar Scalar::zero(Backend backend) { return from_rational(mpq_class(0), backend); }
Scalar Scalar::one(Backend backend) { return from_rational(mpq_class(1), backend); }

Backend Scalar::backend() const {
    if (is_exact()) return Backend::exact();
    return Backend{BackendKind::Float, static_cast<unsigned>(std::get<BigFloat>(value_).precision())};
}

const mpq_class& Scalar::rational() const {
    if (const auto* q = std::get_if<mpq_class>(&value_)) return *q;
    throw Error(ErrorKind::BackendMismatch, "rational() on a float scalar");
}

const BigFloat& Scalar::real() const {
    if (const auto* f = std::get_if<BigFloat>(&value_)) return *f;
    throw Error(ErrorKind::BackendMismatch, "real() on an exact scalar");
}

Scalar Scalar::to(Backend backend) const {
    if (is_exact()) return from_rational(rational(), backend);
    if (backend.is_exact()) {
        throw Error(ErrorKind::BackendMismatch, "cannot convert a float scalar to the exact backend");
    }
    BigFloat f(backend.precision_bits);
    mpfr_set(f.get(), real().get(), MPFR_RNDN);
    return Scalar(std::move(f));
}

bool Scalar::is_zero() const { return sign() == 0; }

int Scalar::sign() const {
    if (is_exact()) return sgn(rational());
    return mpfr_sgn(real().get());
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

double Scalar::to_double() const {
    if (is_exact()) return rational().get_d();
    return mpfr_get_d(real().get(), MPFR_RNDN);
}

bool Scalar::abs_less_than(double bound) const {
    if (is_exact()) {
        mpq_class b;
        mpq_set_d(b.get_mpq_t(), bound);
        return cmp(::abs(rational()), b) < 0;
    }
    BigFloat b(64);
    mpfr_set_d(b.get(), bound, MPFR_RNDN);
    return mpfr_cmpabs(real().get(), b.get()) < 0;
}

bool Scalar::identical(const Scalar& other) const {
    if (is_exact() != other.is_exact()) return false;
    if (is_exact()) return rational() == other.rational();
    const auto& a = real();
    const auto& b = other.real();
    return a.precision() == b.precision() && mpfr_equal_p(a.get(), b.get()) != 0 &&
           mpfr_signbit(a.get()) == mpfr_signbit(b.get());
}

std::string Scalar::to_string() const {
    if (is_exact()) return rational().get_str();
    const auto& f = real();
    // Enough decimal digits to round-trip every bit.
    const int digits = 1 + static_cast<int>(std::ceil(static_cast<double>(f.precision()) * 0.30102999566398120));
    char* buffer = nullptr;
    mpfr_asprintf(&buffer, "%.*Re", digits - 1, f.get());
    std::string out(buffer);
    mpfr_free_str(buffer);
    return out;
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
    combine(value_, rhs.value_, "addition", [](mpq_class& l, const mpq_class& r) { l += r; },
            [](mpfr_ptr o, mpfr_srcptr l, mpfr_srcptr r) { mpfr_add(o, l, r, MPFR_RNDN); });
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
    combine(value_, rhs.value_, "subtraction", [](mpq_class& l, const mpq_class& r) { l -= r; },
            [](mpfr_ptr o, mpfr_srcptr l, mpfr_srcptr r) { mpfr_sub(o, l, r, MPFR_RNDN); });
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
    combine(value_, rhs.value_, "multiplication", [](mpq_class& l, const mpq_class& r) { l *= r; },
            [](mpfr_ptr o, mpfr_srcptr l, mpfr_srcptr r) { mpfr_mul(o, l, r, MPFR_RNDN); });
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
    if (rhs.is_exact() == is_exact() && rhs.is_zero()) {
        throw Error(ErrorKind::DivisionByZero, "division by zero");
    }
    combine(value_, rhs.value_, "division", [](mpq_class& l, const mpq_class& r) { l /= r; },
            [](mpfr_ptr o, mpfr_srcptr l, mpfr_srcptr r) { mpfr_div(o, l, r, MPFR_RNDN); });
    return *this;
}

Scalar Scalar::operator-() const {
    if (is_exact()) return Scalar(mpq_class(-rational()));
    BigFloat f(real().precision());
    mpfr_neg(f.get(), real().get(), MPFR_RNDN);
    return Scalar(std::move(f));
}

bool operator==(const Scalar& lhs, const Scalar& rhs) {
    return (lhs <=> rhs) == std::partial_ordering::equivalent;
}

std::partial_ordering operator<=>(const Scalar& lhs, const Scalar& rhs) {
    if (lhs.is_exact() != rhs.is_exact()) mismatch("comparison");
    int c = 0;
    if (lhs.is_exact()) {
        c = cmp(lhs.rational(), rhs.rational());
    } else {
        if (mpfr_nan_p(lhs.real().get()) || mpfr_nan_p(rhs.real().get())) {
            return std::partial_ordering::unordered;
        }
        c = mpfr_cmp(lhs.real().get(), rhs.real().get());
    }
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}

Scalar ipow(const Scalar& x, std::int64_t n) {
    if (n < 0) {
        return Scalar::one(x.backend()) / ipow(x, -n);
    }
    if (x.is_exact()) {
        const auto& v = x.rational();
        mpq_class out;
        mpz_pow_ui(out.get_num_mpz_t(), v.get_num_mpz_t(), static_cast<unsigned long>(n));
        mpz_pow_ui(out.get_den_mpz_t(), v.get_den_mpz_t(), static_cast<unsigned long>(n));
        return Scalar(out);
    }
    Scalar out = Scalar::one(x.backend());
    for (std::int64_t i = 0; i < n; ++i) out *= x;
    return out;
}

Scalar one_minus(const Scalar& x) { return Scalar::one(x.backend()) - x; }

double relative_residual(const Scalar& lhs, const Scalar& rhs) {
    Scalar diff = (lhs - rhs).abs();
    Scalar scale = rhs.abs();
    if (scale < Scalar::one(rhs.backend())) scale = Scalar::one(rhs.backend());
    return (diff / scale).to_double();
}

}  // namespace qhyper
