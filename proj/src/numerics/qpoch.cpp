#include "qhyper/qpoch.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qhyper {

void NumericConfig::validate() const {
    if (!(epsilon_tail > 0.0 && epsilon_tail < 1.0)) {
        throw Error(ErrorKind::Config, "epsilon_tail must lie in (0, 1)");
    }
    if (max_terms < 8) throw Error(ErrorKind::Config, "max_terms must be at least 8");
    if (!(pole_floor > 0.0)) throw Error(ErrorKind::Config, "pole_floor must be positive");
}

bool is_pole_factor(const Scalar& x, const NumericConfig& cfg) {
    if (x.is_exact()) return x.is_zero();
    return x.abs_less_than(cfg.pole_floor);
}

Scalar checked_divide(const Scalar& numerator, const Scalar& denominator, const NumericConfig& cfg,
                      const char* what) {
    if (is_pole_factor(denominator, cfg)) {
        throw Error(ErrorKind::Pole, std::string("vanishing denominator in ") + what);
    }
    return numerator / denominator;
}

namespace {

void require_same_backend(const Scalar& a, const Scalar& q) {
    if (a.is_exact() != q.is_exact()) {
        throw Error(ErrorKind::BackendMismatch, "q-shifted factorial with mixed backends");
    }
}

// prod_{j=1}^{m} (1 - a q^{-j}); pole_at receives the first j whose factor is a pole.
Scalar negative_side_product(const Scalar& a, const Scalar& q, std::int64_t m,
                             const NumericConfig& cfg, std::int64_t& pole_at) {
    pole_at = 0;
    Scalar d = Scalar::one(q.backend());
    Scalar qj = Scalar::one(q.backend());
    for (std::int64_t j = 1; j <= m; ++j) {
        qj *= q;
        Scalar factor = one_minus(a / qj);
        if (pole_at == 0 && is_pole_factor(factor, cfg)) pole_at = j;
        d *= factor;
    }
    return d;
}

}  // namespace

Scalar qpoch(const Scalar& a, const Scalar& q, std::int64_t k, const NumericConfig& cfg) {
    require_same_backend(a, q);
    if (k >= 0) {
        Scalar p = Scalar::one(q.backend());
        Scalar qj = Scalar::one(q.backend());
        for (std::int64_t j = 0; j < k; ++j) {
            p *= one_minus(a * qj);
            qj *= q;
        }
        return p;
    }
    std::int64_t pole_at = 0;
    Scalar d = negative_side_product(a, q, -k, cfg, pole_at);
    if (pole_at != 0) {
        throw Error(ErrorKind::DivisionByZero,
                    "(a;q)_" + std::to_string(k) + " has a vanishing factor 1 - a q^-" +
                        std::to_string(pole_at) + " at a=" + a.to_string());
    }
    return Scalar::one(q.backend()) / d;
}

Scalar qpoch_reciprocal(const Scalar& a, const Scalar& q, std::int64_t k, const NumericConfig& cfg) {
    require_same_backend(a, q);
    if (k < 0) {
        std::int64_t ignored = 0;
        return negative_side_product(a, q, -k, cfg, ignored);
    }
    Scalar p = Scalar::one(q.backend());
    Scalar qj = Scalar::one(q.backend());
    for (std::int64_t j = 0; j < k; ++j) {
        Scalar factor = one_minus(a * qj);
        if (is_pole_factor(factor, cfg)) {
            throw Error(ErrorKind::Pole, "1/(a;q)_" + std::to_string(k) + " has a vanishing factor 1 - a q^" +
                                             std::to_string(j) + " at a=" + a.to_string());
        }
        p *= factor;
        qj *= q;
    }
    return Scalar::one(q.backend()) / p;
}

Scalar qpoch_multi(std::span<const Scalar> list, const Scalar& q, std::int64_t k,
                   const NumericConfig& cfg) {
    Scalar out = Scalar::one(q.backend());
    for (const auto& a : list) out *= qpoch(a, q, k, cfg);
    return out;
}

std::size_t qpoch_inf_length(const Scalar& a, const Scalar& q, const NumericConfig& cfg) {
    if (q.is_exact() || a.is_exact()) {
        throw Error(ErrorKind::BackendMismatch, "infinite products are evaluated in the float backend only");
    }
    if (q.is_zero() || !q.abs_less_than(1.0)) {
        throw Error(ErrorKind::Range, "infinite product needs 0 < |q| < 1, got q=" + q.to_string());
    }
    if (a.is_zero()) return 0;
    long a_exp = 0;
    long q_exp = 0;
    const double a_mant = mpfr_get_d_2exp(&a_exp, a.real().get(), MPFR_RNDN);
    const double q_mant = mpfr_get_d_2exp(&q_exp, q.real().get(), MPFR_RNDN);
    const double log_a = std::log(std::fabs(a_mant)) + static_cast<double>(a_exp) * std::log(2.0);
    const double log_q = std::log(std::fabs(q_mant)) + static_cast<double>(q_exp) * std::log(2.0);
    const double log_gap = std::log1p(-std::exp(log_q));
    // smallest J >= 0 with log|a| + J log|q| - log(1-|q|) < log eps
    const double bound = (log_a - log_gap - std::log(cfg.epsilon_tail)) / (-log_q);
    const double j = bound < 0.0 ? 0.0 : std::floor(bound) + 1.0;
    if (j > static_cast<double>(cfg.max_terms)) {
        throw Error(ErrorKind::NoConvergence, "infinite product at a=" + a.to_string() + " needs " +
                                                  std::to_string(static_cast<long long>(j)) +
                                                  " factors, above max_terms=" +
                                                  std::to_string(cfg.max_terms));
    }
    return static_cast<std::size_t>(j);
}

TruncatedProduct qpoch_inf(const Scalar& a, const Scalar& q, const NumericConfig& cfg) {
    const std::size_t length = qpoch_inf_length(a, q, cfg);
    Scalar p = Scalar::one(q.backend());
    Scalar qj = Scalar::one(q.backend());
    for (std::size_t j = 0; j < length; ++j) {
        p *= one_minus(a * qj);
        qj *= q;
    }
    return {std::move(p), length};
}

}  // namespace qhyper
