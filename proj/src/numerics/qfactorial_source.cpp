#include "qhyper/qfactorial_source.hpp"

#include <string>

#include "qhyper/qpoch.hpp"

namespace qhyper {

QFactorialSource::QFactorialSource(Scalar q, std::vector<Scalar> bases, NumericConfig cfg)
    : q_(std::move(q)), bases_(std::move(bases)), cfg_(cfg) {
    for (const auto& b : bases_) {
        if (b.is_exact() != q_.is_exact()) {
            throw Error(ErrorKind::BackendMismatch, "factorial base and q live in different backends");
        }
    }
}

Scalar DirectQFactorials::qpow(std::int64_t n) { return ipow(q_, n); }

Scalar DirectQFactorials::power(std::size_t slot, std::int64_t n) { return ipow(bases_.at(slot), n); }

Scalar DirectQFactorials::poch(std::size_t slot, std::int64_t k) {
    return qpoch(bases_.at(slot), q_, k, cfg_);
}

Scalar DirectQFactorials::rpoch(std::size_t slot, std::int64_t k) {
    return qpoch_reciprocal(bases_.at(slot), q_, k, cfg_);
}

CachedQFactorials::CachedQFactorials(Scalar q, std::vector<Scalar> bases, NumericConfig cfg)
    : QFactorialSource(std::move(q), std::move(bases), cfg) {
    powers_.push_back(Scalar::one(q_.backend()));
    tables_.resize(bases_.size());
    base_powers_.resize(bases_.size());
    for (auto& t : tables_) {
        t.positive.push_back(Scalar::one(q_.backend()));
        t.negative.push_back(Scalar::one(q_.backend()));
    }
}

const Scalar& CachedQFactorials::q_power(std::size_t n) {
    while (powers_.size() <= n) powers_.push_back(powers_.back() * q_);
    return powers_[n];
}

void CachedQFactorials::grow_positive(std::size_t slot, std::size_t k) {
    Table& t = tables_.at(slot);
    while (t.positive.size() <= k) {
        const std::size_t j = t.positive.size() - 1;
        Scalar factor = one_minus(bases_[slot] * q_power(j));
        if (t.positive_pole == SIZE_MAX && is_pole_factor(factor, cfg_)) t.positive_pole = j;
        t.positive.push_back(t.positive.back() * factor);
    }
}

void CachedQFactorials::grow_negative(std::size_t slot, std::size_t m) {
    Table& t = tables_.at(slot);
    while (t.negative.size() <= m) {
        const std::size_t j = t.negative.size();
        Scalar factor = one_minus(bases_[slot] / q_power(j));
        if (t.negative_pole == SIZE_MAX && is_pole_factor(factor, cfg_)) t.negative_pole = j;
        t.negative.push_back(t.negative.back() * factor);
    }
}

Scalar CachedQFactorials::qpow(std::int64_t n) {
    if (n >= 0) return q_power(static_cast<std::size_t>(n));
    return Scalar::one(q_.backend()) / q_power(static_cast<std::size_t>(-n));
}

Scalar CachedQFactorials::poch(std::size_t slot, std::int64_t k) {
    if (k >= 0) {
        grow_positive(slot, static_cast<std::size_t>(k));
        return tables_[slot].positive[static_cast<std::size_t>(k)];
    }
    const auto m = static_cast<std::size_t>(-k);
    grow_negative(slot, m);
    if (tables_[slot].negative_pole <= m) {
        throw Error(ErrorKind::DivisionByZero, "(a;q)_" + std::to_string(k) + " has a vanishing factor at a=" +
                                                   bases_[slot].to_string());
    }
    return Scalar::one(q_.backend()) / tables_[slot].negative[m];
}

Scalar CachedQFactorials::rpoch(std::size_t slot, std::int64_t k) {
    if (k < 0) {
        const auto m = static_cast<std::size_t>(-k);
        grow_negative(slot, m);
        return tables_[slot].negative[m];
    }
    const auto kk = static_cast<std::size_t>(k);
    grow_positive(slot, kk);
    if (tables_[slot].positive_pole < kk) {
        throw Error(ErrorKind::Pole, "1/(a;q)_" + std::to_string(k) + " has a vanishing factor at a=" +
                                         bases_[slot].to_string());
    }
    return Scalar::one(q_.backend()) / tables_[slot].positive[kk];
}

Scalar CachedQFactorials::power(std::size_t slot, std::int64_t n) {
    auto& table = base_powers_.at(slot);
    if (table.empty()) table.push_back(Scalar::one(q_.backend()));
    const auto m = static_cast<std::size_t>(n < 0 ? -n : n);
    while (table.size() <= m) table.push_back(table.back() * bases_[slot]);
    if (n >= 0) return table[m];
    return Scalar::one(q_.backend()) / table[m];
}

std::unique_ptr<QFactorialSource> make_qfactorial_source(FactorialStrategy strategy, Scalar q,
                                                         std::vector<Scalar> bases,
                                                         const NumericConfig& cfg) {
    if (strategy == FactorialStrategy::Cached) {
        return std::make_unique<CachedQFactorials>(std::move(q), std::move(bases), cfg);
    }
    return std::make_unique<DirectQFactorials>(std::move(q), std::move(bases), cfg);
}

}  // namespace qhyper
