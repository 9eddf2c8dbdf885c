#pragma once

// Sources of q-shifted factorials over a fixed set of bases. Series kernels
// register every Pochhammer base once and then ask for (base;q)_k by slot.
// DirectQFactorials recomputes each request from scratch through qpoch();
// CachedQFactorials memoizes prefix products. Both perform the same sequence
// of floating-point operations, so they agree bit for bit.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "qhyper/numeric_config.hpp"
#include "qhyper/scalar.hpp"

namespace qhyper {

class QFactorialSource {
public:
    QFactorialSource(Scalar q, std::vector<Scalar> bases, NumericConfig cfg);
    virtual ~QFactorialSource() = default;

    QFactorialSource(const QFactorialSource&) = delete;
    QFactorialSource& operator=(const QFactorialSource&) = delete;

    const Scalar& q() const noexcept { return q_; }
    const Scalar& base(std::size_t slot) const { return bases_.at(slot); }
    std::size_t size() const noexcept { return bases_.size(); }
    const NumericConfig& config() const noexcept { return cfg_; }
    Backend backend() const { return q_.backend(); }

    /// q^n.
    virtual Scalar qpow(std::int64_t n) = 0;
    /// (base_slot; q)_k.
    virtual Scalar poch(std::size_t slot, std::int64_t k) = 0;
    /// 1 / (base_slot; q)_k.
    virtual Scalar rpoch(std::size_t slot, std::int64_t k) = 0;
    /// base_slot^n, in the operation order of ipow().
    virtual Scalar power(std::size_t slot, std::int64_t n) = 0;

protected:
    Scalar q_;
    std::vector<Scalar> bases_;
    NumericConfig cfg_;
};

class DirectQFactorials final : public QFactorialSource {
public:
    using QFactorialSource::QFactorialSource;

    Scalar qpow(std::int64_t n) override;
    Scalar poch(std::size_t slot, std::int64_t k) override;
    Scalar rpoch(std::size_t slot, std::int64_t k) override;
    Scalar power(std::size_t slot, std::int64_t n) override;
};

class CachedQFactorials final : public QFactorialSource {
public:
    CachedQFactorials(Scalar q, std::vector<Scalar> bases, NumericConfig cfg);

    Scalar qpow(std::int64_t n) override;
    Scalar poch(std::size_t slot, std::int64_t k) override;
    Scalar rpoch(std::size_t slot, std::int64_t k) override;
    Scalar power(std::size_t slot, std::int64_t n) override;

private:
    struct Table {
        // positive[k] = prod_{j<k} (1 - b q^j); negative[m] = prod_{j=1}^{m} (1 - b q^{-j}).
        std::vector<Scalar> positive;
        std::vector<Scalar> negative;
        // First index whose new factor is a pole; SIZE_MAX when none so far.
        std::size_t positive_pole = SIZE_MAX;
        std::size_t negative_pole = SIZE_MAX;
    };

    const Scalar& q_power(std::size_t n);
    void grow_positive(std::size_t slot, std::size_t k);
    void grow_negative(std::size_t slot, std::size_t m);

    std::vector<Scalar> powers_;
    std::vector<Table> tables_;
    std::vector<std::vector<Scalar>> base_powers_;
};

enum class FactorialStrategy { Direct, Cached };

std::unique_ptr<QFactorialSource> make_qfactorial_source(FactorialStrategy strategy, Scalar q,
                                                         std::vector<Scalar> bases,
                                                         const NumericConfig& cfg);

}  // namespace qhyper
