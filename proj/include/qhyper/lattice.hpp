#pragma once

// Multi-indices in Z^r, finite summation domains, and the A_r cross-term
// products together with the two product identities used to simplify them.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "qhyper/numeric_config.hpp"
#include "qhyper/qfactorial_source.hpp"
#include "qhyper/scalar.hpp"

namespace qhyper {

class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<std::int64_t> entries) : entries_(entries) {}
    explicit MultiIndex(std::vector<std::int64_t> entries) : entries_(std::move(entries)) {}

    static MultiIndex zeros(std::size_t rank) { return MultiIndex(std::vector<std::int64_t>(rank, 0)); }

    std::size_t rank() const noexcept { return entries_.size(); }
    std::int64_t operator[](std::size_t i) const { return entries_[i]; }
    std::int64_t& operator[](std::size_t i) { return entries_[i]; }
    const std::vector<std::int64_t>& entries() const noexcept { return entries_; }

    /// |k| = k_1 + ... + k_r.
    std::int64_t norm() const noexcept;
    /// max_i |k_i|.
    std::int64_t max_abs() const noexcept;
    std::int64_t min() const noexcept;
    /// Componentwise k <= other.
    bool leq(const MultiIndex& other) const;

    std::string to_string() const;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<std::int64_t> entries_;
};

/// Second elementary symmetric function sum_{i<j} k_i k_j.
std::int64_t e2(const MultiIndex& k);

/// C(n, 2) = n(n-1)/2 for any integer n.
std::int64_t binom2(std::int64_t n);

class SummationDomain {
public:
    enum class Kind { Box, Simplex, Unilateral, Bilateral };

    /// 0 <= k_i <= n_i.
    static SummationDomain box(MultiIndex upper);
    /// k_i >= 0, |k| <= total.
    static SummationDomain simplex(std::int64_t total, std::size_t rank);
    static SummationDomain unilateral(std::size_t rank);
    static SummationDomain bilateral(std::size_t rank);

    Kind kind() const noexcept { return kind_; }
    std::size_t rank() const noexcept { return rank_; }
    bool finite() const noexcept { return kind_ == Kind::Box || kind_ == Kind::Simplex; }
    const MultiIndex& upper() const noexcept { return upper_; }
    std::int64_t total() const noexcept { return total_; }
    /// Number of lattice points of a finite domain.
    std::size_t size() const;

private:
    Kind kind_ = Kind::Box;
    std::size_t rank_ = 0;
    MultiIndex upper_;
    std::int64_t total_ = 0;
};

std::string to_string(SummationDomain::Kind kind);

/// Lexicographic walk over a finite domain (last coordinate fastest).
class LatticeRange {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = MultiIndex;
        using difference_type = std::ptrdiff_t;
        using pointer = const MultiIndex*;
        using reference = const MultiIndex&;

        iterator() = default;
        reference operator*() const { return current_; }
        pointer operator->() const { return &current_; }
        iterator& operator++();
        iterator operator++(int) {
            iterator copy = *this;
            ++*this;
            return copy;
        }
        friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_; }

    private:
        friend class LatticeRange;
        iterator(const SummationDomain* domain, bool done);

        const SummationDomain* domain_ = nullptr;
        MultiIndex current_;
        std::int64_t sum_ = 0;
        bool done_ = true;
    };

    explicit LatticeRange(SummationDomain domain);
    iterator begin() const { return iterator(&domain_, false); }
    iterator end() const { return iterator(&domain_, true); }

private:
    SummationDomain domain_;
};

/// Throws InfiniteDomain for unilateral and bilateral domains.
LatticeRange iterate(const SummationDomain& domain);

/// Visits every k in N^r with |k| = total, lexicographically.
void for_each_composition(std::size_t rank, std::int64_t total,
                          const std::function<void(const MultiIndex&)>& visit);

/// Visits every k in Z^r with inner < max_i |k_i| <= outer, lexicographically.
/// inner = -1 visits the whole cube.
void for_each_cube_shell(std::size_t rank, std::int64_t inner, std::int64_t outer,
                         const std::function<void(const MultiIndex&)>& visit);

/// prod_{i<j} (1 - q^{k_i-k_j} x_i/x_j) / (1 - x_i/x_j), with the x-ratios and
/// the reciprocal denominators computed once at construction.
class ArCrossProduct {
public:
    ArCrossProduct(std::span<const Scalar> x, const NumericConfig& cfg);

    std::size_t rank() const noexcept { return rank_; }
    const Scalar& ratio(std::size_t i, std::size_t j) const { return ratios_[i * rank_ + j]; }

    Scalar at(const MultiIndex& k, QFactorialSource& source) const;

private:
    std::size_t rank_ = 0;
    std::vector<Scalar> ratios_;             // x_i / x_j, row-major
    std::vector<Scalar> inverse_denominators_;  // 1 / (1 - x_i/x_j) for i < j
};

Scalar ar_cross_ratio(const MultiIndex& k, std::span<const Scalar> x, const Scalar& q,
                      const NumericConfig& cfg = {});

/// Both sides of the telescoping product identity
///   prod_{i<j} (1-q^{k_i-k_j}x_i/x_j)/(1-q^{l_i-l_j}x_i/x_j)
///   * prod_{i,j} (q^{l_i-k_j}x_i/x_j)_{k_i-l_i} / (q^{1+l_i-l_j}x_i/x_j)_{k_i-l_i}
///   = (-1)^{|k|-|l|} q^{-C(|k|-|l|,2) - sum_i i(k_i-l_i)}.
struct ProductIdentitySides {
    Scalar lhs;
    Scalar rhs;
};
ProductIdentitySides telescoping_lemma_sides(const MultiIndex& k, const MultiIndex& l,
                                             std::span<const Scalar> x, const Scalar& q,
                                             const NumericConfig& cfg = {});
bool check_telescoping_lemma(const MultiIndex& k, const MultiIndex& l, std::span<const Scalar> x,
                             const Scalar& q, const NumericConfig& cfg = {});

/// prod_{i,j} (q x_i/x_j)_{m_j-m_i} against its closed form
///   (-1)^{(r-1)|m|} q^{-C(|m|+1,2) + r sum C(m_i+1,2) - sum (i-1) m_i}
///   * prod x_i^{|m|-r m_i} * prod_{i<j} (1-q^{m_j-m_i}x_i/x_j)/(1-x_i/x_j).
ProductIdentitySides milne_lem312_sides(const MultiIndex& m, std::span<const Scalar> x,
                                        const Scalar& q, const NumericConfig& cfg = {});
bool check_milne_lem312(const MultiIndex& m, std::span<const Scalar> x, const Scalar& q,
                        const NumericConfig& cfg = {});

/// Exact equality, or relative agreement to 2^-(precision-16) in Float.
bool sides_agree(const Scalar& lhs, const Scalar& rhs);

}  // namespace qhyper
