#include "qhyper/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qhyper/qpoch.hpp"

namespace qhyper {

std::int64_t MultiIndex::norm() const noexcept {
    return std::accumulate(entries_.begin(), entries_.end(), std::int64_t{0});
}

std::int64_t MultiIndex::max_abs() const noexcept {
    std::int64_t m = 0;
    for (auto v : entries_) m = std::max(m, v < 0 ? -v : v);
    return m;
}

std::int64_t MultiIndex::min() const noexcept {
    if (entries_.empty()) return 0;
    return *std::min_element(entries_.begin(), entries_.end());
}

bool MultiIndex::leq(const MultiIndex& other) const {
    if (rank() != other.rank()) throw Error(ErrorKind::Schema, "multi-index rank mismatch");
    for (std::size_t i = 0; i < rank(); ++i) {
        if (entries_[i] > other.entries_[i]) return false;
    }
    return true;
}

std::string MultiIndex::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i != 0) out += ",";
        out += std::to_string(entries_[i]);
    }
    return out + ")";
}

std::int64_t e2(const MultiIndex& k) {
    std::int64_t sum = 0;
    std::int64_t prefix = 0;
    for (std::size_t j = 0; j < k.rank(); ++j) {
        sum += prefix * k[j];
        prefix += k[j];
    }
    return sum;
}

std::int64_t binom2(std::int64_t n) { return n * (n - 1) / 2; }

// ---------------------------------------------------------------------------
// Domains

SummationDomain SummationDomain::box(MultiIndex upper) {
    if (upper.rank() == 0) throw Error(ErrorKind::Schema, "box domain needs rank >= 1");
    SummationDomain d;
    d.kind_ = Kind::Box;
    d.rank_ = upper.rank();
    d.upper_ = std::move(upper);
    return d;
}

SummationDomain SummationDomain::simplex(std::int64_t total, std::size_t rank) {
    if (rank == 0) throw Error(ErrorKind::Schema, "simplex domain needs rank >= 1");
    if (total < 0) throw Error(ErrorKind::Schema, "simplex bound must be nonnegative");
    SummationDomain d;
    d.kind_ = Kind::Simplex;
    d.rank_ = rank;
    d.total_ = total;
    return d;
}

SummationDomain SummationDomain::unilateral(std::size_t rank) {
    SummationDomain d;
    d.kind_ = Kind::Unilateral;
    d.rank_ = rank;
    return d;
}

SummationDomain SummationDomain::bilateral(std::size_t rank) {
    SummationDomain d;
    d.kind_ = Kind::Bilateral;
    d.rank_ = rank;
    return d;
}

std::size_t SummationDomain::size() const {
    switch (kind_) {
        case Kind::Box: {
            std::size_t n = 1;
            for (auto v : upper_.entries()) n *= v < 0 ? 0 : static_cast<std::size_t>(v + 1);
            return n;
        }
        case Kind::Simplex: {
            // C(total + rank, rank)
            std::size_t n = 1;
            for (std::size_t i = 1; i <= rank_; ++i) {
                n = n * (static_cast<std::size_t>(total_) + i) / i;
            }
            return n;
        }
        default:
            throw Error(ErrorKind::InfiniteDomain, "size of an infinite domain");
    }
}

std::string to_string(SummationDomain::Kind kind) {
    switch (kind) {
        case SummationDomain::Kind::Box: return "Box";
        case SummationDomain::Kind::Simplex: return "Simplex";
        case SummationDomain::Kind::Unilateral: return "Unilateral";
        case SummationDomain::Kind::Bilateral: return "Bilateral";
    }
    return "?";
}

LatticeRange::LatticeRange(SummationDomain domain) : domain_(std::move(domain)) {
    if (!domain_.finite()) {
        throw Error(ErrorKind::InfiniteDomain,
                    to_string(domain_.kind()) + " domains are summed through a truncation controller");
    }
}

LatticeRange::iterator::iterator(const SummationDomain* domain, bool done)
    : domain_(domain), current_(MultiIndex::zeros(domain->rank())), done_(done) {
    if (done_) return;
    if (domain->kind() == SummationDomain::Kind::Box) {
        for (auto v : domain->upper().entries()) {
            if (v < 0) done_ = true;
        }
    }
}

LatticeRange::iterator& LatticeRange::iterator::operator++() {
    const bool box = domain_->kind() == SummationDomain::Kind::Box;
    for (std::size_t pos = current_.rank(); pos-- > 0;) {
        ++current_[pos];
        ++sum_;
        const bool fits = box ? current_[pos] <= domain_->upper()[pos] : sum_ <= domain_->total();
        if (fits) return *this;
        sum_ -= current_[pos];
        current_[pos] = 0;
    }
    done_ = true;
    return *this;
}

LatticeRange iterate(const SummationDomain& domain) { return LatticeRange(domain); }

namespace {

void compositions(MultiIndex& k, std::size_t pos, std::int64_t remaining,
                  const std::function<void(const MultiIndex&)>& visit) {
    if (pos + 1 == k.rank()) {
        k[pos] = remaining;
        visit(k);
        return;
    }
    for (std::int64_t v = 0; v <= remaining; ++v) {
        k[pos] = v;
        compositions(k, pos + 1, remaining - v, visit);
    }
}

}  // namespace

void for_each_composition(std::size_t rank, std::int64_t total,
                          const std::function<void(const MultiIndex&)>& visit) {
    if (rank == 0 || total < 0) return;
    MultiIndex k = MultiIndex::zeros(rank);
    compositions(k, 0, total, visit);
}

void for_each_cube_shell(std::size_t rank, std::int64_t inner, std::int64_t outer,
                         const std::function<void(const MultiIndex&)>& visit) {
    if (rank == 0 || outer < 0 || inner >= outer) return;
    MultiIndex k(std::vector<std::int64_t>(rank, -outer));
    while (true) {
        if (k.max_abs() > inner) visit(k);
        std::size_t pos = rank;
        while (pos-- > 0) {
            if (k[pos] < outer) {
                ++k[pos];
                break;
            }
            k[pos] = -outer;
            if (pos == 0) return;
        }
    }
}

// ---------------------------------------------------------------------------
// A_r products

ArCrossProduct::ArCrossProduct(std::span<const Scalar> x, const NumericConfig& cfg) : rank_(x.size()) {
    if (rank_ == 0) throw Error(ErrorKind::Schema, "cross product needs at least one variable");
    ratios_.reserve(rank_ * rank_);
    for (std::size_t i = 0; i < rank_; ++i) {
        for (std::size_t j = 0; j < rank_; ++j) {
            if (x[j].is_zero()) throw Error(ErrorKind::Pole, "x_" + std::to_string(j + 1) + " is zero");
            ratios_.push_back(x[i] / x[j]);
        }
    }
    for (std::size_t i = 0; i < rank_; ++i) {
        for (std::size_t j = i + 1; j < rank_; ++j) {
            const Scalar den = one_minus(ratio(i, j));
            if (is_pole_factor(den, cfg)) {
                throw Error(ErrorKind::Pole, "1 - x_" + std::to_string(i + 1) + "/x_" + std::to_string(j + 1) +
                                                 " vanishes");
            }
            inverse_denominators_.push_back(Scalar::one(den.backend()) / den);
        }
    }
}

Scalar ArCrossProduct::at(const MultiIndex& k, QFactorialSource& source) const {
    Scalar out = Scalar::one(source.backend());
    std::size_t pair = 0;
    for (std::size_t i = 0; i < rank_; ++i) {
        for (std::size_t j = i + 1; j < rank_; ++j, ++pair) {
            out *= one_minus(source.qpow(k[i] - k[j]) * ratio(i, j));
            out *= inverse_denominators_[pair];
        }
    }
    return out;
}

Scalar ar_cross_ratio(const MultiIndex& k, std::span<const Scalar> x, const Scalar& q,
                      const NumericConfig& cfg) {
    if (k.rank() != x.size()) throw Error(ErrorKind::Schema, "k and x have different ranks");
    ArCrossProduct product(x, cfg);
    DirectQFactorials source(q, {}, cfg);
    return product.at(k, source);
}

namespace {

Scalar signed_qpower(const Scalar& q, std::int64_t sign_exponent, std::int64_t q_exponent) {
    Scalar out = ipow(q, q_exponent);
    return (sign_exponent % 2 != 0) ? -out : out;
}

void require_rank(std::size_t rank, std::span<const Scalar> x) {
    if (rank != x.size() || rank == 0) throw Error(ErrorKind::Schema, "index and x ranks differ");
}

}  // namespace

ProductIdentitySides telescoping_lemma_sides(const MultiIndex& k, const MultiIndex& l,
                                             std::span<const Scalar> x, const Scalar& q,
                                             const NumericConfig& cfg) {
    require_rank(k.rank(), x);
    require_rank(l.rank(), x);
    if (!l.leq(k)) throw Error(ErrorKind::Range, "telescoping lemma needs l <= k");
    const std::size_t r = k.rank();
    Scalar lhs = Scalar::one(q.backend());
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i + 1; j < r; ++j) {
            const Scalar ratio = x[i] / x[j];
            lhs *= one_minus(ipow(q, k[i] - k[j]) * ratio);
            lhs = checked_divide(lhs, one_minus(ipow(q, l[i] - l[j]) * ratio), cfg, "telescoping lemma");
        }
    }
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            const Scalar ratio = x[i] / x[j];
            const std::int64_t len = k[i] - l[i];
            lhs *= qpoch(ipow(q, l[i] - k[j]) * ratio, q, len, cfg);
            lhs *= qpoch_reciprocal(ipow(q, 1 + l[i] - l[j]) * ratio, q, len, cfg);
        }
    }
    const std::int64_t d = k.norm() - l.norm();
    std::int64_t weighted = 0;
    for (std::size_t i = 0; i < r; ++i) weighted += static_cast<std::int64_t>(i + 1) * (k[i] - l[i]);
    return {std::move(lhs), signed_qpower(q, d, -binom2(d) - weighted)};
}

bool check_telescoping_lemma(const MultiIndex& k, const MultiIndex& l, std::span<const Scalar> x,
                             const Scalar& q, const NumericConfig& cfg) {
    const auto sides = telescoping_lemma_sides(k, l, x, q, cfg);
    return sides_agree(sides.lhs, sides.rhs);
}

ProductIdentitySides milne_lem312_sides(const MultiIndex& m, std::span<const Scalar> x,
                                        const Scalar& q, const NumericConfig& cfg) {
    require_rank(m.rank(), x);
    const std::size_t r = m.rank();
    const auto rr = static_cast<std::int64_t>(r);
    Scalar lhs = Scalar::one(q.backend());
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            lhs *= qpoch(q * x[i] / x[j], q, m[j] - m[i], cfg);
        }
    }
    const std::int64_t total = m.norm();
    std::int64_t exponent = -binom2(total + 1);
    for (std::size_t i = 0; i < r; ++i) {
        exponent += rr * binom2(m[i] + 1) - static_cast<std::int64_t>(i) * m[i];
    }
    Scalar rhs = signed_qpower(q, (rr - 1) * total, exponent);
    for (std::size_t i = 0; i < r; ++i) rhs *= ipow(x[i], total - rr * m[i]);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i + 1; j < r; ++j) {
            const Scalar ratio = x[i] / x[j];
            rhs *= one_minus(ipow(q, m[j] - m[i]) * ratio);
            rhs = checked_divide(rhs, one_minus(ratio), cfg, "Milne product identity");
        }
    }
    return {std::move(lhs), std::move(rhs)};
}

bool check_milne_lem312(const MultiIndex& m, std::span<const Scalar> x, const Scalar& q,
                        const NumericConfig& cfg) {
    const auto sides = milne_lem312_sides(m, x, q, cfg);
    return sides_agree(sides.lhs, sides.rhs);
}

bool sides_agree(const Scalar& lhs, const Scalar& rhs) {
    if (lhs.is_exact()) return lhs == rhs;
    const int bits = static_cast<int>(lhs.backend().precision_bits);
    return relative_residual(lhs, rhs) < std::ldexp(1.0, -(bits - 16));
}

}  // namespace qhyper
