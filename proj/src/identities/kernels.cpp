#include <string>

#include "qhyper/identities.hpp"
#include "qhyper/qpoch.hpp"

namespace qhyper {

std::size_t SeriesKernel::slot(Scalar base, Guard guard_kind) {
    if (guard_kind == Guard::Generic) guarded_.push_back(base);
    bases_.push_back(std::move(base));
    return bases_.size() - 1;
}

std::unique_ptr<QFactorialSource> SeriesKernel::source(FactorialStrategy strategy,
                                                        const NumericConfig& cfg) const {
    return make_qfactorial_source(strategy, q_, bases_, cfg);
}

namespace {

Scalar require(const std::optional<Scalar>& value, const char* name) {
    if (!value) throw Error(ErrorKind::Schema, std::string("missing parameter ") + name);
    return *value;
}

const std::vector<Scalar>& require(const std::optional<std::vector<Scalar>>& value, std::size_t r,
                                   const char* name) {
    if (!value) throw Error(ErrorKind::Schema, std::string("missing parameter ") + name);
    if (value->size() != r) {
        throw Error(ErrorKind::Schema, std::string(name) + " has length " + std::to_string(value->size()) +
                                           ", expected r=" + std::to_string(r));
    }
    return *value;
}

// (1 - a q^{2k}) / (1 - a)
class VeryWellPoisedFactor {
public:
    VeryWellPoisedFactor(const Scalar& a, const NumericConfig& cfg)
        : a_(a), inverse_(checked_divide(Scalar::one(a.backend()), one_minus(a), cfg, "1 - a")) {}

    Scalar at(std::int64_t k, QFactorialSource& source) const {
        return one_minus(a_ * source.qpow(2 * k)) * inverse_;
    }

private:
    Scalar a_;
    Scalar inverse_;
};

// Product of finite q-shifted factorials over numerator and denominator lists.
Scalar finite_ratio(std::initializer_list<Scalar> upper, std::initializer_list<Scalar> lower, const Scalar& q,
                    std::int64_t n, const NumericConfig& cfg) {
    Scalar out = Scalar::one(q.backend());
    for (const auto& u : upper) out *= qpoch(u, q, n, cfg);
    for (const auto& l : lower) out *= qpoch_reciprocal(l, q, n, cfg);
    return out;
}

Scalar infinite_ratio(std::initializer_list<Scalar> upper, std::initializer_list<Scalar> lower, const Scalar& q,
                      const NumericConfig& cfg) {
    Scalar out = Scalar::one(q.backend());
    for (const auto& u : upper) out *= qpoch_inf(u, q, cfg).value;
    for (const auto& l : lower) {
        const Scalar p = qpoch_inf(l, q, cfg).value;
        out = checked_divide(out, p, cfg, "infinite product");
    }
    return out;
}

std::int64_t weighted_sum(const MultiIndex& k, std::int64_t offset) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < k.rank(); ++i) s += (static_cast<std::int64_t>(i) + offset) * k[i];
    return s;
}

// Shared A_r structure: the cross product over x and the r x r block
//   prod_{i,j} (top_ij)_{k_i} / (bottom_ij)_{k_i}.
class ArKernel : public SeriesKernel {
protected:
    ArKernel(const ParameterAssignment& p, const NumericConfig& cfg)
        : SeriesKernel(require(p.q, "q"), p.r),
          x_(require(p.x_vec, p.r, "x_vec")),
          cross_(x_, cfg),
          one_(Scalar::one(q_.backend())) {
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < r_; ++j)
                if (i != j) guard(cross_.ratio(i, j));
    }

    // top: (top_j x_i/x_j); bottom: (q x_i/x_j), or (a q x_i / e_j x_j) when scale = (a, e).
    void register_block(const std::vector<Scalar>& top, bool top_diagonal_exempt,
                        const std::optional<std::pair<Scalar, std::vector<Scalar>>>& scale = std::nullopt) {
        for (std::size_t i = 0; i < r_; ++i) {
            for (std::size_t j = 0; j < r_; ++j) {
                const Guard g = (i == j && top_diagonal_exempt) ? Guard::Exempt : Guard::Generic;
                top_.push_back(slot(top[j] * x_[i] / x_[j], g));
            }
        }
        for (std::size_t i = 0; i < r_; ++i) {
            for (std::size_t j = 0; j < r_; ++j) {
                if (scale) {
                    bottom_.push_back(slot((scale->first * q_ * x_[i]) / (scale->second[j] * x_[j])));
                } else {
                    bottom_.push_back(slot(q_ * x_[i] / x_[j], i == j ? Guard::Exempt : Guard::Generic));
                }
            }
        }
    }

    Scalar block(const MultiIndex& k, QFactorialSource& source) const {
        Scalar out = cross_.at(k, source);
        for (std::size_t i = 0; i < r_; ++i) {
            for (std::size_t j = 0; j < r_; ++j) {
                out *= source.poch(top_[i * r_ + j], k[i]);
                out *= source.rpoch(bottom_[i * r_ + j], k[i]);
            }
        }
        return out;
    }

    std::vector<Scalar> x_;
    ArCrossProduct cross_;
    Scalar one_;

private:
    std::vector<std::size_t> top_;
    std::vector<std::size_t> bottom_;
};

std::vector<Scalar> negative_q_powers(const MultiIndex& n, const Scalar& q) {
    std::vector<Scalar> out;
    for (std::size_t i = 0; i < n.rank(); ++i) out.push_back(ipow(q, -n[i]));
    return out;
}

const MultiIndex& require_box(const ParameterAssignment& p) {
    if (!p.n_vec) throw Error(ErrorKind::Schema, "missing parameter n_vec");
    if (p.n_vec->rank() != p.r) throw Error(ErrorKind::Schema, "n_vec rank differs from r");
    if (p.n_vec->min() < 0) throw Error(ErrorKind::Schema, "n_vec entries must be nonnegative");
    return *p.n_vec;
}

std::int64_t require_total(const ParameterAssignment& p) {
    if (!p.N) throw Error(ErrorKind::Schema, "missing parameter N");
    if (*p.N < 0) throw Error(ErrorKind::Schema, "N must be nonnegative");
    return *p.N;
}

// ---------------------------------------------------------------------------

class Jackson87 final : public SeriesKernel {
public:
    Jackson87(const ParameterAssignment& p, const NumericConfig& cfg)
        : SeriesKernel(require(p.q, "q"), 1),
          a_(require(p.a, "a")),
          b_(require(p.b, "b")),
          c_(require(p.c, "c")),
          d_(require(p.d, "d")),
          n_(require_box(p)[0]),
          vwp_(a_, cfg) {
        const Scalar qn1 = ipow(q_, 1 + n_);
        const Scalar bcd = b_ * c_ * d_;
        guard(a_);
        upper_ = {slot(a_), slot(b_), slot(c_), slot(d_), slot(a_ * a_ * qn1 / bcd),
                  slot(ipow(q_, -n_), Guard::Exempt)};
        lower_ = {slot(q_, Guard::Exempt), slot(a_ * q_ / b_),         slot(a_ * q_ / c_),
                  slot(a_ * q_ / d_),      slot(bcd * ipow(q_, -n_) / a_), slot(a_ * qn1)};
        guard(a_ * q_ / (b_ * c_));
        guard(a_ * q_ / (b_ * d_));
        guard(a_ * q_ / (c_ * d_));
        guard(a_ * q_ / bcd);
    }

    SummationDomain domain() const override { return SummationDomain::box(MultiIndex{n_}); }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override {
        const std::int64_t j = k[0];
        Scalar out = vwp_.at(j, s);
        for (auto u : upper_) out *= s.poch(u, j);
        for (auto l : lower_) out *= s.rpoch(l, j);
        return out * s.qpow(j);
    }

    Scalar rhs(const NumericConfig& cfg) const override {
        const Scalar aq = a_ * q_;
        return finite_ratio({aq, aq / (b_ * c_), aq / (b_ * d_), aq / (c_ * d_)},
                            {aq / b_, aq / c_, aq / d_, aq / (b_ * c_ * d_)}, q_, n_, cfg);
    }

private:
    Scalar a_, b_, c_, d_;
    std::int64_t n_;
    VeryWellPoisedFactor vwp_;
    std::vector<std::size_t> upper_, lower_;
};

class Bailey66 final : public SeriesKernel {
public:
    Bailey66(const ParameterAssignment& p, const NumericConfig& cfg)
        : SeriesKernel(require(p.q, "q"), 1),
          a_(require(p.a, "a")),
          b_(require(p.b, "b")),
          c_(require(p.c, "c")),
          d_(require(p.d, "d")),
          e_(require(p.e_vec, 1, "e_vec")[0]),
          z_(a_ * a_ * q_ / (b_ * c_ * d_ * e_)),
          vwp_(a_, cfg) {
        guard(a_);
        for (const auto& v : {b_, c_, d_, e_}) {
            upper_.push_back(slot(v));
            lower_.push_back(slot(a_ * q_ / v));
            guard(q_ / v);
        }
        z_slot_ = slot(z_);
        for (const auto& [u, v] : {std::pair{b_, c_}, {b_, d_}, {b_, e_}, {c_, d_}, {c_, e_}, {d_, e_}})
            guard(a_ * q_ / (u * v));
    }

    SummationDomain domain() const override { return SummationDomain::bilateral(1); }
    std::optional<Scalar> argument() const override { return z_; }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override {
        const std::int64_t j = k[0];
        Scalar out = vwp_.at(j, s);
        for (auto u : upper_) out *= s.poch(u, j);
        for (auto l : lower_) out *= s.rpoch(l, j);
        return out * s.power(z_slot_, j);
    }

    Scalar rhs(const NumericConfig& cfg) const override {
        const Scalar aq = a_ * q_;
        return infinite_ratio({q_, aq, q_ / a_, aq / (b_ * c_), aq / (b_ * d_), aq / (b_ * e_), aq / (c_ * d_),
                               aq / (c_ * e_), aq / (d_ * e_)},
                              {aq / b_, aq / c_, aq / d_, aq / e_, q_ / b_, q_ / c_, q_ / d_, q_ / e_, z_}, q_, cfg);
    }

private:
    Scalar a_, b_, c_, d_, e_, z_;
    VeryWellPoisedFactor vwp_;
    std::vector<std::size_t> upper_, lower_;
    std::size_t z_slot_ = 0;
};

class QBinomial final : public SeriesKernel {
public:
    explicit QBinomial(const ParameterAssignment& p)
        : SeriesKernel(require(p.q, "q"), 1), a_(require(p.a, "a")), z_(require(p.z, "z")) {
        upper_ = slot(a_);
        lower_ = slot(q_, Guard::Exempt);
        z_slot_ = slot(z_);
    }

    SummationDomain domain() const override { return SummationDomain::unilateral(1); }
    std::optional<Scalar> argument() const override { return z_; }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override {
        return s.poch(upper_, k[0]) * s.rpoch(lower_, k[0]) * s.power(z_slot_, k[0]);
    }

    Scalar rhs(const NumericConfig& cfg) const override { return infinite_ratio({a_ * z_}, {z_}, q_, cfg); }

private:
    Scalar a_, z_;
    std::size_t upper_ = 0, lower_ = 0, z_slot_ = 0;
};

// ---------------------------------------------------------------------------

class MilneAr87 final : public ArKernel {
public:
    MilneAr87(const ParameterAssignment& p, const NumericConfig& cfg)
        : ArKernel(p, cfg),
          a_(require(p.a, "a")),
          b_(require(p.b, "b")),
          c_(require(p.c, "c")),
          d_(require(p.d, "d")),
          n_(require_box(p)) {
        const std::int64_t nn = n_.norm();
        const Scalar qn1 = ipow(q_, 1 + nn);
        const Scalar bcd = b_ * c_ * d_;
        register_block(negative_q_powers(n_, q_), true);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar ax = a_ * x_[i];
            guard(ax);
            inverse_ax_.push_back(checked_divide(one_, one_minus(ax), cfg, "1 - a x_i"));
            ax_.push_back(slot(ax));
            dx_.push_back(slot(d_ * x_[i]));
            lam_.push_back(slot(a_ * a_ * x_[i] * qn1 / bcd));
            axn_.push_back(slot(ax * ipow(q_, 1 + n_[i])));
            axb_.push_back(slot(ax * q_ / b_));
            axc_.push_back(slot(ax * q_ / c_));
            guard(ax * q_ / (b_ * c_));
        }
        b_slot_ = slot(b_);
        c_slot_ = slot(c_);
        aqd_ = slot(a_ * q_ / d_);
        bcdn_ = slot(bcd * ipow(q_, -nn) / a_);
        guard(a_ * q_ / (b_ * d_));
        guard(a_ * q_ / (c_ * d_));
        guard(a_ * q_ / bcd);
    }

    SummationDomain domain() const override { return SummationDomain::box(n_); }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override {
        const std::int64_t kk = k.norm();
        Scalar out = block(k, s);
        for (std::size_t i = 0; i < r_; ++i) {
            out *= one_minus(s.base(ax_[i]) * s.qpow(k[i] + kk)) * inverse_ax_[i];
            out *= s.poch(ax_[i], kk) * s.poch(dx_[i], k[i]) * s.poch(lam_[i], k[i]);
            out *= s.rpoch(axn_[i], kk) * s.rpoch(axb_[i], k[i]) * s.rpoch(axc_[i], k[i]);
        }
        out *= s.poch(b_slot_, kk) * s.poch(c_slot_, kk);
        out *= s.rpoch(aqd_, kk) * s.rpoch(bcdn_, kk);
        return out * s.qpow(weighted_sum(k, 1));
    }

    Scalar rhs(const NumericConfig& cfg) const override {
        const std::int64_t nn = n_.norm();
        const Scalar aq = a_ * q_;
        Scalar out = finite_ratio({aq / (b_ * d_), aq / (c_ * d_)}, {aq / d_, aq / (b_ * c_ * d_)}, q_, nn, cfg);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar axq = a_ * x_[i] * q_;
            out *= finite_ratio({axq, axq / (b_ * c_)}, {axq / b_, axq / c_}, q_, n_[i], cfg);
        }
        return out;
    }

private:
    Scalar a_, b_, c_, d_;
    MultiIndex n_;
    std::vector<Scalar> inverse_ax_;
    std::vector<std::size_t> ax_, dx_, lam_, axn_, axb_, axc_;
    std::size_t b_slot_ = 0, c_slot_ = 0, aqd_ = 0, bcdn_ = 0;
};

class BhatnagarAr65 final : public ArKernel {
public:
    BhatnagarAr65(const ParameterAssignment& p, const NumericConfig& cfg)
        : ArKernel(p, cfg),
          a_(require(p.a, "a")),
          b_(require(p.b, "b")),
          c_(require(p.c, "c")),
          n_(require_box(p)),
          vwp_(a_, cfg) {
        const Scalar qn1 = ipow(q_, 1 + n_.norm());
        guard(a_);
        register_block(negative_q_powers(n_, q_), true);
        for (std::size_t i = 0; i < r_; ++i) {
            cx_.push_back(slot(c_ / x_[i]));
            axc_.push_back(slot(a_ * x_[i] * q_ / c_));
            x_slot_.push_back(slot(x_[i]));
            guard(a_ * x_[i] * q_ / (b_ * c_));
        }
        a_slot_ = slot(a_);
        b_slot_ = slot(b_);
        aqn_ = slot(a_ * qn1);
        aqb_ = slot(a_ * q_ / b_);
        z_slot_ = slot(a_ * qn1 / (b_ * c_));
    }

    SummationDomain domain() const override { return SummationDomain::box(n_); }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override {
        const std::int64_t kk = k.norm();
        Scalar out = block(k, s);
        for (std::size_t i = 0; i < r_; ++i) {
            out *= s.poch(cx_[i], kk) * s.power(x_slot_[i], k[i]);
            out *= s.rpoch(axc_[i], k[i]) * s.rpoch(cx_[i], kk - k[i]);
        }
        out *= vwp_.at(kk, s);
        out *= s.poch(a_slot_, kk) * s.poch(b_slot_, kk);
        out *= s.rpoch(aqn_, kk) * s.rpoch(aqb_, kk);
        out *= s.power(z_slot_, kk);
        return out * s.qpow(weighted_sum(k, 0) - e2(k));
    }

    Scalar rhs(const NumericConfig& cfg) const override {
        const std::int64_t nn = n_.norm();
        Scalar out = finite_ratio({a_ * q_}, {a_ * q_ / b_}, q_, nn, cfg);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar axq = a_ * x_[i] * q_;
            out *= finite_ratio({axq / (b_ * c_)}, {axq / c_}, q_, n_[i], cfg);
        }
        return out;
    }

private:
    Scalar a_, b_, c_;
    MultiIndex n_;
    VeryWellPoisedFactor vwp_;
    std::vector<std::size_t> cx_, axc_, x_slot_;
    std::size_t a_slot_ = 0, b_slot_ = 0, aqn_ = 0, aqb_ = 0, z_slot_ = 0;
};

// The four 8phi7/6phi5 families below share one summand shape:
//   block * prod_i (u1_i)_{|k|-k_i} (d/x_i)_{|k|} (u3_i)_{k_i}
//                / [(d/x_i)_{|k|-k_i} (u4_i)_{|k|} (a x_i q/d)_{k_i}]
//         * vwp(|k|) * prod (upper)_{|k|} / prod (lower)_{|k|} * z^{|k|} * q^{sum (i+w) k_i}.
class ArVwpKernel : public ArKernel {
protected:
    ArVwpKernel(const ParameterAssignment& p, const NumericConfig& cfg, const Scalar& a)
        : ArKernel(p, cfg), a_(a), vwp_(a, cfg) {
        guard(a_);
    }

    void register_row(const Scalar& u1, const Scalar& dx, const Scalar& u3, const Scalar& u4, const Scalar& u5) {
        u1_.push_back(slot(u1));
        dx_.push_back(slot(dx));
        u3_.push_back(slot(u3));
        u4_.push_back(slot(u4));
        u5_.push_back(slot(u5));
    }

    // For the bilateral family the two (d/x_i)-type bases differ.
    void register_row(const Scalar& u1, const Scalar& dx_upper, const Scalar& dx_lower, const Scalar& u3,
                      const Scalar& u4, const Scalar& u5) {
        register_row(u1, dx_upper, u3, u4, u5);
        dx_lower_.push_back(slot(dx_lower));
    }

    void add_upper(const Scalar& v, Guard g = Guard::Generic) { upper_.push_back(slot(v, g)); }
    void add_lower(const Scalar& v) { lower_.push_back(slot(v)); }

    Scalar shaped_term(const MultiIndex& k, QFactorialSource& s, std::optional<std::size_t> z_slot,
                       std::int64_t weight) const {
        const std::int64_t kk = k.norm();
        Scalar out = block(k, s);
        for (std::size_t i = 0; i < r_; ++i) {
            const std::size_t lower_dx = dx_lower_.empty() ? dx_[i] : dx_lower_[i];
            out *= s.poch(u1_[i], kk - k[i]) * s.poch(dx_[i], kk) * s.poch(u3_[i], k[i]);
            out *= s.rpoch(lower_dx, kk - k[i]) * s.rpoch(u4_[i], kk) * s.rpoch(u5_[i], k[i]);
        }
        out *= vwp_.at(kk, s);
        for (auto u : upper_) out *= s.poch(u, kk);
        for (auto l : lower_) out *= s.rpoch(l, kk);
        if (z_slot) out *= s.power(*z_slot, kk);
        return out * s.qpow(weighted_sum(k, weight));
    }

    Scalar a_;
    VeryWellPoisedFactor vwp_;

private:
    std::vector<std::size_t> u1_, dx_, dx_lower_, u3_, u4_, u5_;
    std::vector<std::size_t> upper_, lower_;
};

class NewAr87 final : public ArVwpKernel {
public:
    NewAr87(const ParameterAssignment& p, const NumericConfig& cfg)
        : ArVwpKernel(p, cfg, require(p.a, "a")),
          b_(require(p.b, "b")),
          c_(require(p.c, "c")),
          d_(require(p.d, "d")),
          n_(require_box(p)) {
        const Scalar qn1 = ipow(q_, 1 + n_.norm());
        const Scalar bcd = b_ * c_ * d_;
        register_block(negative_q_powers(n_, q_), true);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar ax = a_ * x_[i];
            register_row(bcd / ax, d_ / x_[i], a_ * ax * qn1 / bcd, bcd * ipow(q_, -n_[i]) / ax, ax * q_ / d_);
            guard(ax * q_ / (b_ * d_));
            guard(ax * q_ / (c_ * d_));
            guard(ax * q_ / bcd);
        }
        add_upper(a_);
        add_upper(b_);
        add_upper(c_);
        add_lower(a_ * qn1);
        add_lower(a_ * q_ / b_);
        add_lower(a_ * q_ / c_);
        guard(a_ * q_ / (b_ * c_));
    }

    SummationDomain domain() const override { return SummationDomain::box(n_); }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override {
        return shaped_term(k, s, std::nullopt, 1);
    }

    Scalar rhs(const NumericConfig& cfg) const override {
        const Scalar aq = a_ * q_;
        Scalar out = finite_ratio({aq, aq / (b_ * c_)}, {aq / b_, aq / c_}, q_, n_.norm(), cfg);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar axq = a_ * x_[i] * q_;
            out *= finite_ratio({axq / (b_ * d_), axq / (c_ * d_)}, {axq / d_, axq / (b_ * c_ * d_)}, q_, n_[i], cfg);
        }
        return out;
    }

private:
    Scalar b_, c_, d_;
    MultiIndex n_;
};

class NewAr87Poly final : public ArVwpKernel {
public:
    NewAr87Poly(const ParameterAssignment& p, const NumericConfig& cfg)
        : ArVwpKernel(p, cfg, require(p.a, "a")),
          b_(require(p.b, "b")),
          c_(require(p.c_vec, p.r, "c_vec")),
          d_(require(p.d, "d")),
          total_(require_total(p)),
          big_c_(p.C()) {
        const Scalar qn = ipow(q_, -total_);
        const Scalar qn1 = ipow(q_, 1 + total_);
        register_block(c_, false);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar ax = a_ * x_[i];
            register_row(b_ * d_ * qn / ax, d_ / x_[i], a_ * ax * qn1 / (b_ * big_c_ * d_),
                         b_ * c_[i] * d_ * qn / ax, ax * q_ / d_);
            guard(ax * q_ / (b_ * d_));
            guard(ax * q_ / (c_[i] * d_));
        }
        add_upper(a_);
        add_upper(b_);
        add_upper(qn, Guard::Exempt);
        add_lower(a_ * q_ / big_c_);
        add_lower(a_ * q_ / b_);
        add_lower(a_ * qn1);
        guard(a_ * q_ / (b_ * big_c_));
    }

    SummationDomain domain() const override { return SummationDomain::simplex(total_, r_); }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override {
        return shaped_term(k, s, std::nullopt, 1);
    }

    Scalar rhs(const NumericConfig& cfg) const override {
        const Scalar aq = a_ * q_;
        Scalar out = finite_ratio({aq, aq / (b_ * big_c_)}, {aq / b_, aq / big_c_}, q_, total_, cfg);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar axq = a_ * x_[i] * q_;
            out *= finite_ratio({axq / (b_ * d_), axq / (c_[i] * d_)}, {axq / d_, axq / (b_ * c_[i] * d_)}, q_,
                                total_, cfg);
        }
        return out;
    }

private:
    Scalar b_;
    std::vector<Scalar> c_;
    Scalar d_;
    std::int64_t total_;
    Scalar big_c_;
};

class NewAr87Special final : public ArVwpKernel {
public:
    NewAr87Special(const ParameterAssignment& p, const NumericConfig& cfg)
        : ArVwpKernel(p, cfg, require(p.a, "a")),
          b_(require(p.b, "b")),
          c_(require(p.c_vec, p.r, "c_vec")),
          d_(require(p.d, "d")),
          total_(require_total(p)),
          big_c_(p.C()) {
        const Scalar qn = ipow(q_, -total_);
        const Scalar qn1 = ipow(q_, 1 + total_);
        const Scalar bcd = b_ * big_c_ * d_;
        register_block(c_, false);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar bcx = b_ * big_c_ * x_[i];
            register_row(a_ * q_ / bcx, d_ / x_[i], b_ * x_[i], a_ * c_[i] * q_ / bcx, a_ * x_[i] * q_ / d_);
            guard(a_ * x_[i] * q_ / (c_[i] * d_));
        }
        add_upper(a_);
        add_upper(a_ * a_ * qn1 / bcd);
        add_upper(qn, Guard::Exempt);
        add_lower(a_ * q_ / big_c_);
        add_lower(bcd * qn / a_);
        add_lower(a_ * qn1);
        guard(a_ * q_ / (b_ * d_));
        guard(a_ * q_ / bcd);
    }

    SummationDomain domain() const override { return SummationDomain::simplex(total_, r_); }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override {
        return shaped_term(k, s, std::nullopt, 1);
    }

    Scalar rhs(const NumericConfig& cfg) const override {
        const Scalar aq = a_ * q_;
        Scalar out = finite_ratio({aq, aq / (b_ * d_)}, {aq / big_c_, aq / (b_ * big_c_ * d_)}, q_, total_, cfg);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar axq = a_ * x_[i] * q_;
            const Scalar bcx = b_ * big_c_ * x_[i];
            out *= finite_ratio({aq / bcx, axq / (c_[i] * d_)}, {axq / d_, a_ * c_[i] * q_ / bcx}, q_, total_, cfg);
        }
        return out;
    }

private:
    Scalar b_;
    std::vector<Scalar> c_;
    Scalar d_;
    std::int64_t total_;
    Scalar big_c_;
};

class NewAr65Nonterm final : public ArVwpKernel {
public:
    NewAr65Nonterm(const ParameterAssignment& p, const NumericConfig& cfg)
        : ArVwpKernel(p, cfg, require(p.a, "a")),
          b_(require(p.b, "b")),
          c_(require(p.c_vec, p.r, "c_vec")),
          d_(require(p.d, "d")),
          big_c_(p.C()),
          z_(a_ * q_ / (b_ * big_c_ * d_)) {
        register_block(c_, false);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar bcx = b_ * big_c_ * x_[i];
            register_row(a_ * q_ / bcx, d_ / x_[i], b_ * x_[i], a_ * c_[i] * q_ / bcx, a_ * x_[i] * q_ / d_);
            guard(a_ * x_[i] * q_ / (c_[i] * d_));
        }
        add_upper(a_);
        add_lower(a_ * q_ / big_c_);
        guard(a_ * q_ / (b_ * d_));
        z_slot_ = slot(z_);
    }

    SummationDomain domain() const override { return SummationDomain::unilateral(r_); }
    std::optional<Scalar> argument() const override { return z_; }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override { return shaped_term(k, s, z_slot_, 0); }

    Scalar rhs(const NumericConfig& cfg) const override {
        const Scalar aq = a_ * q_;
        Scalar out = infinite_ratio({aq, aq / (b_ * d_)}, {aq / big_c_, z_}, q_, cfg);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar axq = a_ * x_[i] * q_;
            const Scalar bcx = b_ * big_c_ * x_[i];
            out *= infinite_ratio({aq / bcx, axq / (c_[i] * d_)}, {axq / d_, a_ * c_[i] * q_ / bcx}, q_, cfg);
        }
        return out;
    }

private:
    Scalar b_;
    std::vector<Scalar> c_;
    Scalar d_;
    Scalar big_c_;
    Scalar z_;
    std::size_t z_slot_ = 0;
};

class NewAr65Term final : public ArVwpKernel {
public:
    NewAr65Term(const ParameterAssignment& p, const NumericConfig& cfg)
        : ArVwpKernel(p, cfg, require(p.a, "a")),
          b_(require(p.b, "b")),
          c_(require(p.c, "c")),
          n_(require_box(p)) {
        const std::int64_t nn = n_.norm();
        const Scalar aqn = a_ * ipow(q_, 1 + nn);
        z_ = aqn / (b_ * c_);
        register_block(negative_q_powers(n_, q_), true);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar bx = b_ * x_[i];
            register_row(aqn / bx, c_ / x_[i], bx, a_ * ipow(q_, 1 + nn - n_[i]) / bx, a_ * x_[i] * q_ / c_);
            guard(a_ * q_ / bx);
        }
        add_upper(a_);
        add_lower(aqn);
        guard(a_ * q_ / (b_ * c_));
        z_slot_ = slot(z_);
    }

    SummationDomain domain() const override { return SummationDomain::box(n_); }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override { return shaped_term(k, s, z_slot_, 0); }

    Scalar rhs(const NumericConfig& cfg) const override {
        const std::int64_t nn = n_.norm();
        const Scalar aq = a_ * q_;
        Scalar out = finite_ratio({aq, aq / (b_ * c_)}, {}, q_, nn, cfg);
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar abx = aq / (b_ * x_[i]);
            out *= qpoch(abx, q_, nn - n_[i], cfg);
            out *= qpoch_reciprocal(abx, q_, nn, cfg);
            out *= qpoch_reciprocal(a_ * x_[i] * q_ / c_, q_, n_[i], cfg);
        }
        return out;
    }

private:
    Scalar b_, c_;
    MultiIndex n_;
    Scalar z_;
    std::size_t z_slot_ = 0;
};

class NewAr66 final : public ArVwpKernel {
public:
    NewAr66(const ParameterAssignment& p, const NumericConfig& cfg)
        : ArVwpKernel(p, cfg, require(p.a, "a")),
          b_(require(p.b, "b")),
          c_(require(p.c_vec, p.r, "c_vec")),
          d_(require(p.d, "d")),
          e_(require(p.e_vec, p.r, "e_vec")),
          big_c_(p.C()),
          big_e_(p.E()) {
        const auto r = static_cast<std::int64_t>(r_);
        const Scalar ar1 = ipow(a_, r - 1);
        const Scalar ar = ar1 * a_;
        z_ = ar * a_ * q_ / (b_ * big_c_ * d_ * big_e_);
        register_block(c_, false, std::pair{a_, e_});
        for (std::size_t i = 0; i < r_; ++i) {
            const Scalar bcx = b_ * big_c_ * x_[i];
            register_row(a_ * q_ / bcx, d_ * big_e_ / (ar1 * e_[i] * x_[i]), d_ * big_e_ / (ar * x_[i]), b_ * x_[i],
                         a_ * c_[i] * q_ / bcx, a_ * x_[i] * q_ / d_);
        }
        add_upper(big_e_ / ar1);
        add_lower(a_ * q_ / big_c_);
        z_slot_ = slot(z_);
        guard(q_ / a_);
        guard(a_ * q_ / (b_ * d_));
        guard(ar1 * q_ / big_e_);
        for (std::size_t i = 0; i < r_; ++i) {
            guard(ar * x_[i] * q_ / (d_ * big_e_));
            guard(a_ * q_ / (b_ * e_[i] * x_[i]));
            guard(ar1 * e_[i] * x_[i] * q_ / (d_ * big_e_));
            guard(q_ / (b_ * x_[i]));
            guard(a_ * x_[i] * q_ / (c_[i] * d_));
            for (std::size_t j = 0; j < r_; ++j) {
                guard(a_ * x_[i] * q_ / (c_[i] * e_[j] * x_[j]));
                guard(q_ * x_[i] / (c_[i] * x_[j]));
            }
        }
    }

    SummationDomain domain() const override { return SummationDomain::bilateral(r_); }
    std::optional<Scalar> argument() const override { return z_; }

    Scalar term(const MultiIndex& k, QFactorialSource& s) const override { return shaped_term(k, s, z_slot_, 0); }

    Scalar rhs(const NumericConfig& cfg) const override {
        const auto r = static_cast<std::int64_t>(r_);
        const Scalar ar1 = ipow(a_, r - 1);
        const Scalar ar = ar1 * a_;
        const Scalar aq = a_ * q_;
        const Scalar de = d_ * big_e_;
        Scalar out = infinite_ratio({aq, q_ / a_, aq / (b_ * d_)}, {aq / big_c_, z_, ar1 * q_ / big_e_}, q_, cfg);
        for (std::size_t i = 0; i < r_; ++i) {
            for (std::size_t j = 0; j < r_; ++j) {
                const Scalar ratio = x_[i] / x_[j];
                out *= infinite_ratio({q_ * ratio, (a_ * x_[i] * q_) / (c_[i] * e_[j] * x_[j])},
                                      {q_ * x_[i] / (c_[i] * x_[j]), (a_ * x_[i] * q_) / (e_[j] * x_[j])}, q_, cfg);
            }
            const Scalar bcx = b_ * big_c_ * x_[i];
            out *= infinite_ratio({ar * x_[i] * q_ / de, aq / (b_ * e_[i] * x_[i]), aq / bcx, a_ * x_[i] * q_ / (c_[i] * d_)},
                                  {ar1 * e_[i] * x_[i] * q_ / de, q_ / (b_ * x_[i]), a_ * x_[i] * q_ / d_,
                                   a_ * c_[i] * q_ / bcx},
                                  q_, cfg);
        }
        return out;
    }

private:
    Scalar b_;
    std::vector<Scalar> c_;
    Scalar d_;
    std::vector<Scalar> e_;
    Scalar big_c_, big_e_;
    Scalar z_;
    std::size_t z_slot_ = 0;
};

}  // namespace

std::unique_ptr<SeriesKernel> make_kernel(IdentityId id, const ParameterAssignment& params,
                                          const NumericConfig& cfg) {
    switch (id) {
        case IdentityId::jackson_8phi7: return std::make_unique<Jackson87>(params, cfg);
        case IdentityId::bailey_6psi6: return std::make_unique<Bailey66>(params, cfg);
        case IdentityId::qbinomial: return std::make_unique<QBinomial>(params);
        case IdentityId::milne_ar_8phi7: return std::make_unique<MilneAr87>(params, cfg);
        case IdentityId::bhatnagar_ar_6phi5: return std::make_unique<BhatnagarAr65>(params, cfg);
        case IdentityId::new_ar_8phi7: return std::make_unique<NewAr87>(params, cfg);
        case IdentityId::new_ar_8phi7_poly: return std::make_unique<NewAr87Poly>(params, cfg);
        case IdentityId::new_ar_8phi7_special: return std::make_unique<NewAr87Special>(params, cfg);
        case IdentityId::new_ar_6phi5_nonterm: return std::make_unique<NewAr65Nonterm>(params, cfg);
        case IdentityId::new_ar_6phi5_term: return std::make_unique<NewAr65Term>(params, cfg);
        case IdentityId::new_ar_6psi6: return std::make_unique<NewAr66>(params, cfg);
    }
    throw Error(ErrorKind::Schema, "unknown identity");
}

}  // namespace qhyper
