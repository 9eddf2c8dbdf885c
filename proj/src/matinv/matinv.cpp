#include "qhyper/matinv.hpp"

#include <optional>

#include "qhyper/qpoch.hpp"

namespace qhyper {

Sequence Sequence::geometric(Scalar base, Scalar ratio) {
    Sequence s;
    s.geometric_ = true;
    s.base_ = std::move(base);
    s.ratio_ = std::move(ratio);
    return s;
}

Sequence Sequence::table(std::int64_t first, std::vector<Scalar> values) {
    Sequence s;
    s.geometric_ = false;
    s.first_ = first;
    s.values_ = std::move(values);
    return s;
}

Scalar Sequence::at(std::int64_t t) const {
    if (geometric_) return base_ * ipow(ratio_, t);
    const std::int64_t offset = t - first_;
    if (offset < 0 || offset >= static_cast<std::int64_t>(values_.size())) {
        throw Error(ErrorKind::Range, "sequence index " + std::to_string(t) + " outside table window [" +
                                          std::to_string(first_) + ", " +
                                          std::to_string(first_ + static_cast<std::int64_t>(values_.size())) +
                                          ")");
    }
    return values_[static_cast<std::size_t>(offset)];
}

namespace {

void require_below(const MultiIndex& lower, const MultiIndex& upper, std::size_t rank, const char* what) {
    if (lower.rank() != rank || upper.rank() != rank) {
        throw Error(ErrorKind::Schema, std::string(what) + ": index rank differs from sequence rank");
    }
    if (!lower.leq(upper)) {
        throw Error(ErrorKind::Range, std::string(what) + " is only defined for " + lower.to_string() +
                                          " <= " + upper.to_string());
    }
}

// (1 - a * prod_j c_j(k_j)) * prod_j (a - c_j(k_j))
Scalar general_factor(const Scalar& value, const Scalar& c_product, std::span<const Scalar> c_at_k) {
    Scalar out = one_minus(value * c_product);
    for (const auto& c : c_at_k) out *= value - c;
    return out;
}

Scalar product_of(std::span<const Scalar> values, Backend backend) {
    Scalar out = Scalar::one(backend);
    for (const auto& v : values) out *= v;
    return out;
}

}  // namespace

Scalar f_general(const MultiIndex& n, const MultiIndex& k, const SequenceSpec& s, const NumericConfig& cfg) {
    const std::size_t r = s.rank();
    require_below(k, n, r, "f_general");
    std::vector<Scalar> c_at_k;
    for (std::size_t j = 0; j < r; ++j) c_at_k.push_back(s.c[j].at(k[j]));
    const Backend backend = c_at_k.front().backend();
    const Scalar c_product = product_of(c_at_k, backend);

    Scalar numerator = Scalar::one(backend);
    for (std::int64_t t = k.norm(); t < n.norm(); ++t) numerator *= general_factor(s.a.at(t), c_product, c_at_k);

    Scalar denominator = Scalar::one(backend);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::int64_t t = k[i] + 1; t <= n[i]; ++t) {
            Scalar factor = general_factor(s.c[i].at(t), c_product, c_at_k);
            if (is_pole_factor(factor, cfg)) {
                throw Error(ErrorKind::Pole, "f_general(" + n.to_string() + "," + k.to_string() +
                                                 ") denominator vanishes at i=" + std::to_string(i + 1) +
                                                 ", t=" + std::to_string(t));
            }
            denominator *= factor;
        }
    }
    return numerator / denominator;
}

Scalar g_general(const MultiIndex& k, const MultiIndex& l, const SequenceSpec& s, const NumericConfig& cfg) {
    const std::size_t r = s.rank();
    require_below(l, k, r, "g_general");
    std::vector<Scalar> c_at_k;
    std::vector<Scalar> c_at_l;
    for (std::size_t j = 0; j < r; ++j) {
        c_at_k.push_back(s.c[j].at(k[j]));
        c_at_l.push_back(s.c[j].at(l[j]));
    }
    const Backend backend = c_at_k.front().backend();
    const Scalar ck_product = product_of(c_at_k, backend);
    const Scalar cl_product = product_of(c_at_l, backend);
    const std::string where = "g_general(" + k.to_string() + "," + l.to_string() + ")";

    Scalar numerator = Scalar::one(backend);
    Scalar denominator = Scalar::one(backend);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i + 1; j < r; ++j) {
            numerator *= c_at_l[i] - c_at_l[j];
            denominator *= c_at_k[i] - c_at_k[j];
        }
    }
    const Scalar a_l = s.a.at(l.norm());
    const Scalar a_k = s.a.at(k.norm());
    numerator *= one_minus(a_l * cl_product);
    denominator *= one_minus(a_k * ck_product);
    for (std::size_t j = 0; j < r; ++j) {
        numerator *= a_l - c_at_l[j];
        denominator *= a_k - c_at_k[j];
    }
    for (std::int64_t t = l.norm() + 1; t <= k.norm(); ++t) {
        numerator *= general_factor(s.a.at(t), ck_product, c_at_k);
    }
    for (std::size_t i = 0; i < r; ++i) {
        for (std::int64_t t = l[i]; t < k[i]; ++t) {
            denominator *= general_factor(s.c[i].at(t), ck_product, c_at_k);
        }
    }
    return checked_divide(numerator, denominator, cfg, where.c_str());
}

Scalar f_mmic(const MultiIndex& n, const MultiIndex& k, const MmicParams& p, const NumericConfig& cfg) {
    const std::size_t r = p.rank();
    require_below(k, n, r, "f_mmic");
    const Scalar& q = p.q;
    const std::int64_t kk = k.norm();
    const std::int64_t span = n.norm() - kk;
    const Scalar ab = p.a * p.b;

    Scalar out = qpoch(ab * ipow(q, 2 * kk), q, span, cfg);
    for (std::size_t i = 0; i < r; ++i) {
        out *= qpoch(p.a * ipow(q, kk - k[i]) / p.x[i], q, span, cfg);
        out *= qpoch_reciprocal(p.b * p.x[i] * ipow(q, 1 + k[i] + kk), q, n[i] - k[i], cfg);
        for (std::size_t j = 0; j < r; ++j) {
            out *= qpoch_reciprocal(ipow(q, 1 + k[i] - k[j]) * p.x[i] / p.x[j], q, n[i] - k[i], cfg);
        }
    }
    return out;
}

Scalar g_mmic(const MultiIndex& k, const MultiIndex& l, const MmicParams& p, const NumericConfig& cfg) {
    const std::size_t r = p.rank();
    require_below(l, k, r, "g_mmic");
    const Scalar& q = p.q;
    const std::int64_t kk = k.norm();
    const std::int64_t ll = l.norm();
    const std::int64_t span = kk - ll;
    const Scalar ab = p.a * p.b;
    const std::string where = "g_mmic(" + k.to_string() + "," + l.to_string() + ")";

    Scalar out = ipow(q, binom2(span));
    if (span % 2 != 0) out = -out;
    out *= one_minus(ab * ipow(q, 2 * ll));
    out = checked_divide(out, one_minus(ab * ipow(q, 2 * kk)), cfg, where.c_str());
    out *= qpoch(ab * ipow(q, 1 + ll + kk), q, span, cfg);
    for (std::size_t i = 0; i < r; ++i) {
        out *= one_minus(p.a * ipow(q, ll - l[i]) / p.x[i]);
        out = checked_divide(out, one_minus(p.a * ipow(q, kk - k[i]) / p.x[i]), cfg, where.c_str());
        out *= qpoch(p.a * ipow(q, 1 + ll - k[i]) / p.x[i], q, span, cfg);
        out *= qpoch_reciprocal(p.b * p.x[i] * ipow(q, l[i] + kk), q, k[i] - l[i], cfg);
        for (std::size_t j = 0; j < r; ++j) {
            out *= qpoch_reciprocal(ipow(q, 1 + l[i] - l[j]) * p.x[i] / p.x[j], q, k[i] - l[i], cfg);
        }
    }
    return out;
}

Scalar mmic_b_from_root(const Scalar& w, std::span<const Scalar> x) {
    Scalar out = ipow(w, static_cast<std::int64_t>(x.size()) + 1);
    for (const auto& v : x) out *= v;
    return out;
}

SequenceSpec mmic_as_general(const Scalar& w, const MmicParams& p) {
    SequenceSpec spec{Sequence::geometric(w * p.a, p.q), {}};
    for (const auto& x : p.x) spec.c.push_back(Sequence::geometric(w * x, p.q));
    return spec;
}

MatrixPair MatrixPair::general(SequenceSpec spec, const NumericConfig& cfg) {
    MatrixPair pair;
    pair.rank = spec.rank();
    pair.provenance = spec;
    pair.f = [spec, cfg](const MultiIndex& n, const MultiIndex& k) { return f_general(n, k, spec, cfg); };
    pair.g = [spec, cfg](const MultiIndex& k, const MultiIndex& l) { return g_general(k, l, spec, cfg); };
    return pair;
}

MatrixPair MatrixPair::mmic(MmicParams params, const NumericConfig& cfg) {
    MatrixPair pair;
    pair.rank = params.rank();
    pair.provenance = params;
    pair.f = [params, cfg](const MultiIndex& n, const MultiIndex& k) { return f_mmic(n, k, params, cfg); };
    pair.g = [params, cfg](const MultiIndex& k, const MultiIndex& l) { return g_mmic(k, l, params, cfg); };
    return pair;
}

namespace {

// Lower-triangular entries over the box [0, bound], memoized by linear index.
class TriangularCache {
public:
    TriangularCache(const MatrixEntry& entry, std::vector<MultiIndex> points)
        : entry_(entry), points_(std::move(points)), values_(points_.size() * points_.size()) {}

    const Scalar& at(std::size_t row, std::size_t col) {
        auto& slot = values_[row * points_.size() + col];
        if (!slot) {
            try {
                slot = entry_(points_[row], points_[col]);
            } catch (const Error& e) {
                throw Error(e.kind(), e.message() + " at (" + points_[row].to_string() + ", " +
                                          points_[col].to_string() + ")");
            }
        }
        return *slot;
    }

private:
    const MatrixEntry& entry_;
    std::vector<MultiIndex> points_;
    std::vector<std::optional<Scalar>> values_;
};

}  // namespace

VerificationReport verify_orthogonality(const MatrixPair& pair, const MultiIndex& bound) {
    VerificationReport report;
    report.id = std::holds_alternative<SequenceSpec>(pair.provenance) ? "orthogonality/general"
                                                                      : "orthogonality/mmic";
    report.r = pair.rank;
    if (bound.rank() != pair.rank) throw Error(ErrorKind::Schema, "bound rank differs from matrix rank");

    std::vector<MultiIndex> points;
    for (const auto& p : iterate(SummationDomain::box(bound))) points.push_back(p);
    TriangularCache f(pair.f, points);
    TriangularCache g(pair.g, points);

    std::size_t sums = 0;
    try {
        for (std::size_t ni = 0; ni < points.size(); ++ni) {
            for (std::size_t li = 0; li < points.size(); ++li) {
                if (!points[li].leq(points[ni])) continue;
                for (int dual = 0; dual < 2; ++dual) {
                    TriangularCache& left = dual == 0 ? f : g;
                    TriangularCache& right = dual == 0 ? g : f;
                    std::optional<Scalar> sum;
                    for (std::size_t ki = 0; ki < points.size(); ++ki) {
                        if (!points[li].leq(points[ki]) || !points[ki].leq(points[ni])) continue;
                        Scalar term = left.at(ni, ki) * right.at(ki, li);
                        sum = sum ? *sum + term : term;
                    }
                    ++sums;
                    report.backend = sum->backend();
                    const Scalar expected = ni == li ? Scalar::one(sum->backend()) : Scalar::zero(sum->backend());
                    if (!sides_agree(*sum, expected)) {
                        report.pass = false;
                        report.lhs = *sum;
                        report.rhs = expected;
                        report.residual = relative_residual(*sum, expected);
                        report.truncation.terms = sums;
                        report.detail = std::string(dual == 0 ? "sum f(n,k)g(k,l)" : "dual sum g(n,k)f(k,l)") +
                                        " differs from delta at n=" + points[ni].to_string() +
                                        ", l=" + points[li].to_string() + ", residual " + sum->to_string();
                        return report;
                    }
                }
            }
        }
    } catch (const Error& e) {
        report.pass = false;
        report.truncation.terms = sums;
        report.detail = e.what();
        return report;
    }
    report.pass = true;
    report.truncation.terms = sums;
    report.detail = std::to_string(sums) + " orthogonality sums checked up to " + bound.to_string();
    return report;
}

}  // namespace qhyper
