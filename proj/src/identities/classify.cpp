#include <string>

#include "qhyper/identities.hpp"

namespace qhyper {

namespace {

Scalar product(const std::vector<Scalar>& values, const Scalar& one) {
    Scalar p = one;
    for (const auto& v : values) p *= v;
    return p;
}

}  // namespace

SeriesFlags classify(const SeriesClassifier& series) {
    const auto& upper = series.upper;
    const auto& lower = series.lower;
    const Scalar& q = series.base;
    const Scalar one = Scalar::one(q.backend());
    SeriesFlags flags;

    if (series.kind == SeriesClassifier::Kind::Phi) {
        if (upper.empty() || lower.size() + 1 != upper.size()) {
            throw Error(ErrorKind::Schema, "a phi series needs s upper and s-1 lower parameters");
        }
        // well-poised: a_1 q = a_{i+1} b_i for every i; a single upper parameter
        // leaves the chain empty and counts as well-poised.
        bool wp = true;
        for (std::size_t i = 0; i < lower.size(); ++i) wp = wp && upper[0] * q == upper[i + 1] * lower[i];
        if (series.combined_special) {
            // The implicit pairs (q sqrt(a), sqrt(a)) and (-q sqrt(a), -sqrt(a))
            // contribute a q to the chain and -q^2 a, -a to the two products.
            wp = wp && *series.combined_special == upper[0];
            flags.well_poised = wp;
            flags.very_well_poised = wp;
            flags.balanced = series.argument == q && product(lower, one) == q * q * q * product(upper, one);
            return flags;
        }
        flags.well_poised = wp;
        flags.very_well_poised =
            wp && upper.size() >= 3 && upper[1] == -upper[2] && upper[1] * upper[1] == q * q * upper[0];
        flags.balanced = series.argument == q && product(lower, one) == q * product(upper, one);
        return flags;
    }

    if (upper.empty() || lower.size() != upper.size()) {
        throw Error(ErrorKind::Schema, "a psi series needs s upper and s lower parameters");
    }
    if (series.combined_special) {
        bool wp = true;
        for (std::size_t i = 0; i < upper.size(); ++i) wp = wp && upper[i] * lower[i] == q * *series.combined_special;
        flags.well_poised = wp;
        flags.very_well_poised = wp;
        return flags;
    }
    bool wp = true;
    for (std::size_t i = 1; i < upper.size(); ++i) wp = wp && upper[i] * lower[i] == upper[0] * lower[0];
    flags.well_poised = wp;
    flags.very_well_poised = wp && upper.size() >= 2 && upper[0] == -upper[1] && upper[0] == q * lower[0] &&
                             upper[0] == -(q * lower[1]);
    return flags;
}

SeriesClassifier jackson_series(const ParameterAssignment& p) {
    if (!p.q || !p.a || !p.b || !p.c || !p.d || !p.n_vec || p.n_vec->rank() != 1) {
        throw Error(ErrorKind::Schema, "Jackson's series needs q, a, b, c, d and a rank-one n_vec");
    }
    const Scalar& q = *p.q;
    const Scalar& a = *p.a;
    const Scalar bcd = *p.b * *p.c * *p.d;
    const std::int64_t n = (*p.n_vec)[0];
    SeriesClassifier s;
    s.kind = SeriesClassifier::Kind::Phi;
    s.upper = {a, *p.b, *p.c, *p.d, a * a * ipow(q, 1 + n) / bcd, ipow(q, -n)};
    s.lower = {a * q / *p.b, a * q / *p.c, a * q / *p.d, bcd * ipow(q, -n) / a, a * ipow(q, 1 + n)};
    s.argument = q;
    s.base = q;
    s.combined_special = a;
    return s;
}

SeriesClassifier bailey_series(const ParameterAssignment& p) {
    if (!p.q || !p.a || !p.b || !p.c || !p.d || !p.e_vec || p.e_vec->size() != 1) {
        throw Error(ErrorKind::Schema, "Bailey's series needs q, a, b, c, d and a one-entry e_vec");
    }
    const Scalar& q = *p.q;
    const Scalar& a = *p.a;
    const Scalar& e = p.e_vec->front();
    SeriesClassifier s;
    s.kind = SeriesClassifier::Kind::Psi;
    s.upper = {*p.b, *p.c, *p.d, e};
    s.lower = {a * q / *p.b, a * q / *p.c, a * q / *p.d, a * q / e};
    s.argument = a * a * q / (*p.b * *p.c * *p.d * e);
    s.base = q;
    s.combined_special = a;
    return s;
}

}  // namespace qhyper
