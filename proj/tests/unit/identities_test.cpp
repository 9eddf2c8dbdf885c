#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "qhyper/identities.hpp"
#include "qhyper/qfactorial_source.hpp"

using namespace qhyper;
using testing::F256;
using testing::Q;

namespace {

const Backend kFloat = Backend::floating(256);

ParameterAssignment box_phi87_example() {
    ParameterAssignment p;
    p.r = 2;
    p.q = Q(1, 2);
    p.a = Q(1, 7);
    p.b = Q(2);
    p.c = Q(3);
    p.d = Q(5);
    p.x_vec = {Q(1), Q(1, 3)};
    p.n_vec = MultiIndex{1, 1};
    return p;
}

Scalar term(IdentityId id, const ParameterAssignment& p, const MultiIndex& k) {
    return descriptor(id).lhs_term(k, p, NumericConfig{});
}

// Swaps slots i and j of every per-index field.
ParameterAssignment swapped(ParameterAssignment p, std::size_t i, std::size_t j) {
    for (auto* v : {&p.c_vec, &p.e_vec, &p.x_vec})
        if (*v) std::swap((**v)[i], (**v)[j]);
    if (p.n_vec) std::swap((*p.n_vec)[i], (*p.n_vec)[j]);
    return p;
}

}  // namespace

TEST_CASE("box 8phi7 at the zero index") {
    ParameterAssignment p = box_phi87_example();
    p.n_vec = MultiIndex{0, 0};
    CHECK(eval_lhs(IdentityId::new_ar_8phi7, p, {}).value == Q(1));
    CHECK(eval_rhs(IdentityId::new_ar_8phi7, p, {}) == Q(1));
    const VerificationReport rep = verify_instance(IdentityId::new_ar_8phi7, p, {});
    CHECK(rep.pass);
    CHECK(rep.residual == 0.0);
}

TEST_CASE("box 8phi7 worked instance") {
    const ParameterAssignment p = box_phi87_example();
    // Direct Fraction summation in tests/oracles.
    CHECK(eval_lhs(IdentityId::new_ar_8phi7, p, {}).value == Q(189812701, 195894105));
    CHECK(eval_rhs(IdentityId::new_ar_8phi7, p, {}) == Q(189812701, 195894105));
}

TEST_CASE("terminating 6phi5 worked instance") {
    ParameterAssignment p;
    p.r = 2;
    p.q = Q(1, 3);
    p.a = Q(1, 3);
    p.b = Q(2, 5);
    p.c = Q(7, 2);
    p.x_vec = {Q(1), Q(1, 5)};
    p.n_vec = MultiIndex{1, 1};
    CHECK(eval_lhs(IdentityId::new_ar_6phi5_term, p, {}).value == Q(1530880, 935557));
    CHECK(eval_rhs(IdentityId::new_ar_6phi5_term, p, {}) == Q(1530880, 935557));
}

TEST_CASE("nonterminating 6phi5 worked instance") {
    ParameterAssignment p;
    p.r = 2;
    p.q = F256(3, 10);
    p.a = F256(2);
    p.b = F256(3);
    p.c_vec = {F256(1, 2), F256(2)};
    p.d = F256(1, 2);
    p.x_vec = {F256(1), F256(1, 3)};
    const Scalar reference = Scalar::from_rational(
        mpq_class("-887403171632872447537235782744847641517418728/100000000000000000000000000000000000000000000"),
        kFloat);
    CHECK(relative_residual(eval_rhs(IdentityId::new_ar_6phi5_nonterm, p, {}), reference) < 1e-28);
    const VerificationReport rep = verify_instance(IdentityId::new_ar_6phi5_nonterm, p, {});
    CHECK(rep.pass);
    CHECK(rep.residual < 1e-28);
}

TEST_CASE("Bailey's product side") {
    ParameterAssignment p;
    p.q = F256(1, 4);
    p.a = F256(1, 3);
    p.b = F256(5, 2);
    p.c = F256(7, 3);
    p.d = F256(-3);
    p.e_vec = {F256(4)};
    const Scalar reference = Scalar::from_rational(
        mpq_class("165674344815475754020249294459612764985756052/1000000000000000000000000000000000000000000000"),
        kFloat);
    CHECK(relative_residual(eval_rhs(IdentityId::bailey_6psi6, p, {}), reference) < 1e-28);
    CHECK(verify_instance(IdentityId::bailey_6psi6, p, {}).residual < 1e-28);
}

TEST_CASE("q-binomial theorem within the tail bound") {
    ParameterAssignment p;
    p.q = F256(-2, 5);
    p.a = F256(7, 3);
    for (long num : {-3, 1, 3}) {
        p.z = F256(num, 5);
        const VerificationReport rep = verify_instance(IdentityId::qbinomial, p, {});
        CHECK(rep.pass);
        CHECK(rep.residual < 1e-28);
    }
    p.z = F256(6, 5);
    CHECK_FALSE(verify_instance(IdentityId::qbinomial, p, {}).pass);
}

TEST_CASE("rank one reductions agree term by term") {
    std::mt19937_64 rng(23);
    const NumericConfig cfg;
    for (int trial = 0; trial < 5; ++trial) {
        const ParameterAssignment n = sample_parameters(IdentityId::new_ar_8phi7, 1, rng(), cfg);
        ParameterAssignment j = n;
        j.x_vec.reset();
        j.d = *n.d / n.x_vec->front();
        for (std::int64_t k = 0; k <= (*n.n_vec)[0]; ++k)
            CHECK(term(IdentityId::new_ar_8phi7, n, MultiIndex{k}) == term(IdentityId::jackson_8phi7, j, MultiIndex{k}));
        CHECK(eval_rhs(IdentityId::new_ar_8phi7, n, cfg) == eval_rhs(IdentityId::jackson_8phi7, j, cfg));
    }

    SamplingOptions opts;
    opts.backend = kFloat;
    for (int trial = 0; trial < 3; ++trial) {
        const ParameterAssignment n = sample_parameters(IdentityId::new_ar_6psi6, 1, rng(), cfg, opts);
        ParameterAssignment b;
        b.q = n.q;
        b.a = n.a;
        b.b = *n.b * n.x_vec->front();
        b.c = n.c_vec->front();
        b.d = *n.d / n.x_vec->front();
        b.e_vec = n.e_vec;
        for (std::int64_t k = -5; k <= 5; ++k) {
            const Scalar lhs = term(IdentityId::new_ar_6psi6, n, MultiIndex{k});
            const Scalar rhs = term(IdentityId::bailey_6psi6, b, MultiIndex{k});
            CHECK(relative_residual(lhs, rhs) < 1e-60);
        }
        CHECK(relative_residual(eval_rhs(IdentityId::new_ar_6psi6, n, cfg), eval_rhs(IdentityId::bailey_6psi6, b, cfg)) <
              1e-60);
    }
}

TEST_CASE("left sides are symmetric under permuting the index slots") {
    const NumericConfig cfg;
    const IdentityId exact_ids[] = {IdentityId::milne_ar_8phi7,    IdentityId::bhatnagar_ar_6phi5,
                                    IdentityId::new_ar_8phi7,      IdentityId::new_ar_8phi7_poly,
                                    IdentityId::new_ar_8phi7_special, IdentityId::new_ar_6phi5_term};
    for (IdentityId id : exact_ids) {
        for (std::uint64_t seed : {1u, 2u}) {
            const ParameterAssignment p = sample_parameters(id, 3, seed, cfg);
            const Scalar base = eval_lhs(id, p, cfg).value;
            CHECK(eval_lhs(id, swapped(p, 0, 2), cfg).value == base);
            CHECK(eval_lhs(id, swapped(p, 1, 2), cfg).value == base);
        }
    }
    SamplingOptions opts;
    opts.backend = kFloat;
    const ParameterAssignment p = sample_parameters(IdentityId::new_ar_6phi5_nonterm, 2, 9, cfg, opts);
    CHECK(relative_residual(eval_lhs(IdentityId::new_ar_6phi5_nonterm, swapped(p, 0, 1), cfg).value,
                            eval_lhs(IdentityId::new_ar_6phi5_nonterm, p, cfg).value) < 1e-28);
}

TEST_CASE("terminating identities in the float backend") {
    const NumericConfig cfg;
    for (IdentityId id : all_identities()) {
        if (!descriptor(id).terminating()) continue;
        for (std::size_t r : {1, 2}) {
            if (descriptor(id).rank_one_only && r != 1) continue;
            const ParameterAssignment p = sample_parameters(id, r, 31, cfg).to(kFloat);
            const VerificationReport rep = verify_instance(id, p, cfg);
            CHECK_MESSAGE(rep.residual < std::ldexp(1.0, -(256 - 16)), to_string(id), " r=", r);
        }
    }
}

TEST_CASE("bilateral terms vanish when every e_i equals a") {
    SamplingOptions opts;
    opts.backend = kFloat;
    ParameterAssignment p = sample_parameters(IdentityId::new_ar_6psi6, 2, 4, NumericConfig{}, opts);
    p.e_vec = std::vector<Scalar>(2, *p.a);
    for (const MultiIndex& k : {MultiIndex{-1, 0}, MultiIndex{2, -3}, MultiIndex{-2, -2}})
        CHECK(term(IdentityId::new_ar_6psi6, p, k).is_zero());
}

TEST_CASE("bilateral A_r summation on the lattice e_i = a q^{-m_i}") {
    // Off this lattice the rank-two sides disagree; see the README.
    SamplingOptions opts;
    opts.backend = kFloat;
    ParameterAssignment p = sample_parameters(IdentityId::new_ar_6psi6, 2, 12, NumericConfig{}, opts);
    for (const auto& m : {std::pair{0, 0}, std::pair{1, 0}, std::pair{1, 2}}) {
        p.e_vec = std::vector<Scalar>{*p.a * ipow(*p.q, -m.first), *p.a * ipow(*p.q, -m.second)};
        const VerificationReport rep = verify_instance(IdentityId::new_ar_6psi6, p, NumericConfig{});
        CHECK_MESSAGE(rep.residual < 1e-25, rep.detail);
    }
}

TEST_CASE("sampling is deterministic and respects the argument bounds") {
    const NumericConfig cfg;
    const auto first = sample_parameters(IdentityId::new_ar_8phi7, 1, 1, cfg).describe();
    CHECK(first == sample_parameters(IdentityId::new_ar_8phi7, 1, 1, cfg).describe());
    CHECK(first != sample_parameters(IdentityId::new_ar_8phi7, 1, 2, cfg).describe());

    SamplingOptions opts;
    opts.backend = kFloat;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (std::size_t r : {1, 2, 3}) {
            const ParameterAssignment p = sample_parameters(IdentityId::new_ar_6phi5_nonterm, r, seed, cfg, opts);
            CHECK((*p.a * *p.q / (*p.b * p.C() * *p.d)).abs_less_than(0.6 + 1e-12));
            const ParameterAssignment s = sample_parameters(IdentityId::new_ar_6psi6, r, seed, cfg, opts);
            const Scalar z = ipow(*s.a, static_cast<std::int64_t>(r) + 1) * *s.q / (*s.b * s.C() * *s.d * s.E());
            CHECK(z.abs_less_than(0.6 + 1e-12));
        }
    }
}

TEST_CASE("parameter validation") {
    ParameterAssignment p = box_phi87_example();
    p.z = Q(1, 2);
    CHECK_THROWS_AS(validate_parameters(IdentityId::new_ar_8phi7, p), Error);
    p = box_phi87_example();
    p.x_vec->pop_back();
    CHECK_THROWS_AS(validate_parameters(IdentityId::new_ar_8phi7, p), Error);
    p = box_phi87_example();
    p.q = Q(3, 2);
    try {
        validate_parameters(IdentityId::new_ar_8phi7, p);
        FAIL("expected a constraint violation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConstraintViolated);
    }
    ParameterAssignment qb;
    qb.q = Q(1, 2);
    qb.a = Q(1, 3);
    qb.z = Q(1, 5);
    CHECK_THROWS_AS(eval_lhs(IdentityId::qbinomial, qb, {}), Error);
    CHECK_FALSE(verify_instance(IdentityId::qbinomial, qb, {}).pass);
}

TEST_CASE("series classification") {
    const NumericConfig cfg;
    const ParameterAssignment jp = sample_parameters(IdentityId::jackson_8phi7, 1, 5, cfg);
    const SeriesFlags jf = classify(jackson_series(jp));
    CHECK(jf.balanced);
    CHECK(jf.well_poised);
    CHECK(jf.very_well_poised);

    ParameterAssignment bp;
    bp.q = Q(1, 4);
    bp.a = Q(1, 3);
    bp.b = Q(5, 2);
    bp.c = Q(7, 3);
    bp.d = Q(-3);
    bp.e_vec = {Q(4)};
    CHECK(classify(bailey_series(bp)).very_well_poised);

    // A single upper parameter: the well-poised chain is empty.
    SeriesClassifier single;
    single.upper = {Q(2, 3)};
    single.argument = Q(1, 5);
    single.base = Q(1, 2);
    CHECK(classify(single).well_poised);
    CHECK_FALSE(classify(single).very_well_poised);

    // Breaking one pair destroys well-poisedness.
    SeriesClassifier broken = jackson_series(jp);
    broken.lower[1] += Q(1);
    CHECK_FALSE(classify(broken).well_poised);
}
