#include <algorithm>
#include <string>

#include "qhyper/identities.hpp"

namespace qhyper {

namespace {

constexpr int kRetries = 50;

VerificationReport start(std::string id, std::size_t r, std::uint64_t seed, Backend backend) {
    VerificationReport rep;
    rep.id = std::move(id);
    rep.r = r;
    rep.seed = seed;
    rep.backend = backend;
    return rep;
}

// Runs body on derived seeds until it completes without an error, so a
// degenerate specialisation that happens to hit a pole is redrawn.
template <typename Body>
void with_retries(VerificationReport& rep, Body body) {
    std::string last;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        try {
            body(trial_seed(rep.seed, IdentityId::new_ar_6psi6, rep.r, static_cast<std::size_t>(attempt)));
            return;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Mismatch) {
                rep.pass = false;
                rep.detail = e.what();
                return;
            }
            last = e.what();
        }
    }
    rep.pass = false;
    rep.detail = "no admissible instance: " + last;
}

Scalar sum_over(const SeriesKernel& kernel, const NumericConfig& cfg) {
    auto source = kernel.source(FactorialStrategy::Direct, cfg);
    return sum_series(kernel, *source, cfg).value;
}

// (i) the 6psi6 at e_i = a against the nonterminating 6phi5.
VerificationReport bilateral_to_unilateral(std::uint64_t seed, std::size_t r, const NumericConfig& cfg,
                                           unsigned bits) {
    const Backend backend = Backend::floating(bits);
    auto rep = start("degeneration/psi66_to_phi65", r, seed, backend);
    with_retries(rep, [&](std::uint64_t s) {
        SamplingOptions opts;
        opts.backend = backend;
        const ParameterAssignment n65 = sample_parameters(IdentityId::new_ar_6phi5_nonterm, r, s, cfg, opts);
        ParameterAssignment n66 = n65;
        n66.e_vec = std::vector<Scalar>(r, *n65.a);
        rep.parameters = n66.describe();

        const auto kernel = make_kernel(IdentityId::new_ar_6psi6, n66, cfg);
        DirectQFactorials source(kernel->q(), kernel->bases(), cfg);
        std::size_t vanished = 0;
        for_each_cube_shell(r, -1, 3, [&](const MultiIndex& k) {
            if (k.min() >= 0) return;
            if (!kernel->term(k, source).is_zero()) {
                throw Error(ErrorKind::Mismatch, "term at k=" + k.to_string() + " does not vanish");
            }
            ++vanished;
        });

        const Evaluation bilateral = eval_lhs(IdentityId::new_ar_6psi6, n66, cfg);
        const Scalar unilateral = eval_lhs(IdentityId::new_ar_6phi5_nonterm, n65, cfg).value;
        const Scalar rhs66 = eval_rhs(IdentityId::new_ar_6psi6, n66, cfg);
        const Scalar rhs65 = eval_rhs(IdentityId::new_ar_6phi5_nonterm, n65, cfg);
        rep.truncation = bilateral.truncation;
        rep.residual = std::max({relative_residual(bilateral.value, unilateral), relative_residual(rhs66, rhs65),
                                 relative_residual(bilateral.value, rhs65)});
        rep.lhs = bilateral.value;
        rep.rhs = rhs65;
        rep.pass = rep.residual < 100.0 * cfg.epsilon_tail;
        rep.detail = std::to_string(vanished) + " terms with a negative index vanish exactly";
    });
    return rep;
}

// (ii) the nonterminating 6phi5 at c_i = q^{-n_i}, d -> c against the terminating one.
VerificationReport nonterminating_to_terminating(std::uint64_t seed, std::size_t r, const NumericConfig& cfg) {
    auto rep = start("degeneration/phi65_to_phi65_terminating", r, seed, Backend::exact());
    with_retries(rep, [&](std::uint64_t s) {
        const ParameterAssignment t = sample_parameters(IdentityId::new_ar_6phi5_term, r, s, cfg);
        ParameterAssignment u;
        u.r = r;
        u.q = t.q;
        u.a = t.a;
        u.b = t.b;
        u.d = t.c;
        u.x_vec = t.x_vec;
        u.c_vec.emplace();
        for (std::size_t i = 0; i < r; ++i) u.c_vec->push_back(ipow(*t.q, -(*t.n_vec)[i]));
        rep.parameters = u.describe();

        const auto term_kernel = make_kernel(IdentityId::new_ar_6phi5_term, t, cfg);
        const auto general_kernel = make_kernel(IdentityId::new_ar_6phi5_nonterm, u, cfg);
        DirectQFactorials ts(term_kernel->q(), term_kernel->bases(), cfg);
        DirectQFactorials gs(general_kernel->q(), general_kernel->bases(), cfg);
        std::vector<std::int64_t> wider = t.n_vec->entries();
        for (auto& w : wider) ++w;
        Scalar total = Scalar::zero(Backend::exact());
        std::size_t compared = 0;
        for (const MultiIndex& k : iterate(SummationDomain::box(MultiIndex(wider)))) {
            const Scalar g = general_kernel->term(k, gs);
            const Scalar expected = k.leq(*t.n_vec) ? term_kernel->term(k, ts) : Scalar::zero(Backend::exact());
            if (g != expected) throw Error(ErrorKind::Mismatch, "terms differ at k=" + k.to_string());
            total += g;
            ++compared;
        }
        const Scalar rhs = term_kernel->rhs(cfg);
        rep.lhs = total;
        rep.rhs = rhs;
        rep.truncation.terms = compared;
        rep.pass = total == rhs;
        rep.residual = rep.pass ? 0.0 : relative_residual(total, rhs);
        rep.detail = std::to_string(compared) + " terms compared exactly";
    });
    return rep;
}

// (iii) the polynomial 8phi7 at c_j = q^{-n_j}, N = |n| against the new 8phi7 at c = q^{-N}.
VerificationReport polynomial_to_box(std::uint64_t seed, std::size_t r, const NumericConfig& cfg) {
    auto rep = start("degeneration/poly_phi87_to_phi87", r, seed, Backend::exact());
    with_retries(rep, [&](std::uint64_t s) {
        ParameterAssignment box = sample_parameters(IdentityId::new_ar_8phi7, r, s, cfg);
        const std::int64_t total = box.n_vec->norm();
        box.c = ipow(*box.q, -total);
        ParameterAssignment poly;
        poly.r = r;
        poly.q = box.q;
        poly.a = box.a;
        poly.b = box.b;
        poly.d = box.d;
        poly.x_vec = box.x_vec;
        poly.N = total;
        poly.c_vec.emplace();
        for (std::size_t i = 0; i < r; ++i) poly.c_vec->push_back(ipow(*box.q, -(*box.n_vec)[i]));
        rep.parameters = poly.describe();

        const auto box_kernel = make_kernel(IdentityId::new_ar_8phi7, box, cfg);
        const auto poly_kernel = make_kernel(IdentityId::new_ar_8phi7_poly, poly, cfg);
        DirectQFactorials bs(box_kernel->q(), box_kernel->bases(), cfg);
        DirectQFactorials ps(poly_kernel->q(), poly_kernel->bases(), cfg);
        std::size_t compared = 0;
        for (const MultiIndex& k : iterate(poly_kernel->domain())) {
            const Scalar p = poly_kernel->term(k, ps);
            const Scalar expected = k.leq(*box.n_vec) ? box_kernel->term(k, bs) : Scalar::zero(Backend::exact());
            if (p != expected) throw Error(ErrorKind::Mismatch, "terms differ at k=" + k.to_string());
            ++compared;
        }
        const Scalar lhs = sum_over(*poly_kernel, cfg);
        const Scalar rhs_poly = poly_kernel->rhs(cfg);
        const Scalar rhs_box = box_kernel->rhs(cfg);
        rep.lhs = lhs;
        rep.rhs = rhs_box;
        rep.truncation.terms = compared;
        rep.pass = lhs == rhs_box && rhs_poly == rhs_box && sum_over(*box_kernel, cfg) == rhs_box;
        rep.residual = rep.pass ? 0.0 : relative_residual(lhs, rhs_box);
        rep.detail = std::to_string(compared) + " terms compared exactly";
    });
    return rep;
}

// (iv) the special 8phi7 against the polynomial one at b -> a^2 q^{1+N} / bCd.
VerificationReport special_to_polynomial(std::uint64_t seed, std::size_t r, const NumericConfig& cfg) {
    auto rep = start("degeneration/special_phi87_to_poly_phi87", r, seed, Backend::exact());
    with_retries(rep, [&](std::uint64_t s) {
        const ParameterAssignment special = sample_parameters(IdentityId::new_ar_8phi7_special, r, s, cfg);
        ParameterAssignment poly = special;
        poly.b = *special.a * *special.a * ipow(*special.q, 1 + *special.N) / (*special.b * special.C() * *special.d);
        rep.parameters = special.describe();

        const auto sk = make_kernel(IdentityId::new_ar_8phi7_special, special, cfg);
        const auto pk = make_kernel(IdentityId::new_ar_8phi7_poly, poly, cfg);
        DirectQFactorials ss(sk->q(), sk->bases(), cfg);
        DirectQFactorials ps(pk->q(), pk->bases(), cfg);
        std::size_t compared = 0;
        for (const MultiIndex& k : iterate(sk->domain())) {
            if (sk->term(k, ss) != pk->term(k, ps)) {
                throw Error(ErrorKind::Mismatch, "terms differ at k=" + k.to_string());
            }
            ++compared;
        }
        const Scalar lhs = sum_over(*sk, cfg);
        const Scalar rhs = sk->rhs(cfg);
        rep.lhs = lhs;
        rep.rhs = rhs;
        rep.truncation.terms = compared;
        rep.pass = lhs == rhs && rhs == pk->rhs(cfg);
        rep.residual = rep.pass ? 0.0 : relative_residual(lhs, rhs);
        rep.detail = std::to_string(compared) + " terms compared exactly";
    });
    return rep;
}

// (v) classifier flags.
VerificationReport classifier_flags(std::uint64_t seed, const NumericConfig& cfg) {
    auto rep = start("degeneration/classify", 1, seed, Backend::exact());
    with_retries(rep, [&](std::uint64_t s) {
        const ParameterAssignment jp = sample_parameters(IdentityId::jackson_8phi7, 1, s, cfg);
        const ParameterAssignment bp = sample_parameters(IdentityId::bailey_6psi6, 1, s, cfg);
        rep.parameters = jp.describe();
        const SeriesClassifier js = jackson_series(jp);
        const SeriesFlags jf = classify(js);
        const SeriesFlags bf = classify(bailey_series(bp));
        rep.pass = jf.balanced && jf.very_well_poised && js.combined_special.has_value() && bf.very_well_poised;
        rep.detail = std::string("jackson balanced=") + (jf.balanced ? "true" : "false") +
                     " very_well_poised=" + (jf.very_well_poised ? "true" : "false") +
                     "; bailey very_well_poised=" + (bf.very_well_poised ? "true" : "false");
    });
    return rep;
}

}  // namespace

std::vector<VerificationReport> check_degenerations(std::uint64_t seed, const NumericConfig& cfg,
                                                    unsigned precision_bits) {
    std::vector<VerificationReport> out;
    for (std::size_t r : {1, 2}) out.push_back(bilateral_to_unilateral(seed, r, cfg, precision_bits));
    for (std::size_t r : {1, 2}) out.push_back(nonterminating_to_terminating(seed, r, cfg));
    for (std::size_t r : {1, 2}) out.push_back(polynomial_to_box(seed, r, cfg));
    for (std::size_t r : {1, 2}) out.push_back(special_to_polynomial(seed, r, cfg));
    out.push_back(classifier_flags(seed, cfg));
    return out;
}

}  // namespace qhyper
