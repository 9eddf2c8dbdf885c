#include <algorithm>
#include <map>
#include <string>

#include "qhyper/identities.hpp"

namespace qhyper {

namespace {

using Kind = SummationDomain::Kind;

bool q_in_unit_disc(const ParameterAssignment& p) { return p.q && !p.q->is_zero() && p.q->abs_less_than(1.0); }

Constraint q_constraint() { return {"0 < |q| < 1", q_in_unit_disc}; }

Constraint modulus_below_one(std::string text, std::function<Scalar(const ParameterAssignment&)> argument) {
    return {std::move(text), [argument = std::move(argument)](const ParameterAssignment& p) {
                return argument(p).abs_less_than(1.0);
            }};
}

Scalar bailey_argument(const ParameterAssignment& p) {
    return *p.a * *p.a * *p.q / (*p.b * *p.c * *p.d * p.e_vec->at(0));
}

Scalar n65_argument(const ParameterAssignment& p) { return *p.a * *p.q / (*p.b * p.C() * *p.d); }

Scalar n66_argument(const ParameterAssignment& p) {
    return ipow(*p.a, static_cast<std::int64_t>(p.r) + 1) * *p.q / (*p.b * p.C() * *p.d * p.E());
}

IdentityDescriptor make(IdentityId id, std::string title, std::vector<Field> schema, Kind domain,
                        std::vector<Constraint> extra, std::vector<std::string> notes = {}) {
    IdentityDescriptor d;
    d.id = id;
    d.title = std::move(title);
    d.schema = std::move(schema);
    d.domain = domain;
    d.constraints.push_back(q_constraint());
    for (auto& c : extra) d.constraints.push_back(std::move(c));
    d.notes = std::move(notes);
    d.lhs_term = [id](const MultiIndex& k, const ParameterAssignment& p, const NumericConfig& cfg) {
        const auto kernel = make_kernel(id, p, cfg);
        DirectQFactorials source(kernel->q(), kernel->bases(), cfg);
        return kernel->term(k, source);
    };
    d.rhs_value = [id](const ParameterAssignment& p, const NumericConfig& cfg) {
        return make_kernel(id, p, cfg)->rhs(cfg);
    };
    return d;
}

std::map<IdentityId, IdentityDescriptor> build_registry() {
    using F = Field;
    std::map<IdentityId, IdentityDescriptor> out;
    auto add = [&](IdentityDescriptor d) { out.emplace(d.id, std::move(d)); };

    auto jackson = make(IdentityId::jackson_8phi7, "Jackson's terminating very-well-poised balanced 8phi7 summation",
                        {F::q, F::a, F::b, F::c, F::d, F::n_vec}, Kind::Box, {},
                        {"series is balanced and very-well-poised; the pairs q sqrt(a), -q sqrt(a) / sqrt(a), "
                         "-sqrt(a) enter as the factor (1 - a q^{2k}) / (1 - a)",
                         "n_vec holds the single terminating index n"});
    jackson.rank_one_only = true;
    add(std::move(jackson));

    auto bailey = make(IdentityId::bailey_6psi6, "Bailey's very-well-poised 6psi6 summation",
                       {F::q, F::a, F::b, F::c, F::d, F::e_vec}, Kind::Bilateral,
                       {modulus_below_one("|a^2 q / bcde| < 1", bailey_argument)},
                       {"e_vec holds the single parameter e", "float backend only"});
    bailey.rank_one_only = true;
    add(std::move(bailey));

    auto qbin = make(IdentityId::qbinomial, "q-binomial theorem", {F::q, F::a, F::z}, Kind::Unilateral,
                     {modulus_below_one("|z| < 1", [](const ParameterAssignment& p) { return *p.z; })},
                     {"float backend only"});
    qbin.rank_one_only = true;
    add(std::move(qbin));

    add(make(IdentityId::milne_ar_8phi7, "Milne's A_r terminating very-well-poised balanced 8phi7 summation",
             {F::q, F::a, F::b, F::c, F::d, F::x_vec, F::n_vec}, Kind::Box, {}));
    add(make(IdentityId::bhatnagar_ar_6phi5, "Bhatnagar's A_r terminating very-well-poised 6phi5 summation",
             {F::q, F::a, F::b, F::c, F::x_vec, F::n_vec}, Kind::Box, {}));
    add(make(IdentityId::new_ar_8phi7, "A_r terminating very-well-poised balanced 8phi7 summation",
             {F::q, F::a, F::b, F::c, F::d, F::x_vec, F::n_vec}, Kind::Box, {},
             {"reduces to Jackson's 8phi7 at r = 1 with d -> d/x_1"}));
    add(make(IdentityId::new_ar_8phi7_poly,
             "A_r terminating very-well-poised balanced 8phi7 summation, polynomial form in c_1..c_r",
             {F::q, F::a, F::b, F::c_vec, F::d, F::x_vec, F::N}, Kind::Simplex, {},
             {"C = c_1 ... c_r", "N is independent of any n_vec"}));
    add(make(IdentityId::new_ar_8phi7_special,
             "A_r terminating very-well-poised balanced 8phi7 summation, b -> a^2 q^{1+N} / bCd form",
             {F::q, F::a, F::b, F::c_vec, F::d, F::x_vec, F::N}, Kind::Simplex, {}, {"C = c_1 ... c_r"}));
    add(make(IdentityId::new_ar_6phi5_nonterm, "A_r nonterminating very-well-poised 6phi5 summation",
             {F::q, F::a, F::b, F::c_vec, F::d, F::x_vec}, Kind::Unilateral,
             {modulus_below_one("|aq / bCd| < 1", n65_argument)}, {"C = c_1 ... c_r", "float backend only"}));
    add(make(IdentityId::new_ar_6phi5_term, "A_r terminating very-well-poised 6phi5 summation",
             {F::q, F::a, F::b, F::c, F::x_vec, F::n_vec}, Kind::Box, {}));
    add(make(IdentityId::new_ar_6psi6, "A_r very-well-poised 6psi6 summation",
             {F::q, F::a, F::b, F::c_vec, F::d, F::e_vec, F::x_vec}, Kind::Bilateral,
             {modulus_below_one("|a^{r+1}q / bCdE| < 1", n66_argument)},
             {"C = c_1 ... c_r, E = e_1 ... e_r",
              "the bound is on the modulus of the series argument a^{r+1}q / bCdE",
              "reduces to Bailey's 6psi6 at r = 1 with b -> b x_1, d -> d/x_1",
              "reduces to the nonterminating A_r 6phi5 when every e_i = a", "float backend only"}));
    return out;
}

const std::map<IdentityId, IdentityDescriptor>& registry() {
    static const std::map<IdentityId, IdentityDescriptor> instance = build_registry();
    return instance;
}

bool is_vector_field(Field f) { return f == Field::c_vec || f == Field::e_vec || f == Field::x_vec; }

}  // namespace

const IdentityDescriptor& descriptor(IdentityId id) { return registry().at(id); }

void validate_parameters(IdentityId id, const ParameterAssignment& p) {
    const IdentityDescriptor& d = descriptor(id);
    const std::string name(to_string(id));
    if (p.r < 1) throw Error(ErrorKind::Schema, name + ": r must be positive");
    if (d.rank_one_only && p.r != 1) throw Error(ErrorKind::Schema, name + " is defined for r = 1 only");
    const Field all_fields[] = {Field::q,     Field::a,     Field::b,     Field::c,     Field::d,    Field::z,
                                Field::c_vec, Field::e_vec, Field::x_vec, Field::n_vec, Field::N};
    for (Field f : all_fields) {
        const bool wanted = std::find(d.schema.begin(), d.schema.end(), f) != d.schema.end();
        if (wanted != p.has(f)) {
            throw Error(ErrorKind::Schema, name + (wanted ? ": missing " : ": unexpected ") +
                                               std::string(to_string(f)));
        }
    }
    const bool exact = p.q->is_exact();
    auto check_backend = [&](const Scalar& s) {
        if (s.is_exact() != exact) throw Error(ErrorKind::BackendMismatch, name + ": parameters mix backends");
    };
    for (const auto* s : {&p.a, &p.b, &p.c, &p.d, &p.z})
        if (*s) check_backend(**s);
    for (Field f : d.schema) {
        if (!is_vector_field(f)) continue;
        const auto& v = f == Field::c_vec ? *p.c_vec : f == Field::e_vec ? *p.e_vec : *p.x_vec;
        if (v.size() != p.r) {
            throw Error(ErrorKind::Schema, name + ": " + std::string(to_string(f)) + " must have length r");
        }
        for (const auto& s : v) check_backend(s);
    }
    if (p.n_vec) {
        if (p.n_vec->rank() != p.r) throw Error(ErrorKind::Schema, name + ": n_vec must have rank r");
        if (p.n_vec->min() < 0) throw Error(ErrorKind::Schema, name + ": n_vec entries must be nonnegative");
    }
    if (p.N && *p.N < 0) throw Error(ErrorKind::Schema, name + ": N must be nonnegative");
    for (const auto& c : d.constraints) {
        if (!c.holds(p)) throw Error(ErrorKind::ConstraintViolated, name + ": " + c.description + " fails");
    }
}

Evaluation eval_lhs(IdentityId id, const ParameterAssignment& params, const NumericConfig& cfg,
                    FactorialStrategy strategy) {
    cfg.validate();
    validate_parameters(id, params);
    const auto kernel = make_kernel(id, params, cfg);
    const auto source = kernel->source(strategy, cfg);
    return sum_series(*kernel, *source, cfg);
}

Scalar eval_rhs(IdentityId id, const ParameterAssignment& params, const NumericConfig& cfg) {
    cfg.validate();
    validate_parameters(id, params);
    return make_kernel(id, params, cfg)->rhs(cfg);
}

VerificationReport verify_instance(IdentityId id, const ParameterAssignment& params, const NumericConfig& cfg,
                                   FactorialStrategy strategy) {
    VerificationReport report;
    report.id = std::string(to_string(id));
    report.r = params.r;
    report.parameters = params.describe();
    try {
        report.backend = params.backend();
        Evaluation lhs = eval_lhs(id, params, cfg, strategy);
        Scalar rhs = eval_rhs(id, params, cfg);
        report.truncation = lhs.truncation;
        if (report.backend.is_exact()) {
            report.pass = lhs.value == rhs;
            report.residual = report.pass ? 0.0 : relative_residual(lhs.value, rhs);
        } else {
            report.residual = relative_residual(lhs.value, rhs);
            report.pass = report.residual < 100.0 * cfg.epsilon_tail;
        }
        report.lhs = std::move(lhs.value);
        report.rhs = std::move(rhs);
        if (!report.pass) report.detail = "sides differ";
    } catch (const Error& e) {
        report.pass = false;
        report.detail = e.what();
    }
    return report;
}

}  // namespace qhyper
