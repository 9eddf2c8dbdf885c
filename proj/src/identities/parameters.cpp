#include <algorithm>
#include <array>

#include "qhyper/identities.hpp"

namespace qhyper {

namespace {

constexpr std::array<std::pair<IdentityId, std::string_view>, 11> kIdentityNames{{
    {IdentityId::jackson_8phi7, "jackson_8phi7"},
    {IdentityId::bailey_6psi6, "bailey_6psi6"},
    {IdentityId::qbinomial, "qbinomial"},
    {IdentityId::milne_ar_8phi7, "milne_ar_8phi7"},
    {IdentityId::bhatnagar_ar_6phi5, "bhatnagar_ar_6phi5"},
    {IdentityId::new_ar_8phi7, "new_ar_8phi7"},
    {IdentityId::new_ar_8phi7_poly, "new_ar_8phi7_poly"},
    {IdentityId::new_ar_8phi7_special, "new_ar_8phi7_special"},
    {IdentityId::new_ar_6phi5_nonterm, "new_ar_6phi5_nonterm"},
    {IdentityId::new_ar_6phi5_term, "new_ar_6phi5_term"},
    {IdentityId::new_ar_6psi6, "new_ar_6psi6"},
}};

Scalar product(const std::optional<std::vector<Scalar>>& values, const char* name, const Scalar& like) {
    if (!values) throw Error(ErrorKind::Schema, std::string("missing ") + name);
    Scalar p = Scalar::one(like.backend());
    for (const auto& v : *values) p *= v;
    return p;
}

std::string join(const std::vector<Scalar>& values) {
    std::string out = "(";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += values[i].to_string();
    }
    return out + ")";
}

}  // namespace

std::string_view to_string(IdentityId id) noexcept {
    for (const auto& [value, name] : kIdentityNames)
        if (value == id) return name;
    return "unknown";
}

std::optional<IdentityId> parse_identity(std::string_view name) {
    for (const auto& [value, text] : kIdentityNames)
        if (text == name) return value;
    return std::nullopt;
}

const std::vector<IdentityId>& all_identities() {
    static const std::vector<IdentityId> ids = [] {
        std::vector<IdentityId> out;
        for (const auto& entry : kIdentityNames) out.push_back(entry.first);
        return out;
    }();
    return ids;
}

std::string_view to_string(Field field) noexcept {
    switch (field) {
        case Field::q: return "q";
        case Field::a: return "a";
        case Field::b: return "b";
        case Field::c: return "c";
        case Field::d: return "d";
        case Field::z: return "z";
        case Field::c_vec: return "c_vec";
        case Field::e_vec: return "e_vec";
        case Field::x_vec: return "x_vec";
        case Field::n_vec: return "n_vec";
        case Field::N: return "N";
    }
    return "?";
}

Scalar ParameterAssignment::C() const {
    if (!q) throw Error(ErrorKind::Schema, "missing q");
    return product(c_vec, "c_vec", *q);
}

Scalar ParameterAssignment::E() const {
    if (!q) throw Error(ErrorKind::Schema, "missing q");
    return product(e_vec, "e_vec", *q);
}

bool ParameterAssignment::has(Field field) const {
    switch (field) {
        case Field::q: return q.has_value();
        case Field::a: return a.has_value();
        case Field::b: return b.has_value();
        case Field::c: return c.has_value();
        case Field::d: return d.has_value();
        case Field::z: return z.has_value();
        case Field::c_vec: return c_vec.has_value();
        case Field::e_vec: return e_vec.has_value();
        case Field::x_vec: return x_vec.has_value();
        case Field::n_vec: return n_vec.has_value();
        case Field::N: return N.has_value();
    }
    return false;
}

Backend ParameterAssignment::backend() const {
    if (!q) throw Error(ErrorKind::Schema, "missing q");
    return q->backend();
}

ParameterAssignment ParameterAssignment::to(Backend target) const {
    ParameterAssignment out = *this;
    for (auto* s : {&out.q, &out.a, &out.b, &out.c, &out.d, &out.z})
        if (*s) *s = (*s)->to(target);
    for (auto* v : {&out.c_vec, &out.e_vec, &out.x_vec})
        if (*v)
            for (auto& s : **v) s = s.to(target);
    return out;
}

std::vector<std::pair<std::string, std::string>> ParameterAssignment::describe() const {
    std::vector<std::pair<std::string, std::string>> out;
    const std::pair<const char*, const std::optional<Scalar>*> scalars[] = {
        {"q", &q}, {"a", &a}, {"b", &b}, {"c", &c}, {"d", &d}, {"z", &z}};
    for (const auto& [name, value] : scalars)
        if (*value) out.emplace_back(name, (*value)->to_string());
    const std::pair<const char*, const std::optional<std::vector<Scalar>>*> vectors[] = {
        {"c_vec", &c_vec}, {"e_vec", &e_vec}, {"x_vec", &x_vec}};
    for (const auto& [name, value] : vectors)
        if (*value) out.emplace_back(name, join(**value));
    if (n_vec) out.emplace_back("n_vec", n_vec->to_string());
    if (N) out.emplace_back("N", std::to_string(*N));
    return out;
}

}  // namespace qhyper
