#include <doctest.h>

#include "helpers.hpp"
#include "qhyper/lattice.hpp"
#include "qhyper/qfactorial_source.hpp"

using namespace qhyper;
using testing::Q;

namespace {

std::vector<MultiIndex> collect(const SummationDomain& domain) {
    std::vector<MultiIndex> out;
    for (const MultiIndex& k : iterate(domain)) out.push_back(k);
    return out;
}

}  // namespace

TEST_CASE("elementary symmetric function of degree two") {
    CHECK(e2(MultiIndex{0, 0, 0}) == 0);
    CHECK(e2(MultiIndex{1, 2, 3}) == 11);
    CHECK(e2(MultiIndex{5}) == 0);
    const MultiIndex k{3, -2, 4, 1};
    std::int64_t squares = 0;
    for (std::size_t i = 0; i < k.rank(); ++i) squares += k[i] * k[i];
    CHECK(k.norm() * k.norm() == squares + 2 * e2(k));
}

TEST_CASE("finite domains iterate in lexicographic order") {
    CHECK(collect(SummationDomain::box(MultiIndex{1, 1})) ==
          std::vector<MultiIndex>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(collect(SummationDomain::simplex(1, 2)) == std::vector<MultiIndex>{{0, 0}, {0, 1}, {1, 0}});
    CHECK(collect(SummationDomain::box(MultiIndex{0, 0, 0})) == std::vector<MultiIndex>{{0, 0, 0}});
    CHECK(collect(SummationDomain::box(MultiIndex{2, 0, 3})).size() == 12);
    CHECK(collect(SummationDomain::simplex(4, 3)).size() == 35);
    CHECK_THROWS_AS(iterate(SummationDomain::bilateral(2)), Error);
}

TEST_CASE("cross product factor") {
    const std::vector<Scalar> x{Q(1), Q(1, 3)};
    const ArCrossProduct cross(x, NumericConfig{});
    DirectQFactorials source(Q(1, 2), {}, NumericConfig{});
    CHECK(cross.at(MultiIndex{1, 0}, source) == Q(1, 4));
    CHECK(cross.at(MultiIndex{0, 0}, source) == Q(1));

    const std::vector<Scalar> single{Q(5)};
    CHECK(ArCrossProduct(single, NumericConfig{}).at(MultiIndex{4}, source) == Q(1));
}

TEST_CASE("telescoping product identity") {
    const std::vector<Scalar> x1{Q(2, 3)};
    const auto sides = telescoping_lemma_sides(MultiIndex{1}, MultiIndex{0}, x1, Q(1, 3));
    CHECK(sides.lhs == Q(-3));
    CHECK(sides.rhs == Q(-3));
    const std::vector<Scalar> x2{Q(2, 7), Q(-5, 3)};
    CHECK(check_telescoping_lemma(MultiIndex{0, 0}, MultiIndex{0, 0}, x2, Q(2, 5)));
    CHECK(check_telescoping_lemma(MultiIndex{2, 1}, MultiIndex{0, 0}, x2, Q(2, 5)));
}

TEST_CASE("product identity over m") {
    const std::vector<Scalar> x2{Q(3, 11), Q(-4, 5)};
    CHECK(check_milne_lem312(MultiIndex{0, 0}, x2, Q(1, 3)));
    CHECK(check_milne_lem312(MultiIndex{1, 2}, x2, Q(1, 3)));
    const std::vector<Scalar> x1{Q(7)};
    const auto sides = milne_lem312_sides(MultiIndex{3}, x1, Q(-1, 4));
    CHECK(sides.lhs == Q(1));
    CHECK(sides.rhs == Q(1));
}
