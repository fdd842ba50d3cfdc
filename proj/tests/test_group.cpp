#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "autfol/group.hpp"

using namespace autfol;

namespace {

GroupSpec z3() { return GroupSpec::make(3, {1}); }
GroupSpec z3z9() { return GroupSpec::make(3, {1, 2}); }
GroupSpec z3_cubed() { return GroupSpec::make(3, {1, 1, 1}); }

Element el(const GroupSpec& g, coord_list c) { return make_element(g, c); }

} // namespace

TEST_CASE("make_group validates and normalizes") {
    GroupSpec g = z3z9();
    CHECK(g.size() == 27);
    CHECK(g.p() == 3);
    CHECK(g.exponents() == std::vector<int>{1, 2});

    GroupSpec h = GroupSpec::make(3, {2, 1}); // exponents stored sorted
    CHECK(h.exponents() == std::vector<int>{1, 2});

    CHECK(z3_cubed().size() == 27);

    CHECK_THROWS_WITH_AS(GroupSpec::make(2, {1}), doctest::Contains("NotOddPrime"), error);
    CHECK_THROWS_AS(GroupSpec::make(9, {1}), error);
    CHECK_THROWS_WITH_AS(GroupSpec::make(3, {}), doctest::Contains("EmptyExponents"), error);
    CHECK_THROWS_WITH_AS(GroupSpec::make(3, {9}), doctest::Contains("BudgetExceeded"), error);
}

TEST_CASE("element arithmetic is componentwise modular") {
    GroupSpec g = z3z9();
    CHECK(elem_add(el(g, {1, 3}), el(g, {2, 7})) == el(g, {0, 1}));
    CHECK(elem_neg(el(g, {0, 0})) == el(g, {0, 0}));
    CHECK(scalar_mul(3, el(g, {0, 1})) == el(g, {0, 3}));
    CHECK(elem_neg(el(g, {1, 4})) == el(g, {2, 5}));

    GroupSpec other = z3();
    CHECK_THROWS_WITH_AS(elem_add(el(g, {0, 0}), el(other, {0})),
                         doctest::Contains("AmbientMismatch"), error);
}

TEST_CASE("order_of") {
    GroupSpec g = z3z9();
    CHECK(order_of(el(g, {0, 0})) == 1);
    CHECK(order_of(el(g, {0, 3})) == 3);
    CHECK(order_of(el(g, {1, 1})) == 9);

    // oracle: multiply by p until zero
    for (std::int32_t i = 0; i < g.size(); ++i) {
        Element a{g, i};
        std::int64_t n = 1;
        Element x = a;
        while (x.index != 0) {
            x = scalar_mul(g.p(), x);
            n *= g.p();
        }
        CHECK(order_of(a) == n);
    }
}

TEST_CASE("span produces canonical closed subgroups") {
    GroupSpec g = z3z9();
    Subgroup s = span_elements(g, {el(g, {0, 3})});
    CHECK(s.size() == 3);
    CHECK(s.contains_index(g.index_of({0, 6})));

    CHECK(zero_subgroup(g).size() == 1);
    CHECK(span_elements(g, {el(g, {1, 0}), el(g, {0, 1})}).size() == 27);

    // closure property on every spanned subgroup of the test group
    for (const auto& h : all_subgroups(g)) {
        CHECK(h.contains_index(0));
        for (auto a : h.members())
            for (auto b : h.members()) CHECK(h.contains_index(g.add_index(a, b)));
    }
}

TEST_CASE("is_pure") {
    GroupSpec g = z3z9();
    CHECK(is_pure(span_elements(g, {el(g, {1, 0})})));
    CHECK_FALSE(is_pure(span_elements(g, {el(g, {0, 3})})));
    CHECK(is_pure(whole_group(g)));
    CHECK(is_pure(zero_subgroup(g)));
}

TEST_CASE("is_direct_sum reports directness only") {
    GroupSpec g = z3z9();
    Subgroup g1 = span_elements(g, {el(g, {1, 0})});
    Subgroup g2 = span_elements(g, {el(g, {0, 1})});
    Subgroup g2_scaled = span_elements(g, {el(g, {0, 3})});

    CHECK(is_direct_sum({g1, g2}));
    CHECK_FALSE(is_direct_sum({g1, g1}));
    // direct but not a decomposition of A; directness still holds
    CHECK(is_direct_sum({g1, g2_scaled}));
    CHECK(join(g1, g2_scaled).size() == 9);

    for (const auto& h1 : all_subgroups(g))
        for (const auto& h2 : all_subgroups(g))
            if (is_direct_sum({h1, h2}))
                CHECK(h1.size() * h2.size() == join(h1, h2).size());
}

TEST_CASE("invariant_factors") {
    GroupSpec g = z3z9();
    CHECK(invariant_factors(span_elements(g, {el(g, {0, 1})})) == std::vector<int>{2});
    CHECK(invariant_factors(span_elements(g, {el(g, {1, 0}), el(g, {0, 3})})) ==
          std::vector<int>{1, 1});
    CHECK(invariant_factors(zero_subgroup(g)).empty());
    CHECK(invariant_factors(whole_group(g)) == std::vector<int>{1, 2});
    CHECK(subgroup_rank(whole_group(z3_cubed())) == 3);
}

TEST_CASE("order of a sum divides lcm of orders") {
    GroupSpec g = z3z9();
    for (std::int32_t a = 0; a < g.size(); ++a) {
        for (std::int32_t b = 0; b < g.size(); ++b) {
            std::int64_t oa = g.order_of_index(a);
            std::int64_t ob = g.order_of_index(b);
            std::int64_t lcm = std::max(oa, ob); // prime-power orders
            std::int64_t os = g.order_of_index(g.add_index(a, b));
            CHECK(lcm % os == 0);
        }
    }
}

TEST_CASE("subgroup lattice of Z3+Z9") {
    GroupSpec g = z3z9();
    auto subs = all_subgroups(g);
    CHECK(subs.size() == 10); // 0, four C3, three C9, bounded part, A
}

TEST_CASE("cyclic decomposition is a direct decomposition") {
    for (GroupSpec g : {z3z9(), z3_cubed(), GroupSpec::make(3, {2, 2})}) {
        for (const auto& h : all_subgroups(g)) {
            auto gens = cyclic_decomposition(h);
            std::vector<Subgroup> parts;
            std::int64_t product = 1;
            for (const auto& e : gens) {
                parts.push_back(span(g, {e.index}));
                product *= parts.back().size();
            }
            CHECK(product == h.size());
            CHECK(is_direct_sum(parts));
        }
    }
}

TEST_CASE("basic subgroup: both routes, finite law") {
    GroupSpec g = z3z9();
    Subgroup a = whole_group(g);
    CHECK(is_basic_subgroup(a));
    CHECK_FALSE(is_basic_subgroup(span_elements(g, {el(g, {1, 0}), el(g, {0, 3})})));
    CHECK_FALSE(is_basic_subgroup(span_elements(g, {el(g, {1, 0})})));

    // finite groups are their own unique basic subgroup; the definitional and
    // truncation routes agree on the full lattice
    for (const auto& b : all_subgroups(g)) {
        bool definitional = is_basic_subgroup(b);
        bool truncations = is_basic_subgroup_via_truncations(b);
        CHECK(definitional == truncations);
        CHECK(definitional == (b == a));
    }
}

TEST_CASE("pure cyclic subgroups of Z3+Z9") {
    GroupSpec g = z3z9();
    auto cores = pure_cyclic_subgroups(g);
    CHECK(cores.size() == 6); // three of order 3, three of order 9
    int order3 = 0, order9 = 0;
    for (const auto& c : cores) {
        if (c.size() == 3) ++order3;
        if (c.size() == 9) ++order9;
        CHECK(is_pure(c));
        CHECK(find_complement(c).has_value());
    }
    CHECK(order3 == 3);
    CHECK(order9 == 3);
    // the socle of the Z9 part is not pure, hence not a core
    Subgroup socle_part = span_elements(g, {el(g, {0, 3})});
    for (const auto& c : cores) CHECK(c != socle_part);
}
