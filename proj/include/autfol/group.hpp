#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autfol/errors.hpp"

namespace autfol {

using coord_list = std::vector<std::int64_t>;

// Finite abelian p-group  A = Z_{p^{e1}} + ... + Z_{p^{ek}}  for an odd
// prime p and sorted exponents e1 <= ... <= ek.  The group is materialized
// as an element table in lexicographic coordinate order; elements are
// referred to by their table index everywhere below.  Immutable once built.
class GroupSpec {
public:
    static constexpr std::int64_t kDefaultSizeBudget = 6561; // 3^8

    static GroupSpec make(std::int64_t p, std::vector<int> exponents,
                          std::int64_t size_budget = kDefaultSizeBudget);

    std::int64_t p() const { return d_->p; }
    const std::vector<int>& exponents() const { return d_->exponents; }
    int rank() const { return static_cast<int>(d_->exponents.size()); }
    std::int64_t size() const { return d_->size; }

    // p^{e_i}, the order of generator i.
    std::int64_t modulus(int i) const { return d_->moduli[i]; }
    const std::vector<std::int64_t>& moduli() const { return d_->moduli; }

    // Largest cyclic order p^{e_k} (the exponent of the group).
    std::int64_t group_exponent() const { return d_->moduli.back(); }

    // Element table access.
    const coord_list& coords(std::int32_t index) const { return d_->elements[index]; }
    std::int32_t index_of(const coord_list& coords) const;
    std::int32_t zero_index() const { return 0; }
    std::int32_t generator_index(int i) const;

    std::int64_t order_of_index(std::int32_t index) const { return d_->orders[index]; }

    std::int32_t add_index(std::int32_t a, std::int32_t b) const;
    std::int32_t neg_index(std::int32_t a) const;
    std::int32_t scalar_index(std::int64_t n, std::int32_t a) const;

    bool same_group(const GroupSpec& other) const { return d_ == other.d_; }
    std::string describe() const; // e.g. "Z27 = Z_3 + Z_9 (p=3, exponents [1,2])"

private:
    struct Data {
        std::int64_t p = 0;
        std::vector<int> exponents;
        std::vector<std::int64_t> moduli;
        std::int64_t size = 0;
        std::vector<coord_list> elements; // lexicographic order, index 0 = zero
        std::vector<std::int64_t> orders; // order of each element
    };

    std::shared_ptr<const Data> d_;
};

// An element of a specific group: the owning group plus a table index.
// Coordinate access goes through the group's element table.
struct Element {
    GroupSpec group;
    std::int32_t index = 0;

    const coord_list& coords() const { return group.coords(index); }
    bool operator==(const Element& o) const {
        return group.same_group(o.group) && index == o.index;
    }
};

Element make_element(const GroupSpec& g, const coord_list& coords);
Element zero_element(const GroupSpec& g);
Element generator(const GroupSpec& g, int i);

Element elem_add(const Element& a, const Element& b);
Element elem_neg(const Element& a);
Element scalar_mul(std::int64_t n, const Element& a);

// Smallest power of p annihilating a (1 for zero).
std::int64_t order_of(const Element& a);

// Subgroup as a canonical sorted set of element indices plus a membership
// bitmap.  Equality of subgroups is equality of the index sets.
class Subgroup {
public:
    Subgroup() = default;
    Subgroup(GroupSpec ambient, std::vector<std::int32_t> sorted_members,
             std::vector<std::int32_t> generators);

    const GroupSpec& ambient() const { return ambient_; }
    const std::vector<std::int32_t>& members() const { return members_; }
    const std::vector<std::int32_t>& generators() const { return generators_; }
    std::int64_t size() const { return static_cast<std::int64_t>(members_.size()); }

    bool contains_index(std::int32_t idx) const { return bitmap_[static_cast<size_t>(idx)]; }
    bool contains(const Subgroup& other) const;
    bool operator==(const Subgroup& o) const {
        return ambient_.same_group(o.ambient_) && members_ == o.members_;
    }
    bool operator!=(const Subgroup& o) const { return !(*this == o); }

    bool is_zero() const { return members_.size() == 1; }
    bool is_whole_group() const { return size() == ambient_.size(); }

private:
    GroupSpec ambient_;
    std::vector<std::int32_t> members_;
    std::vector<std::int32_t> generators_;
    std::vector<bool> bitmap_;
};

// Closure of a generating set under addition and negation.
Subgroup span(const GroupSpec& g, const std::vector<std::int32_t>& gens);
Subgroup span_elements(const GroupSpec& g, const std::vector<Element>& gens);
Subgroup zero_subgroup(const GroupSpec& g);
Subgroup whole_group(const GroupSpec& g);

Subgroup join(const Subgroup& a, const Subgroup& b);
Subgroup intersect(const Subgroup& a, const Subgroup& b);

// Image {n*h : h in H} of a subgroup under multiplication by n.
Subgroup scalar_image(std::int64_t n, const Subgroup& h);

// nH = H inter nA for every n = p^m up to the group exponent.
bool is_pure(const Subgroup& h);

// The listed parts form a direct sum: |sum| equals the product of the part
// sizes.  Whether the sum is all of A is the caller's own conjunct.
bool is_direct_sum(const std::vector<Subgroup>& parts);

// Exponent multiset {m_1,...,m_r} with H iso to the direct sum of Z_{p^{m_i}};
// empty for the zero subgroup.  Derived from order statistics, which pin the
// isomorphism type of a finite abelian p-group exactly.
std::vector<int> invariant_factors(const Subgroup& h);

int subgroup_rank(const Subgroup& h);

// All subgroups of the ambient group, deterministically ordered (by size,
// then lexicographically on the member list).
std::vector<Subgroup> all_subgroups(const GroupSpec& g);

// One cyclic decomposition H = <x_1> + ... + <x_r>, deterministic.
std::vector<Element> cyclic_decomposition(const Subgroup& h);

// H is a direct summand of the ambient group (has a complement).
bool is_direct_summand(const Subgroup& h);
std::optional<Subgroup> find_complement(const Subgroup& h);

// Definitional route: pure, direct sum of cyclics (automatic here), and
// p-divisible quotient.
bool is_basic_subgroup(const Subgroup& b);

// Characterization route: every truncation B_1+...+B_n of a cyclic
// decomposition is a maximal p^n-bounded direct summand of the ambient group.
bool is_basic_subgroup_via_truncations(const Subgroup& b);

// Cyclic subgroups that are direct summands of the ambient group.  These are
// exactly the cores that extreme involutions can designate.
std::vector<Subgroup> pure_cyclic_subgroups(const GroupSpec& g);

} // namespace autfol
