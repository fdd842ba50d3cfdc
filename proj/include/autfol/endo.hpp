#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "autfol/group.hpp"

namespace autfol {

// Endomorphism of a group, stored as the k x k coefficient matrix: column j
// holds the coordinates of the image of generator g_j, entry (i,j) reduced
// modulo p^{e_i}.  Well-definedness requires entry (i,j) to be divisible by
// p^{max(e_i - e_j, 0)}.
class Homomorphism {
public:
    Homomorphism() = default;
    Homomorphism(GroupSpec g, std::vector<std::int64_t> row_major);

    const GroupSpec& group() const { return group_; }
    std::int64_t entry(int i, int j) const {
        return m_[static_cast<size_t>(i * group_.rank() + j)];
    }
    const std::vector<std::int64_t>& matrix() const { return m_; }

    std::int32_t apply_index(std::int32_t idx) const;
    Element apply(const Element& a) const;
    Subgroup apply_subgroup(const Subgroup& h) const;

    bool operator==(const Homomorphism& o) const {
        return group_.same_group(o.group_) && m_ == o.m_;
    }
    bool operator!=(const Homomorphism& o) const { return !(*this == o); }

    std::string matrix_string() const; // "[[a,b],[c,d]]"

private:
    GroupSpec group_;
    std::vector<std::int64_t> m_;
};

// Validates the divisibility constraints; throws IllFormed otherwise.
Homomorphism hom_from_matrix(const GroupSpec& g, const std::vector<std::int64_t>& row_major);

Homomorphism identity_hom(const GroupSpec& g);
Homomorphism compose(const Homomorphism& f, const Homomorphism& g); // f after g

// Surjectivity (= bijectivity, finite) via the induced map on A/pA.
bool is_bijective(const Homomorphism& f);

struct Automorphism {
    Homomorphism fwd;
    Homomorphism inv;

    const GroupSpec& group() const { return fwd.group(); }
    std::int32_t apply_index(std::int32_t idx) const { return fwd.apply_index(idx); }
    Element apply(const Element& a) const { return fwd.apply(a); }
    Subgroup apply_subgroup(const Subgroup& h) const { return fwd.apply_subgroup(h); }

    bool operator==(const Automorphism& o) const { return fwd == o.fwd; }
    bool operator!=(const Automorphism& o) const { return !(*this == o); }
};

std::optional<Automorphism> try_automorphism(const Homomorphism& f);
Automorphism to_automorphism(const Homomorphism& f); // throws NotInvertible
Automorphism identity_automorphism(const GroupSpec& g);
Automorphism compose(const Automorphism& f, const Automorphism& g);
Automorphism inverse(const Automorphism& f);
bool commutes(const Automorphism& f, const Automorphism& g);

// Every automorphism, ordered lexicographically by matrix.  Throws
// BudgetExceeded (reporting the count reached) if more than `budget` exist.
std::vector<Automorphism> enumerate_aut(const GroupSpec& g,
                                        std::int64_t budget = 1 << 20);

// Involution: automorphism with square = identity, bundled with the
// eigen-decomposition A = plus + minus it induces (p odd, so 1/2 exists).
struct Involution {
    Automorphism aut;
    Subgroup plus;  // {a : e a = a}
    Subgroup minus; // {a : e a = -a}
};

// Splits via the idempotents (1 +- e)/2.  Throws NotInvolution.
std::pair<Subgroup, Subgroup> eigensplit(const Automorphism& e);

Involution make_involution(const Automorphism& e);

// All involutions; `include_identity` keeps solutions of x^2 = 1 of order 1
// (the identity), matching the Pair condition as written.
std::vector<Involution> involutions(const GroupSpec& g, bool include_identity = true);

enum class Side { plus, minus };
inline Side other_side(Side s) { return s == Side::plus ? Side::minus : Side::plus; }
inline const char* side_name(Side s) { return s == Side::plus ? "plus" : "minus"; }

// Extreme involution: an involution together with a designated eigen-side
// that is nonzero cyclic (an indecomposable summand).  When both sides
// qualify the same involution yields two distinct designations.
struct ExtremeInvolution {
    Involution inv;
    Side side = Side::minus;
    Subgroup core; // the designated indecomposable summand
    Subgroup perp; // the other summand

    const Automorphism& aut() const { return inv.aut; }
    bool operator==(const ExtremeInvolution& o) const {
        return inv.aut == o.inv.aut && side == o.side;
    }
};

std::int64_t ord_of_extreme(const ExtremeInvolution& e);

bool side_is_designatable(const Involution& inv, Side s);

// All valid designations of one involution (0, 1 or 2 entries; plus first).
std::vector<ExtremeInvolution> designations_of(const Involution& inv);

// Disambiguating constructor: designates the side of smaller order, ties
// toward the configured side (minus unless overridden).  Throws NotExtreme
// when neither side is nonzero cyclic.
ExtremeInvolution extreme_of(const Involution& inv, Side tie_break = Side::minus);
std::optional<ExtremeInvolution> try_extreme_of(const Involution& inv,
                                                Side tie_break = Side::minus);

ExtremeInvolution designate(const Involution& inv, Side s);

// Transport of a designation along an automorphism: the extreme involution
// f e f^-1 whose core is f(core(e)).
ExtremeInvolution conjugate_extreme(const Automorphism& f, const ExtremeInvolution& e);

// Pair (xi, eps): commuting involution and extreme involution; exactly one
// eigen-side of xi contains the core of eps and becomes the designated
// summand A_(xi,eps).
struct Pair {
    Involution xi;
    ExtremeInvolution eps;
    Side summand_side = Side::plus;
    Subgroup summand;    // A_(xi,eps)
    Subgroup complement; // the other eigen-side of xi

    bool operator==(const Pair& o) const {
        return xi.aut == o.xi.aut && eps == o.eps;
    }
};

// Throws NotCommuting; NeitherSideContains is asserted impossible for
// commuting inputs.
Pair make_pair(const Involution& xi, const ExtremeInvolution& eps);

// Reproducibility switches, echoed into every report.
struct Conventions {
    Side tie_break = Side::minus;               // designated side on ties
    bool involutions_include_identity = true;   // xi^2 = 1 admits xi = id
    bool zero_encoder = true;                   // identity encodes zero
};

// Shared per-group context: lazily built, deterministically ordered object
// universes used by predicate evaluation and the CLI listings.  Lazy caches
// are not synchronized; confine one AutCtx to one thread.
class AutCtx {
public:
    explicit AutCtx(GroupSpec g, Conventions conv = {}, std::int64_t aut_budget = 1 << 20);

    const Conventions& conventions() const { return conv_; }

    const GroupSpec& group() const { return g_; }
    const std::vector<Automorphism>& automorphisms() const;
    const std::vector<Involution>& involutions_list() const;
    const std::vector<ExtremeInvolution>& extremes() const;
    const std::vector<Pair>& pairs() const;
    // Cores of extreme involutions = pure cyclic subgroups; usable on groups
    // too large for full automorphism enumeration.
    const std::vector<Subgroup>& cores() const;
    // Some designated extreme with the given core (constructed via a
    // complement if the automorphism universe is not materialized).
    ExtremeInvolution extreme_with_core(const Subgroup& core) const;

private:
    GroupSpec g_;
    Conventions conv_;
    std::int64_t aut_budget_;
    mutable std::optional<std::vector<Automorphism>> auts_;
    mutable std::optional<std::vector<Involution>> invs_;
    mutable std::optional<std::vector<ExtremeInvolution>> extremes_;
    mutable std::optional<std::vector<Pair>> pairs_;
    mutable std::optional<std::vector<Subgroup>> cores_;
};

} // namespace autfol
