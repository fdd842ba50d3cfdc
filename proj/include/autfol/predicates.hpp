#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "autfol/endo.hpp"

namespace autfol {

// Quantifier-heavy evaluations count candidate substitutions against a
// budget and fail loudly instead of truncating.
class Budget {
public:
    explicit Budget(std::int64_t limit = 10'000'000) : limit_(limit) {}

    void charge(const char* where) {
        if (++used_ > limit_)
            fail(errc::budget_exceeded,
                 std::string(where) + ": evaluation budget of " + std::to_string(limit_) +
                     " substitutions exhausted");
    }
    std::int64_t used() const { return used_; }
    std::int64_t limit() const { return limit_; }

private:
    std::int64_t limit_;
    std::int64_t used_ = 0;
};

// Two implementations per operation where the displayed first-order text
// exists: `formula` evaluates that text by brute force, `semantic` computes
// the intended meaning directly on subgroups.  Tests assert they agree.
enum class Mode { semantic, formula };

// ---- relations on extreme involutions and pairs -------------------------

// Relation "e in e1 (+) e2": core containment in the sum together with the
// reverse containment of the orthogonal summands.  Requires e1, e2 to
// commute (throws NotCommuting).
bool rel_in_sum(const ExtremeInvolution& e, const ExtremeInvolution& e1,
                const ExtremeInvolution& e2);

// Membership of an extreme involution in a pair: the involutions commute and
// the core lies inside the designated summand.
bool rel_pair_member(const ExtremeInvolution& e, const Pair& p);

bool rel_pair_subset(const Pair& p1, const Pair& p2);
bool rel_pair_eq(const Pair& p1, const Pair& p2);
bool rel_pair_cap(const Pair& p1, const Pair& p2, const Pair& p3);
bool rel_pair_oplus(const Pair& p1, const Pair& p2, const Pair& p3);
bool rel_pair_complement(const Pair& p1, const Pair& p2);

// Core-level form of the mapping relation: f(C1) lies inside C1 + C2 and is
// a third subgroup distinct from both.
bool maps_core(const Automorphism& f, const Subgroup& c1, const Subgroup& c2);

// e1 |-f-> e2.  Semantic mode maps the core directly; formula mode routes
// through the conjugate involution f e1 f^-1 and its transported designation.
bool rel_maps_to(const Automorphism& f, const ExtremeInvolution& e1,
                 const ExtremeInvolution& e2, Mode mode);

bool rel_ord_lt(const ExtremeInvolution& e1, const ExtremeInvolution& e2);
bool rel_ord_le(const ExtremeInvolution& e1, const ExtremeInvolution& e2);
bool rel_ord_eq(const ExtremeInvolution& e1, const ExtremeInvolution& e2);
bool rel_ord_ge(const ExtremeInvolution& e1, const ExtremeInvolution& e2);
bool rel_ord_gt(const ExtremeInvolution& e1, const ExtremeInvolution& e2);

// ---- order decompositions (ByOrd / Final) --------------------------------

// ByOrd(xi,eps): every extreme involution compatible with xi lies in the
// pair exactly when its order is at least ord(eps).  The semantic route
// checks the order-decomposition shape: every indecomposable summand order
// of the complement is below every one of the summand, whose minimum equals
// ord(eps).
bool by_ord(const Pair& p, Mode mode, const AutCtx& ctx, Budget& budget);

struct FinalOutcome {
    bool value = false;
    // One verified witness automorphism per inner existential that fired.
    std::vector<Automorphism> witnesses;
};

// Final(xi0,eps0) evaluated from the displayed text by brute force over
// pairs and automorphisms.  No meaning beyond the formula text is asserted.
FinalOutcome final_pair(const Pair& p0, const AutCtx& ctx, Budget& budget);

// ---- locating a basic subgroup (InBase / Rest / MaxRest / IsBase) --------

// The split pair fixes the decomposition A = A_low (+) A_fin with
// A_low = complement, A_fin = designated summand.
struct Split {
    Subgroup low;
    Subgroup fin;
};

Split split_of_pair(const Pair& p);

// InBase(e, nu): the core of e lies in the sum of a low part and a fin part
// certified by a nu-witness of larger order.  Either part may be absent
// (the split may be degenerate on one side).
bool in_base(const ExtremeInvolution& e, const Automorphism& nu, const Split& split,
             const AutCtx& ctx, Budget& budget);

// Subgroup generated by all cores satisfying InBase: B_nu.
Subgroup collect_base(const Automorphism& nu, const Split& split, const AutCtx& ctx,
                      Budget& budget);

// Rest_e(p): every member of p has order at most ord(e).
bool rest(const Pair& p, const ExtremeInvolution& e, const AutCtx& ctx, Budget& budget);

// MaxRest_e(p): Rest and no Rest pair designates a strictly larger summand.
bool max_rest(const Pair& p, const ExtremeInvolution& e, const AutCtx& ctx, Budget& budget);

// IsBase(nu): for every member order t, some pair designates exactly the
// in-base cores of order <= t, and every such pair is MaxRest-maximal.
// Semantic route: B_nu is basic, via the truncation characterization.
bool is_base(const Automorphism& nu, const Split& split, Mode mode, const AutCtx& ctx,
             Budget& budget);

// Constructor for the order-dropping shift automorphisms used with InBase:
// nu = id on low, id + h on fin.  h must strictly drop the order of every
// nonzero element of fin.
Automorphism make_shift_automorphism(const Homomorphism& h, const Split& split);

// ---- transvection families (structuring the basic subgroup) --------------

struct FamilyMember {
    ExtremeInvolution eps;
    Element gen; // b_i with <b_i> = core
};

// Ordered independent extreme involutions whose cores decompose B, plus the
// table of transvections g_ij (defined when ord(B_i) >= ord(B_j)) with
// g_ij(b_i) = b_i + b_j and identity on the other summands.
struct TransvectionFamily {
    GroupSpec group;
    std::vector<FamilyMember> basis;
    std::map<std::pair<int, int>, Automorphism> maps;

    const Subgroup& core(int i) const { return basis[static_cast<size_t>(i)].eps.core; }
    const Element& gen(int i) const { return basis[static_cast<size_t>(i)].gen; }
    int size() const { return static_cast<int>(basis.size()); }
    std::int64_t ord(int i) const { return core(i).size(); }
};

// Transvection on a basis: b_i -> b_i + b_j, identity on the other summands.
// Throws OrderViolation when ord(b_i) < ord(b_j).
Automorphism transvection(const std::vector<FamilyMember>& basis, int i, int j);

// General two-term basis map b_src -> c_src b_src + c_dst b_dst, identity on
// the other summands; throws NotInvertible when the shape is not bijective.
Automorphism family_two_term_map(const TransvectionFamily& fam, int src,
                                 std::int64_t c_src, int dst, std::int64_t c_dst);

// Family over the given generators (must span the group directly); the
// canonical family uses the standard generators ordered by descending order.
TransvectionFamily make_family(const AutCtx& ctx, const std::vector<Element>& gens);
TransvectionFamily canonical_family(const AutCtx& ctx);

bool family_independent(const std::vector<ExtremeInvolution>& cands);
bool family_is_decomposition(const std::vector<ExtremeInvolution>& cands, const Subgroup& b);

// Verifies the family constraints: unique well-shaped map per admissible
// index pair, coefficient form b_i -> b_i + k b_j with k = 1 (cross-checked
// through the conjugation criterion where a third index exists), and the
// commutator law g_jk^-1 g_ij^-1 g_jk g_ij = g_ik on all admissible triples.
bool family_check(const TransvectionFamily& f);

struct Lemma5Result {
    bool lhs = false; // k1 == 1
    bool rhs = false; // conjugate image of B_k lies in B_k + B_j
    Element conjugate_image_of_bk;
    std::int64_t k1 = 0, k2 = 0, l1 = 0, l2 = 0;
};

// g moves only B_i with g(b_i) = k1 b_i + k2 b_j; g0 moves only B_k with
// g0(b_k) = l1 b_k + l2 b_i; i, j, k distinct.  Returns both sides of the
// equivalence "k1 = 1 iff g0^-1 g g0(B_k) <= B_k + B_j" for the caller to
// assert, plus the conjugate image for exact replay.
Lemma5Result lemma5_criterion(const Automorphism& g, const Automorphism& g0,
                              const TransvectionFamily& fam, int i, int j, int k);

// f1, f2 encode a mapping of basis summands: some extreme involution is
// transported to e1 by f1 and to e2 by f2.
bool rel_encoded_map(const Automorphism& f1, const Automorphism& f2,
                     const ExtremeInvolution& e1, const ExtremeInvolution& e2,
                     const AutCtx& ctx, Budget& budget);

// ---- element encoding ----------------------------------------------------

// Encoders represent group elements: the encoder of a on carrier i fixes the
// complement of B_i and sends b_i to b_i + a.
Automorphism encode(const Element& a, const TransvectionFamily& fam, int carrier);

// Structural shape: exactly one basis core moves, every other basis core is
// preserved setwise.
std::optional<int> encoder_carrier(const Automorphism& f, const TransvectionFamily& fam);

bool is_encoder(const Automorphism& f, const TransvectionFamily& fam, Mode mode,
                const AutCtx& ctx, Budget& budget);

// Recovers the encoded element f(b_i) - b_i; throws NotEncoder.
Element decode(const Automorphism& f, const TransvectionFamily& fam);

// Precomputed encoder universe for the equality/addition formulas, whose
// inner existentials range over encoder-shaped automorphisms.
struct EncodingCtx {
    TransvectionFamily family;
    std::vector<Automorphism> universe; // all encoder-shaped automorphisms
    Automorphism identity;
    bool zero_convention = true; // the identity encodes zero
};

EncodingCtx make_encoding_ctx(const AutCtx& ctx, TransvectionFamily fam);

// Equality of encoded elements.  The identity automorphism encodes zero by
// convention and compares equal only to itself.
bool enc_eq(const Automorphism& f1, const Automorphism& f2, const EncodingCtx& enc,
            const AutCtx& ctx, Budget& budget);

// Addition: re-encodings of the three arguments meet on a shared carrier
// where composition realizes the sum.
bool enc_add(const Automorphism& f1, const Automorphism& f2, const Automorphism& f3,
             const EncodingCtx& enc, const AutCtx& ctx, Budget& budget);

// ---- similarity over a pair ----------------------------------------------

// f1 ~ f2 over p: they differ by an automorphism fixing every extreme core
// inside the designated summand.  Semantic route compares the action of f1
// and f2 on those cores directly.
bool sim(const Automorphism& f1, const Automorphism& f2, const Pair& p, Mode mode,
         const AutCtx& ctx, Budget& budget);

// ---- shared helpers -------------------------------------------------------

// Pure cyclic subgroups lying inside h: the cores of extreme involutions
// compatible with any involution designating h.
std::vector<Subgroup> cores_within(const AutCtx& ctx, const Subgroup& h);

std::int64_t min_factor_order(const GroupSpec& g, const Subgroup& h);
std::int64_t max_factor_order(const GroupSpec& g, const Subgroup& h);

} // namespace autfol
