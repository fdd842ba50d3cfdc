#include "autfol/endo.hpp"

#include <algorithm>
#include <sstream>

namespace autfol {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

std::int64_t mod_reduce(std::int64_t x, std::int64_t m) {
    std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

// Required divisibility of entry (i,j): p^{max(e_i - e_j, 0)}.
std::int64_t entry_step(const GroupSpec& g, int i, int j) {
    int diff = g.exponents()[static_cast<size_t>(i)] - g.exponents()[static_cast<size_t>(j)];
    return diff > 0 ? ipow(g.p(), diff) : 1;
}

} // namespace

Homomorphism::Homomorphism(GroupSpec g, std::vector<std::int64_t> row_major)
    : group_(std::move(g)), m_(std::move(row_major)) {}

std::int32_t Homomorphism::apply_index(std::int32_t idx) const {
    const coord_list& c = group_.coords(idx);
    const int k = group_.rank();
    std::int64_t out = 0;
    for (int i = 0; i < k; ++i) {
        std::int64_t m = group_.modulus(i);
        std::int64_t v = 0;
        for (int j = 0; j < k; ++j) v += entry(i, j) * c[static_cast<size_t>(j)];
        out = out * m + mod_reduce(v, m);
    }
    return static_cast<std::int32_t>(out);
}

Element Homomorphism::apply(const Element& a) const {
    if (!a.group.same_group(group_)) fail(errc::ambient_mismatch, "apply: wrong group");
    return Element{group_, apply_index(a.index)};
}

Subgroup Homomorphism::apply_subgroup(const Subgroup& h) const {
    if (!h.ambient().same_group(group_)) fail(errc::ambient_mismatch, "apply: wrong group");
    std::vector<std::int32_t> members;
    members.reserve(h.members().size());
    for (auto idx : h.members()) members.push_back(apply_index(idx));
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return Subgroup(group_, std::move(members), {});
}

std::string Homomorphism::matrix_string() const {
    const int k = group_.rank();
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < k; ++i) {
        os << (i ? ",[" : "[");
        for (int j = 0; j < k; ++j) os << (j ? "," : "") << entry(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

Homomorphism hom_from_matrix(const GroupSpec& g, const std::vector<std::int64_t>& row_major) {
    const int k = g.rank();
    if (row_major.size() != static_cast<size_t>(k) * static_cast<size_t>(k))
        fail(errc::ill_formed, "matrix must be " + std::to_string(k) + "x" + std::to_string(k));
    std::vector<std::int64_t> m(row_major.size());
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            std::int64_t v = mod_reduce(row_major[static_cast<size_t>(i * k + j)], g.modulus(i));
            if (v % entry_step(g, i, j) != 0)
                fail(errc::ill_formed,
                     "entry (" + std::to_string(i) + "," + std::to_string(j) +
                         ") violates the order constraint: image of a generator of order " +
                         std::to_string(g.modulus(j)) + " would have too large an order");
            m[static_cast<size_t>(i * k + j)] = v;
        }
    }
    return Homomorphism(g, std::move(m));
}

Homomorphism identity_hom(const GroupSpec& g) {
    const int k = g.rank();
    std::vector<std::int64_t> m(static_cast<size_t>(k) * static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i) m[static_cast<size_t>(i * k + i)] = 1;
    return Homomorphism(g, std::move(m));
}

Homomorphism compose(const Homomorphism& f, const Homomorphism& g) {
    if (!f.group().same_group(g.group())) fail(errc::ambient_mismatch, "compose: wrong group");
    const GroupSpec& grp = f.group();
    const int k = grp.rank();
    std::vector<std::int64_t> m(static_cast<size_t>(k) * static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            std::int64_t v = 0;
            for (int l = 0; l < k; ++l) v += f.entry(i, l) * g.entry(l, j);
            m[static_cast<size_t>(i * k + j)] = mod_reduce(v, grp.modulus(i));
        }
    }
    return Homomorphism(grp, std::move(m));
}

bool is_bijective(const Homomorphism& f) {
    // Bijective iff the induced map on A/pA is invertible: Gaussian
    // elimination of the matrix mod p.
    const GroupSpec& g = f.group();
    const int k = g.rank();
    const std::int64_t p = g.p();
    std::vector<std::int64_t> a(static_cast<size_t>(k) * static_cast<size_t>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) a[static_cast<size_t>(i * k + j)] = f.entry(i, j) % p;
    for (int col = 0; col < k; ++col) {
        int pivot = -1;
        for (int row = col; row < k; ++row) {
            if (a[static_cast<size_t>(row * k + col)] % p != 0) {
                pivot = row;
                break;
            }
        }
        if (pivot < 0) return false;
        if (pivot != col)
            for (int j = 0; j < k; ++j)
                std::swap(a[static_cast<size_t>(pivot * k + j)], a[static_cast<size_t>(col * k + j)]);
        // inverse of pivot mod p by Fermat
        std::int64_t inv = 1, base = mod_reduce(a[static_cast<size_t>(col * k + col)], p);
        for (std::int64_t e = p - 2; e > 0; e >>= 1) {
            if (e & 1) inv = inv * base % p;
            base = base * base % p;
        }
        for (int row = col + 1; row < k; ++row) {
            std::int64_t factor = mod_reduce(a[static_cast<size_t>(row * k + col)], p) * inv % p;
            if (factor == 0) continue;
            for (int j = col; j < k; ++j) {
                auto& cell = a[static_cast<size_t>(row * k + j)];
                cell = mod_reduce(cell - factor * a[static_cast<size_t>(col * k + j)], p);
            }
        }
    }
    return true;
}

std::optional<Automorphism> try_automorphism(const Homomorphism& f) {
    if (!is_bijective(f)) return std::nullopt;
    const GroupSpec& g = f.group();
    const int k = g.rank();
    // Invert by reading generator preimages off the element permutation.
    std::vector<std::int32_t> preimage(static_cast<size_t>(g.size()), -1);
    for (std::int32_t x = 0; x < g.size(); ++x) preimage[static_cast<size_t>(f.apply_index(x))] = x;
    std::vector<std::int64_t> inv(static_cast<size_t>(k) * static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        std::int32_t pre = preimage[static_cast<size_t>(g.generator_index(j))];
        const coord_list& c = g.coords(pre);
        for (int i = 0; i < k; ++i) inv[static_cast<size_t>(i * k + j)] = c[static_cast<size_t>(i)];
    }
    Homomorphism fi(g, std::move(inv));
    return Automorphism{f, std::move(fi)};
}

Automorphism to_automorphism(const Homomorphism& f) {
    auto a = try_automorphism(f);
    if (!a) fail(errc::not_invertible, "homomorphism is not bijective");
    return *a;
}

Automorphism identity_automorphism(const GroupSpec& g) {
    Homomorphism id = identity_hom(g);
    return Automorphism{id, id};
}

Automorphism compose(const Automorphism& f, const Automorphism& g) {
    return Automorphism{compose(f.fwd, g.fwd), compose(g.inv, f.inv)};
}

Automorphism inverse(const Automorphism& f) { return Automorphism{f.inv, f.fwd}; }

bool commutes(const Automorphism& f, const Automorphism& g) {
    return compose(f.fwd, g.fwd) == compose(g.fwd, f.fwd);
}

std::vector<Automorphism> enumerate_aut(const GroupSpec& g, std::int64_t budget) {
    const int k = g.rank();
    const int n = k * k;
    std::vector<std::int64_t> steps(static_cast<size_t>(n));
    std::vector<std::int64_t> limits(static_cast<size_t>(n));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            steps[static_cast<size_t>(i * k + j)] = entry_step(g, i, j);
            limits[static_cast<size_t>(i * k + j)] = g.modulus(i);
        }
    }
    std::vector<Automorphism> out;
    std::vector<std::int64_t> m(static_cast<size_t>(n), 0);
    bool done = false;
    while (!done) {
        Homomorphism h(g, m);
        if (is_bijective(h)) {
            if (static_cast<std::int64_t>(out.size()) >= budget)
                fail(errc::budget_exceeded,
                     "automorphism count exceeds budget; reached " + std::to_string(out.size()));
            out.push_back(*try_automorphism(h));
        }
        done = true;
        for (int pos = n - 1; pos >= 0; --pos) {
            auto& cell = m[static_cast<size_t>(pos)];
            cell += steps[static_cast<size_t>(pos)];
            if (cell < limits[static_cast<size_t>(pos)]) {
                done = false;
                break;
            }
            cell = 0;
        }
    }
    return out;
}

std::pair<Subgroup, Subgroup> eigensplit(const Automorphism& e) {
    const GroupSpec& g = e.group();
    if (compose(e.fwd, e.fwd) != identity_hom(g))
        fail(errc::not_involution, "eigensplit requires an automorphism squaring to identity");
    // Idempotent projections (1 +- e)/2; one scalar inverse of 2 works for
    // every coordinate because all moduli divide p^{e_k}.
    const std::int64_t half = (g.group_exponent() + 1) / 2;
    std::vector<std::int32_t> plus_gens, minus_gens;
    for (int j = 0; j < g.rank(); ++j) {
        std::int32_t gj = g.generator_index(j);
        std::int32_t im = e.apply_index(gj);
        plus_gens.push_back(g.scalar_index(half, g.add_index(gj, im)));
        minus_gens.push_back(g.scalar_index(half, g.add_index(gj, g.neg_index(im))));
    }
    return {span(g, plus_gens), span(g, minus_gens)};
}

Involution make_involution(const Automorphism& e) {
    auto [plus, minus] = eigensplit(e);
    return Involution{e, std::move(plus), std::move(minus)};
}

std::vector<Involution> involutions(const GroupSpec& g, bool include_identity) {
    std::vector<Involution> out;
    Homomorphism id = identity_hom(g);
    for (const auto& a : enumerate_aut(g)) {
        if (compose(a.fwd, a.fwd) != id) continue;
        if (!include_identity && a.fwd == id) continue;
        out.push_back(make_involution(a));
    }
    return out;
}

std::int64_t ord_of_extreme(const ExtremeInvolution& e) { return e.core.size(); }

namespace {
bool nonzero_cyclic(const Subgroup& s) {
    return s.size() > 1 && invariant_factors(s).size() == 1;
}
} // namespace

bool side_is_designatable(const Involution& inv, Side s) {
    return nonzero_cyclic(s == Side::plus ? inv.plus : inv.minus);
}

ExtremeInvolution designate(const Involution& inv, Side s) {
    const Subgroup& core = s == Side::plus ? inv.plus : inv.minus;
    const Subgroup& perp = s == Side::plus ? inv.minus : inv.plus;
    if (!nonzero_cyclic(core))
        fail(errc::not_extreme, "designated side is not nonzero cyclic");
    return ExtremeInvolution{inv, s, core, perp};
}

std::vector<ExtremeInvolution> designations_of(const Involution& inv) {
    std::vector<ExtremeInvolution> out;
    if (side_is_designatable(inv, Side::plus)) out.push_back(designate(inv, Side::plus));
    if (side_is_designatable(inv, Side::minus)) out.push_back(designate(inv, Side::minus));
    return out;
}

std::optional<ExtremeInvolution> try_extreme_of(const Involution& inv, Side tie_break) {
    bool plus_ok = side_is_designatable(inv, Side::plus);
    bool minus_ok = side_is_designatable(inv, Side::minus);
    if (!plus_ok && !minus_ok) return std::nullopt;
    if (plus_ok && !minus_ok) return designate(inv, Side::plus);
    if (minus_ok && !plus_ok) return designate(inv, Side::minus);
    // Both sides indecomposable: designate the smaller order, ties per the
    // configured convention.
    if (inv.plus.size() < inv.minus.size()) return designate(inv, Side::plus);
    if (inv.minus.size() < inv.plus.size()) return designate(inv, Side::minus);
    return designate(inv, tie_break);
}

ExtremeInvolution extreme_of(const Involution& inv, Side tie_break) {
    auto e = try_extreme_of(inv, tie_break);
    if (!e) fail(errc::not_extreme, "no eigen-side is nonzero cyclic");
    return *e;
}

ExtremeInvolution conjugate_extreme(const Automorphism& f, const ExtremeInvolution& e) {
    Homomorphism conj = compose(compose(f.fwd, e.aut().fwd), f.inv);
    Automorphism aut{conj, conj}; // involutions are their own inverses
    Involution inv{std::move(aut), f.apply_subgroup(e.inv.plus), f.apply_subgroup(e.inv.minus)};
    return ExtremeInvolution{inv, e.side, f.apply_subgroup(e.core), f.apply_subgroup(e.perp)};
}

Pair make_pair(const Involution& xi, const ExtremeInvolution& eps) {
    if (!commutes(xi.aut, eps.aut()))
        fail(errc::not_commuting, "pair requires commuting involutions");
    bool in_plus = xi.plus.contains(eps.core);
    bool in_minus = xi.minus.contains(eps.core);
    if (!in_plus && !in_minus)
        fail(errc::neither_side_contains,
             "commuting pair must have the core inside one eigen-side");
    Side s = in_plus ? Side::plus : Side::minus;
    return Pair{xi, eps, s, in_plus ? xi.plus : xi.minus, in_plus ? xi.minus : xi.plus};
}

AutCtx::AutCtx(GroupSpec g, Conventions conv, std::int64_t aut_budget)
    : g_(std::move(g)), conv_(conv), aut_budget_(aut_budget) {}

const std::vector<Automorphism>& AutCtx::automorphisms() const {
    if (!auts_) auts_ = enumerate_aut(g_, aut_budget_);
    return *auts_;
}

const std::vector<Involution>& AutCtx::involutions_list() const {
    if (!invs_) invs_ = involutions(g_, conv_.involutions_include_identity);
    return *invs_;
}

const std::vector<ExtremeInvolution>& AutCtx::extremes() const {
    if (!extremes_) {
        std::vector<ExtremeInvolution> out;
        for (const auto& inv : involutions_list())
            for (auto& d : designations_of(inv)) out.push_back(std::move(d));
        extremes_ = std::move(out);
    }
    return *extremes_;
}

const std::vector<Pair>& AutCtx::pairs() const {
    if (!pairs_) {
        std::vector<Pair> out;
        for (const auto& xi : involutions_list())
            for (const auto& e : extremes())
                if (commutes(xi.aut, e.aut())) out.push_back(make_pair(xi, e));
        pairs_ = std::move(out);
    }
    return *pairs_;
}

const std::vector<Subgroup>& AutCtx::cores() const {
    if (!cores_) cores_ = pure_cyclic_subgroups(g_);
    return *cores_;
}

ExtremeInvolution AutCtx::extreme_with_core(const Subgroup& core) const {
    if (extremes_) {
        for (const auto& e : *extremes_)
            if (e.core == core) return e;
    }
    // Construct one directly: -1 on the core, +1 on a complement.
    auto comp = find_complement(core);
    if (!comp) fail(errc::not_extreme, "subgroup is not a pure cyclic summand");
    const int k = g_.rank();
    std::vector<std::int64_t> m(static_cast<size_t>(k) * static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        std::int32_t gj = g_.generator_index(j);
        std::int32_t image = -1;
        for (auto c : core.members()) {
            std::int32_t d = g_.add_index(gj, g_.neg_index(c));
            if (comp->contains_index(d)) {
                image = g_.add_index(g_.neg_index(c), d);
                break;
            }
        }
        if (image < 0) fail(errc::neither_side_contains, "complement decomposition failed");
        const coord_list& ic = g_.coords(image);
        for (int i = 0; i < k; ++i) m[static_cast<size_t>(i * k + j)] = ic[static_cast<size_t>(i)];
    }
    Automorphism aut = to_automorphism(hom_from_matrix(g_, m));
    return designate(make_involution(aut), Side::minus);
}

} // namespace autfol
