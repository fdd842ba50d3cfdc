#include "autfol/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace autfol {

const char* errc_name(errc c) {
    switch (c) {
        case errc::not_odd_prime: return "NotOddPrime";
        case errc::empty_exponents: return "EmptyExponents";
        case errc::budget_exceeded: return "BudgetExceeded";
        case errc::ambient_mismatch: return "AmbientMismatch";
        case errc::ill_formed: return "IllFormed";
        case errc::not_invertible: return "NotInvertible";
        case errc::not_involution: return "NotInvolution";
        case errc::not_extreme: return "NotExtreme";
        case errc::not_commuting: return "NotCommuting";
        case errc::neither_side_contains: return "NeitherSideContains";
        case errc::precondition_violated: return "PreconditionViolated";
        case errc::order_violation: return "OrderViolation";
        case errc::not_encoder: return "NotEncoder";
        case errc::syntax_error: return "SyntaxError";
        case errc::unknown_primitive: return "UnknownPrimitive";
        case errc::arity_mismatch: return "ArityMismatch";
        case errc::duplicate_name: return "DuplicateName";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

namespace {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

std::int64_t mod_reduce(std::int64_t x, std::int64_t m) {
    std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

} // namespace

GroupSpec GroupSpec::make(std::int64_t p, std::vector<int> exponents, std::int64_t size_budget) {
    if (p == 2 || !is_prime(p))
        fail(errc::not_odd_prime, "p must be an odd prime, got " + std::to_string(p));
    if (exponents.empty())
        fail(errc::empty_exponents, "exponent list must be nonempty");
    for (int e : exponents)
        if (e < 1) fail(errc::empty_exponents, "every exponent must be >= 1");
    std::sort(exponents.begin(), exponents.end());

    auto d = std::make_shared<Data>();
    d->p = p;
    d->exponents = exponents;
    d->size = 1;
    for (int e : exponents) {
        std::int64_t m = ipow(p, e);
        d->moduli.push_back(m);
        if (d->size > size_budget / m)
            fail(errc::budget_exceeded,
                 "group size exceeds budget " + std::to_string(size_budget));
        d->size *= m;
    }
    if (d->size > size_budget)
        fail(errc::budget_exceeded, "group size exceeds budget " + std::to_string(size_budget));

    const int k = static_cast<int>(d->moduli.size());
    d->elements.reserve(static_cast<size_t>(d->size));
    coord_list cur(static_cast<size_t>(k), 0);
    for (std::int64_t idx = 0; idx < d->size; ++idx) {
        d->elements.push_back(cur);
        for (int i = k - 1; i >= 0; --i) {
            if (++cur[static_cast<size_t>(i)] < d->moduli[static_cast<size_t>(i)]) break;
            cur[static_cast<size_t>(i)] = 0;
        }
    }
    d->orders.resize(static_cast<size_t>(d->size));
    for (std::int64_t idx = 0; idx < d->size; ++idx) {
        std::int64_t ord = 1;
        for (int i = 0; i < k; ++i) {
            std::int64_t c = d->elements[static_cast<size_t>(idx)][static_cast<size_t>(i)];
            std::int64_t m = d->moduli[static_cast<size_t>(i)];
            // order of c in Z_m with m = p^e
            std::int64_t o = m / std::gcd(c == 0 ? m : c, m);
            ord = std::max(ord, o == 0 ? 1 : o);
        }
        d->orders[static_cast<size_t>(idx)] = ord;
    }

    GroupSpec g;
    g.d_ = std::move(d);
    return g;
}

std::int32_t GroupSpec::index_of(const coord_list& coords) const {
    const auto& mods = d_->moduli;
    if (coords.size() != mods.size())
        fail(errc::ambient_mismatch, "coordinate arity mismatch");
    std::int64_t idx = 0;
    for (size_t i = 0; i < mods.size(); ++i) {
        idx = idx * mods[i] + mod_reduce(coords[i], mods[i]);
    }
    return static_cast<std::int32_t>(idx);
}

std::int32_t GroupSpec::generator_index(int i) const {
    coord_list c(static_cast<size_t>(rank()), 0);
    c[static_cast<size_t>(i)] = 1;
    return index_of(c);
}

std::int32_t GroupSpec::add_index(std::int32_t a, std::int32_t b) const {
    const auto& ca = d_->elements[static_cast<size_t>(a)];
    const auto& cb = d_->elements[static_cast<size_t>(b)];
    std::int64_t idx = 0;
    for (size_t i = 0; i < d_->moduli.size(); ++i) {
        std::int64_t m = d_->moduli[i];
        std::int64_t v = ca[i] + cb[i];
        if (v >= m) v -= m;
        idx = idx * m + v;
    }
    return static_cast<std::int32_t>(idx);
}

std::int32_t GroupSpec::neg_index(std::int32_t a) const {
    const auto& ca = d_->elements[static_cast<size_t>(a)];
    std::int64_t idx = 0;
    for (size_t i = 0; i < d_->moduli.size(); ++i) {
        std::int64_t m = d_->moduli[i];
        std::int64_t v = ca[i] == 0 ? 0 : m - ca[i];
        idx = idx * m + v;
    }
    return static_cast<std::int32_t>(idx);
}

std::int32_t GroupSpec::scalar_index(std::int64_t n, std::int32_t a) const {
    const auto& ca = d_->elements[static_cast<size_t>(a)];
    std::int64_t idx = 0;
    for (size_t i = 0; i < d_->moduli.size(); ++i) {
        std::int64_t m = d_->moduli[i];
        idx = idx * m + mod_reduce(n * ca[i], m);
    }
    return static_cast<std::int32_t>(idx);
}

std::string GroupSpec::describe() const {
    std::ostringstream os;
    os << "Z" << size() << " = ";
    for (size_t i = 0; i < d_->moduli.size(); ++i) {
        if (i) os << " + ";
        os << "Z_" << d_->moduli[i];
    }
    os << " (p=" << p() << ", exponents [";
    for (size_t i = 0; i < d_->exponents.size(); ++i) {
        if (i) os << ",";
        os << d_->exponents[i];
    }
    os << "])";
    return os.str();
}

Element make_element(const GroupSpec& g, const coord_list& coords) {
    return Element{g, g.index_of(coords)};
}

Element zero_element(const GroupSpec& g) { return Element{g, 0}; }

Element generator(const GroupSpec& g, int i) { return Element{g, g.generator_index(i)}; }

namespace {
void require_same_group(const GroupSpec& a, const GroupSpec& b) {
    if (!a.same_group(b)) fail(errc::ambient_mismatch, "elements from different groups");
}
} // namespace

Element elem_add(const Element& a, const Element& b) {
    require_same_group(a.group, b.group);
    return Element{a.group, a.group.add_index(a.index, b.index)};
}

Element elem_neg(const Element& a) { return Element{a.group, a.group.neg_index(a.index)}; }

Element scalar_mul(std::int64_t n, const Element& a) {
    return Element{a.group, a.group.scalar_index(n, a.index)};
}

std::int64_t order_of(const Element& a) { return a.group.order_of_index(a.index); }

Subgroup::Subgroup(GroupSpec ambient, std::vector<std::int32_t> sorted_members,
                   std::vector<std::int32_t> generators)
    : ambient_(std::move(ambient)),
      members_(std::move(sorted_members)),
      generators_(std::move(generators)),
      bitmap_(static_cast<size_t>(ambient_.size()), false) {
    for (auto idx : members_) bitmap_[static_cast<size_t>(idx)] = true;
}

bool Subgroup::contains(const Subgroup& other) const {
    if (!ambient_.same_group(other.ambient_)) fail(errc::ambient_mismatch, "subgroup containment");
    for (auto idx : other.members_)
        if (!bitmap_[static_cast<size_t>(idx)]) return false;
    return true;
}

Subgroup span(const GroupSpec& g, const std::vector<std::int32_t>& gens) {
    std::vector<bool> seen(static_cast<size_t>(g.size()), false);
    std::vector<std::int32_t> work;
    seen[0] = true;
    work.push_back(0);
    for (size_t head = 0; head < work.size(); ++head) {
        std::int32_t cur = work[head];
        for (auto gidx : gens) {
            std::int32_t nxt = g.add_index(cur, gidx);
            if (!seen[static_cast<size_t>(nxt)]) {
                seen[static_cast<size_t>(nxt)] = true;
                work.push_back(nxt);
            }
        }
    }
    std::vector<std::int32_t> members;
    for (std::int32_t i = 0; i < g.size(); ++i)
        if (seen[static_cast<size_t>(i)]) members.push_back(i);
    return Subgroup(g, std::move(members), gens);
}

Subgroup span_elements(const GroupSpec& g, const std::vector<Element>& gens) {
    std::vector<std::int32_t> idx;
    for (const auto& e : gens) {
        require_same_group(g, e.group);
        idx.push_back(e.index);
    }
    return span(g, idx);
}

Subgroup zero_subgroup(const GroupSpec& g) { return span(g, {}); }

Subgroup whole_group(const GroupSpec& g) {
    std::vector<std::int32_t> gens;
    for (int i = 0; i < g.rank(); ++i) gens.push_back(g.generator_index(i));
    return span(g, gens);
}

Subgroup join(const Subgroup& a, const Subgroup& b) {
    require_same_group(a.ambient(), b.ambient());
    std::vector<std::int32_t> gens(a.members());
    gens.insert(gens.end(), b.members().begin(), b.members().end());
    return span(a.ambient(), gens);
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
    require_same_group(a.ambient(), b.ambient());
    std::vector<std::int32_t> members;
    for (auto idx : a.members())
        if (b.contains_index(idx)) members.push_back(idx);
    return Subgroup(a.ambient(), std::move(members), members);
}

Subgroup scalar_image(std::int64_t n, const Subgroup& h) {
    std::vector<bool> seen(static_cast<size_t>(h.ambient().size()), false);
    std::vector<std::int32_t> members;
    for (auto idx : h.members()) {
        std::int32_t im = h.ambient().scalar_index(n, idx);
        if (!seen[static_cast<size_t>(im)]) {
            seen[static_cast<size_t>(im)] = true;
            members.push_back(im);
        }
    }
    std::sort(members.begin(), members.end());
    return Subgroup(h.ambient(), members, members);
}

bool is_pure(const Subgroup& h) {
    const GroupSpec& g = h.ambient();
    std::int64_t n = 1;
    for (int m = 1; n < g.group_exponent(); ++m) {
        n *= g.p();
        Subgroup nh = scalar_image(n, h);
        Subgroup na = scalar_image(n, whole_group(g));
        if (nh != intersect(h, na)) return false;
    }
    return true;
}

bool is_direct_sum(const std::vector<Subgroup>& parts) {
    if (parts.empty()) return true;
    const GroupSpec& g = parts.front().ambient();
    std::vector<std::int32_t> gens;
    std::int64_t product = 1;
    for (const auto& part : parts) {
        require_same_group(g, part.ambient());
        gens.insert(gens.end(), part.members().begin(), part.members().end());
        if (product > g.size()) return false;
        product *= part.size();
    }
    if (product > g.size()) return false;
    Subgroup sum = span(g, gens);
    return sum.size() == product;
}

std::vector<int> invariant_factors(const Subgroup& h) {
    const GroupSpec& g = h.ambient();
    const std::int64_t p = g.p();
    // s_m = #{x in H : p^m x = 0}; the jumps log_p(s_m/s_{m-1}) count the
    // cyclic factors of exponent >= m.
    std::vector<std::int64_t> s;
    s.push_back(1); // s_0: only zero
    std::int64_t n = 1;
    int max_m = 0;
    while (n < g.group_exponent()) {
        n *= p;
        ++max_m;
        std::int64_t count = 0;
        for (auto idx : h.members())
            if (g.order_of_index(idx) <= n) ++count;
        s.push_back(count);
    }
    std::vector<int> at_least(static_cast<size_t>(max_m) + 2, 0);
    for (int m = 1; m <= max_m; ++m) {
        std::int64_t ratio = s[static_cast<size_t>(m)] / s[static_cast<size_t>(m) - 1];
        int c = 0;
        while (ratio > 1) {
            ratio /= p;
            ++c;
        }
        at_least[static_cast<size_t>(m)] = c;
    }
    std::vector<int> factors;
    for (int m = max_m; m >= 1; --m) {
        int exactly = at_least[static_cast<size_t>(m)] - at_least[static_cast<size_t>(m) + 1];
        for (int i = 0; i < exactly; ++i) factors.push_back(m);
    }
    std::sort(factors.begin(), factors.end());
    return factors;
}

int subgroup_rank(const Subgroup& h) {
    return static_cast<int>(invariant_factors(h).size());
}

std::vector<Subgroup> all_subgroups(const GroupSpec& g) {
    std::map<std::vector<std::int32_t>, Subgroup> found;
    Subgroup zero = zero_subgroup(g);
    found.emplace(zero.members(), zero);
    std::vector<Subgroup> work{zero};
    for (size_t head = 0; head < work.size(); ++head) {
        Subgroup cur = work[head];
        for (std::int32_t x = 1; x < g.size(); ++x) {
            if (cur.contains_index(x)) continue;
            std::vector<std::int32_t> gens = cur.generators();
            gens.push_back(x);
            Subgroup next = span(g, gens);
            if (found.emplace(next.members(), next).second) work.push_back(next);
        }
    }
    std::vector<Subgroup> out;
    out.reserve(found.size());
    for (auto& [_, s] : found) out.push_back(s);
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.members() < b.members();
    });
    return out;
}

namespace {

// Backtracking search for a subgroup D of `within` with D inter avoid = 0 and
// |D| = target.  Deterministic: candidates tried in index order.
bool complement_search(const GroupSpec& g, const Subgroup& within, const Subgroup& avoid,
                       std::int64_t target, Subgroup& current, std::int32_t min_index,
                       Subgroup& out) {
    if (current.size() == target) {
        out = current;
        return true;
    }
    for (size_t pos = 0; pos < within.members().size(); ++pos) {
        std::int32_t x = within.members()[pos];
        if (x < min_index || current.contains_index(x)) continue;
        std::vector<std::int32_t> gens = current.generators();
        gens.push_back(x);
        Subgroup next = span(g, gens);
        if (next.size() > target || target % next.size() != 0) continue;
        if (intersect(next, avoid).size() != 1) continue;
        if (complement_search(g, within, avoid, target, next, x + 1, out)) return true;
    }
    return false;
}

// Complement of C inside H (assumes one exists).
std::optional<Subgroup> complement_within(const Subgroup& h, const Subgroup& c) {
    const GroupSpec& g = h.ambient();
    std::int64_t target = h.size() / c.size();
    Subgroup start = zero_subgroup(g);
    Subgroup out;
    if (complement_search(g, h, c, target, start, 1, out)) return out;
    return std::nullopt;
}

} // namespace

std::vector<Element> cyclic_decomposition(const Subgroup& h) {
    const GroupSpec& g = h.ambient();
    std::vector<Element> gens;
    Subgroup rest = h;
    while (rest.size() > 1) {
        std::int64_t best = 0;
        std::int32_t pick = -1;
        for (auto idx : rest.members()) {
            std::int64_t o = g.order_of_index(idx);
            if (o > best) {
                best = o;
                pick = idx;
            }
        }
        gens.push_back(Element{g, pick});
        Subgroup cyc = span(g, {pick});
        if (cyc == rest) break;
        auto comp = complement_within(rest, cyc);
        if (!comp)
            fail(errc::precondition_violated, "cyclic decomposition: no complement found");
        rest = *comp;
    }
    return gens;
}

bool is_direct_summand(const Subgroup& h) {
    // Pure bounded subgroups of abelian groups are direct summands, and every
    // subgroup here is bounded, so purity decides it.
    return is_pure(h);
}

std::optional<Subgroup> find_complement(const Subgroup& h) {
    if (!is_pure(h)) return std::nullopt;
    return complement_within(whole_group(h.ambient()), h);
}

bool is_basic_subgroup(const Subgroup& b) {
    if (!is_pure(b)) return false;
    // Direct sum of cyclic groups: automatic for finite groups.
    // Quotient A/B is p-divisible iff p(A/B) = A/B iff pA + B = A.
    const GroupSpec& g = b.ambient();
    Subgroup pa = scalar_image(g.p(), whole_group(g));
    return join(pa, b).size() == g.size();
}

bool is_basic_subgroup_via_truncations(const Subgroup& b) {
    const GroupSpec& g = b.ambient();
    std::vector<Element> decomp = cyclic_decomposition(b);
    std::vector<Subgroup> subs = all_subgroups(g);
    std::int64_t bound = 1;
    int max_exp = g.exponents().back();
    for (int n = 1; n <= max_exp; ++n) {
        bound *= g.p();
        std::vector<std::int32_t> gens;
        for (const auto& e : decomp)
            if (order_of(e) <= bound) gens.push_back(e.index);
        Subgroup trunc = span(g, gens);
        // must itself be a p^n-bounded direct summand...
        if (scalar_image(bound, trunc).size() != 1) return false;
        if (!is_direct_summand(trunc)) return false;
        // ...and maximal among p^n-bounded direct summands.
        for (const auto& s : subs) {
            if (s.size() <= trunc.size() || !s.contains(trunc)) continue;
            if (scalar_image(bound, s).size() != 1) continue;
            if (is_direct_summand(s)) return false;
        }
    }
    return true;
}

std::vector<Subgroup> pure_cyclic_subgroups(const GroupSpec& g) {
    std::map<std::vector<std::int32_t>, Subgroup> found;
    for (std::int32_t x = 1; x < g.size(); ++x) {
        Subgroup c = span(g, {x});
        if (found.count(c.members())) continue;
        if (is_pure(c)) found.emplace(c.members(), c);
    }
    std::vector<Subgroup> out;
    for (auto& [_, s] : found) out.push_back(s);
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.members() < b.members();
    });
    return out;
}

} // namespace autfol
