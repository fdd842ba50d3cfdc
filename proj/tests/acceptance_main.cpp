// Acceptance suite: one check per criterion, each printed as a pass/fail
// line.  Everything here is exhaustive at the stated scope; tolerances are
// exact because all arithmetic is exact.

#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "autfol/folang.hpp"
#include "autfol/groupfile.hpp"
#include "autfol/report.hpp"

using namespace autfol;

namespace {

GroupSpec z3() { return GroupSpec::make(3, {1}); }
GroupSpec z3z3() { return GroupSpec::make(3, {1, 1}); }
GroupSpec z3z9() { return GroupSpec::make(3, {1, 2}); }
GroupSpec z3cubed() { return GroupSpec::make(3, {1, 1, 1}); }
GroupSpec z3z3z9() { return GroupSpec::make(3, {1, 1, 2}); }
GroupSpec z9z9() { return GroupSpec::make(3, {2, 2}); }

std::vector<GroupSpec> four_groups() { return {z3(), z3z3(), z3z9(), z3cubed()}; }

struct Expect {
    bool ok = true;
    std::int64_t cases = 0;
    std::ostringstream note;

    void require(bool condition, const std::string& what) {
        ++cases;
        if (!condition && ok) {
            ok = false;
            note << "first failure: " << what;
        }
    }
};

// ---- criterion 1: eigen-split soundness -----------------------------------

bool criterion_eigensplit(std::string& note) {
    Expect e;
    for (const GroupSpec& g : four_groups()) {
        for (const auto& inv : involutions(g)) {
            bool direct = is_direct_sum({inv.plus, inv.minus});
            bool sizes = inv.plus.size() * inv.minus.size() == g.size();
            e.require(direct && sizes, g.describe() + " " + inv.aut.fwd.matrix_string());
        }
    }
    note = std::to_string(e.cases) + " involutions across four groups";
    return e.ok;
}

// ---- criterion 2: extreme characterization ---------------------------------

bool criterion_extreme(std::string& note) {
    Expect e;
    for (const GroupSpec& g : four_groups()) {
        for (const auto& inv : involutions(g)) {
            bool brute = (inv.plus.size() > 1 && invariant_factors(inv.plus).size() == 1) ||
                         (inv.minus.size() > 1 && invariant_factors(inv.minus).size() == 1);
            e.require(try_extreme_of(inv).has_value() == brute,
                      g.describe() + " " + inv.aut.fwd.matrix_string());
        }
    }
    note = std::to_string(e.cases) + " involutions classified";
    return e.ok;
}

// ---- criterion 3: automorphism counts over two independent code paths ------

// Second path: enumerate well-formed matrices and keep those whose element
// action is a bijection, checked by marking images.
std::vector<Homomorphism> bijective_by_image(const GroupSpec& g) {
    const int k = g.rank();
    const int n = k * k;
    std::vector<std::int64_t> steps(static_cast<size_t>(n)), limits(static_cast<size_t>(n));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            int diff = g.exponents()[static_cast<size_t>(i)] - g.exponents()[static_cast<size_t>(j)];
            std::int64_t step = 1;
            for (int d = 0; d < diff; ++d) step *= g.p();
            steps[static_cast<size_t>(i * k + j)] = step;
            limits[static_cast<size_t>(i * k + j)] = g.modulus(i);
        }
    std::vector<Homomorphism> out;
    std::vector<std::int64_t> m(static_cast<size_t>(n), 0);
    bool done = false;
    while (!done) {
        Homomorphism h(g, m);
        std::vector<bool> hit(static_cast<size_t>(g.size()), false);
        bool bijective = true;
        for (std::int32_t x = 0; x < g.size() && bijective; ++x) {
            std::int32_t im = h.apply_index(x);
            if (hit[static_cast<size_t>(im)]) bijective = false;
            hit[static_cast<size_t>(im)] = true;
        }
        if (bijective) out.push_back(h);
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

bool criterion_aut_counts(std::string& note) {
    Expect e;
    const std::map<std::string, size_t> expected{
        {z3().describe(), 2}, {z3z3().describe(), 48}, {z3z9().describe(), 108}};
    for (const GroupSpec& g : {z3(), z3z3(), z3z9()}) {
        auto auts = enumerate_aut(g);
        auto by_image = bijective_by_image(g);
        e.require(auts.size() == expected.at(g.describe()),
                  g.describe() + ": reduction filter count");
        e.require(by_image.size() == expected.at(g.describe()),
                  g.describe() + ": image filter count");
        // identical matrix sets from the two routes
        bool same = auts.size() == by_image.size();
        for (size_t i = 0; same && i < auts.size(); ++i)
            same = auts[i].fwd == by_image[i];
        e.require(same, g.describe() + ": route disagreement");
        // group closure: composition, inverse, identity
        std::set<std::vector<std::int64_t>> table;
        for (const auto& a : auts) table.insert(a.fwd.matrix());
        e.require(table.count(identity_hom(g).matrix()) == 1, g.describe() + ": identity");
        bool closed = true;
        for (const auto& a : auts) {
            closed = closed && table.count(a.inv.matrix()) == 1;
            for (const auto& b : auts)
                closed = closed && table.count(compose(a, b).fwd.matrix()) == 1;
        }
        e.require(closed, g.describe() + ": closure");
    }
    note = "counts 2 / 48 / 108, two routes, closure checked";
    return e.ok;
}

// ---- criterion 4: relation-8 mode agreement ---------------------------------

bool criterion_maps_to_modes(std::string& note) {
    Expect e;
    for (const GroupSpec& g : {z3z3(), z3z9()}) {
        AutCtx ctx(g);
        for (const auto& f : ctx.automorphisms())
            for (const auto& e1 : ctx.extremes())
                for (const auto& e2 : ctx.extremes())
                    e.require(rel_maps_to(f, e1, e2, Mode::formula) ==
                                  rel_maps_to(f, e1, e2, Mode::semantic),
                              g.describe() + " " + f.fwd.matrix_string());
    }
    note = std::to_string(e.cases) + " triples";
    return e.ok;
}

// ---- criterion 5: the conjugation criterion ---------------------------------

bool criterion_lemma5(std::string& note) {
    Expect e;
    for (const GroupSpec& g : {z3cubed(), z3z3z9()}) {
        AutCtx ctx(g);
        TransvectionFamily fam = canonical_family(ctx);
        for (int i = 0; i < fam.size(); ++i)
            for (int j = 0; j < fam.size(); ++j)
                for (int k = 0; k < fam.size(); ++k) {
                    if (i == j || j == k || i == k) continue;
                    if (fam.ord(i) < fam.ord(j) || fam.ord(k) < fam.ord(i)) continue;
                    for (std::int64_t k1 = 1; k1 < fam.ord(i); ++k1) {
                        if (k1 % g.p() == 0) continue;
                        for (std::int64_t k2 = 1; k2 < fam.ord(j); ++k2)
                            for (std::int64_t l1 = 1; l1 < fam.ord(k); ++l1) {
                                if (l1 % g.p() == 0) continue;
                                for (std::int64_t l2 = 1; l2 < fam.ord(i); ++l2) {
                                    if (l2 % g.p() == 0) continue;
                                    Lemma5Result r = lemma5_criterion(
                                        family_two_term_map(fam, i, k1, j, k2),
                                        family_two_term_map(fam, k, l1, i, l2), fam, i, j,
                                        k);
                                    Element image = elem_add(
                                        fam.gen(k),
                                        elem_add(scalar_mul(l2 * (k1 - 1), fam.gen(i)),
                                                 scalar_mul(l2 * k2, fam.gen(j))));
                                    e.require(r.lhs == r.rhs,
                                              g.describe() + ": equivalence");
                                    e.require(r.conjugate_image_of_bk == image,
                                              g.describe() + ": closed-form image");
                                }
                            }
                    }
                }
    }
    note = std::to_string(e.cases) + " coefficient tuples";
    return e.ok;
}

// ---- criterion 6: transvection commutator law -------------------------------

bool criterion_commutators(std::string& note) {
    Expect e;
    for (const GroupSpec& g : {z3cubed(), z3z3z9()}) {
        AutCtx ctx(g);
        TransvectionFamily fam = canonical_family(ctx);
        bool any = false;
        for (const auto& [key, gij] : fam.maps) {
            auto [i, j] = key;
            for (int k = 0; k < fam.size(); ++k) {
                if (k == i || k == j) continue;
                auto jk = fam.maps.find({j, k});
                auto ik = fam.maps.find({i, k});
                if (jk == fam.maps.end() || ik == fam.maps.end()) continue;
                any = true;
                Automorphism lhs = compose(
                    inverse(jk->second), compose(inverse(gij), compose(jk->second, gij)));
                e.require(lhs == ik->second, g.describe() + ": commutator");
            }
        }
        e.require(any, g.describe() + ": no admissible triple");
        e.require(family_check(fam), g.describe() + ": canonical family");
        // one coefficient set to 2 must break the family
        for (auto it = fam.maps.begin(); it != fam.maps.end(); ++it) {
            TransvectionFamily mutant = fam;
            mutant.maps.at(it->first) = compose(it->second, it->second);
            e.require(!family_check(mutant), g.describe() + ": mutant accepted");
        }
    }
    note = std::to_string(e.cases) + " checks incl. mutated families";
    return e.ok;
}

// ---- criterion 7: encoding homomorphism --------------------------------------

bool criterion_encoding(std::string& note) {
    Expect e;
    for (const GroupSpec& g : {z3z9(), z9z9()}) {
        AutCtx ctx(g);
        Budget budget(1'000'000'000);
        EncodingCtx enc = make_encoding_ctx(ctx, canonical_family(ctx));
        const auto& fam = enc.family;
        Automorphism id = identity_automorphism(g);
        for (int carrier = 0; carrier < fam.size(); ++carrier) {
            std::vector<Element> elements{zero_element(g)};
            for (std::int32_t idx = 1; idx < g.size(); ++idx) {
                Element x{g, idx};
                if (order_of(x) < fam.ord(carrier) && !fam.core(carrier).contains_index(idx))
                    elements.push_back(x);
            }
            auto enc_or_id = [&](const Element& x) {
                return x.index == 0 ? id : encode(x, fam, carrier);
            };
            for (const auto& a1 : elements)
                for (const auto& a2 : elements) {
                    e.require(enc_eq(enc_or_id(a1), enc_or_id(a2), enc, ctx, budget) ==
                                  (a1 == a2),
                              g.describe() + ": equality");
                    for (const auto& a3 : elements)
                        e.require(enc_add(enc_or_id(a1), enc_or_id(a2), enc_or_id(a3), enc,
                                          ctx, budget) == (elem_add(a1, a2) == a3),
                                  g.describe() + ": addition");
                }
        }
    }
    note = std::to_string(e.cases) + " encodable tuples, shared carriers";
    return e.ok;
}

// ---- criterion 8: basic subgroups of the 27-element group --------------------

bool criterion_basic(std::string& note) {
    Expect e;
    GroupSpec g = z3z9();
    Subgroup whole = whole_group(g);
    for (const auto& b : all_subgroups(g)) {
        bool definitional = is_basic_subgroup(b);
        bool truncations = is_basic_subgroup_via_truncations(b);
        e.require(definitional == truncations, "route disagreement");
        e.require(definitional == (b == whole), "finite law");
    }
    note = std::to_string(e.cases) + " checks over the full subgroup lattice";
    return e.ok;
}

// ---- criterion 9: the witness argument behind InBase --------------------------

bool criterion_inbase(std::string& note) {
    Expect e;
    GroupSpec g = z3z9();
    AutCtx ctx(g);
    Budget budget(1'000'000'000);

    // split A = 0 (+) A over negation
    Involution neg = make_involution(to_automorphism(hom_from_matrix(g, {2, 0, 0, 8})));
    Split split = split_of_pair(make_pair(neg, ctx.extremes().front()));

    Automorphism nu = make_shift_automorphism(hom_from_matrix(g, {0, 1, 0, 0}), split);

    auto predicted = [&](const Subgroup& core) {
        if (split.low.contains(core)) return true;
        for (std::int32_t a = 1; a < g.size(); ++a) {
            if (!split.fin.contains_index(a)) continue;
            if (g.order_of_index(a) <= core.size()) continue;
            Subgroup ca = span(g, {a});
            if (join(ca, nu.apply_subgroup(ca)) == join(ca, core)) return true;
        }
        return false;
    };
    for (const auto& ext : ctx.extremes())
        e.require(in_base(ext, nu, split, ctx, budget) == predicted(ext.core),
                  "extreme with core size " + std::to_string(ext.core.size()));

    // and the collected base is generated by exactly the predicted cores
    Subgroup collected = collect_base(nu, split, ctx, budget);
    std::vector<std::int32_t> gens;
    for (const auto& c : ctx.cores())
        if (predicted(c)) gens.insert(gens.end(), c.members().begin(), c.members().end());
    e.require(collected == span(g, gens), "collected base");

    note = std::to_string(e.cases) + " extremes against the independent witness oracle";
    return e.ok;
}

// ---- criterion 10: folang guard soundness and corpus agreement ----------------

struct FolangHarness {
    AutCtx ctx;
    std::shared_ptr<const EncodingCtx> enc;
    folang::Registry reg;

    explicit FolangHarness(GroupSpec g) : ctx(std::move(g)) {
        enc = std::make_shared<const EncodingCtx>(
            make_encoding_ctx(ctx, canonical_family(ctx)));
        folang::register_standard_primitives(reg, enc);
    }

    bool eval(const folang::Formula& f, std::map<std::string, folang::Value> b) {
        Budget budget(1'000'000'000);
        folang::Environment env{&ctx, &reg, std::move(b)};
        return folang::evaluate(f, env, budget).value;
    }
};

bool criterion_folang(std::string& note) {
    Expect e;
    auto corpus = folang::load_corpus(AUTFOL_CORPUS_DIR);
    e.require(corpus.size() >= 11, "corpus size");

    auto val = [](const Automorphism& a) { return folang::Value{a, std::nullopt}; };
    auto ext_val = [](const ExtremeInvolution& x) { return folang::Value{x.aut(), x}; };

    for (GroupSpec g : {z3(), z3z3()}) {
        FolangHarness h(std::move(g));
        const AutCtx& ctx = h.ctx;

        std::vector<Pair> pair_reps;
        {
            std::set<std::pair<std::vector<std::int32_t>, std::int64_t>> seen;
            for (const auto& p : ctx.pairs())
                if (seen.insert({p.summand.members(), ord_of_extreme(p.eps)}).second)
                    pair_reps.push_back(p);
        }

        for (const auto& entry : corpus) {
            // binding sweeps per formula
            std::vector<std::map<std::string, folang::Value>> sweeps;
            if (entry.name == "MapsTo") {
                for (const auto& f : ctx.automorphisms())
                    for (const auto& e1 : ctx.extremes())
                        for (const auto& e2 : ctx.extremes())
                            sweeps.push_back(
                                {{"f", val(f)}, {"e1", ext_val(e1)}, {"e2", ext_val(e2)}});
            } else if (entry.name == "ByOrd") {
                for (const auto& p : ctx.pairs())
                    sweeps.push_back({{"xi", val(p.xi.aut)}, {"eps", ext_val(p.eps)}});
            } else if (entry.name == "Final") {
                for (const auto& p : pair_reps)
                    sweeps.push_back({{"xi0", val(p.xi.aut)}, {"eps0", ext_val(p.eps)}});
            } else if (entry.name == "InBase") {
                for (const auto& p : pair_reps)
                    for (const auto& ext : ctx.extremes())
                        sweeps.push_back({{"e", ext_val(ext)},
                                          {"nu", val(identity_automorphism(ctx.group()))},
                                          {"xi", val(p.xi.aut)},
                                          {"eps", ext_val(p.eps)}});
            } else if (entry.name == "Rest" || entry.name == "MaxRest") {
                for (const auto& p : pair_reps)
                    for (const auto& e0 : ctx.extremes())
                        sweeps.push_back({{"xi1", val(p.xi.aut)},
                                          {"eps1", ext_val(p.eps)},
                                          {"e0", ext_val(e0)}});
            } else if (entry.name == "IsBase") {
                for (const auto& p : pair_reps)
                    sweeps.push_back({{"nu", val(identity_automorphism(ctx.group()))},
                                      {"xi", val(p.xi.aut)},
                                      {"eps", ext_val(p.eps)}});
            } else if (entry.name == "EncoderSel") {
                for (const auto& f : ctx.automorphisms()) sweeps.push_back({{"f", val(f)}});
            } else if (entry.name == "EncEq") {
                Automorphism id = identity_automorphism(ctx.group());
                sweeps.push_back({{"f1", val(id)}, {"f2", val(id)}});
            } else if (entry.name == "EncAdd") {
                Automorphism id = identity_automorphism(ctx.group());
                sweeps.push_back({{"f1", val(id)}, {"f2", val(id)}, {"f3", val(id)}});
            } else if (entry.name == "Sim") {
                for (const auto& p : pair_reps)
                    for (size_t i = 0; i < ctx.automorphisms().size(); i += 5)
                        for (size_t j = 0; j < ctx.automorphisms().size(); j += 7)
                            sweeps.push_back({{"f1", val(ctx.automorphisms()[i])},
                                              {"f2", val(ctx.automorphisms()[j])},
                                              {"xi", val(p.xi.aut)},
                                              {"eps", ext_val(p.eps)}});
            }

            folang::Formula elaborated = folang::guard_elaborated(entry.formula);
            for (const auto& b : sweeps) {
                bool tagged = h.eval(entry.formula, b);
                // guarded evaluation equals the unguarded elaboration
                e.require(tagged == h.eval(elaborated, b),
                          entry.name + ": guard soundness");

                // and equals the predicates-module computation
                Budget budget(1'000'000'000);
                bool direct = false;
                const AutCtx& c = h.ctx;
                auto pr = [&](const char* xi, const char* eps) {
                    return make_pair(make_involution(b.at(xi).aut), *b.at(eps).designation);
                };
                if (entry.name == "MapsTo")
                    direct = rel_maps_to(b.at("f").aut, *b.at("e1").designation,
                                         *b.at("e2").designation, Mode::formula);
                else if (entry.name == "ByOrd")
                    direct = by_ord(pr("xi", "eps"), Mode::formula, c, budget);
                else if (entry.name == "Final")
                    direct = final_pair(pr("xi0", "eps0"), c, budget).value;
                else if (entry.name == "InBase")
                    direct = in_base(*b.at("e").designation, b.at("nu").aut,
                                     split_of_pair(pr("xi", "eps")), c, budget);
                else if (entry.name == "Rest")
                    direct = rest(pr("xi1", "eps1"), *b.at("e0").designation, c, budget);
                else if (entry.name == "MaxRest")
                    direct = max_rest(pr("xi1", "eps1"), *b.at("e0").designation, c, budget);
                else if (entry.name == "IsBase")
                    direct = is_base(b.at("nu").aut, split_of_pair(pr("xi", "eps")),
                                     Mode::formula, c, budget);
                else if (entry.name == "EncoderSel")
                    direct = is_encoder(b.at("f").aut, h.enc->family, Mode::formula, c,
                                        budget);
                else if (entry.name == "EncEq")
                    direct = enc_eq(b.at("f1").aut, b.at("f2").aut, *h.enc, c, budget);
                else if (entry.name == "EncAdd")
                    direct = enc_add(b.at("f1").aut, b.at("f2").aut, b.at("f3").aut,
                                     *h.enc, c, budget);
                else if (entry.name == "Sim")
                    direct = sim(b.at("f1").aut, b.at("f2").aut, pr("xi", "eps"),
                                 Mode::formula, c, budget);
                e.require(tagged == direct, entry.name + ": predicates agreement");
            }
        }
    }
    note = std::to_string(e.cases) + " binding evaluations across the corpus";
    return e.ok;
}

// ---- criterion 11: determinism ------------------------------------------------

bool criterion_determinism(std::string& note) {
    GroupSpec g = z3z9();
    report::SuiteReport r1 =
        report::run_suite("all", g, 50'000'000, Conventions{}, AUTFOL_CORPUS_DIR);
    report::SuiteReport r2 =
        report::run_suite("all", g, 50'000'000, Conventions{}, AUTFOL_CORPUS_DIR);
    std::string b1 = report::report_body_json(r1);
    std::string b2 = report::report_body_json(r2);
    note = "report body of " + std::to_string(b1.size()) + " bytes compared";
    return !b1.empty() && b1 == b2 && r1.pass();
}

} // namespace

int main() {
    struct Criterion {
        int number;
        std::string title;
        std::function<bool(std::string&)> fn;
    };
    const std::vector<Criterion> criteria{
        {1, "eigen-split soundness", criterion_eigensplit},
        {2, "extreme characterization", criterion_extreme},
        {3, "automorphism counts and closure", criterion_aut_counts},
        {4, "transport relation mode agreement", criterion_maps_to_modes},
        {5, "conjugation criterion equivalence", criterion_lemma5},
        {6, "transvection commutator law", criterion_commutators},
        {7, "encoding homomorphism", criterion_encoding},
        {8, "basic subgroup finite law", criterion_basic},
        {9, "base membership witness replay", criterion_inbase},
        {10, "formula language soundness and agreement", criterion_folang},
        {11, "report determinism", criterion_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.number << ": "
                  << c.title;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << std::endl;
        if (!ok) ++failures;
    }
    if (failures) {
        std::cout << failures << " criteria failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
