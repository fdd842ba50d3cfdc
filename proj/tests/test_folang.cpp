#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "autfol/folang.hpp"

using namespace autfol;
using namespace autfol::folang;

namespace {

struct Harness {
    AutCtx ctx;
    std::shared_ptr<const EncodingCtx> enc;
    Registry reg;

    explicit Harness(GroupSpec g) : ctx(std::move(g)) {
        enc = std::make_shared<const EncodingCtx>(
            make_encoding_ctx(ctx, canonical_family(ctx)));
        register_standard_primitives(reg, enc);
    }

    Outcome eval(const Formula& f, std::map<std::string, Value> bindings,
                 std::int64_t limit = 1'000'000'000) {
        Budget budget(limit);
        Environment env{&ctx, &reg, std::move(bindings)};
        return evaluate(f, env, budget);
    }
    Outcome eval(const std::string& text, std::map<std::string, Value> bindings = {},
                 std::int64_t limit = 1'000'000'000) {
        return eval(parse(text), std::move(bindings), limit);
    }
};

std::map<std::string, const CorpusEntry*> corpus_by_name(
    const std::vector<CorpusEntry>& corpus) {
    std::map<std::string, const CorpusEntry*> out;
    for (const auto& e : corpus) out[e.name] = &e;
    return out;
}

Value val(const Automorphism& a) { return Value{a, std::nullopt}; }
Value val(const ExtremeInvolution& e) { return Value{e.aut(), e}; }

} // namespace

TEST_CASE("parser builds the expected trees") {
    Formula f1 = parse("forall e : Extreme . Extreme(e)");
    CHECK(f1.kind == Formula::Kind::forall);
    CHECK(f1.name == "e");
    CHECK(f1.guard == Guard::extreme);
    CHECK(f1.children[0].kind == Formula::Kind::prim);
    CHECK(f1.children[0].name == "Extreme");
    CHECK(f1.children[0].terms == std::vector<Term>{var("e")});

    Formula f2 = parse("exists f . f * f = id");
    CHECK(f2.kind == Formula::Kind::exists);
    CHECK(f2.guard == Guard::all);
    const Formula& eq = f2.children[0];
    CHECK(eq.kind == Formula::Kind::equal);
    CHECK(eq.terms[0] == compose_term(var("f"), var("f")));
    CHECK(eq.terms[1] == identity_term());

    // pair sugar expands to two guarded quantifiers plus the Pair primitive
    Formula f3 = parse("forall (xi, eps) : Pair . ord_leq(eps, eps)");
    CHECK(f3.kind == Formula::Kind::forall);
    CHECK(f3.guard == Guard::involution);
    CHECK(f3.name == "xi");
    const Formula& inner = f3.children[0];
    CHECK(inner.kind == Formula::Kind::forall);
    CHECK(inner.guard == Guard::extreme);
    CHECK(inner.name == "eps");
    const Formula& impl = inner.children[0];
    CHECK(impl.kind == Formula::Kind::implication);
    CHECK(impl.children[0].name == "Pair");
}

TEST_CASE("parser reports positions on bad input") {
    CHECK_THROWS_WITH_AS(parse("forall . x"), doctest::Contains("SyntaxError"), error);
    CHECK_THROWS_WITH_AS(parse("f = "), doctest::Contains("position"), error);
    CHECK_THROWS_WITH_AS(parse("exists e : Weird . true"), doctest::Contains("guard"),
                         error);
    CHECK_THROWS_WITH_AS(parse("f ** g = id"), doctest::Contains("SyntaxError"), error);
}

TEST_CASE("round trip on the shipped corpus") {
    auto corpus = load_corpus(AUTFOL_CORPUS_DIR);
    CHECK(corpus.size() == 11);
    for (const auto& e : corpus) {
        CAPTURE(e.name);
        Formula reparsed = parse(unparse(e.formula));
        CHECK(reparsed == e.formula);
        // a second round for stability of the printed form
        CHECK(unparse(reparsed) == unparse(e.formula));
    }
}

TEST_CASE("registry rejects duplicates, unknowns and arity mismatches") {
    Registry reg;
    reg.register_primitive("p", 1, [](std::span<const Value>, const AutCtx&, Budget&) {
        return true;
    });
    CHECK_THROWS_WITH_AS(reg.register_primitive(
                             "p", 2,
                             [](std::span<const Value>, const AutCtx&, Budget&) {
                                 return true;
                             }),
                         doctest::Contains("DuplicateName"), error);

    Harness h(GroupSpec::make(3, {1}));
    CHECK_THROWS_WITH_AS(h.eval("mystery(f)", {{"f", val(identity_automorphism(h.ctx.group()))}}),
                         doctest::Contains("UnknownPrimitive"), error);
    CHECK_THROWS_WITH_AS(h.eval("ord_lt(f)", {{"f", val(identity_automorphism(h.ctx.group()))}}),
                         doctest::Contains("ArityMismatch"), error);
}

TEST_CASE("group axioms evaluate with witnesses") {
    Harness h(GroupSpec::make(3, {1}));
    Outcome out = h.eval("forall f . exists g . f * g = id");
    CHECK(out.value);

    // witness replay: the recorded existential witness satisfies the body
    Outcome ex = h.eval("exists g . g * g = id and not (g = id)");
    CHECK(ex.value);
    REQUIRE(ex.witnesses.size() == 1);
    CHECK(ex.witnesses[0].var == "g");
    Outcome replay = h.eval("g * g = id and not (g = id)", {{"g", ex.witnesses[0].value}});
    CHECK(replay.value);
}

TEST_CASE("irreflexivity of the strict order") {
    for (GroupSpec g : {GroupSpec::make(3, {1}), GroupSpec::make(3, {1, 1}),
                        GroupSpec::make(3, {1, 2})}) {
        Harness h(std::move(g));
        CHECK_FALSE(h.eval("exists e : Extreme . ord_lt(e, e)").value);
    }
}

TEST_CASE("determinism: identical outcomes and witnesses") {
    Harness h(GroupSpec::make(3, {1, 2}));
    Formula f = parse("exists e : Extreme . exists e2 : Extreme . ord_lt(e, e2)");
    Outcome a = h.eval(f, {});
    Outcome b = h.eval(f, {});
    CHECK(a.value == b.value);
    REQUIRE(a.witnesses.size() == b.witnesses.size());
    for (size_t i = 0; i < a.witnesses.size(); ++i) {
        CHECK(a.witnesses[i].var == b.witnesses[i].var);
        CHECK(a.witnesses[i].value.aut == b.witnesses[i].value.aut);
    }
}

TEST_CASE("budget failure names the site") {
    Harness h(GroupSpec::make(3, {1, 2}));
    CHECK_THROWS_WITH_AS(h.eval("forall f . forall g . forall k . f * g * k = f * g * k",
                                {}, 50),
                         doctest::Contains("BudgetExceeded"), error);
}

TEST_CASE("transport transcription equals the relation on every triple") {
    auto entries = load_corpus(AUTFOL_CORPUS_DIR);
    auto corpus = corpus_by_name(entries);
    const CorpusEntry& maps_to = *corpus.at("MapsTo");
    for (GroupSpec g : {GroupSpec::make(3, {1}), GroupSpec::make(3, {1, 1})}) {
        Harness h(std::move(g));
        for (const auto& f : h.ctx.automorphisms())
            for (const auto& e1 : h.ctx.extremes())
                for (const auto& e2 : h.ctx.extremes()) {
                    bool via_folang =
                        h.eval(maps_to.formula,
                               {{"f", val(f)}, {"e1", val(e1)}, {"e2", val(e2)}})
                            .value;
                    CHECK(via_folang == rel_maps_to(f, e1, e2, Mode::formula));
                }
    }
}

namespace {

// Representative binding sweeps per corpus formula, used both for the
// guard-soundness check and for the agreement with the predicates module.
std::vector<std::map<std::string, Value>> sweep_bindings(const Harness& h,
                                                         const CorpusEntry& entry) {
    const AutCtx& ctx = h.ctx;
    std::vector<std::map<std::string, Value>> out;
    auto pairs_sample = [&]() {
        std::vector<Pair> reps;
        std::set<std::pair<std::vector<std::int32_t>, std::int64_t>> seen;
        for (const auto& p : ctx.pairs())
            if (seen.insert({p.summand.members(), ord_of_extreme(p.eps)}).second)
                reps.push_back(p);
        return reps;
    };
    auto aut_sample = [&](size_t stride) {
        std::vector<Automorphism> v;
        const auto& all = ctx.automorphisms();
        for (size_t i = 0; i < all.size(); i += stride) v.push_back(all[i]);
        return v;
    };

    if (entry.name == "MapsTo") {
        for (const auto& f : aut_sample(7))
            for (const auto& e1 : ctx.extremes())
                for (const auto& e2 : ctx.extremes())
                    out.push_back({{"f", val(f)}, {"e1", val(e1)}, {"e2", val(e2)}});
    } else if (entry.name == "ByOrd") {
        for (const auto& p : ctx.pairs())
            out.push_back({{"xi", val(p.xi.aut)}, {"eps", val(p.eps)}});
    } else if (entry.name == "Final") {
        for (const auto& p : pairs_sample())
            out.push_back({{"xi0", val(p.xi.aut)}, {"eps0", val(p.eps)}});
    } else if (entry.name == "InBase") {
        std::vector<Automorphism> nus{identity_automorphism(ctx.group())};
        for (const auto& a : aut_sample(17)) nus.push_back(a);
        for (const auto& p : pairs_sample())
            for (const auto& nu : nus)
                for (const auto& e : ctx.extremes())
                    out.push_back({{"e", val(e)},
                                   {"nu", val(nu)},
                                   {"xi", val(p.xi.aut)},
                                   {"eps", val(p.eps)}});
    } else if (entry.name == "Rest" || entry.name == "MaxRest") {
        for (const auto& p : pairs_sample())
            for (const auto& e0 : ctx.extremes())
                out.push_back(
                    {{"xi1", val(p.xi.aut)}, {"eps1", val(p.eps)}, {"e0", val(e0)}});
    } else if (entry.name == "IsBase") {
        std::vector<Automorphism> nus{identity_automorphism(ctx.group())};
        for (const auto& a : aut_sample(31)) nus.push_back(a);
        for (const auto& p : pairs_sample())
            for (const auto& nu : nus)
                out.push_back(
                    {{"nu", val(nu)}, {"xi", val(p.xi.aut)}, {"eps", val(p.eps)}});
    } else if (entry.name == "EncoderSel") {
        for (const auto& f : ctx.automorphisms()) out.push_back({{"f", val(f)}});
    } else if (entry.name == "EncEq" || entry.name == "EncAdd") {
        const auto& fam = h.enc->family;
        std::vector<Automorphism> encoders{identity_automorphism(ctx.group())};
        for (int carrier = 0; carrier < fam.size(); ++carrier)
            for (std::int32_t idx = 1; idx < ctx.group().size(); ++idx) {
                Element x{ctx.group(), idx};
                if (order_of(x) < fam.ord(carrier) && !fam.core(carrier).contains_index(idx))
                    encoders.push_back(encode(x, fam, carrier));
            }
        if (entry.name == "EncEq") {
            for (const auto& f1 : encoders)
                for (const auto& f2 : encoders)
                    out.push_back({{"f1", val(f1)}, {"f2", val(f2)}});
        } else {
            // full triples are heavy; stride the first argument
            for (size_t i = 0; i < encoders.size(); i += 2)
                for (const auto& f2 : encoders)
                    for (const auto& f3 : encoders)
                        out.push_back({{"f1", val(encoders[i])},
                                       {"f2", val(f2)},
                                       {"f3", val(f3)}});
        }
    } else if (entry.name == "Sim") {
        for (const auto& p : pairs_sample())
            for (const auto& f1 : aut_sample(11))
                for (const auto& f2 : aut_sample(13))
                    out.push_back({{"f1", val(f1)},
                                   {"f2", val(f2)},
                                   {"xi", val(p.xi.aut)},
                                   {"eps", val(p.eps)}});
    }
    return out;
}

bool predicates_result(const Harness& h, const CorpusEntry& entry,
                       const std::map<std::string, Value>& b, Budget& budget) {
    const AutCtx& ctx = h.ctx;
    auto ext = [&](const char* name) { return *b.at(name).designation; };
    auto pair_of = [&](const char* xi, const char* eps) {
        return make_pair(make_involution(b.at(xi).aut), *b.at(eps).designation);
    };
    if (entry.name == "MapsTo")
        return rel_maps_to(b.at("f").aut, ext("e1"), ext("e2"), Mode::formula);
    if (entry.name == "ByOrd")
        return by_ord(pair_of("xi", "eps"), Mode::formula, ctx, budget);
    if (entry.name == "Final")
        return final_pair(pair_of("xi0", "eps0"), ctx, budget).value;
    if (entry.name == "InBase")
        return in_base(ext("e"), b.at("nu").aut, split_of_pair(pair_of("xi", "eps")), ctx,
                       budget);
    if (entry.name == "Rest")
        return rest(pair_of("xi1", "eps1"), ext("e0"), ctx, budget);
    if (entry.name == "MaxRest")
        return max_rest(pair_of("xi1", "eps1"), ext("e0"), ctx, budget);
    if (entry.name == "IsBase")
        return is_base(b.at("nu").aut, split_of_pair(pair_of("xi", "eps")), Mode::formula,
                       ctx, budget);
    if (entry.name == "EncoderSel")
        return is_encoder(b.at("f").aut, h.enc->family, Mode::formula, ctx, budget);
    if (entry.name == "EncEq")
        return enc_eq(b.at("f1").aut, b.at("f2").aut, *h.enc, ctx, budget);
    if (entry.name == "EncAdd")
        return enc_add(b.at("f1").aut, b.at("f2").aut, b.at("f3").aut, *h.enc, ctx, budget);
    if (entry.name == "Sim")
        return sim(b.at("f1").aut, b.at("f2").aut, pair_of("xi", "eps"), Mode::formula, ctx,
                   budget);
    FAIL("unknown corpus entry");
    return false;
}

} // namespace

TEST_CASE("guard soundness across the corpus") {
    auto corpus = load_corpus(AUTFOL_CORPUS_DIR);
    for (GroupSpec g : {GroupSpec::make(3, {1}), GroupSpec::make(3, {1, 1})}) {
        Harness h(std::move(g));
        for (const auto& entry : corpus) {
            CAPTURE(entry.name);
            Formula plain = guard_elaborated(entry.formula);
            auto sweeps = sweep_bindings(h, entry);
            // keep the elaborated sweeps affordable
            size_t stride = sweeps.size() > 400 ? sweeps.size() / 400 + 1 : 1;
            for (size_t i = 0; i < sweeps.size(); i += stride) {
                CHECK(h.eval(entry.formula, sweeps[i]).value ==
                      h.eval(plain, sweeps[i]).value);
            }
        }
    }
}

TEST_CASE("corpus formulas agree with the predicates module") {
    auto corpus = load_corpus(AUTFOL_CORPUS_DIR);
    for (GroupSpec g : {GroupSpec::make(3, {1}), GroupSpec::make(3, {1, 1}),
                        GroupSpec::make(3, {1, 2})}) {
        Harness h(std::move(g));
        for (const auto& entry : corpus) {
            CAPTURE(entry.name);
            CAPTURE(h.ctx.group().describe());
            for (const auto& bindings : sweep_bindings(h, entry)) {
                Budget budget(1'000'000'000);
                bool direct = predicates_result(h, entry, bindings, budget);
                bool via_folang = h.eval(entry.formula, bindings).value;
                CHECK(direct == via_folang);
            }
        }
    }
}

TEST_CASE("second transcription agrees on the order-decomposition formula") {
    // the hand-coded evaluation and the corpus text are independent routes
    auto entries = load_corpus(AUTFOL_CORPUS_DIR);
    auto corpus = corpus_by_name(entries);
    Harness h(GroupSpec::make(3, {1, 2}));
    Budget budget(1'000'000'000);
    for (const auto& p : h.ctx.pairs()) {
        bool direct = final_pair(p, h.ctx, budget).value;
        bool transcribed = h.eval(corpus.at("Final")->formula,
                                  {{"xi0", val(p.xi.aut)}, {"eps0", val(p.eps)}})
                               .value;
        CHECK(direct == transcribed);
    }
}
