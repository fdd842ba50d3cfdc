#include "autfol/folang.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace autfol::folang {

bool Term::operator==(const Term& o) const {
    return kind == o.kind && name == o.name && args == o.args;
}

Term var(std::string name) {
    Term t;
    t.kind = Term::Kind::variable;
    t.name = std::move(name);
    return t;
}

Term identity_term() { return Term{}; }

Term compose_term(Term lhs, Term rhs) {
    Term t;
    t.kind = Term::Kind::compose;
    t.args = {std::move(lhs), std::move(rhs)};
    return t;
}

Term inverse_term(Term inner) {
    Term t;
    t.kind = Term::Kind::inverse;
    t.args = {std::move(inner)};
    return t;
}

const char* guard_name(Guard g) {
    switch (g) {
        case Guard::all: return "All";
        case Guard::involution: return "Involution";
        case Guard::extreme: return "Extreme";
        case Guard::pair_component: return "PairComponent";
    }
    return "All";
}

bool Formula::operator==(const Formula& o) const {
    return kind == o.kind && truth_value == o.truth_value && name == o.name &&
           guard == o.guard && terms == o.terms && children == o.children;
}

// ---- tokenizer / parser -----------------------------------------------------

namespace {

struct Token {
    enum class Kind { ident, lparen, rparen, comma, dot, star, equal, colon, invert, end };
    Kind kind;
    std::string text;
    size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') { // comment to end of line
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        size_t start = i;
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() &&
                   (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            out.push_back({Token::Kind::ident, s.substr(start, i - start), start});
            continue;
        }
        switch (c) {
            case '(': out.push_back({Token::Kind::lparen, "(", start}); break;
            case ')': out.push_back({Token::Kind::rparen, ")", start}); break;
            case ',': out.push_back({Token::Kind::comma, ",", start}); break;
            case '.': out.push_back({Token::Kind::dot, ".", start}); break;
            case '*': out.push_back({Token::Kind::star, "*", start}); break;
            case '=': out.push_back({Token::Kind::equal, "=", start}); break;
            case ':': out.push_back({Token::Kind::colon, ":", start}); break;
            case '^':
                if (s.compare(start, 3, "^-1") == 0) {
                    out.push_back({Token::Kind::invert, "^-1", start});
                    i += 2;
                    break;
                }
                [[fallthrough]];
            default:
                fail(errc::syntax_error,
                     "unexpected character '" + std::string(1, c) + "' at position " +
                         std::to_string(start));
        }
        ++i;
    }
    out.push_back({Token::Kind::end, "", s.size()});
    return out;
}

const char* kKeywords[] = {"forall", "exists", "and", "or",   "implies",
                           "iff",    "not",    "id",  "true", "false"};

bool is_keyword(const std::string& t) {
    for (const char* k : kKeywords)
        if (t == k) return true;
    return false;
}

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

    Formula parse_formula_all() {
        Formula f = parse_iff();
        expect_end();
        return f;
    }

private:
    std::vector<Token> toks_;
    size_t at_ = 0;

    const Token& peek(size_t ahead = 0) const {
        size_t i = at_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& advance() { return toks_[at_++]; }
    bool match(Token::Kind k) {
        if (peek().kind != k) return false;
        ++at_;
        return true;
    }
    bool match_ident(const char* word) {
        if (peek().kind != Token::Kind::ident || peek().text != word) return false;
        ++at_;
        return true;
    }
    [[noreturn]] void err(const std::string& what) const {
        fail(errc::syntax_error, what + " at position " + std::to_string(peek().pos));
    }
    void expect(Token::Kind k, const char* what) {
        if (!match(k)) err(std::string("expected ") + what);
    }
    void expect_end() {
        if (peek().kind != Token::Kind::end) err("trailing input");
    }

    Formula parse_iff() {
        Formula f = parse_implies();
        while (match_ident("iff")) {
            Formula rhs = parse_implies();
            Formula out;
            out.kind = Formula::Kind::equivalence;
            out.children = {std::move(f), std::move(rhs)};
            f = std::move(out);
        }
        return f;
    }

    Formula parse_implies() {
        Formula f = parse_or();
        if (match_ident("implies")) {
            Formula rhs = parse_implies(); // right associative
            Formula out;
            out.kind = Formula::Kind::implication;
            out.children = {std::move(f), std::move(rhs)};
            return out;
        }
        return f;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (match_ident("or")) {
            Formula rhs = parse_and();
            Formula out;
            out.kind = Formula::Kind::disjunction;
            out.children = {std::move(f), std::move(rhs)};
            f = std::move(out);
        }
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (match_ident("and")) {
            Formula rhs = parse_unary();
            Formula out;
            out.kind = Formula::Kind::conjunction;
            out.children = {std::move(f), std::move(rhs)};
            f = std::move(out);
        }
        return f;
    }

    Formula parse_unary() {
        if (match_ident("not")) {
            Formula out;
            out.kind = Formula::Kind::negation;
            out.children = {parse_unary()};
            return out;
        }
        if (peek().kind == Token::Kind::ident &&
            (peek().text == "forall" || peek().text == "exists"))
            return parse_quantifier();
        return parse_atom();
    }

    Guard parse_guard() {
        if (peek().kind != Token::Kind::ident) err("expected a guard name");
        std::string g = advance().text;
        if (g == "All") return Guard::all;
        if (g == "Involution") return Guard::involution;
        if (g == "Extreme") return Guard::extreme;
        if (g == "PairComponent") return Guard::pair_component;
        err("unknown guard '" + g + "'");
    }

    std::string parse_binder_name() {
        if (peek().kind != Token::Kind::ident || is_keyword(peek().text))
            err("expected a variable name");
        return advance().text;
    }

    Formula parse_quantifier() {
        bool universal = advance().text == "forall";
        if (match(Token::Kind::lparen)) {
            // pair sugar: (xi, eps) : Pair
            std::string xi = parse_binder_name();
            expect(Token::Kind::comma, "','");
            std::string eps = parse_binder_name();
            expect(Token::Kind::rparen, "')'");
            expect(Token::Kind::colon, "':'");
            if (peek().kind != Token::Kind::ident || advance().text != "Pair")
                err("pair binders require the Pair guard");
            expect(Token::Kind::dot, "'.'");
            Formula body = parse_iff(); // quantifier scope extends maximally

            Formula pair_prim;
            pair_prim.kind = Formula::Kind::prim;
            pair_prim.name = "Pair";
            pair_prim.terms = {var(xi), var(eps)};

            Formula inner;
            inner.kind = universal ? Formula::Kind::implication : Formula::Kind::conjunction;
            inner.children = {std::move(pair_prim), std::move(body)};

            Formula eps_q;
            eps_q.kind = universal ? Formula::Kind::forall : Formula::Kind::exists;
            eps_q.name = eps;
            eps_q.guard = Guard::extreme;
            eps_q.children = {std::move(inner)};

            Formula xi_q;
            xi_q.kind = universal ? Formula::Kind::forall : Formula::Kind::exists;
            xi_q.name = xi;
            xi_q.guard = Guard::involution;
            xi_q.children = {std::move(eps_q)};
            return xi_q;
        }
        std::string name = parse_binder_name();
        Guard g = Guard::all;
        if (match(Token::Kind::colon)) g = parse_guard();
        expect(Token::Kind::dot, "'.'");
        Formula out;
        out.kind = universal ? Formula::Kind::forall : Formula::Kind::exists;
        out.name = name;
        out.guard = g;
        out.children = {parse_iff()}; // maximal scope
        return out;
    }

    std::optional<Term> try_parse_term() {
        size_t save = at_;
        try {
            Term t = parse_term();
            return t;
        } catch (const error&) {
            at_ = save;
            return std::nullopt;
        }
    }

    Term parse_term() {
        Term t = parse_factor();
        while (match(Token::Kind::star)) t = compose_term(std::move(t), parse_factor());
        return t;
    }

    Term parse_factor() {
        Term t = parse_base();
        while (match(Token::Kind::invert)) t = inverse_term(std::move(t));
        return t;
    }

    Term parse_base() {
        if (match(Token::Kind::lparen)) {
            Term t = parse_term();
            expect(Token::Kind::rparen, "')'");
            return t;
        }
        if (peek().kind == Token::Kind::ident) {
            if (peek().text == "id") {
                ++at_;
                return identity_term();
            }
            if (!is_keyword(peek().text) && peek(1).kind != Token::Kind::lparen)
                return var(advance().text);
        }
        err("expected a term");
    }

    Formula parse_atom() {
        if (peek().kind == Token::Kind::ident &&
            (peek().text == "true" || peek().text == "false")) {
            Formula f;
            f.kind = Formula::Kind::truth;
            f.truth_value = advance().text == "true";
            return f;
        }
        // primitive application: IDENT '(' ...
        if (peek().kind == Token::Kind::ident && !is_keyword(peek().text) &&
            peek(1).kind == Token::Kind::lparen) {
            Formula f;
            f.kind = Formula::Kind::prim;
            f.name = advance().text;
            expect(Token::Kind::lparen, "'('");
            if (!match(Token::Kind::rparen)) {
                f.terms.push_back(parse_term());
                while (match(Token::Kind::comma)) f.terms.push_back(parse_term());
                expect(Token::Kind::rparen, "')'");
            }
            return f;
        }
        // equality: term = term (backtracks on failure)
        {
            size_t save = at_;
            auto lhs = try_parse_term();
            if (lhs && match(Token::Kind::equal)) {
                Term rhs = parse_term();
                Formula f;
                f.kind = Formula::Kind::equal;
                f.terms = {std::move(*lhs), std::move(rhs)};
                return f;
            }
            at_ = save;
        }
        if (match(Token::Kind::lparen)) {
            Formula f = parse_iff();
            expect(Token::Kind::rparen, "')'");
            return f;
        }
        err("expected a formula");
    }
};

void unparse_term(const Term& t, std::ostream& os) {
    switch (t.kind) {
        case Term::Kind::variable: os << t.name; break;
        case Term::Kind::identity: os << "id"; break;
        case Term::Kind::compose:
            os << "(";
            unparse_term(t.args[0], os);
            os << " * ";
            unparse_term(t.args[1], os);
            os << ")";
            break;
        case Term::Kind::inverse:
            os << "(";
            unparse_term(t.args[0], os);
            os << ")^-1";
            break;
    }
}

void unparse_formula(const Formula& f, std::ostream& os) {
    switch (f.kind) {
        case Formula::Kind::truth: os << (f.truth_value ? "true" : "false"); break;
        case Formula::Kind::equal:
            unparse_term(f.terms[0], os);
            os << " = ";
            unparse_term(f.terms[1], os);
            break;
        case Formula::Kind::prim:
            os << f.name << "(";
            for (size_t i = 0; i < f.terms.size(); ++i) {
                if (i) os << ", ";
                unparse_term(f.terms[i], os);
            }
            os << ")";
            break;
        case Formula::Kind::negation:
            os << "not (";
            unparse_formula(f.children[0], os);
            os << ")";
            break;
        case Formula::Kind::conjunction:
        case Formula::Kind::disjunction:
        case Formula::Kind::implication:
        case Formula::Kind::equivalence: {
            const char* op = f.kind == Formula::Kind::conjunction   ? "and"
                             : f.kind == Formula::Kind::disjunction ? "or"
                             : f.kind == Formula::Kind::implication ? "implies"
                                                                    : "iff";
            os << "(";
            unparse_formula(f.children[0], os);
            os << " " << op << " ";
            unparse_formula(f.children[1], os);
            os << ")";
            break;
        }
        case Formula::Kind::forall:
        case Formula::Kind::exists:
            // quantifier scope is maximal, so the whole quantifier is wrapped
            os << "(" << (f.kind == Formula::Kind::forall ? "forall " : "exists ") << f.name
               << " : " << guard_name(f.guard) << " . ";
            unparse_formula(f.children[0], os);
            os << ")";
            break;
    }
}

} // namespace

Formula parse(const std::string& text) { return Parser(text).parse_formula_all(); }

std::string unparse(const Formula& f) {
    std::ostringstream os;
    unparse_formula(f, os);
    return os.str();
}

Formula guard_elaborated(const Formula& f) {
    Formula out = f;
    for (auto& child : out.children) child = guard_elaborated(child);
    if ((out.kind == Formula::Kind::forall || out.kind == Formula::Kind::exists) &&
        out.guard != Guard::all) {
        Formula guard_prim;
        guard_prim.kind = Formula::Kind::prim;
        guard_prim.name = out.guard == Guard::extreme ? "Extreme" : "Involution";
        guard_prim.terms = {var(out.name)};
        Formula inner;
        inner.kind = out.kind == Formula::Kind::forall ? Formula::Kind::implication
                                                       : Formula::Kind::conjunction;
        inner.children = {std::move(guard_prim), std::move(out.children[0])};
        out.children[0] = std::move(inner);
        out.guard = Guard::all;
    }
    return out;
}

// ---- registry ---------------------------------------------------------------

void Registry::register_primitive(const std::string& name, int arity, PrimitiveFn fn) {
    if (table_.count(name))
        fail(errc::duplicate_name, "primitive '" + name + "' is already registered");
    table_[name] = Entry{arity, std::move(fn)};
}

int Registry::arity(const std::string& name) const {
    auto it = table_.find(name);
    if (it == table_.end()) fail(errc::unknown_primitive, "no primitive named '" + name + "'");
    return it->second.arity;
}

bool Registry::invoke(const std::string& name, std::span<const Value> args, const AutCtx& ctx,
                      Budget& budget) const {
    auto it = table_.find(name);
    if (it == table_.end()) fail(errc::unknown_primitive, "no primitive named '" + name + "'");
    if (static_cast<int>(args.size()) != it->second.arity)
        fail(errc::arity_mismatch, "primitive '" + name + "' expects " +
                                       std::to_string(it->second.arity) + " arguments, got " +
                                       std::to_string(args.size()));
    return it->second.fn(args, ctx, budget);
}

std::vector<std::string> Registry::names() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : table_) out.push_back(k);
    return out;
}

void check_primitives(const Formula& f, const Registry& reg) {
    if (f.kind == Formula::Kind::prim) {
        if (!reg.has(f.name))
            fail(errc::unknown_primitive, "no primitive named '" + f.name + "'");
        if (reg.arity(f.name) != static_cast<int>(f.terms.size()))
            fail(errc::arity_mismatch,
                 "primitive '" + f.name + "' expects " + std::to_string(reg.arity(f.name)) +
                     " arguments, got " + std::to_string(f.terms.size()));
    }
    for (const auto& c : f.children) check_primitives(c, reg);
}

// ---- evaluation ---------------------------------------------------------------

namespace {

Automorphism eval_term(const Term& t, const Environment& env) {
    switch (t.kind) {
        case Term::Kind::variable: {
            auto it = env.bindings.find(t.name);
            if (it == env.bindings.end())
                fail(errc::precondition_violated, "unbound variable '" + t.name + "'");
            return it->second.aut;
        }
        case Term::Kind::identity: return identity_automorphism(env.ctx->group());
        case Term::Kind::compose:
            return compose(eval_term(t.args[0], env), eval_term(t.args[1], env));
        case Term::Kind::inverse: return inverse(eval_term(t.args[0], env));
    }
    fail(errc::precondition_violated, "malformed term");
}

Value eval_term_value(const Term& t, const Environment& env) {
    if (t.kind == Term::Kind::variable) {
        auto it = env.bindings.find(t.name);
        if (it == env.bindings.end())
            fail(errc::precondition_violated, "unbound variable '" + t.name + "'");
        return it->second; // keep the designation of quantified extremes
    }
    return Value{eval_term(t, env), std::nullopt};
}

struct Evaluator {
    const Environment& base;
    Budget& budget;

    Outcome eval(const Formula& f, Environment& env) {
        switch (f.kind) {
            case Formula::Kind::truth: return Outcome{f.truth_value, {}, 0};
            case Formula::Kind::equal: {
                Automorphism a = eval_term(f.terms[0], env);
                Automorphism b = eval_term(f.terms[1], env);
                return Outcome{a == b, {}, 0};
            }
            case Formula::Kind::prim: {
                std::vector<Value> args;
                args.reserve(f.terms.size());
                for (const auto& t : f.terms) args.push_back(eval_term_value(t, env));
                bool v = env.registry->invoke(f.name, args, *env.ctx, budget);
                return Outcome{v, {}, 0};
            }
            case Formula::Kind::negation: {
                Outcome inner = eval(f.children[0], env);
                inner.value = !inner.value;
                inner.witnesses.clear();
                return inner;
            }
            case Formula::Kind::conjunction: {
                Outcome lhs = eval(f.children[0], env);
                if (!lhs.value) return lhs;
                Outcome rhs = eval(f.children[1], env);
                rhs.witnesses.insert(rhs.witnesses.begin(), lhs.witnesses.begin(),
                                     lhs.witnesses.end());
                return rhs;
            }
            case Formula::Kind::disjunction: {
                Outcome lhs = eval(f.children[0], env);
                if (lhs.value) return lhs;
                return eval(f.children[1], env);
            }
            case Formula::Kind::implication: {
                Outcome lhs = eval(f.children[0], env);
                if (!lhs.value) return Outcome{true, {}, 0};
                return eval(f.children[1], env);
            }
            case Formula::Kind::equivalence: {
                Outcome lhs = eval(f.children[0], env);
                Outcome rhs = eval(f.children[1], env);
                return Outcome{lhs.value == rhs.value, {}, 0};
            }
            case Formula::Kind::forall:
            case Formula::Kind::exists: return eval_quantifier(f, env);
        }
        fail(errc::precondition_violated, "malformed formula");
    }

    Outcome eval_quantifier(const Formula& f, Environment& env) {
        const bool universal = f.kind == Formula::Kind::forall;
        auto run = [&](Value v, Outcome& result) -> bool {
            budget.charge("quantifier");
            auto saved = env.bindings.find(f.name) != env.bindings.end()
                             ? std::optional<Value>(env.bindings[f.name])
                             : std::nullopt;
            env.bindings[f.name] = v;
            Outcome inner = eval(f.children[0], env);
            if (saved)
                env.bindings[f.name] = *saved;
            else
                env.bindings.erase(f.name);
            if (universal && !inner.value) {
                result.value = false;
                result.witnesses.push_back(WitnessEntry{f.name, v, true});
                result.witnesses.insert(result.witnesses.end(), inner.witnesses.begin(),
                                        inner.witnesses.end());
                return true; // stop
            }
            if (!universal && inner.value) {
                result.value = true;
                result.witnesses.push_back(WitnessEntry{f.name, v, false});
                result.witnesses.insert(result.witnesses.end(), inner.witnesses.begin(),
                                        inner.witnesses.end());
                return true; // stop
            }
            return false;
        };

        Outcome result;
        result.value = universal;
        const AutCtx& ctx = *env.ctx;
        switch (f.guard) {
            case Guard::all:
                for (const auto& a : ctx.automorphisms())
                    if (run(Value{a, std::nullopt}, result)) return result;
                break;
            case Guard::involution:
            case Guard::pair_component:
                for (const auto& inv : ctx.involutions_list())
                    if (run(Value{inv.aut, std::nullopt}, result)) return result;
                break;
            case Guard::extreme:
                for (const auto& e : ctx.extremes())
                    if (run(Value{e.aut(), e}, result)) return result;
                break;
        }
        return result;
    }
};

} // namespace

Outcome evaluate(const Formula& f, const Environment& env, Budget& budget) {
    check_primitives(f, *env.registry);
    Environment scratch = env;
    Evaluator ev{env, budget};
    std::int64_t before = budget.used();
    Outcome out = ev.eval(f, scratch);
    out.substitutions = budget.used() - before;
    return out;
}

// ---- standard primitives -------------------------------------------------------

namespace {

std::optional<ExtremeInvolution> as_extreme(const Value& v,
                                            Side tie_break = Side::minus) {
    if (v.designation) return v.designation;
    Homomorphism sq = compose(v.aut.fwd, v.aut.fwd);
    if (sq != identity_hom(v.aut.group())) return std::nullopt;
    return try_extreme_of(make_involution(v.aut), tie_break);
}

std::optional<Involution> as_involution(const Value& v) {
    if (compose(v.aut.fwd, v.aut.fwd) != identity_hom(v.aut.group())) return std::nullopt;
    return make_involution(v.aut);
}

Side tie(const AutCtx& ctx) { return ctx.conventions().tie_break; }

std::optional<Pair> as_pair(const Value& xi, const Value& eps, const AutCtx& ctx) {
    auto inv = as_involution(xi);
    auto e = as_extreme(eps, tie(ctx));
    if (!inv || !e) return std::nullopt;
    if (!commutes(inv->aut, e->aut())) return std::nullopt;
    return make_pair(*inv, *e);
}

std::string value_key(const Value& v) {
    std::string k = v.aut.fwd.matrix_string();
    if (v.designation) k += v.designation->side == Side::plus ? "+" : "-";
    return k;
}

std::string args_key(std::span<const Value> args) {
    std::string k;
    for (const auto& v : args) {
        k += value_key(v);
        k += ';';
    }
    return k;
}

// Memoized wrapper for expensive primitives; results are keyed by the full
// argument identity, so caching is invisible to evaluation.
PrimitiveFn memoized(PrimitiveFn fn) {
    auto cache = std::make_shared<std::map<std::string, bool>>();
    return [fn = std::move(fn), cache](std::span<const Value> args, const AutCtx& ctx,
                                       Budget& budget) {
        std::string key = args_key(args);
        auto it = cache->find(key);
        if (it != cache->end()) return it->second;
        bool v = fn(args, ctx, budget);
        (*cache)[key] = v;
        return v;
    };
}

} // namespace

void register_standard_primitives(Registry& reg, std::shared_ptr<const EncodingCtx> enc) {
    using Args = std::span<const Value>;

    reg.register_primitive("Involution", 1, [](Args a, const AutCtx&, Budget&) {
        return as_involution(a[0]).has_value();
    });
    reg.register_primitive("Extreme", 1, [](Args a, const AutCtx& ctx, Budget&) {
        return as_extreme(a[0], tie(ctx)).has_value();
    });
    reg.register_primitive("Pair", 2, [](Args a, const AutCtx& ctx, Budget&) {
        return as_pair(a[0], a[1], ctx).has_value();
    });
    reg.register_primitive("commutes", 2, [](Args a, const AutCtx&, Budget&) {
        return commutes(a[0].aut, a[1].aut);
    });

    auto ord_cmp = [](auto cmp) {
        return [cmp](Args a, const AutCtx& ctx, Budget&) {
            auto e1 = as_extreme(a[0], tie(ctx));
            auto e2 = as_extreme(a[1], tie(ctx));
            return e1 && e2 && cmp(ord_of_extreme(*e1), ord_of_extreme(*e2));
        };
    };
    reg.register_primitive("ord_lt", 2,
                           ord_cmp([](std::int64_t a, std::int64_t b) { return a < b; }));
    reg.register_primitive("ord_leq", 2,
                           ord_cmp([](std::int64_t a, std::int64_t b) { return a <= b; }));
    reg.register_primitive("ord_eq", 2,
                           ord_cmp([](std::int64_t a, std::int64_t b) { return a == b; }));
    reg.register_primitive("ord_geq", 2,
                           ord_cmp([](std::int64_t a, std::int64_t b) { return a >= b; }));
    reg.register_primitive("ord_gt", 2,
                           ord_cmp([](std::int64_t a, std::int64_t b) { return a > b; }));

    reg.register_primitive("core_eq", 2, [](Args a, const AutCtx& ctx, Budget&) {
        auto e1 = as_extreme(a[0], tie(ctx));
        auto e2 = as_extreme(a[1], tie(ctx));
        return e1 && e2 && e1->core == e2->core;
    });
    reg.register_primitive("core_subset", 2, [](Args a, const AutCtx& ctx, Budget&) {
        auto e1 = as_extreme(a[0], tie(ctx));
        auto e2 = as_extreme(a[1], tie(ctx));
        return e1 && e2 && e2->core.contains(e1->core);
    });

    // relation 1, main clause: membership of a core in the sum of two cores
    reg.register_primitive("in_sum", 3, [](Args a, const AutCtx& ctx, Budget&) {
        auto e = as_extreme(a[0], tie(ctx));
        auto e1 = as_extreme(a[1], tie(ctx));
        auto e2 = as_extreme(a[2], tie(ctx));
        return e && e1 && e2 && join(e1->core, e2->core).contains(e->core);
    });

    // f e f^-1 lands inside the sum of the two cores
    reg.register_primitive("maps_into_sum", 3, [](Args a, const AutCtx& ctx, Budget&) {
        auto e1 = as_extreme(a[1], tie(ctx));
        auto e2 = as_extreme(a[2], tie(ctx));
        if (!e1 || !e2) return false;
        Subgroup image = a[0].aut.apply_subgroup(e1->core);
        return join(e1->core, e2->core).contains(image);
    });

    reg.register_primitive("app_core", 3, [](Args a, const AutCtx& ctx, Budget&) {
        auto e1 = as_extreme(a[1], tie(ctx));
        auto e2 = as_extreme(a[2], tie(ctx));
        return e1 && e2 && a[0].aut.apply_subgroup(e1->core) == e2->core;
    });
    reg.register_primitive("fixes_core", 2, [](Args a, const AutCtx& ctx, Budget&) {
        auto e = as_extreme(a[1], tie(ctx));
        return e && a[0].aut.apply_subgroup(e->core) == e->core;
    });

    reg.register_primitive("maps_to", 3, [](Args a, const AutCtx& ctx, Budget&) {
        auto e1 = as_extreme(a[1], tie(ctx));
        auto e2 = as_extreme(a[2], tie(ctx));
        return e1 && e2 && rel_maps_to(a[0].aut, *e1, *e2, Mode::formula);
    });

    reg.register_primitive("member", 3, [](Args a, const AutCtx& ctx, Budget&) {
        auto e = as_extreme(a[0], tie(ctx));
        auto p = as_pair(a[1], a[2], ctx);
        return e && p && rel_pair_member(*e, *p);
    });
    reg.register_primitive("member_compl", 3, [](Args a, const AutCtx& ctx, Budget&) {
        auto e = as_extreme(a[0], tie(ctx));
        auto p = as_pair(a[1], a[2], ctx);
        return e && p && commutes(e->aut(), p->xi.aut) && p->complement.contains(e->core);
    });
    reg.register_primitive("pair_subset", 4, [](Args a, const AutCtx& ctx, Budget&) {
        auto p1 = as_pair(a[0], a[1], ctx);
        auto p2 = as_pair(a[2], a[3], ctx);
        return p1 && p2 && rel_pair_subset(*p1, *p2);
    });
    reg.register_primitive("pair_eq", 4, [](Args a, const AutCtx& ctx, Budget&) {
        auto p1 = as_pair(a[0], a[1], ctx);
        auto p2 = as_pair(a[2], a[3], ctx);
        return p1 && p2 && rel_pair_eq(*p1, *p2);
    });
    reg.register_primitive("pair_proper_subset", 4, [](Args a, const AutCtx& ctx, Budget&) {
        auto p1 = as_pair(a[0], a[1], ctx);
        auto p2 = as_pair(a[2], a[3], ctx);
        return p1 && p2 && rel_pair_subset(*p1, *p2) && !rel_pair_eq(*p1, *p2);
    });

    reg.register_primitive("ByOrd", 2, memoized([](Args a, const AutCtx& ctx, Budget& budget) {
        auto p = as_pair(a[0], a[1], ctx);
        return p && by_ord(*p, Mode::formula, ctx, budget);
    }));
    reg.register_primitive("InBase", 4, memoized([](Args a, const AutCtx& ctx, Budget& budget) {
        auto e = as_extreme(a[0], tie(ctx));
        auto p = as_pair(a[2], a[3], ctx);
        return e && p && in_base(*e, a[1].aut, split_of_pair(*p), ctx, budget);
    }));
    reg.register_primitive("Rest", 3, memoized([](Args a, const AutCtx& ctx, Budget& budget) {
        auto p = as_pair(a[0], a[1], ctx);
        auto e = as_extreme(a[2], tie(ctx));
        return p && e && rest(*p, *e, ctx, budget);
    }));
    reg.register_primitive("MaxRest", 3, memoized([](Args a, const AutCtx& ctx, Budget& budget) {
        auto p = as_pair(a[0], a[1], ctx);
        auto e = as_extreme(a[2], tie(ctx));
        return p && e && max_rest(*p, *e, ctx, budget);
    }));

    if (!enc) return;

    reg.register_primitive("in_family_basis", 1, [enc](Args a, const AutCtx& ctx, Budget&) {
        auto e = as_extreme(a[0], tie(ctx));
        if (!e) return false;
        for (const auto& m : enc->family.basis)
            if (m.eps.core == e->core) return true;
        return false;
    });
    reg.register_primitive("in_family_map", 1, [enc](Args a, const AutCtx&, Budget&) {
        for (const auto& [_, m] : enc->family.maps)
            if (m == a[0].aut) return true;
        return false;
    });
    reg.register_primitive("carrier_disjoint", 3, [enc](Args a, const AutCtx& ctx, Budget&) {
        // the displacement of f on the carrier of e1 avoids both carriers
        auto e1 = as_extreme(a[1], tie(ctx));
        auto e2 = as_extreme(a[2], tie(ctx));
        if (!e1 || !e2) return false;
        const GroupSpec& g = ctx.group();
        int i1 = -1, i2 = -1;
        for (int i = 0; i < enc->family.size(); ++i) {
            if (enc->family.core(i) == e1->core) i1 = i;
            if (enc->family.core(i) == e2->core) i2 = i;
        }
        if (i1 < 0 || i2 < 0) return false;
        Subgroup off = zero_subgroup(g);
        for (int m = 0; m < enc->family.size(); ++m)
            if (m != i1 && m != i2) off = join(off, enc->family.core(m));
        std::int32_t b = enc->family.gen(i1).index;
        return off.contains_index(g.add_index(a[0].aut.apply_index(b), g.neg_index(b)));
    });
    reg.register_primitive("IsEncoder", 1, memoized([enc](Args a, const AutCtx& ctx, Budget& budget) {
        return is_encoder(a[0].aut, enc->family, Mode::formula, ctx, budget);
    }));
    reg.register_primitive("EncEq", 2, memoized([enc](Args a, const AutCtx& ctx, Budget& budget) {
        try {
            return enc_eq(a[0].aut, a[1].aut, *enc, ctx, budget);
        } catch (const error& e) {
            if (e.code() == errc::not_encoder) return false;
            throw;
        }
    }));
    reg.register_primitive("EncAdd", 3, memoized([enc](Args a, const AutCtx& ctx, Budget& budget) {
        try {
            return enc_add(a[0].aut, a[1].aut, a[2].aut, *enc, ctx, budget);
        } catch (const error& e) {
            if (e.code() == errc::not_encoder) return false;
            throw;
        }
    }));
    reg.register_primitive("Sim", 4, memoized([](Args a, const AutCtx& ctx, Budget& budget) {
        auto p = as_pair(a[2], a[3], ctx);
        return p && sim(a[0].aut, a[1].aut, *p, Mode::formula, ctx, budget);
    }));
}

// ---- corpus --------------------------------------------------------------------

std::vector<CorpusEntry> load_corpus(const std::string& dir) {
    std::ifstream manifest(dir + "/manifest.json");
    if (!manifest) fail(errc::io_error, "cannot open " + dir + "/manifest.json");
    nlohmann::json j;
    manifest >> j;
    std::vector<CorpusEntry> out;
    for (const auto& item : j.at("formulas")) {
        CorpusEntry e;
        e.name = item.at("name").get<std::string>();
        e.file = item.at("file").get<std::string>();
        e.catalog = item.value("catalog", "");
        for (const auto& v : item.value("free", nlohmann::json::array()))
            e.free_variables.push_back(v.get<std::string>());
        for (const auto& v : item.value("primitives", nlohmann::json::array()))
            e.primitives.push_back(v.get<std::string>());
        std::ifstream file(dir + "/" + e.file);
        if (!file) fail(errc::io_error, "cannot open " + dir + "/" + e.file);
        std::stringstream ss;
        ss << file.rdbuf();
        e.formula = parse(ss.str());
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace autfol::folang
