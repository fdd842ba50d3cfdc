#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autfol/predicates.hpp"

// A small first-order language over Aut(A): terms are automorphism
// expressions, formulas combine registered semantic primitives with guarded
// quantifiers, and evaluation is exhaustive substitution against an AutCtx.
namespace autfol::folang {

struct Term {
    enum class Kind { variable, identity, compose, inverse };
    Kind kind = Kind::identity;
    std::string name;        // variable
    std::vector<Term> args;  // compose: 2, inverse: 1

    bool operator==(const Term& o) const;
};

Term var(std::string name);
Term identity_term();
Term compose_term(Term lhs, Term rhs);
Term inverse_term(Term inner);

enum class Guard { all, involution, extreme, pair_component };
const char* guard_name(Guard g);

struct Formula {
    enum class Kind {
        truth,    // constant true/false
        equal,    // term = term
        prim,     // name(args)
        negation,
        conjunction,
        disjunction,
        implication,
        equivalence,
        forall,
        exists,
    };
    Kind kind = Kind::truth;
    bool truth_value = true;
    std::string name; // primitive name or quantified variable
    Guard guard = Guard::all;
    std::vector<Term> terms;      // equal: 2, prim: arity
    std::vector<Formula> children; // connectives and quantifier bodies

    bool operator==(const Formula& o) const;
};

// Concrete syntax (see the grammar in the repository docs):
//   forall e : Extreme . member(e, xi, eps) implies ord_leq(e, e0)
//   exists f . f * f = id
//   forall (xi, eps) : Pair . ...   -- expands to two guarded quantifiers
//                                      plus the Pair primitive
// Throws SyntaxError with a position on malformed input.
Formula parse(const std::string& text);

// Stable text form; parse(unparse(f)) == f.
std::string unparse(const Formula& f);

// Rewrites guarded quantifiers into All-guarded ones with the guard
// predicate as an explicit hypothesis/conjunct.
Formula guard_elaborated(const Formula& f);

// A term value: an automorphism, optionally carrying the eigen-side
// designation it was quantified with.
struct Value {
    Automorphism aut;
    std::optional<ExtremeInvolution> designation;
};

using PrimitiveFn =
    std::function<bool(std::span<const Value>, const AutCtx&, Budget&)>;

class Registry {
public:
    void register_primitive(const std::string& name, int arity, PrimitiveFn fn);
    bool has(const std::string& name) const { return table_.count(name) > 0; }
    int arity(const std::string& name) const;
    bool invoke(const std::string& name, std::span<const Value> args, const AutCtx& ctx,
                Budget& budget) const;
    std::vector<std::string> names() const;

private:
    struct Entry {
        int arity;
        PrimitiveFn fn;
    };
    std::map<std::string, Entry> table_;
};

// Installs the standard primitive set (involution/extreme/pair tests, order
// comparisons, memberships, core transport, base location, and - when an
// encoding context is supplied - the encoder relations).
void register_standard_primitives(Registry& reg,
                                  std::shared_ptr<const EncodingCtx> enc = nullptr);

struct WitnessEntry {
    std::string var;
    Value value;
    bool counterexample = false; // a failing instance of a universal
};

struct Outcome {
    bool value = false;
    std::vector<WitnessEntry> witnesses;
    std::int64_t substitutions = 0;
};

struct Environment {
    const AutCtx* ctx = nullptr;
    const Registry* registry = nullptr;
    std::map<std::string, Value> bindings;
};

// Exhaustive evaluation; every quantifier substitution charges the budget.
Outcome evaluate(const Formula& f, const Environment& env, Budget& budget);

// Checks arity and registration of every primitive in f; throws
// UnknownPrimitive / ArityMismatch.
void check_primitives(const Formula& f, const Registry& reg);

// ---- formula corpus ---------------------------------------------------------

struct CorpusEntry {
    std::string name;
    std::string file;
    std::string catalog; // which named relation or construction it spells out
    std::vector<std::string> free_variables;
    std::vector<std::string> primitives;
    Formula formula;
};

// Loads every formula listed in <dir>/manifest.json.
std::vector<CorpusEntry> load_corpus(const std::string& dir);

} // namespace autfol::folang
