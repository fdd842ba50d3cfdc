// Command line frontend: define groups, list automorphism-level objects, run
// verification suites, and evaluate formulas over Aut(A).
//
// Exit codes: 0 pass, 1 check failure, 2 usage/parse error, 3 budget exceeded.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "autfol/folang.hpp"
#include "autfol/groupfile.hpp"
#include "autfol/report.hpp"

using namespace autfol;

namespace {

#ifndef AUTFOL_CORPUS_DIR
#define AUTFOL_CORPUS_DIR "corpus"
#endif

constexpr std::int64_t kDefaultBudget = 10'000'000;

struct CommonOpts {
    std::string group_file;
    std::int64_t budget = kDefaultBudget;
    std::vector<std::string> conventions;
    std::string corpus_dir = AUTFOL_CORPUS_DIR;
};

Conventions parse_conventions(const std::vector<std::string>& flags) {
    Conventions c;
    for (const auto& flag : flags) {
        size_t eq = flag.find('=');
        std::string key = flag.substr(0, eq);
        std::string value = eq == std::string::npos ? "" : flag.substr(eq + 1);
        if (key == "side-tiebreak" && (value == "minus" || value == "plus"))
            c.tie_break = value == "minus" ? Side::minus : Side::plus;
        else if (key == "involution-identity" && (value == "include" || value == "exclude"))
            c.involutions_include_identity = value == "include";
        else if (key == "zero-encoder" && (value == "on" || value == "off"))
            c.zero_encoder = value == "on";
        else
            fail(errc::precondition_violated,
                 "unknown convention toggle '" + flag +
                     "' (expect side-tiebreak=minus|plus, involution-identity=include|exclude, "
                     "zero-encoder=on|off)");
    }
    return c;
}

// Matrices on the command line use the report serialization: [[a,b],[c,d]].
std::vector<std::int64_t> parse_matrix(const std::string& text) {
    std::vector<std::int64_t> out;
    std::string cur;
    for (char ch : text) {
        if (isdigit(static_cast<unsigned char>(ch)) || ch == '-') {
            cur += ch;
        } else if (!cur.empty()) {
            out.push_back(std::stoll(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::stoll(cur));
    return out;
}

int exit_code_for(const error& e) {
    return e.code() == errc::budget_exceeded ? 3 : 2;
}

int cmd_define(const CommonOpts& opts) {
    GroupSpec g = load_group_file(opts.group_file);
    std::cout << "group: " << g.describe() << "\n";
    std::cout << "size: " << g.size() << "\n";
    try {
        std::cout << "aut: " << enumerate_aut(g).size() << "\n";
    } catch (const error& e) {
        if (e.code() != errc::budget_exceeded) throw;
        std::cout << "aut: not enumerated (" << e.what() << ")\n";
    }
    return 0;
}

int cmd_list(const CommonOpts& opts, const std::string& kind, const std::string& out_path) {
    GroupSpec g = load_group_file(opts.group_file);
    AutCtx ctx(g, parse_conventions(opts.conventions));
    std::ostringstream os;
    auto factors = [](const Subgroup& s) {
        std::string t = "[";
        auto f = invariant_factors(s);
        for (size_t i = 0; i < f.size(); ++i) t += (i ? "," : "") + std::to_string(f[i]);
        return t + "]";
    };
    if (kind == "aut") {
        for (const auto& a : ctx.automorphisms()) os << a.fwd.matrix_string() << "\n";
    } else if (kind == "involutions") {
        for (const auto& inv : ctx.involutions_list())
            os << inv.aut.fwd.matrix_string() << " plus=" << factors(inv.plus)
               << " minus=" << factors(inv.minus) << "\n";
    } else if (kind == "extreme") {
        for (const auto& e : ctx.extremes())
            os << e.aut().fwd.matrix_string() << " side=" << side_name(e.side)
               << " core=" << factors(e.core) << "\n";
    } else if (kind == "pairs") {
        for (const auto& p : ctx.pairs())
            os << "xi=" << p.xi.aut.fwd.matrix_string()
               << " eps=" << p.eps.aut().fwd.matrix_string()
               << " side=" << side_name(p.eps.side) << " summand=" << factors(p.summand)
               << "\n";
    } else {
        fail(errc::precondition_violated, "unknown list kind '" + kind + "'");
    }
    if (out_path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(out_path);
        f << os.str();
    }
    return 0;
}

int cmd_check(const CommonOpts& opts, const std::string& suite, const std::string& out_path) {
    GroupSpec g = load_group_file(opts.group_file);
    report::SuiteReport rep =
        report::run_suite(suite, g, opts.budget, parse_conventions(opts.conventions),
                          opts.corpus_dir);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) fail(errc::io_error, "cannot write '" + out_path + "'");
        f << report::report_full_json(rep);
    }
    std::cout << report::report_summary_text(rep);
    if (rep.any_budget_exhausted()) return 3;
    return rep.pass() ? 0 : 1;
}

int cmd_eval(const CommonOpts& opts, const std::string& formula_file,
             const std::string& inline_text, const std::vector<std::string>& binds) {
    GroupSpec g = load_group_file(opts.group_file);
    AutCtx ctx(g, parse_conventions(opts.conventions));
    auto enc = std::make_shared<const EncodingCtx>(make_encoding_ctx(ctx, canonical_family(ctx)));
    folang::Registry registry;
    folang::register_standard_primitives(registry, enc);

    std::string text = inline_text;
    if (!formula_file.empty()) {
        std::ifstream f(formula_file);
        if (!f) fail(errc::io_error, "cannot open formula file '" + formula_file + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    folang::Formula formula = folang::parse(text);

    std::map<std::string, folang::Value> bindings;
    for (const auto& b : binds) {
        size_t eq = b.find('=');
        if (eq == std::string::npos)
            fail(errc::precondition_violated, "--bind expects name=matrix");
        std::string name = b.substr(0, eq);
        Automorphism a = to_automorphism(hom_from_matrix(g, parse_matrix(b.substr(eq + 1))));
        bindings[name] = folang::Value{a, std::nullopt};
    }

    Budget budget(opts.budget);
    folang::Environment env{&ctx, &registry, bindings};
    folang::Outcome out = folang::evaluate(formula, env, budget);
    std::cout << (out.value ? "true" : "false") << "\n";
    for (const auto& w : out.witnesses)
        std::cout << (w.counterexample ? "counterexample " : "witness ") << w.var << " = "
                  << w.value.aut.fwd.matrix_string() << "\n";
    std::cout << "substitutions: " << out.substitutions << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification workbench for first-order formulas over Aut(A) of finite "
                 "abelian p-groups"};
    app.require_subcommand(1);

    CommonOpts opts;
    const char* env_budget = std::getenv("AUTFOL_BUDGET");
    if (env_budget) opts.budget = std::strtoll(env_budget, nullptr, 10);

    auto add_common = [&](CLI::App* cmd, bool need_group = true) {
        auto* g = cmd->add_option("--group", opts.group_file, "group definition file");
        if (need_group) g->required();
        cmd->add_option("--budget", opts.budget, "substitution budget per check");
        cmd->add_option("--convention", opts.conventions,
                        "convention toggle key=value (repeatable)");
        cmd->add_option("--corpus", opts.corpus_dir, "formula corpus directory");
    };

    auto* define = app.add_subcommand("define", "echo a normalized group definition");
    add_common(define);

    std::string kind = "aut", out_path;
    auto* list = app.add_subcommand("list", "list automorphism-level objects");
    add_common(list);
    list->add_option("--kind", kind, "aut | involutions | extreme | pairs");
    list->add_option("--out", out_path, "write to file instead of stdout");

    std::string suite = "all", report_path;
    auto* check = app.add_subcommand("check", "run a verification suite");
    add_common(check);
    check->add_option("--suite", suite, "suite name or 'all'");
    check->add_option("--out", report_path, "write the JSON report here");

    std::string formula_file, inline_text;
    std::vector<std::string> binds;
    auto* eval = app.add_subcommand("eval", "evaluate a formula");
    add_common(eval);
    eval->add_option("--formula", formula_file, "formula file");
    eval->add_option("--text", inline_text, "inline formula text");
    eval->add_option("--bind", binds, "free-variable binding name=matrix (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (define->parsed()) return cmd_define(opts);
        if (list->parsed()) return cmd_list(opts, kind, out_path);
        if (check->parsed()) return cmd_check(opts, suite, report_path);
        if (eval->parsed()) {
            if (formula_file.empty() == inline_text.empty()) {
                std::cerr << "eval: exactly one of --formula / --text is required\n";
                return 2;
            }
            return cmd_eval(opts, formula_file, inline_text, binds);
        }
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
