#pragma once

#include <string>
#include <vector>

#include "autfol/folang.hpp"
#include "autfol/predicates.hpp"

namespace autfol::report {

// One verification check: an exhaustive or sampled sweep with its verdict.
// `formula_true` / `oracle_true` count the instances on which each route held;
// `pass` asserts the check's own criterion (usually route agreement).
struct CheckRecord {
    std::string id;
    std::string reference; // catalog anchor of the relation or construction
    std::string detail;
    std::int64_t cases = 0;
    std::int64_t formula_true = 0;
    std::int64_t oracle_true = 0;
    bool pass = false;
    bool budget_exhausted = false;
    std::string witness; // serialized first disagreement or sample witness
    std::int64_t substitutions = 0;
    double elapsed_seconds = 0; // kept out of the deterministic body
};

struct SuiteReport {
    std::string group_description;
    std::int64_t p = 0;
    std::vector<int> exponents;
    std::string suite;
    std::int64_t budget = 0;
    Conventions conventions;
    std::vector<CheckRecord> checks;

    bool pass() const;
    bool any_budget_exhausted() const;
};

const std::vector<std::string>& suite_names(); // includes "all"

SuiteReport run_suite(const std::string& suite, const GroupSpec& g, std::int64_t budget,
                      const Conventions& conventions, const std::string& corpus_dir);

// Deterministic report body: fixed ordering, no timing fields.  Two runs on
// identical inputs produce identical bytes.
std::string report_body_json(const SuiteReport& r);

// Body plus segregated timing fields, as written to --out.
std::string report_full_json(const SuiteReport& r);

std::string report_summary_text(const SuiteReport& r);

} // namespace autfol::report
