#include "autfol/report.hpp"

#include <chrono>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace autfol::report {

namespace {

using folang::CorpusEntry;
using folang::Value;

struct SuiteCtx {
    GroupSpec g;
    AutCtx ctx;
    std::int64_t budget_limit;
    std::string corpus_dir;
    std::shared_ptr<const EncodingCtx> enc;
    folang::Registry registry;
    std::vector<CorpusEntry> corpus;

    SuiteCtx(const GroupSpec& group, const Conventions& conv, std::int64_t budget,
             std::string corpus_path)
        : g(group), ctx(group, conv), budget_limit(budget), corpus_dir(std::move(corpus_path)) {
        enc = std::make_shared<const EncodingCtx>(make_encoding_ctx(ctx, canonical_family(ctx)));
        folang::register_standard_primitives(registry, enc);
        if (!corpus_dir.empty()) corpus = folang::load_corpus(corpus_dir);
    }

    const CorpusEntry* corpus_entry(const std::string& name) const {
        for (const auto& e : corpus)
            if (e.name == name) return &e;
        return nullptr;
    }

    bool eval_corpus(const CorpusEntry& entry, std::map<std::string, Value> bindings,
                     Budget& budget) const {
        folang::Environment env{&ctx, &registry, std::move(bindings)};
        return folang::evaluate(entry.formula, env, budget).value;
    }

    std::vector<Pair> pair_reps() const {
        std::vector<Pair> reps;
        std::set<std::pair<std::vector<std::int32_t>, std::int64_t>> seen;
        for (const auto& p : ctx.pairs())
            if (seen.insert({p.summand.members(), ord_of_extreme(p.eps)}).second)
                reps.push_back(p);
        return reps;
    }

    std::vector<Automorphism> aut_sample(size_t stride) const {
        std::vector<Automorphism> v;
        const auto& all = ctx.automorphisms();
        for (size_t i = 0; i < all.size(); i += stride) v.push_back(all[i]);
        return v;
    }

    // The split A = 0 (+) A, over the negation involution.
    Split degenerate_split() const {
        const int k = g.rank();
        std::vector<std::int64_t> m(static_cast<size_t>(k) * static_cast<size_t>(k), 0);
        for (int i = 0; i < k; ++i)
            m[static_cast<size_t>(i * k + i)] = g.modulus(i) - 1;
        Involution neg = make_involution(to_automorphism(hom_from_matrix(g, m)));
        return split_of_pair(make_pair(neg, ctx.extremes().front()));
    }

    // Order-dropping shift on the degenerate split: top generator falls onto
    // the bottom one.  Available only when the exponents are not all equal.
    std::optional<Automorphism> canonical_shift() const {
        if (g.exponents().front() >= g.exponents().back()) return std::nullopt;
        const int k = g.rank();
        std::vector<std::int64_t> m(static_cast<size_t>(k) * static_cast<size_t>(k), 0);
        m[static_cast<size_t>(0 * k + (k - 1))] = 1; // g_last -> g_first
        return make_shift_automorphism(hom_from_matrix(g, m), degenerate_split());
    }
};

void tally_agree(CheckRecord& rec, bool formula, bool oracle,
                 const std::function<std::string()>& describe) {
    ++rec.cases;
    if (formula) ++rec.formula_true;
    if (oracle) ++rec.oracle_true;
    if (formula != oracle && rec.pass) {
        rec.pass = false;
        rec.witness = describe();
    }
}

void tally_prop(CheckRecord& rec, bool ok, const std::function<std::string()>& describe) {
    ++rec.cases;
    if (ok) {
        ++rec.formula_true;
        ++rec.oracle_true;
    } else if (rec.pass) {
        rec.pass = false;
        rec.witness = describe();
    }
}

using CheckFn = std::function<void(SuiteCtx&, CheckRecord&, Budget&)>;

void run_check(SuiteCtx& s, SuiteReport& out, const std::string& id,
               const std::string& reference, const CheckFn& fn) {
    CheckRecord rec;
    rec.id = id;
    rec.reference = reference;
    rec.pass = true;
    Budget budget(s.budget_limit);
    auto start = std::chrono::steady_clock::now();
    try {
        fn(s, rec, budget);
    } catch (const error& e) {
        rec.pass = false;
        if (e.code() == errc::budget_exceeded) {
            rec.budget_exhausted = true;
            rec.detail += std::string(rec.detail.empty() ? "" : "; ") + e.what();
        } else {
            rec.detail += std::string(rec.detail.empty() ? "" : "; ") + e.what();
        }
    }
    rec.substitutions = budget.used();
    rec.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.checks.push_back(std::move(rec));
}

std::string describe_extreme(const ExtremeInvolution& e) {
    return e.aut().fwd.matrix_string() + std::string(e.side == Side::plus ? "+" : "-");
}

std::string describe_pair(const Pair& p) {
    return "(" + p.xi.aut.fwd.matrix_string() + ", " + describe_extreme(p.eps) + ")";
}

// ---- relations ------------------------------------------------------------

void suite_relations(SuiteCtx& s, SuiteReport& out) {
    run_check(s, out, "relations/eigensplit", "involution-decomposition",
              [](SuiteCtx& s, CheckRecord& rec, Budget&) {
                  const GroupSpec& g = s.g;
                  for (const auto& inv : s.ctx.involutions_list()) {
                      bool direct = is_direct_sum({inv.plus, inv.minus}) &&
                                    inv.plus.size() * inv.minus.size() == g.size();
                      bool pointwise = true;
                      for (std::int32_t x = 0; x < g.size() && pointwise; ++x) {
                          std::int32_t im = inv.aut.apply_index(x);
                          pointwise = inv.plus.contains_index(x) == (im == x) &&
                                      inv.minus.contains_index(x) == (im == g.neg_index(x));
                      }
                      tally_prop(rec, direct && pointwise,
                                 [&] { return inv.aut.fwd.matrix_string(); });
                  }
              });

    run_check(s, out, "relations/extreme-characterization", "extreme-involutions",
              [](SuiteCtx& s, CheckRecord& rec, Budget&) {
                  for (const auto& inv : s.ctx.involutions_list()) {
                      bool brute =
                          (inv.plus.size() > 1 && invariant_factors(inv.plus).size() == 1) ||
                          (inv.minus.size() > 1 && invariant_factors(inv.minus).size() == 1);
                      tally_agree(rec, try_extreme_of(inv).has_value(), brute,
                                  [&] { return inv.aut.fwd.matrix_string(); });
                  }
              });

    run_check(s, out, "relations/in-sum-self", "relation-1",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  for (const auto& e1 : s.ctx.extremes())
                      for (const auto& e2 : s.ctx.extremes()) {
                          if (!commutes(e1.aut(), e2.aut())) continue;
                          budget.charge("relations/in-sum-self");
                          tally_prop(rec, rel_in_sum(e1, e1, e2), [&] {
                              return describe_extreme(e1) + " vs " + describe_extreme(e2);
                          });
                      }
              });

    run_check(s, out, "relations/pair-self-membership", "relation-2",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  for (const auto& p : s.ctx.pairs()) {
                      budget.charge("relations/pair-self-membership");
                      tally_prop(rec, rel_pair_member(p.eps, p),
                                 [&] { return describe_pair(p); });
                  }
              });

    run_check(s, out, "relations/pair-lattice-consistency", "relations-3-7",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  auto reps = s.pair_reps();
                  for (const auto& p1 : reps)
                      for (const auto& p2 : reps) {
                          budget.charge("relations/pair-lattice");
                          bool ok = rel_pair_complement(p1, p2) == rel_pair_complement(p2, p1);
                          ok = ok && (rel_pair_eq(p1, p2) ==
                                      (rel_pair_subset(p1, p2) && rel_pair_subset(p2, p1)));
                          for (const auto& p3 : reps) {
                              ok = ok && rel_pair_cap(p1, p2, p3) == rel_pair_cap(p2, p1, p3);
                              ok = ok &&
                                   rel_pair_oplus(p1, p2, p3) == rel_pair_oplus(p2, p1, p3);
                          }
                          tally_prop(rec, ok, [&] {
                              return describe_pair(p1) + " vs " + describe_pair(p2);
                          });
                      }
              });

    run_check(s, out, "relations/maps-to-modes", "relation-8",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  const auto& extremes = s.ctx.extremes();
                  const auto& auts = s.ctx.automorphisms();
                  size_t total = auts.size() * extremes.size() * extremes.size();
                  size_t stride = total > 2'000'000 ? total / 2'000'000 + 1 : 1;
                  if (stride > 1)
                      rec.detail = "automorphisms strided by " + std::to_string(stride);
                  for (size_t i = 0; i < auts.size(); i += stride) {
                      const auto& f = auts[i];
                      for (const auto& e1 : extremes)
                          for (const auto& e2 : extremes) {
                              budget.charge("relations/maps-to-modes");
                              tally_agree(rec, rel_maps_to(f, e1, e2, Mode::formula),
                                          rel_maps_to(f, e1, e2, Mode::semantic), [&] {
                                              return f.fwd.matrix_string() + " on " +
                                                     describe_extreme(e1) + ", " +
                                                     describe_extreme(e2);
                                          });
                          }
                  }
              });

    run_check(s, out, "relations/ord-preorder", "relation-9",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  for (const auto& e1 : s.ctx.extremes())
                      for (const auto& e2 : s.ctx.extremes()) {
                          budget.charge("relations/ord-preorder");
                          int holds = (rel_ord_lt(e1, e2) ? 1 : 0) +
                                      (rel_ord_eq(e1, e2) ? 1 : 0) +
                                      (rel_ord_gt(e1, e2) ? 1 : 0);
                          bool ok = holds == 1 &&
                                    rel_ord_lt(e1, e2) ==
                                        (e1.core.size() < e2.core.size()) &&
                                    rel_ord_le(e1, e2) == !rel_ord_gt(e1, e2) &&
                                    rel_ord_ge(e1, e2) == !rel_ord_lt(e1, e2);
                          tally_prop(rec, ok, [&] {
                              return describe_extreme(e1) + " vs " + describe_extreme(e2);
                          });
                      }
              });
}

// ---- lemma1 ----------------------------------------------------------------

void suite_lemma1(SuiteCtx& s, SuiteReport& out) {
    run_check(s, out, "lemma1/byord-modes", "ByOrd",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  for (const auto& p : s.ctx.pairs())
                      tally_agree(rec, by_ord(p, Mode::formula, s.ctx, budget),
                                  by_ord(p, Mode::semantic, s.ctx, budget),
                                  [&] { return describe_pair(p); });
              });

    run_check(s, out, "lemma1/final-witness-replay", "Final",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  for (const auto& p0 : s.pair_reps()) {
                      FinalOutcome r = final_pair(p0, s.ctx, budget);
                      bool ok = true;
                      if (r.value) {
                          // Final implies ByOrd, and every witness replays for
                          // some ByOrd subpair
                          ok = by_ord(p0, Mode::formula, s.ctx, budget);
                          for (const auto& f : r.witnesses) {
                              bool fires = false;
                              for (const auto& p1 : s.ctx.pairs()) {
                                  if (!(p0.summand.contains(p1.summand) &&
                                        p1.summand != p0.summand))
                                      continue;
                                  if (!by_ord(p1, Mode::formula, s.ctx, budget)) continue;
                                  bool clause = true;
                                  for (const auto& c : cores_within(s.ctx, p1.complement))
                                      clause = clause && f.apply_subgroup(c) == c;
                                  for (const auto& t : cores_within(
                                           s.ctx, intersect(p0.summand, p1.complement))) {
                                      bool moved = false;
                                      for (const auto& src : cores_within(s.ctx, p1.summand))
                                          moved = moved || maps_core(f, src, t);
                                      clause = clause && moved;
                                  }
                                  fires = fires || clause;
                              }
                              ok = ok && fires;
                          }
                      }
                      tally_prop(rec, ok, [&] { return describe_pair(p0); });
                  }
              });

    run_check(s, out, "lemma1/final-transcription", "Final",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  const CorpusEntry* entry = s.corpus_entry("Final");
                  if (!entry) {
                      rec.pass = false;
                      rec.detail = "formula corpus unavailable";
                      return;
                  }
                  for (const auto& p0 : s.pair_reps()) {
                      bool direct = final_pair(p0, s.ctx, budget).value;
                      bool transcribed =
                          s.eval_corpus(*entry,
                                        {{"xi0", Value{p0.xi.aut, std::nullopt}},
                                         {"eps0", Value{p0.eps.aut(), p0.eps}}},
                                        budget);
                      tally_agree(rec, transcribed, direct, [&] { return describe_pair(p0); });
                  }
              });
}

// ---- inbase ----------------------------------------------------------------

void suite_inbase(SuiteCtx& s, SuiteReport& out) {
    run_check(s, out, "inbase/identity-baseline", "InBase",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  Split split = s.degenerate_split();
                  Subgroup b =
                      collect_base(identity_automorphism(s.g), split, s.ctx, budget);
                  tally_prop(rec, b.is_zero(),
                             [&] { return "collected " + std::to_string(b.size()); });
              });

    run_check(s, out, "inbase/core-determined", "InBase",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  Split split = s.degenerate_split();
                  for (const auto& nu : s.aut_sample(23)) {
                      std::map<std::vector<std::int32_t>, bool> by_core;
                      for (const auto& e : s.ctx.extremes()) {
                          bool v = in_base(e, nu, split, s.ctx, budget);
                          auto [it, fresh] = by_core.emplace(e.core.members(), v);
                          tally_prop(rec, fresh || it->second == v,
                                     [&] { return describe_extreme(e); });
                      }
                  }
              });

    run_check(s, out, "inbase/shift-prediction", "InBase",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  auto nu = s.canonical_shift();
                  if (!nu) {
                      rec.detail = "no order-dropping shift on this group; vacuous";
                      return;
                  }
                  Split split = s.degenerate_split();
                  const GroupSpec& g = s.g;
                  auto predicted = [&](const Subgroup& core) {
                      if (split.low.contains(core)) return true;
                      for (std::int32_t a = 1; a < g.size(); ++a) {
                          if (!split.fin.contains_index(a)) continue;
                          if (g.order_of_index(a) <= core.size()) continue;
                          Subgroup ca = span(g, {a});
                          if (join(ca, nu->apply_subgroup(ca)) == join(ca, core)) return true;
                      }
                      return false;
                  };
                  for (const auto& e : s.ctx.extremes())
                      tally_agree(rec, in_base(e, *nu, split, s.ctx, budget),
                                  predicted(e.core), [&] { return describe_extreme(e); });
              });

    run_check(s, out, "inbase/transcription", "InBase",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  const CorpusEntry* entry = s.corpus_entry("InBase");
                  if (!entry) {
                      rec.pass = false;
                      rec.detail = "formula corpus unavailable";
                      return;
                  }
                  std::vector<Automorphism> nus{identity_automorphism(s.g)};
                  if (auto nu = s.canonical_shift()) nus.push_back(*nu);
                  for (const auto& p : s.pair_reps()) {
                      Split split = split_of_pair(p);
                      for (const auto& nu : nus)
                          for (const auto& e : s.ctx.extremes()) {
                              bool direct = in_base(e, nu, split, s.ctx, budget);
                              bool transcribed = s.eval_corpus(
                                  *entry,
                                  {{"e", Value{e.aut(), e}},
                                   {"nu", Value{nu, std::nullopt}},
                                   {"xi", Value{p.xi.aut, std::nullopt}},
                                   {"eps", Value{p.eps.aut(), p.eps}}},
                                  budget);
                              tally_agree(rec, transcribed, direct,
                                          [&] { return describe_extreme(e); });
                          }
                  }
              });
}

// ---- isbase ----------------------------------------------------------------

void suite_isbase(SuiteCtx& s, SuiteReport& out) {
    run_check(s, out, "isbase/modes", "IsBase",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  std::vector<Split> splits{s.degenerate_split()};
                  for (const auto& p : s.pair_reps()) splits.push_back(split_of_pair(p));
                  std::vector<Automorphism> nus = s.aut_sample(11);
                  if (auto nu = s.canonical_shift()) nus.push_back(*nu);
                  for (const auto& split : splits)
                      for (const auto& nu : nus)
                          tally_agree(rec, is_base(nu, split, Mode::formula, s.ctx, budget),
                                      is_base(nu, split, Mode::semantic, s.ctx, budget),
                                      [&] { return nu.fwd.matrix_string(); });
              });

    run_check(s, out, "isbase/finite-law", "IsBase",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  Split split = s.degenerate_split();
                  std::vector<Automorphism> nus = s.aut_sample(17);
                  if (auto nu = s.canonical_shift()) nus.push_back(*nu);
                  for (const auto& nu : nus) {
                      bool semantic = is_base(nu, split, Mode::semantic, s.ctx, budget);
                      bool whole = collect_base(nu, split, s.ctx, budget).is_whole_group();
                      tally_agree(rec, semantic, whole,
                                  [&] { return nu.fwd.matrix_string(); });
                  }
              });
}

// ---- lemma5 ----------------------------------------------------------------

void suite_lemma5(SuiteCtx& s, SuiteReport& out) {
    run_check(s, out, "lemma5/equivalence", "conjugation-criterion",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  TransvectionFamily fam = canonical_family(s.ctx);
                  const GroupSpec& g = s.g;
                  rec.detail =
                      "coefficients: unit k1, l1, l2 (automorphism shape), nonzero k2";
                  bool any = false;
                  for (int i = 0; i < fam.size(); ++i)
                      for (int j = 0; j < fam.size(); ++j)
                          for (int k = 0; k < fam.size(); ++k) {
                              if (i == j || j == k || i == k) continue;
                              if (fam.ord(i) < fam.ord(j) || fam.ord(k) < fam.ord(i))
                                  continue;
                              any = true;
                              for (std::int64_t k1 = 1; k1 < fam.ord(i); ++k1) {
                                  if (k1 % g.p() == 0) continue; // automorphism shape
                                  for (std::int64_t k2 = 1; k2 < fam.ord(j); ++k2)
                                      for (std::int64_t l1 = 1; l1 < fam.ord(k); ++l1) {
                                          if (l1 % g.p() == 0) continue;
                                          for (std::int64_t l2 = 1; l2 < fam.ord(i); ++l2) {
                                              if (l2 % g.p() == 0) continue; // unit coefficient
                                              budget.charge("lemma5/equivalence");
                                              Automorphism gm = family_two_term_map(
                                                  fam, i, k1, j, k2);
                                              Automorphism g0 = family_two_term_map(
                                                  fam, k, l1, i, l2);
                                              Lemma5Result r = lemma5_criterion(
                                                  gm, g0, fam, i, j, k);
                                              bool image_ok =
                                                  r.conjugate_image_of_bk ==
                                                  elem_add(
                                                      fam.gen(k),
                                                      elem_add(
                                                          scalar_mul(r.l2 * (r.k1 - 1),
                                                                     fam.gen(i)),
                                                          scalar_mul(r.l2 * r.k2,
                                                                     fam.gen(j))));
                                              tally_prop(
                                                  rec, r.lhs == r.rhs && image_ok, [&] {
                                                      std::ostringstream os;
                                                      os << "i=" << i << " j=" << j
                                                         << " k=" << k << " k1=" << k1
                                                         << " k2=" << k2 << " l1=" << l1
                                                         << " l2=" << l2;
                                                      return os.str();
                                                  });
                                          }
                                      }
                              }
                          }
                  if (!any) rec.detail = "no admissible index triple on this group; vacuous";
              });
}

// ---- transvections -----------------------------------------------------------

void suite_transvections(SuiteCtx& s, SuiteReport& out) {
    run_check(s, out, "transvections/family-check", "family-constraints",
              [](SuiteCtx& s, CheckRecord& rec, Budget&) {
                  TransvectionFamily fam = canonical_family(s.ctx);
                  tally_prop(rec, family_check(fam), [] { return std::string("canonical family"); });
              });

    run_check(s, out, "transvections/order-violation", "family-constraints",
              [](SuiteCtx& s, CheckRecord& rec, Budget&) {
                  TransvectionFamily fam = canonical_family(s.ctx);
                  bool any = false;
                  for (int i = 0; i < fam.size(); ++i)
                      for (int j = 0; j < fam.size(); ++j) {
                          if (i == j || fam.ord(i) >= fam.ord(j)) continue;
                          any = true;
                          bool threw = false;
                          try {
                              transvection(fam.basis, i, j);
                          } catch (const error& e) {
                              threw = e.code() == errc::order_violation;
                          }
                          tally_prop(rec, threw, [&] {
                              return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
                          });
                      }
                  if (!any) rec.detail = "all basis orders equal; vacuous";
              });

    run_check(s, out, "transvections/commutator-law", "family-constraints",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  TransvectionFamily fam = canonical_family(s.ctx);
                  bool any = false;
                  for (const auto& [key, gij] : fam.maps) {
                      auto [i, j] = key;
                      for (int k = 0; k < fam.size(); ++k) {
                          if (k == i || k == j) continue;
                          auto jk = fam.maps.find({j, k});
                          auto ik = fam.maps.find({i, k});
                          if (jk == fam.maps.end() || ik == fam.maps.end()) continue;
                          any = true;
                          budget.charge("transvections/commutator");
                          Automorphism lhs =
                              compose(inverse(jk->second),
                                      compose(inverse(gij), compose(jk->second, gij)));
                          tally_prop(rec, lhs == ik->second, [&, i = i, j = j] {
                              return "(" + std::to_string(i) + "," + std::to_string(j) +
                                     "," + std::to_string(k) + ")";
                          });
                      }
                  }
                  if (!any) rec.detail = "no admissible triple on this group; vacuous";
              });

    run_check(s, out, "transvections/mutant-family", "family-constraints",
              [](SuiteCtx& s, CheckRecord& rec, Budget&) {
                  // A squared map breaks the commutator law, visible whenever
                  // the map participates in an admissible triple.
                  TransvectionFamily fam = canonical_family(s.ctx);
                  bool any = false;
                  for (auto it = fam.maps.begin(); it != fam.maps.end(); ++it) {
                      auto [i, j] = it->first;
                      bool in_triple = false;
                      for (int k = 0; k < fam.size() && !in_triple; ++k) {
                          if (k == i || k == j) continue;
                          // roles: the moved map, the conjugator, or the result
                          in_triple = (fam.maps.count({j, k}) && fam.maps.count({i, k})) ||
                                      (fam.maps.count({k, i}) && fam.maps.count({k, j})) ||
                                      (fam.maps.count({i, k}) && fam.maps.count({k, j}));
                      }
                      if (!in_triple) continue;
                      any = true;
                      TransvectionFamily mutant = fam;
                      mutant.maps.at(it->first) = compose(it->second, it->second);
                      tally_prop(rec, !family_check(mutant), [&, i = i, j = j] {
                          return "(" + std::to_string(i) + "," + std::to_string(j) +
                                 ") squared";
                      });
                  }
                  if (!any)
                      rec.detail = "no map participates in a commutator triple; vacuous";
              });
}

// ---- encoding ------------------------------------------------------------------

std::vector<Element> encodable_elements(const SuiteCtx& s, int carrier) {
    std::vector<Element> out;
    const auto& fam = s.enc->family;
    for (std::int32_t idx = 1; idx < s.g.size(); ++idx) {
        Element x{s.g, idx};
        if (order_of(x) < fam.ord(carrier) && !fam.core(carrier).contains_index(idx))
            out.push_back(x);
    }
    return out;
}

void suite_encoding(SuiteCtx& s, SuiteReport& out) {
    run_check(s, out, "encoding/roundtrip", "element-encoding",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  const auto& fam = s.enc->family;
                  for (int carrier = 0; carrier < fam.size(); ++carrier) {
                      for (std::int32_t idx = 0; idx < s.g.size(); ++idx) {
                          Element x{s.g, idx};
                          if (order_of(x) >= fam.ord(carrier)) continue;
                          budget.charge("encoding/roundtrip");
                          tally_prop(rec, decode(encode(x, fam, carrier), fam) == x, [&] {
                              return "carrier " + std::to_string(carrier);
                          });
                      }
                  }
              });

    run_check(s, out, "encoding/selection-modes", "encoder-selection",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  const auto& fam = s.enc->family;
                  for (const auto& f : s.ctx.automorphisms())
                      tally_agree(rec, is_encoder(f, fam, Mode::formula, s.ctx, budget),
                                  is_encoder(f, fam, Mode::semantic, s.ctx, budget),
                                  [&] { return f.fwd.matrix_string(); });
              });

    run_check(s, out, "encoding/zero-convention", "element-encoding",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  rec.detail = s.ctx.conventions().zero_encoder
                                   ? "identity admitted as the encoder of zero (convention)"
                                   : "zero-encoder convention disabled";
                  Automorphism id = identity_automorphism(s.g);
                  if (s.ctx.conventions().zero_encoder) {
                      tally_prop(rec, enc_eq(id, id, *s.enc, s.ctx, budget),
                                 [] { return std::string("EncEq(id,id)"); });
                      tally_prop(rec, !is_encoder(id, s.enc->family, Mode::formula, s.ctx, budget),
                                 [] { return std::string("selection formula admits id"); });
                  } else {
                      bool threw = false;
                      try {
                          enc_eq(id, id, *s.enc, s.ctx, budget);
                      } catch (const error& e) {
                          threw = e.code() == errc::not_encoder;
                      }
                      tally_prop(rec, threw, [] { return std::string("EncEq(id,id)"); });
                  }
              });

    run_check(s, out, "encoding/summand-transport", "encoded-mappings",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  const auto& fam = s.enc->family;
                  if (fam.maps.empty()) {
                      rec.detail = "no transvections on this group; vacuous";
                      return;
                  }
                  // transvections realize mappings between basis summands,
                  // sharing the moved summand as the witness
                  for (const auto& [key, gij] : fam.maps) {
                      auto [i, j] = key;
                      for (const auto& [key2, gik] : fam.maps) {
                          auto [i2, k] = key2;
                          if (i2 != i || k == j) continue;
                          tally_prop(rec,
                                     rel_encoded_map(gij, gik, fam.basis[static_cast<size_t>(j)].eps,
                                                     fam.basis[static_cast<size_t>(k)].eps,
                                                     s.ctx, budget),
                                     [&, i = i, j = j] {
                                         return "(" + std::to_string(i) + "," +
                                                std::to_string(j) + "," + std::to_string(k) +
                                                ")";
                                     });
                      }
                      // the identity transports nothing
                      Automorphism id = identity_automorphism(s.g);
                      tally_prop(rec,
                                 !rel_encoded_map(id, id, fam.basis[static_cast<size_t>(i)].eps,
                                                  fam.basis[static_cast<size_t>(j)].eps, s.ctx,
                                                  budget),
                                 [] { return std::string("identity transport"); });
                  }
              });

    run_check(s, out, "encoding/eq-oracle", "encoded-equality",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  const auto& fam = s.enc->family;
                  for (int carrier = 0; carrier < fam.size(); ++carrier) {
                      auto elements = encodable_elements(s, carrier);
                      for (const auto& a1 : elements)
                          for (const auto& a2 : elements) {
                              Automorphism f1 = encode(a1, fam, carrier);
                              Automorphism f2 = encode(a2, fam, carrier);
                              tally_agree(rec, enc_eq(f1, f2, *s.enc, s.ctx, budget),
                                          a1 == a2, [&] {
                                              return f1.fwd.matrix_string() + " vs " +
                                                     f2.fwd.matrix_string();
                                          });
                          }
                  }
              });

    run_check(s, out, "encoding/add-oracle", "encoded-addition",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  const auto& fam = s.enc->family;
                  Automorphism id = identity_automorphism(s.g);
                  bool zero_ok = s.ctx.conventions().zero_encoder;
                  for (int carrier = 0; carrier < fam.size(); ++carrier) {
                      std::vector<Element> elements;
                      if (zero_ok) elements.push_back(zero_element(s.g));
                      for (const auto& x : encodable_elements(s, carrier))
                          elements.push_back(x);
                      auto encode_or_id = [&](const Element& x) {
                          return x.index == 0 ? id : encode(x, fam, carrier);
                      };
                      for (const auto& a1 : elements)
                          for (const auto& a2 : elements)
                              for (const auto& a3 : elements)
                                  tally_agree(
                                      rec,
                                      enc_add(encode_or_id(a1), encode_or_id(a2),
                                              encode_or_id(a3), *s.enc, s.ctx, budget),
                                      elem_add(a1, a2) == a3, [&] {
                                          return "carrier " + std::to_string(carrier);
                                      });
                  }
              });
}

// ---- sim -------------------------------------------------------------------------

void suite_sim(SuiteCtx& s, SuiteReport& out) {
    run_check(s, out, "sim/modes", "similarity",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  auto f1s = s.aut_sample(5);
                  auto f2s = s.aut_sample(7);
                  for (const auto& p : s.pair_reps())
                      for (const auto& f1 : f1s)
                          for (const auto& f2 : f2s)
                              tally_agree(rec, sim(f1, f2, p, Mode::formula, s.ctx, budget),
                                          sim(f1, f2, p, Mode::semantic, s.ctx, budget),
                                          [&] {
                                              return f1.fwd.matrix_string() + " ~ " +
                                                     f2.fwd.matrix_string() + " over " +
                                                     describe_pair(p);
                                          });
              });

    run_check(s, out, "sim/reflexive", "similarity",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  for (const auto& p : s.pair_reps())
                      for (const auto& f : s.aut_sample(3))
                          tally_prop(rec, sim(f, f, p, Mode::formula, s.ctx, budget),
                                     [&] { return f.fwd.matrix_string(); });
              });
}

// ---- folang agreement -------------------------------------------------------------

void suite_folang(SuiteCtx& s, SuiteReport& out) {
    run_check(s, out, "folang/roundtrip", "formula-corpus",
              [](SuiteCtx& s, CheckRecord& rec, Budget&) {
                  if (s.corpus.empty()) {
                      rec.pass = false;
                      rec.detail = "formula corpus unavailable";
                      return;
                  }
                  for (const auto& e : s.corpus)
                      tally_prop(rec, folang::parse(folang::unparse(e.formula)) == e.formula,
                                 [&] { return e.name; });
              });

    run_check(s, out, "folang/guard-soundness", "formula-corpus",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  if (s.corpus.empty()) {
                      rec.pass = false;
                      rec.detail = "formula corpus unavailable";
                      return;
                  }
                  if (s.ctx.automorphisms().size() > 60) {
                      rec.detail = "guard elaboration swept only on small groups";
                      return;
                  }
                  // compare tagged-guard evaluation with the elaborated form on
                  // simple single-quantifier probes over each guard
                  std::vector<std::string> probes{
                      "forall e : Extreme . ord_leq(e, e)",
                      "exists e : Extreme . ord_lt(e, e)",
                      "forall x : Involution . x * x = id",
                      "exists x : Involution . not (x = id)",
                  };
                  for (const auto& text : probes) {
                      folang::Formula f = folang::parse(text);
                      folang::Environment env{&s.ctx, &s.registry, {}};
                      bool tagged = folang::evaluate(f, env, budget).value;
                      bool plain =
                          folang::evaluate(folang::guard_elaborated(f), env, budget).value;
                      tally_agree(rec, tagged, plain, [&] { return text; });
                  }
                  // and on the corpus formulas over representative bindings
                  for (const auto& entry : s.corpus) {
                      std::vector<std::map<std::string, Value>> sweeps;
                      if (entry.name == "ByOrd" || entry.name == "Rest") {
                          for (const auto& p : s.pair_reps()) {
                              std::map<std::string, Value> b{
                                  {"xi", Value{p.xi.aut, std::nullopt}},
                                  {"eps", Value{p.eps.aut(), p.eps}},
                                  {"xi1", Value{p.xi.aut, std::nullopt}},
                                  {"eps1", Value{p.eps.aut(), p.eps}},
                                  {"e0", Value{p.eps.aut(), p.eps}}};
                              sweeps.push_back(b);
                          }
                      } else if (entry.name == "EncoderSel") {
                          for (const auto& f : s.aut_sample(9))
                              sweeps.push_back({{"f", Value{f, std::nullopt}}});
                      }
                      for (const auto& b : sweeps) {
                          folang::Environment env{&s.ctx, &s.registry, b};
                          bool tagged = folang::evaluate(entry.formula, env, budget).value;
                          bool plain = folang::evaluate(
                                           folang::guard_elaborated(entry.formula), env, budget)
                                           .value;
                          tally_agree(rec, tagged, plain, [&] { return entry.name; });
                      }
                  }
              });

    run_check(s, out, "folang/predicates-agreement", "formula-corpus",
              [](SuiteCtx& s, CheckRecord& rec, Budget& budget) {
                  if (s.corpus.empty()) {
                      rec.pass = false;
                      rec.detail = "formula corpus unavailable";
                      return;
                  }
                  // MapsTo against the relation on strided triples
                  const CorpusEntry* maps = s.corpus_entry("MapsTo");
                  for (const auto& f : s.aut_sample(9))
                      for (const auto& e1 : s.ctx.extremes())
                          for (const auto& e2 : s.ctx.extremes()) {
                              bool via = s.eval_corpus(*maps,
                                                       {{"f", Value{f, std::nullopt}},
                                                        {"e1", Value{e1.aut(), e1}},
                                                        {"e2", Value{e2.aut(), e2}}},
                                                       budget);
                              tally_agree(rec, via, rel_maps_to(f, e1, e2, Mode::formula),
                                          [&] { return std::string("MapsTo"); });
                          }
                  // ByOrd across the pair universe
                  const CorpusEntry* byord = s.corpus_entry("ByOrd");
                  for (const auto& p : s.ctx.pairs()) {
                      bool via = s.eval_corpus(*byord,
                                               {{"xi", Value{p.xi.aut, std::nullopt}},
                                                {"eps", Value{p.eps.aut(), p.eps}}},
                                               budget);
                      tally_agree(rec, via, by_ord(p, Mode::formula, s.ctx, budget),
                                  [&] { return std::string("ByOrd ") + describe_pair(p); });
                  }
                  // encoder selection across the automorphism group
                  const CorpusEntry* sel = s.corpus_entry("EncoderSel");
                  for (const auto& f : s.ctx.automorphisms()) {
                      bool via = s.eval_corpus(*sel, {{"f", Value{f, std::nullopt}}}, budget);
                      tally_agree(rec, via,
                                  is_encoder(f, s.enc->family, Mode::formula, s.ctx, budget),
                                  [&] { return std::string("EncoderSel"); });
                  }
                  // encoded equality on one carrier sweep
                  const CorpusEntry* enceq = s.corpus_entry("EncEq");
                  const auto& fam = s.enc->family;
                  for (int carrier = 0; carrier < fam.size(); ++carrier) {
                      auto elements = encodable_elements(s, carrier);
                      for (const auto& a1 : elements)
                          for (const auto& a2 : elements) {
                              Automorphism f1 = encode(a1, fam, carrier);
                              Automorphism f2 = encode(a2, fam, carrier);
                              bool via = s.eval_corpus(*enceq,
                                                       {{"f1", Value{f1, std::nullopt}},
                                                        {"f2", Value{f2, std::nullopt}}},
                                                       budget);
                              tally_agree(rec, via, enc_eq(f1, f2, *s.enc, s.ctx, budget),
                                          [&] { return std::string("EncEq"); });
                          }
                  }
              });
}

const std::vector<std::pair<std::string, void (*)(SuiteCtx&, SuiteReport&)>>& suite_table() {
    static const std::vector<std::pair<std::string, void (*)(SuiteCtx&, SuiteReport&)>> table{
        {"relations", suite_relations}, {"lemma1", suite_lemma1},
        {"inbase", suite_inbase},       {"isbase", suite_isbase},
        {"lemma5", suite_lemma5},       {"transvections", suite_transvections},
        {"encoding", suite_encoding},   {"sim", suite_sim},
        {"folang-agreement", suite_folang},
    };
    return table;
}

} // namespace

bool SuiteReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

bool SuiteReport::any_budget_exhausted() const {
    for (const auto& c : checks)
        if (c.budget_exhausted) return true;
    return false;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, _] : suite_table()) v.push_back(name);
        v.push_back("all");
        return v;
    }();
    return names;
}

SuiteReport run_suite(const std::string& suite, const GroupSpec& g, std::int64_t budget,
                      const Conventions& conventions, const std::string& corpus_dir) {
    SuiteReport out;
    out.group_description = g.describe();
    out.p = g.p();
    out.exponents = g.exponents();
    out.suite = suite;
    out.budget = budget;
    out.conventions = conventions;

    SuiteCtx s(g, conventions, budget, corpus_dir);
    bool known = false;
    for (const auto& [name, fn] : suite_table()) {
        if (suite == name || suite == "all") {
            fn(s, out);
            known = true;
        }
    }
    if (!known) fail(errc::precondition_violated, "unknown suite '" + suite + "'");
    return out;
}

namespace {

nlohmann::json conventions_json(const Conventions& c) {
    return nlohmann::json{
        {"side-tiebreak", c.tie_break == Side::minus ? "minus" : "plus"},
        {"involution-identity", c.involutions_include_identity ? "include" : "exclude"},
        {"zero-encoder", c.zero_encoder ? "on" : "off"},
    };
}

nlohmann::json body_json(const SuiteReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        checks.push_back(nlohmann::json{
            {"id", c.id},
            {"reference", c.reference},
            {"detail", c.detail},
            {"cases", c.cases},
            {"formula_true", c.formula_true},
            {"oracle_true", c.oracle_true},
            {"pass", c.pass},
            {"budget_exhausted", c.budget_exhausted},
            {"witness", c.witness},
            {"substitutions", c.substitutions},
        });
    }
    return nlohmann::json{
        {"schema", "autfol-report-v1"},
        {"group",
         {{"p", r.p}, {"exponents", r.exponents}, {"description", r.group_description}}},
        {"suite", r.suite},
        {"budget", r.budget},
        {"conventions", conventions_json(r.conventions)},
        {"checks", checks},
        {"pass", r.pass()},
        {"budget_exhausted", r.any_budget_exhausted()},
    };
}

} // namespace

std::string report_body_json(const SuiteReport& r) { return body_json(r).dump(2); }

std::string report_full_json(const SuiteReport& r) {
    nlohmann::json timing;
    double total = 0;
    for (const auto& c : r.checks) {
        timing["checks"][c.id] = c.elapsed_seconds;
        total += c.elapsed_seconds;
    }
    timing["total_seconds"] = total;
    return nlohmann::json{{"body", body_json(r)}, {"timing", timing}}.dump(2);
}

std::string report_summary_text(const SuiteReport& r) {
    std::ostringstream os;
    os << "suite '" << r.suite << "' on " << r.group_description << "\n";
    for (const auto& c : r.checks) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << " (" << c.cases << " cases";
        if (c.budget_exhausted) os << ", budget exhausted";
        os << ")";
        if (!c.detail.empty()) os << " - " << c.detail;
        if (!c.pass && !c.witness.empty()) os << " - first disagreement: " << c.witness;
        os << "\n";
    }
    os << (r.pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace autfol::report
