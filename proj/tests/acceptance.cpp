// Acceptance run: one PASS/FAIL line per criterion, with its time budget.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "reference.hpp"
#include "vgadt/checker.hpp"
#include "vgadt/criterion.hpp"
#include "vgadt/oracle.hpp"
#include "vgadt/parser.hpp"

using namespace vgadt;

namespace {

constexpr Variance Inv = Variance::Inv, Cov = Variance::Cov, Contra = Variance::Contra,
                   Irr = Variance::Irr;
const Variance kAll[] = {Inv, Cov, Contra, Irr};
const Variance kProper[] = {Inv, Cov, Contra};

TypeExpr T(const char* s) { return parse_type(s); }

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> problems;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (problems.size() < 5) problems.push_back(what);
  }
};

void collect_heads(const TypeExpr& t, std::set<std::string>& out) {
  if (t.is_var()) return;
  if (t.name != "unit") out.insert(t.name);
  for (const auto& a : t.args) collect_heads(a, out);
}

// The two bases plus every head of `ts`.
std::vector<std::string> ctors_for(const std::vector<TypeExpr>& ts) {
  std::set<std::string> heads;
  for (const auto& t : ts) collect_heads(t, heads);
  heads.erase("int");
  heads.erase("bool");
  std::vector<std::string> out{"int", "bool"};
  out.insert(out.end(), heads.begin(), heads.end());
  return out;
}

// The deepest universe (up to `max_depth`) whose size raised to `exponent`
// stays within `budget`; depth 1 at least.
GroundUniverse universe_for(TypeStore& store, const std::vector<std::string>& ctors, int max_depth,
                            int exponent, double budget) {
  int depth = 1;
  for (int d = 2; d <= max_depth; ++d) {
    double n = static_cast<double>(count_types(store.signature(), d, ctors));
    if (std::pow(n, exponent) > budget) break;
    depth = d;
  }
  return enumerate_types(store, depth, ctors);
}

// --- 1 ---------------------------------------------------------------------

Outcome tables() {
  Outcome o;
  int blanks = 0, undefined = 0;
  for (Variance v : kAll)
    for (Variance w : kAll) {
      std::string pair = std::string(1, to_char(v)) + "," + to_char(w);
      o.require(compose(v, w) == ref::table_compose(v, w), "compose(" + pair + ")");
      o.require(var_leq(v, w) == ref::table_leq(v, w), "var_leq(" + pair + ")");
      o.require(var_glb(v, w) == ref::brute_glb(v, w), "var_glb(" + pair + ")");
      o.require(var_lub(v, w) == ref::brute_lub(v, w), "var_lub(" + pair + ")");
      o.require(zip(v, w) == ref::table_zip(v, w), "zip(" + pair + ")");
      if (ref::kZipTable[static_cast<int>(v)][static_cast<int>(w)] == ' ') ++blanks;
      if (!zip(v, w)) ++undefined;
    }
  o.require(blanks == 8 && undefined == 8, "zip should be undefined on exactly 8 cells");
  o.detail = "16 pairs each for compose, leq, glb, lub, zip; " + std::to_string(undefined) + " undefined zips";
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome pragmatic_query() {
  Outcome o;
  auto sig = fixtures::corpus("pair_ref.vt");
  auto m = variance_sets(sig, T("'a * 'b ref"), Cov);
  o.require(m.vars() == std::vector<std::string>{"a", "b"}, "domain");
  o.require(m.at("a") == VarianceSet({Cov, Inv}), "a");
  o.require(m.at("b") == VarianceSet({Inv}), "b");
  o.detail = m.str();
  return o;
}

// --- 3 ---------------------------------------------------------------------

Outcome paper_verdicts() {
  Outcome o;
  auto expect = [&](const char* file, const char* type, const char* ctor, bool accepted) {
    auto sig = fixtures::corpus(file);
    auto report = check_signature(sig, Mode::Exact);
    bool seen = false;
    for (const auto& v : report.verdicts)
      if (v.type == type && v.ctor == ctor) {
        seen = true;
        o.require(v.accepted == accepted, std::string(file) + " " + ctor);
      }
    o.require(seen, std::string(file) + " has no " + ctor);
  };
  for (const char* k : {"Val", "Int", "Thunk", "Prod"}) expect("expr.vt", "expr", k, true);
  expect("eq_cov.vt", "eq", "Refl", false);
  expect("eq_inv.vt", "eq", "Refl", true);
  expect("fun.vt", "t", "Fun", false);
  for (const char* k : {"Val", "Int", "Thunk", "Prod"}) expect("expr_sub.vt", "expr", k, true);
  o.detail = "expr accepted, eq(+,=) rejected at Refl, eq(=,=) accepted, Fun rejected, expr with >= accepted";
  return o;
}

// --- 4 ---------------------------------------------------------------------

Outcome closure_sensitivity() {
  Outcome o;
  auto none = fixtures::corpus("expr.vt", ClosurePreset::None);
  auto r = check_signature(none, Mode::Exact);
  o.require(!r.all_accepted(), "preset none accepts expr");
  for (const auto& v : r.verdicts)
    if (v.ctor == "Prod") o.require(!v.accepted && v.reason.find("'*'") != std::string::npos, "Prod under none");

  auto only = fixtures::signature(fixtures::read_corpus("expr.vt") + "closed + int\nclosed + expr\nclosed + ->\n",
                                  ClosurePreset::None);
  for (const auto& v : check_signature(only, Mode::Exact).verdicts)
    o.require(v.accepted == (v.ctor != "Prod"), "open product only: " + v.ctor);

  auto open = fixtures::corpus("expr.vt", ClosurePreset::MlOpen);
  o.require(check_signature(open, Mode::Exact).all_accepted(), "ml-open rejects expr");
  o.detail = "rejected at Prod when '*' is not +-closed, accepted under ml-open";
  return o;
}

// --- 5 ---------------------------------------------------------------------

Outcome variance_oracle() {
  Outcome o;
  auto sig = fixtures::signature(fixtures::kTypeWorld);
  std::size_t triples = 0, holding = 0, deepest = 0;
  for (const auto& t : fixtures::type_corpus()) {
    auto vars = free_vars(t);
    TypeStore store(sig);
    auto u = universe_for(store, ctors_for({t}), 3, 2 * static_cast<int>(vars.size()), 2e7);
    deepest = std::max<std::size_t>(deepest, u.depth);
    for (const auto& g : ref::all_contexts(vars))
      for (Variance v : kAll) {
        ++triples;
        bool syn = check_variance(sig, g, t, v);
        auto sem = sem_variance(store, u, g, t, v);
        holding += syn;
        o.require(syn == sem.holds, judgment_text(g, t, v) + " at depth " + std::to_string(u.depth) +
                                        (sem.holds ? "" : ": " + sem.counterexample));
      }
  }
  o.require(triples >= 30, "fewer than 30 triples");
  o.detail = std::to_string(triples) + " triples (" + std::to_string(holding) + " derivable), depth <= " +
             std::to_string(deepest);
  return o;
}

// --- 6 ---------------------------------------------------------------------

Outcome decomp_soundness() {
  Outcome o;
  auto sig = fixtures::signature(fixtures::kTypeWorld);
  std::size_t queries = 0, positive = 0, deepest = 0;
  for (const auto& t : fixtures::type_corpus()) {
    auto vars = free_vars(t);
    TypeStore store(sig);
    auto u = universe_for(store, ctors_for({t}), 3, 2 * static_cast<int>(vars.size()) + 1, 2e7);
    deepest = std::max<std::size_t>(deepest, u.depth);
    DecompSolver solver(sig);
    for (const auto& g : ref::all_contexts(vars))
      for (Variance v : kProper)
        for (Variance v2 : kProper) {
          ++queries;
          if (!solver.check(g, t, v, v2)) continue;
          ++positive;
          auto sem = sem_decomp(store, u, g, t, v, v2);
          o.require(sem.holds, judgment_text(g, t, v, v2) + ": " + sem.counterexample);
        }
  }

  TypeStore store(sig);
  auto u = enumerate_types(store, 2, {"int", "bool", "*", "ref"});
  struct Example {
    VarianceContext g;
    const char* type;
    bool expect;
  };
  const Example examples[] = {{{{"b", Cov}, {"c", Cov}}, "'b * 'c", true},
                              {{{"b", Cov}}, "'b * 'b", false},
                              {{{"b", Inv}}, "'b ref * 'b ref", true}};
  for (const auto& e : examples) {
    auto t = T(e.type);
    o.require(check_decomp(sig, e.g, t, Cov, Inv) == e.expect, std::string("syntactic ") + e.type);
    o.require(sem_decomp(store, u, e.g, t, Cov, Inv).holds == e.expect, std::string("semantic ") + e.type);
  }
  // 'b * 'b fails under every context.
  for (Variance w : kAll) o.require(!check_decomp(sig, {{"b", w}}, T("'b * 'b"), Cov, Inv), "'b * 'b");

  o.require(positive > 0, "no derivable decomposition");
  o.detail = std::to_string(positive) + " of " + std::to_string(queries) +
             " derivable judgments hold semantically (depth <= " + std::to_string(deepest) +
             "); the three worked examples match";
  return o;
}

// --- 7 ---------------------------------------------------------------------

bool eq_only(const DataConstructorDecl& k) {
  if (k.constraints.empty()) return false;
  for (const auto& c : k.constraints)
    if (c.rel != ConstraintRel::Eq) return false;
  return true;
}

Outcome req_sp_crosscheck(std::vector<std::string>& log) {
  Outcome o;
  std::size_t accepted = 0, rejected = 0;
  bool saw_fd = false;
  for (const auto& file : fixtures::corpus_files()) {
    auto sig = fixtures::corpus(file);
    for (const auto& d : sig.datatypes())
      for (const auto& k : d.ctors) {
        if (!eq_only(k)) continue;
        auto verdict = check_constructor(sig, d, k, Mode::Exact);
        std::string name = file + " " + d.name + "." + k.name;
        if (verdict.accepted) {
          ++accepted;
          TypeStore store(sig);
          auto u = enumerate_types(store, 2);
          auto sem = req_sp(store, u, d, k);
          o.require(sem.holds, name + " accepted but req-SP fails: " + sem.counterexample);
          continue;
        }
        ++rejected;
        if (file == "private_fd.vt") saw_fd = true;
        std::string found;
        for (int depth = 1; depth <= 3 && found.empty(); ++depth) {
          TypeStore store(sig);
          GroundUniverse u;
          try {
            u = enumerate_types(store, depth);
          } catch (const std::length_error&) {
            break;
          }
          auto sem = req_sp(store, u, d, k);
          if (!sem.holds) found = "depth " + std::to_string(depth) + ": " + sem.counterexample;
        }
        o.require(!found.empty(), name + " rejected without a req-SP counterexample up to depth 3");
        if (!found.empty()) log.push_back(name + " rejected; req-SP counterexample at " + found);
      }
  }
  o.require(saw_fd, "the private type world was not checked");
  o.detail = std::to_string(accepted) + " accepted with req-SP at depth 2, " + std::to_string(rejected) +
             " rejected with a counterexample";
  return o;
}

// --- 8 ---------------------------------------------------------------------

Outcome brute_force() {
  Outcome o;
  std::size_t compared = 0;
  std::uint64_t candidates = 0;
  for (auto preset : {ClosurePreset::Atomic, ClosurePreset::None, ClosurePreset::MlOpen})
    for (const auto& file : fixtures::corpus_files()) {
      auto sig = fixtures::corpus(file, preset);
      for (const auto& d : sig.datatypes())
        for (const auto& k : d.ctors) {
          if (k.existentials.size() > 3) continue;
          std::string name = file + " " + k.name + " (" + std::string(to_string(preset)) + ")";
          auto exact = check_gadt_constructor(sig, d, k, Mode::Exact);
          auto brute = ref::brute_force_gadt(sig, d, k);
          ++compared;
          candidates += brute.candidates;
          o.require(exact.accepted == brute.accepted, name);
          if (!exact.accepted || !exact.gamma) continue;
          // Witnesses re-verify under the reference judgments.
          o.require(ref::check_variance(sig, *exact.gamma, k.arg, Cov), name + " gamma");
          o.require(exact.gammas.size() == k.constraints.size(), name + " family size");
          if (exact.gammas.size() != k.constraints.size()) continue;
          if (!k.constraints.empty()) o.require(ctx_zip(exact.gammas, k.existentials) == exact.gamma, name + " zip");
          ref::Decomp decomp(sig);
          for (std::size_t i = 0; i < k.constraints.size(); ++i) {
            const auto& c = k.constraints[i];
            o.require(decomp.check(exact.gammas[i], c.bound, d.params[c.param].variance, target_variance(c.rel)),
                      name + " constraint " + std::to_string(i + 1));
          }
        }
    }
  o.require(compared > 0, "nothing compared");
  o.detail = std::to_string(compared) + " constructors over 3 presets, " + std::to_string(candidates) +
             " candidate families enumerated";
  return o;
}

// --- 9 ---------------------------------------------------------------------

Outcome metatheory() {
  Outcome o;
  auto sig = fixtures::signature(fixtures::kTypeWorld);
  const auto corpus = fixtures::type_corpus();
  std::size_t checks = 0;

  // Monotonicity and principality.
  for (const auto& t : corpus) {
    auto vars = free_vars(t);
    auto ctxs = ref::all_contexts(vars);
    for (Variance v : kAll) {
      auto p = principal_context(sig, t, v);
      o.require(check_variance(sig, p, t, v), "principal context derives " + t.str());
      for (const auto& g : ctxs) {
        bool holds = check_variance(sig, g, t, v);
        if (holds) o.require(ctx_leq(p, g), "principal below " + judgment_text(g, t, v));
        if (!holds || vars.size() > 2) continue;
        for (const auto& g2 : ctxs)
          if (ctx_leq(g, g2)) {
            ++checks;
            o.require(check_variance(sig, g2, t, v), "monotonicity " + judgment_text(g2, t, v));
          }
      }
    }
  }

  // sc-Var strictness.
  o.require(!check_decomp(sig, {{"a", Inv}}, T("'a"), Cov, Inv) && check_variance(sig, {{"a", Inv}}, T("'a"), Cov),
            "sc-Var strictness");

  // Semantic anti-monotonicity.
  for (const auto& t : corpus) {
    auto vars = free_vars(t);
    if (vars.size() > 2) continue;
    TypeStore store(sig);
    auto u = universe_for(store, ctors_for({t}), 2, 2 * static_cast<int>(vars.size()) + 1, 2e6);
    auto ctxs = ref::all_contexts(vars);
    std::vector<char> holds(ctxs.size());
    for (std::size_t i = 0; i < ctxs.size(); ++i) holds[i] = sem_decomp(store, u, ctxs[i], t, Cov, Inv).holds;
    for (std::size_t i = 0; i < ctxs.size(); ++i)
      for (std::size_t j = 0; j < ctxs.size(); ++j)
        if (holds[i] && ctx_leq(ctxs[j], ctxs[i])) {
          ++checks;
          o.require(holds[j], "anti-monotonicity " + judgment_text(ctxs[j], t, Cov, Inv));
        }
  }

  // Inversion and intermediate values.
  for (const auto& t : corpus) {
    auto vars = free_vars(t);
    TypeStore store(sig);
    auto u = universe_for(store, ctors_for({t}), 2, 2 * static_cast<int>(vars.size()), 1e6);
    for (Variance v : kProper) {
      ++checks;
      auto sem = sem_inversion(store, u, principal_context(sig, t, v), t, v);
      o.require(sem.holds, "inversion " + t.str() + ": " + sem.counterexample);
    }
    auto iv = universe_for(store, ctors_for({t}), 2, 3 * static_cast<int>(vars.size()), 1e6);
    ++checks;
    auto sem = sem_intermediate_value(store, iv, principal_context(sig, t, Cov), t);
    o.require(sem.holds, "intermediate value " + t.str() + ": " + sem.counterexample);
  }

  // Zip soundness on generated instances over two variables.
  {
    const std::vector<std::string> vars{"b", "c"};
    const char* texts[] = {"'b", "'c", "'b * 'c", "'b ref", "'b -> 'c", "int", "'c sink"};
    std::vector<TypeExpr> terms;
    for (const char* s : texts) terms.push_back(T(s));
    auto ctxs = ref::all_contexts(vars);
    const std::pair<Variance, Variance> modes[] = {{Cov, Inv}, {Cov, Cov}, {Contra, Inv}};
    for (auto [v, v2] : modes)
      for (std::size_t a = 0; a < terms.size(); ++a)
        for (std::size_t b = a; b < terms.size(); ++b) {
          TypeStore store(sig);
          auto u = universe_for(store, ctors_for({terms[a], terms[b]}), 2, 6, 2e7);
          auto holds = [&](const VarianceContext& g, const TypeExpr& t) {
            return check_variance(sig, g, t, v) && sem_decomp(store, u, g, t, v, v2).holds;
          };
          std::vector<char> ha(ctxs.size()), hb(ctxs.size());
          for (std::size_t i = 0; i < ctxs.size(); ++i) {
            ha[i] = holds(ctxs[i], terms[a]);
            hb[i] = holds(ctxs[i], terms[b]);
          }
          for (std::size_t i = 0; i < ctxs.size(); ++i)
            for (std::size_t j = 0; j < ctxs.size(); ++j) {
              if (!ha[i] || !hb[j]) continue;
              auto z = ctx_zip(ctxs[i], ctxs[j]);
              if (!z) continue;
              ++checks;
              auto sem = sem_simultaneous_decomp(store, u, *z, {{terms[a], v, v2}, {terms[b], v, v2}});
              o.require(sem.holds, "zip soundness " + terms[a].str() + ", " + terms[b].str() + " under " +
                                       ctxs[i].str() + " and " + ctxs[j].str() + ": " + sem.counterexample);
            }
        }
  }

  // Requirements 1 and 2 in atomic worlds.
  {
    TypeStore store(sig);
    auto r2 = check_sp_requirements(store, enumerate_types(store, 2));
    o.require(r2.holds(), "S&P requirements at depth 2");
    auto r3 = check_sp_requirements(store, enumerate_types(store, 3, {"int", "bool", "*", "->"}));
    o.require(r3.holds(), "S&P requirements at depth 3");
    checks += 2;
    for (const auto& file : fixtures::corpus_files()) {
      auto csig = fixtures::corpus(file);
      if (!csig.private_edges().empty()) continue;
      TypeStore cs(csig);
      ++checks;
      o.require(check_sp_requirements(cs, enumerate_types(cs, 2)).holds(), "S&P requirements in " + file);
    }
  }

  o.detail = std::to_string(checks) + " property instances";
  return o;
}

} // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  std::vector<std::string> req_sp_log;
  const Criterion criteria[] = {
      {1, "table exactness", 1, tables},
      {2, "pragmatic query", 1, pragmatic_query},
      {3, "verdicts under the atomic preset", 5, paper_verdicts},
      {4, "closure sensitivity", 5, closure_sensitivity},
      {5, "variance checking against the oracle", 60, variance_oracle},
      {6, "decomposability soundness", 60, decomp_soundness},
      {7, "req-SP cross-check", 120, [&] { return req_sp_crosscheck(req_sp_log); }},
      {8, "exact mode against brute force", 30, brute_force},
      {9, "metatheory properties", 120, metatheory},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs < c.limit;
    bool pass = o.ok && in_time;
    failed += !pass;
    std::printf("%s criterion %d (%s): %s [%.2fs, limit %.0fs]\n", pass ? "PASS" : "FAIL", c.number, c.name,
                o.detail.c_str(), secs, c.limit);
    if (!in_time) std::printf("    over the time limit\n");
    for (const auto& p : o.problems) std::printf("    %s\n", p.c_str());
    if (c.number == 7)
      for (const auto& line : req_sp_log) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
