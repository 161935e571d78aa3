#include "vgadt/checker.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace vgadt {

// --- VarianceSetMap ---------------------------------------------------------------

VarianceSetMap::VarianceSetMap(const std::vector<std::string>& vars, VarianceSet s) {
  for (const auto& v : vars) entries_.emplace_back(v, s);
}

void VarianceSetMap::set(const std::string& var, VarianceSet s) {
  for (auto& [name, set] : entries_) {
    if (name == var) {
      set = s;
      return;
    }
  }
  entries_.emplace_back(var, s);
}

VarianceSet VarianceSetMap::at(std::string_view var) const {
  for (const auto& [name, set] : entries_)
    if (name == var) return set;
  throw std::out_of_range("variable '" + std::string(var) + "' not in variance set map");
}

bool VarianceSetMap::contains(std::string_view var) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == var; });
}

std::vector<std::string> VarianceSetMap::vars() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

std::vector<std::string> VarianceSetMap::empty_vars() const {
  std::vector<std::string> out;
  for (const auto& [name, set] : entries_)
    if (set.empty()) out.push_back(name);
  return out;
}

bool VarianceSetMap::admits(const VarianceContext& g) const {
  for (const auto& [name, set] : entries_)
    if (!set.contains(g.at(name))) return false;
  return true;
}

std::string VarianceSetMap::str() const {
  std::string out;
  for (const auto& [name, set] : entries_) {
    if (!out.empty()) out += "  ";
    out += name + ": " + set.str();
  }
  return out;
}

// --- variance assignment ----------------------------------------------------------

namespace {

const TypeConstructor& lookup(const Signature& sig, const std::string& name) {
  const auto* tc = sig.find(name);
  if (!tc) throw std::invalid_argument("unknown type constructor '" + name + "'");
  return *tc;
}

// Least variance each variable must have: lub of the path variances of its
// occurrences.
void collect_requirements(const Signature& sig, const TypeExpr& t, Variance v,
                          std::map<std::string, Variance, std::less<>>& need) {
  if (t.is_var()) {
    auto [it, fresh] = need.emplace(t.name, v);
    if (!fresh) it->second = var_lub(it->second, v);
    return;
  }
  const auto& tc = lookup(sig, t.name);
  if (tc.arity() != t.args.size())
    throw std::invalid_argument("type constructor '" + t.name + "' applied to the wrong number of arguments");
  for (std::size_t i = 0; i < t.args.size(); ++i)
    collect_requirements(sig, t.args[i], compose(v, tc.variances[i]), need);
}

} // namespace

bool check_variance(const Signature& sig, const VarianceContext& g, const TypeExpr& t, Variance v) {
  if (t.is_var()) return var_leq(v, g.at(t.name));
  const auto& tc = lookup(sig, t.name);
  bool ok = true;
  for (std::size_t i = 0; i < t.args.size(); ++i)
    ok = check_variance(sig, g, t.args[i], compose(v, tc.variances.at(i))) && ok;
  return ok;
}

VarianceContext principal_context(const Signature& sig, const TypeExpr& t, Variance v) {
  return principal_context(sig, t, v, free_vars(t));
}

VarianceContext principal_context(const Signature& sig, const TypeExpr& t, Variance v,
                                  const std::vector<std::string>& domain) {
  std::map<std::string, Variance, std::less<>> need;
  collect_requirements(sig, t, v, need);
  VarianceContext out;
  for (const auto& var : domain) {
    auto it = need.find(var);
    out.add(var, it == need.end() ? Variance::Irr : it->second);
  }
  for (const auto& [var, w] : need)
    if (!out.contains(var)) throw std::out_of_range("variable '" + var + "' outside the domain");
  return out;
}

VarianceSetMap variance_sets(const Signature& sig, const TypeExpr& t, Variance v) {
  return variance_sets(sig, t, v, free_vars(t));
}

VarianceSetMap variance_sets(const Signature& sig, const TypeExpr& t, Variance v,
                             const std::vector<std::string>& domain) {
  VarianceSetMap out;
  for (const auto& [var, w] : principal_context(sig, t, v, domain)) out.set(var, VarianceSet::up(w));
  return out;
}

// --- closure flags ------------------------------------------------------------------

namespace {

std::optional<std::string> strictly_above(const Signature& sig, const std::string& name) {
  for (const auto& tc : sig.constructors())
    if (sig.head_strictly_below(name, tc.name)) return tc.name;
  return std::nullopt;
}

std::optional<std::string> strictly_below(const Signature& sig, const std::string& name) {
  for (const auto& tc : sig.constructors())
    if (sig.head_strictly_below(tc.name, name)) return tc.name;
  return std::nullopt;
}

void collect_heads(const TypeExpr& t, std::vector<std::string>& out) {
  if (t.is_var()) return;
  out.push_back(t.name);
  for (const auto& a : t.args) collect_heads(a, out);
}

} // namespace

ClosureResult compute_closure_flags(const Signature& sig, ClosurePreset preset) {
  ClosureResult res;
  auto& table = res.table;
  const VarianceSet plus = VarianceSet::single(Variance::Cov);

  for (const auto& tc : sig.constructors()) {
    bool below = strictly_above(sig, tc.name).has_value();
    bool above = strictly_below(sig, tc.name).has_value();
    VarianceSet flags;
    switch (preset) {
    case ClosurePreset::Atomic:
      if (!below) flags.insert(Variance::Cov);
      if (!above) flags.insert(Variance::Contra);
      if (!below && !above) flags.insert(Variance::Inv);
      break;
    case ClosurePreset::MlOpen:
      if (tc.name != kArrow && !below) flags = plus;
      break;
    case ClosurePreset::None:
      break;
    }
    table.emplace(tc.name, flags);
  }

  if (preset == ClosurePreset::MlOpen) {
    // Greatest fixpoint: a datatype stays upward-closed while all of its
    // constructor arguments are built from upward-closed constructors.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& d : sig.datatypes()) {
        auto& flags = table[d.name];
        if (!flags.contains(Variance::Cov)) continue;
        std::vector<std::string> heads;
        for (const auto& k : d.ctors) collect_heads(k.arg, heads);
        bool ok = std::all_of(heads.begin(), heads.end(), [&](const std::string& h) {
          auto it = table.find(h);
          return it != table.end() && it->second.contains(Variance::Cov);
        });
        if (!ok) {
          flags = VarianceSet::none();
          changed = true;
        }
      }
    }
  }

  for (const auto& c : sig.closed_decls()) {
    auto it = table.find(c.ctor);
    if (it == table.end()) continue;
    auto up = strictly_above(sig, c.ctor);
    auto down = strictly_below(sig, c.ctor);
    std::string flag(1, to_char(c.flag));
    if ((c.flag == Variance::Cov || c.flag == Variance::Inv) && up) {
      res.diagnostics.push_back({c.loc, "closed " + flag + " " + c.ctor + ": '" + c.ctor +
                                            "' lies strictly below '" + *up + "'"});
    } else if ((c.flag == Variance::Contra || c.flag == Variance::Inv) && down) {
      res.diagnostics.push_back({c.loc, "closed " + flag + " " + c.ctor + ": '" + *down +
                                            "' lies strictly below '" + c.ctor + "'"});
    } else {
      it->second.insert(c.flag);
    }
  }
  return res;
}

std::vector<Diagnostic> apply_preset(Signature& sig, ClosurePreset preset) {
  auto res = compute_closure_flags(sig, preset);
  sig.set_closure(preset, std::move(res.table));
  return res.diagnostics;
}

bool is_closed(const Signature& sig, std::string_view ctor, Variance v) {
  const auto& table = sig.closure();
  auto it = table.find(ctor);
  if (it == table.end())
    throw std::invalid_argument("unknown type constructor '" + std::string(ctor) + "'");
  return v != Variance::Irr && it->second.contains(v);
}

// --- ContextSet ---------------------------------------------------------------------

ContextSet::ContextSet(std::vector<std::string> vars) : vars_(std::move(vars)) {
  if (vars_.size() > kMaxContextVars)
    throw std::length_error("contexts over more than " + std::to_string(kMaxContextVars) +
                            " variables are not supported");
  bits_.assign((universe_size() + 63) / 64, 0);
}

ContextSet ContextSet::full(std::vector<std::string> vars) {
  ContextSet s(std::move(vars));
  for (std::size_t i = 0; i < s.universe_size(); ++i) s.set(i);
  return s;
}

ContextSet ContextSet::product(const VarianceSetMap& m) {
  ContextSet s(m.vars());
  const auto& entries = m.entries();
  for (std::size_t i = 0; i < s.universe_size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < entries.size() && ok; ++j) ok = entries[j].second.contains(s.digit(i, j));
    if (ok) s.set(i);
  }
  return s;
}

std::size_t ContextSet::index_of(const VarianceContext& g) const {
  std::size_t idx = 0;
  for (const auto& var : vars_) idx = idx * 4 + static_cast<std::size_t>(g.at(var));
  return idx;
}

VarianceContext ContextSet::context_at(std::size_t index) const {
  VarianceContext g;
  for (std::size_t j = 0; j < vars_.size(); ++j) g.add(vars_[j], digit(index, j));
  return g;
}

bool ContextSet::contains(const VarianceContext& g) const { return test(index_of(g)); }
void ContextSet::insert(const VarianceContext& g) { set(index_of(g)); }

bool ContextSet::empty() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t ContextSet::count() const {
  std::size_t n = 0;
  for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::optional<std::size_t> ContextSet::first() const {
  for (std::size_t w = 0; w < bits_.size(); ++w)
    if (bits_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(bits_[w]));
  return std::nullopt;
}

std::vector<std::size_t> ContextSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t word = bits_[w];
    while (word) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

ContextSet& ContextSet::operator|=(const ContextSet& o) {
  if (vars_ != o.vars_) throw std::invalid_argument("context sets over different variables");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}

ContextSet& ContextSet::operator&=(const ContextSet& o) {
  if (vars_ != o.vars_) throw std::invalid_argument("context sets over different variables");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}

ContextSet ContextSet::lift(const std::vector<std::string>& wider) const {
  if (wider == vars_) return *this;
  // Position in `wider` of each of our variables.
  std::vector<std::size_t> pos;
  for (const auto& v : vars_) {
    auto it = std::find(wider.begin(), wider.end(), v);
    if (it == wider.end()) throw std::invalid_argument("lift target lacks variable '" + v + "'");
    pos.push_back(static_cast<std::size_t>(it - wider.begin()));
  }
  ContextSet out(wider);
  for (std::size_t i = 0; i < out.universe_size(); ++i) {
    std::size_t mine = 0;
    for (std::size_t p : pos) mine = mine * 4 + static_cast<std::size_t>(out.digit(i, p));
    if (test(mine)) out.set(i);
  }
  return out;
}

VarianceSetMap ContextSet::projection() const {
  VarianceSetMap m(vars_, VarianceSet::none());
  std::vector<VarianceSet> acc(vars_.size());
  for (std::size_t i : members())
    for (std::size_t j = 0; j < vars_.size(); ++j) acc[j].insert(digit(i, j));
  for (std::size_t j = 0; j < vars_.size(); ++j) m.set(vars_[j], acc[j]);
  return m;
}

namespace {

struct ZipWalk {
  const ContextSet& b;
  ContextSet& out;
  std::size_t k;
  std::size_t r = 0;

  void run(std::size_t j, std::size_t ci, std::size_t si) {
    if (j == k) {
      if (b.test(si)) out.set(ci);
      return;
    }
    const std::size_t w = std::size_t{1} << (2 * (k - 1 - j));
    const auto rj = static_cast<std::size_t>(out.digit(r, j));
    const auto irr = static_cast<std::size_t>(Variance::Irr);
    const auto inv = static_cast<std::size_t>(Variance::Inv);
    if (rj == irr) {
      for (std::size_t s = 0; s < 4; ++s) run(j + 1, ci + s * w, si + s * w);
    } else if (rj == inv) {
      run(j + 1, ci + inv * w, si + irr * w);
      run(j + 1, ci + inv * w, si + inv * w);
    } else {
      run(j + 1, ci + rj * w, si + irr * w);
    }
  }
};

} // namespace

ContextSet zip_context_sets(const ContextSet& a, const ContextSet& b) {
  if (a.vars() != b.vars()) throw std::invalid_argument("zip of context sets over different variables");
  ContextSet out(a.vars());
  ZipWalk walk{b, out, a.vars().size()};
  for (std::size_t r : a.members()) {
    walk.r = r;
    walk.run(0, 0, 0);
  }
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> unzip_in(const ContextSet& a,
                                                            const ContextSet& b,
                                                            std::size_t target) {
  const std::size_t k = a.vars().size();
  const auto irr = static_cast<std::size_t>(Variance::Irr);
  const auto inv = static_cast<std::size_t>(Variance::Inv);
  std::optional<std::pair<std::size_t, std::size_t>> found;
  auto walk = [&](auto&& self, std::size_t j, std::size_t ri, std::size_t si) -> void {
    if (found) return;
    if (j == k) {
      if (a.test(ri) && b.test(si)) found = {ri, si};
      return;
    }
    const std::size_t w = std::size_t{1} << (2 * (k - 1 - j));
    const auto c = static_cast<std::size_t>(a.digit(target, j));
    if (c == irr) {
      self(self, j + 1, ri + irr * w, si + irr * w);
      return;
    }
    self(self, j + 1, ri + c * w, si + irr * w);
    self(self, j + 1, ri + irr * w, si + c * w);
    if (c == inv) self(self, j + 1, ri + inv * w, si + inv * w);
  };
  walk(walk, 0, 0, 0);
  return found;
}

// --- derivations ------------------------------------------------------------------------

std::string Derivation::render(int indent) const {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  out += "[" + rule + "] " + judgment + "\n";
  for (const auto& p : premises) out += p.render(indent + 1);
  return out;
}

std::string judgment_text(const VarianceContext& g, const TypeExpr& t, Variance v) {
  return g.str() + " |- " + t.str() + " : " + to_char(v);
}

std::string judgment_text(const VarianceContext& g, const TypeExpr& t, Variance v, Variance v2) {
  return judgment_text(g, t, v) + " => " + to_char(v2);
}

std::optional<Derivation> explain_variance(const Signature& sig, const VarianceContext& g,
                                           const TypeExpr& t, Variance v) {
  if (!check_variance(sig, g, t, v)) return std::nullopt;
  if (t.is_var()) return Derivation{"vc-Var", judgment_text(g, t, v), {}};
  Derivation d{"vc-Constr", judgment_text(g, t, v), {}};
  const auto& tc = lookup(sig, t.name);
  for (std::size_t i = 0; i < t.args.size(); ++i)
    d.premises.push_back(*explain_variance(sig, g, t.args[i], compose(v, tc.variances[i])));
  return d;
}

// --- DecompSolver -------------------------------------------------------------------------

const ContextSet& DecompSolver::valid(const TypeExpr& t, Variance v, Variance v2) {
  auto key = std::make_tuple(&t, v, v2);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  ContextSet s = compute(t, v, v2);
  return memo_.emplace(key, std::move(s)).first->second;
}

ContextSet DecompSolver::valid_over(const TypeExpr& t, Variance v, Variance v2,
                                   const std::vector<std::string>& domain) {
  return valid(t, v, v2).lift(domain);
}

ContextSet DecompSolver::compute(const TypeExpr& t, Variance v, Variance v2) {
  const auto vars = free_vars(t);
  ContextSet out(vars);
  if (var_leq(v2, v)) out |= ContextSet::product(variance_sets(sig_, t, v));
  if (t.is_var()) {
    out.insert(VarianceContext{{t.name, v}});
  } else if (auto c = constr_set(t, v, v2)) {
    out |= *c;
  }
  return out;
}

std::optional<ContextSet> DecompSolver::constr_set(const TypeExpr& t, Variance v, Variance v2) {
  if (t.is_var() || !is_closed(sig_, t.name, v)) return std::nullopt;
  const auto& tc = lookup(sig_, t.name);
  const auto vars = free_vars(t);
  ContextSet acc(vars);
  acc.set(acc.universe_size() - 1); // all-~
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    Variance w = tc.variances.at(i);
    acc = zip_context_sets(acc, valid_over(t.args[i], compose(v, w), compose(v2, w), vars));
    if (acc.empty()) break;
  }
  return acc;
}

bool DecompSolver::check(const VarianceContext& g, const TypeExpr& t, Variance v, Variance v2) {
  const auto& s = valid(t, v, v2);
  return s.contains(g);
}

std::optional<Derivation> DecompSolver::explain(const VarianceContext& g, const TypeExpr& t,
                                                Variance v, Variance v2) {
  if (!check(g, t, v, v2)) return std::nullopt;
  return derive(g, t, v, v2);
}

Derivation DecompSolver::derive(const VarianceContext& g, const TypeExpr& t, Variance v,
                                Variance v2) {
  const std::string text = judgment_text(g, t, v, v2);
  if (var_leq(v2, v) && check_variance(sig_, g, t, v))
    return {"sc-Triv", text, {*explain_variance(sig_, g, t, v)}};
  if (t.is_var()) return {"sc-Var", text, {}};

  Derivation d{"sc-Constr", text, {}};
  const auto& tc = lookup(sig_, t.name);
  const auto vars = free_vars(t);
  const std::size_t n = t.args.size();
  std::vector<ContextSet> prefix{ContextSet(vars)};
  prefix[0].set(prefix[0].universe_size() - 1);
  std::vector<ContextSet> parts;
  for (std::size_t i = 0; i < n; ++i) {
    Variance w = tc.variances[i];
    parts.push_back(valid_over(t.args[i], compose(v, w), compose(v2, w), vars));
    prefix.push_back(zip_context_sets(prefix.back(), parts.back()));
  }
  std::vector<std::size_t> local(n);
  std::size_t target = prefix[n].index_of(g);
  for (std::size_t i = n; i-- > 0;) {
    auto split = unzip_in(prefix[i], parts[i], target);
    if (!split) throw std::logic_error("decomposition witness lost for " + text);
    local[i] = split->second;
    target = split->first;
  }
  for (std::size_t i = 0; i < n; ++i) {
    VarianceContext gi;
    for (const auto& [var, val] : g) {
      auto pos = std::find(vars.begin(), vars.end(), var);
      if (pos != vars.end())
        gi.add(var, prefix[0].digit(local[i], static_cast<std::size_t>(pos - vars.begin())));
      else
        gi.add(var, i == 0 ? val : Variance::Irr);
    }
    Variance w = tc.variances[i];
    d.premises.push_back(derive(gi, t.args[i], compose(v, w), compose(v2, w)));
  }
  return d;
}

bool check_decomp(const Signature& sig, const VarianceContext& g, const TypeExpr& t, Variance v,
                  Variance v2) {
  DecompSolver solver(sig);
  return solver.check(g, t, v, v2);
}

std::optional<Derivation> explain_decomp(const Signature& sig, const VarianceContext& g,
                                         const TypeExpr& t, Variance v, Variance v2) {
  DecompSolver solver(sig);
  return solver.explain(g, t, v, v2);
}

// --- fast mode ------------------------------------------------------------------------------

namespace {

VarianceSetMap unite(const VarianceSetMap& a, const VarianceSetMap& b) {
  VarianceSetMap out = a;
  for (const auto& [var, s] : b.entries()) out.set(var, (out.contains(var) ? out.at(var) : VarianceSet()) | s);
  return out;
}

std::optional<VarianceSetMap> fast_sets(const Signature& sig, const TypeExpr& t, Variance v,
                                        Variance v2) {
  std::optional<VarianceSetMap> out;
  if (var_leq(v2, v)) out = variance_sets(sig, t, v);
  if (t.is_var()) {
    VarianceSetMap m({t.name}, VarianceSet::single(v));
    return out ? unite(*out, m) : m;
  }
  if (!is_closed(sig, t.name, v)) return out;
  const auto& tc = lookup(sig, t.name);
  const auto vars = free_vars(t);
  VarianceSetMap acc(vars, VarianceSet::single(Variance::Irr));
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    Variance w = tc.variances[i];
    auto child = fast_sets(sig, t.args[i], compose(v, w), compose(v2, w));
    if (!child) return out;
    for (const auto& var : vars) {
      VarianceSet cs = child->contains(var) ? child->at(var) : VarianceSet::full();
      acc.set(var, zip_sets(acc.at(var), cs));
    }
  }
  return out ? unite(*out, acc) : acc;
}

} // namespace

std::optional<VarianceSetMap> decomp_sets(const Signature& sig, const TypeExpr& t, Variance v,
                                          Variance v2) {
  return decomp_sets(sig, t, v, v2, free_vars(t));
}

std::optional<VarianceSetMap> decomp_sets(const Signature& sig, const TypeExpr& t, Variance v,
                                          Variance v2, const std::vector<std::string>& domain) {
  auto local = fast_sets(sig, t, v, v2);
  if (!local) return std::nullopt;
  VarianceSetMap out;
  for (const auto& var : domain)
    out.set(var, local->contains(var) ? local->at(var) : VarianceSet::full());
  for (const auto& var : local->vars())
    if (!out.contains(var)) throw std::out_of_range("variable '" + var + "' outside the domain");
  return out;
}

} // namespace vgadt
