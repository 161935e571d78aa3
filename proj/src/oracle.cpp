#include "vgadt/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace vgadt {

// --- TypeStore -----------------------------------------------------------------

std::size_t TypeStore::KeyHash::operator()(const std::vector<std::uint32_t>& k) const {
  std::size_t h = 1469598103934665603ull;
  for (auto x : k) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

TypeStore::TypeStore(const Signature& sig) : sig_(sig) {
  for (const auto& tc : sig.constructors()) {
    names_.push_back(tc.name);
    variances_.push_back(tc.variances);
  }
  head_leq_.assign(names_.size(), std::vector<bool>(names_.size(), false));
  for (std::size_t a = 0; a < names_.size(); ++a)
    for (std::size_t b = 0; b < names_.size(); ++b) head_leq_[a][b] = sig.head_leq(names_[a], names_[b]);
}

std::optional<std::uint32_t> TypeStore::ctor_index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

TypeId TypeStore::make(std::uint32_t ctor, std::vector<TypeId> args) {
  if (args.size() != variances_.at(ctor).size())
    throw std::invalid_argument("type constructor '" + names_[ctor] + "' applied to the wrong number of arguments");
  std::vector<std::uint32_t> key;
  key.reserve(args.size() + 1);
  key.push_back(ctor);
  key.insert(key.end(), args.begin(), args.end());
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  int d = 0;
  for (auto a : args) d = std::max(d, depths_[a]);
  auto id = static_cast<TypeId>(nodes_.size());
  nodes_.push_back({ctor, std::move(args)});
  depths_.push_back(d + 1);
  index_.emplace(std::move(key), id);
  return id;
}

TypeId TypeStore::intern(const TypeExpr& t) {
  if (t.is_var()) throw std::invalid_argument("type variable '" + t.name + " in a ground type");
  auto c = ctor_index(t.name);
  if (!c) throw std::invalid_argument("unknown type constructor '" + t.name + "'");
  std::vector<TypeId> args;
  for (const auto& a : t.args) args.push_back(intern(a));
  return make(*c, std::move(args));
}

TypeExpr TypeStore::expr(TypeId id) const {
  const Node& n = nodes_[id];
  TypeExpr t = TypeExpr::app(names_[n.ctor]);
  for (auto a : n.args) t.args.push_back(expr(a));
  return t;
}

bool TypeStore::subtype(TypeId a, TypeId b) {
  if (a == b) return true;
  const std::uint64_t key = (std::uint64_t{a} << 32) | b;
  auto it = subtype_memo_.find(key);
  if (it != subtype_memo_.end()) return it->second;
  const Node& na = nodes_[a];
  const Node& nb = nodes_[b];
  bool result = head_leq_[na.ctor][nb.ctor] && na.args.size() == nb.args.size();
  for (std::size_t i = 0; result && i < na.args.size(); ++i)
    result = prec(variances_[na.ctor][i], nodes_[a].args[i], nodes_[b].args[i]);
  subtype_memo_[key] = result;
  return result;
}

bool TypeStore::prec(Variance v, TypeId a, TypeId b) {
  switch (v) {
  case Variance::Cov: return subtype(a, b);
  case Variance::Contra: return subtype(b, a);
  case Variance::Inv: return subtype(a, b) && subtype(b, a);
  case Variance::Irr: return true;
  }
  return false;
}

namespace {

// A type with variables resolved to positions, for fast instantiation.
struct Pattern {
  int var = -1;
  std::uint32_t ctor = 0;
  std::vector<Pattern> args;
};

Pattern compile(const TypeStore& store, const TypeExpr& t, const std::vector<std::string>& vars) {
  Pattern p;
  if (t.is_var()) {
    auto it = std::find(vars.begin(), vars.end(), t.name);
    if (it == vars.end()) throw std::invalid_argument("unbound type variable '" + t.name);
    p.var = static_cast<int>(it - vars.begin());
    return p;
  }
  auto c = store.ctor_index(t.name);
  if (!c) throw std::invalid_argument("unknown type constructor '" + t.name + "'");
  p.ctor = *c;
  for (const auto& a : t.args) p.args.push_back(compile(store, a, vars));
  return p;
}

TypeId inst(TypeStore& store, const Pattern& p, std::span<const TypeId> values) {
  if (p.var >= 0) return values[static_cast<std::size_t>(p.var)];
  std::vector<TypeId> args;
  args.reserve(p.args.size());
  for (const auto& a : p.args) args.push_back(inst(store, a, values));
  return store.make(p.ctor, std::move(args));
}

bool advance(std::vector<std::size_t>& idx, const std::vector<std::size_t>& radix) {
  for (std::size_t j = idx.size(); j-- > 0;) {
    if (++idx[j] < radix[j]) return true;
    idx[j] = 0;
  }
  return false;
}

bool nonempty(const std::vector<std::size_t>& radix) {
  return std::all_of(radix.begin(), radix.end(), [](std::size_t r) { return r > 0; });
}

std::string tuple_text(const TypeStore& store, const std::vector<std::string>& vars,
                       const std::vector<TypeId>& vals) {
  std::string out = "(";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (j) out += ", ";
    out += "'" + vars[j] + " := " + store.str(vals[j]);
  }
  return out + ")";
}

std::size_t saturating_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base)
      return std::numeric_limits<std::size_t>::max();
    r *= base;
  }
  return r;
}

// All instances of a pattern over U^k, indexed by the tuple read in base |U|.
class InstanceTable {
 public:
  InstanceTable(TypeStore& store, const GroundUniverse& u, const Pattern& p, std::size_t k)
      : store_(store), u_(u), p_(p), k_(k) {}

  TypeId at(const std::vector<std::size_t>& idx) {
    std::size_t key = 0;
    for (auto i : idx) key = key * u_.size() + i;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<TypeId> vals(k_);
    for (std::size_t j = 0; j < k_; ++j) vals[j] = u_.types[idx[j]];
    TypeId id = inst(store_, p_, vals);
    cache_.emplace(key, id);
    return id;
  }

 private:
  TypeStore& store_;
  const GroundUniverse& u_;
  const Pattern& p_;
  std::size_t k_;
  std::unordered_map<std::size_t, TypeId> cache_;
};

// Positions in the universe, for mapping subterms back to indices.
std::unordered_map<TypeId, std::size_t> positions(const GroundUniverse& u) {
  std::unordered_map<TypeId, std::size_t> pos;
  for (std::size_t i = 0; i < u.types.size(); ++i) pos.emplace(u.types[i], i);
  return pos;
}

// Subterms of `target` sitting where the pattern has variable j.
void match(const TypeStore& store, const Pattern& p, TypeId target,
           std::vector<std::vector<TypeId>>& found) {
  if (p.var >= 0) {
    auto& f = found[static_cast<std::size_t>(p.var)];
    if (std::find(f.begin(), f.end(), target) == f.end()) f.push_back(target);
    return;
  }
  const auto& n = store.node(target);
  if (n.ctor != p.ctor) return;
  for (std::size_t i = 0; i < p.args.size(); ++i) match(store, p.args[i], n.args[i], found);
}

// For each universe element r and variance w, the universe elements r'
// with r <_w r'.
class RelatedLists {
 public:
  RelatedLists(TypeStore& store, const GroundUniverse& u) : store_(store), u_(u) {}

  const std::vector<std::size_t>& get(Variance w, std::size_t r) {
    auto key = std::make_pair(static_cast<int>(w), r);
    auto it = lists_.find(key);
    if (it != lists_.end()) return it->second;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < u_.size(); ++i)
      if (store_.prec(w, u_.types[r], u_.types[i])) out.push_back(i);
    return lists_.emplace(key, std::move(out)).first->second;
  }

 private:
  TypeStore& store_;
  const GroundUniverse& u_;
  std::map<std::pair<int, std::size_t>, std::vector<std::size_t>> lists_;
};

// Candidate witnesses for variable j: matched subterms first, then r_j
// itself, then the rest of the related list.
std::vector<std::size_t> ordered_candidates(const std::vector<std::size_t>& related,
                                            const std::vector<TypeId>& matched, std::size_t self,
                                            const std::unordered_map<TypeId, std::size_t>& pos) {
  std::vector<std::size_t> out;
  auto push = [&](std::size_t i) {
    if (std::binary_search(related.begin(), related.end(), i) &&
        std::find(out.begin(), out.end(), i) == out.end())
      out.push_back(i);
  };
  for (TypeId m : matched) {
    auto it = pos.find(m);
    if (it != pos.end()) push(it->second);
  }
  push(self);
  for (std::size_t i : related)
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  return out;
}

std::vector<std::string> vars_in_domain(const VarianceContext& g, const std::vector<std::string>& used) {
  for (const auto& v : used)
    if (!g.contains(v)) throw std::out_of_range("unbound type variable '" + v + "'");
  std::vector<std::string> out;
  for (const auto& [v, w] : g)
    if (std::find(used.begin(), used.end(), v) != used.end()) out.push_back(v);
  return out;
}

OracleVerdict fail(int depth, std::string why) { return {false, depth, std::move(why)}; }

} // namespace

TypeId TypeStore::instantiate(const TypeExpr& t, const std::vector<std::string>& vars,
                              std::span<const TypeId> values) {
  return inst(*this, compile(*this, t, vars), values);
}

// --- universes ------------------------------------------------------------------

std::string OracleVerdict::label() const {
  return std::string(holds ? "holds" : "fails") + " at depth " + std::to_string(depth);
}

std::vector<std::string> default_universe_ctors(const Signature& sig) {
  std::vector<std::string> out;
  for (const auto& tc : sig.constructors())
    if (tc.name != kUnit) out.push_back(tc.name);
  return out;
}

std::size_t count_types(const Signature& sig, int depth, const std::vector<std::string>& ctors) {
  std::size_t nullary = 0;
  std::vector<std::size_t> arities;
  for (const auto& c : ctors) {
    const auto* tc = sig.find(c);
    if (!tc) throw std::invalid_argument("unknown type constructor '" + c + "'");
    if (tc->arity() == 0)
      ++nullary;
    else
      arities.push_back(tc->arity());
  }
  const std::size_t max = std::numeric_limits<std::size_t>::max();
  std::size_t level = nullary;
  for (int d = 2; d <= depth; ++d) {
    std::size_t next = nullary;
    for (auto r : arities) {
      std::size_t add = saturating_pow(level, r);
      next = (add > max - next) ? max : next + add;
    }
    level = next;
  }
  return level;
}

GroundUniverse enumerate_types(TypeStore& store, int depth, std::vector<std::string> ctors,
                               std::size_t cap) {
  if (depth < 1) throw std::invalid_argument("universe depth must be at least 1");
  if (ctors.empty()) ctors = default_universe_ctors(store.signature());
  std::size_t n = count_types(store.signature(), depth, ctors);
  if (n > cap)
    throw std::length_error("universe of depth " + std::to_string(depth) + " would hold " +
                            (n == std::numeric_limits<std::size_t>::max() ? std::string("too many")
                                                                          : std::to_string(n)) +
                            " types, above the cap of " + std::to_string(cap));
  std::vector<std::uint32_t> ids;
  for (const auto& c : ctors) ids.push_back(*store.ctor_index(c));

  std::vector<TypeId> nullary;
  for (auto c : ids)
    if (store.ctor_arity(c) == 0) nullary.push_back(store.make(c, {}));
  std::vector<TypeId> level = nullary;
  for (int d = 2; d <= depth; ++d) {
    std::vector<TypeId> next = nullary;
    for (auto c : ids) {
      std::size_t r = store.ctor_arity(c);
      if (r == 0) continue;
      std::vector<std::size_t> idx(r, 0), radix(r, level.size());
      for (bool more = nonempty(radix); more; more = advance(idx, radix)) {
        std::vector<TypeId> args;
        for (auto i : idx) args.push_back(level[i]);
        next.push_back(store.make(c, std::move(args)));
      }
    }
    level = std::move(next);
  }
  return {depth, std::move(ctors), std::move(level)};
}

// --- semantic judgments ---------------------------------------------------------------

OracleVerdict sem_variance(TypeStore& store, const GroundUniverse& u, const VarianceContext& g,
                           const TypeExpr& t, Variance v) {
  const auto vars = vars_in_domain(g, free_vars(t));
  const Pattern p = compile(store, t, vars);
  const std::size_t k = vars.size();
  InstanceTable table(store, u, p, k);

  // Related pairs per variable.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs(k);
  for (std::size_t j = 0; j < k; ++j) {
    Variance w = g.at(vars[j]);
    for (std::size_t a = 0; a < u.size(); ++a)
      for (std::size_t b = 0; b < u.size(); ++b)
        if (store.prec(w, u.types[a], u.types[b])) pairs[j].emplace_back(a, b);
  }
  std::vector<std::size_t> idx(k, 0), radix(k);
  for (std::size_t j = 0; j < k; ++j) radix[j] = pairs[j].size();
  std::vector<std::size_t> lhs(k), rhs(k);
  for (bool more = nonempty(radix); more; more = advance(idx, radix)) {
    for (std::size_t j = 0; j < k; ++j) std::tie(lhs[j], rhs[j]) = pairs[j][idx[j]];
    TypeId a = table.at(lhs), b = table.at(rhs);
    if (!store.prec(v, a, b)) {
      std::vector<TypeId> lv(k), rv(k);
      for (std::size_t j = 0; j < k; ++j) lv[j] = u.types[lhs[j]], rv[j] = u.types[rhs[j]];
      return fail(u.depth, "s = " + tuple_text(store, vars, lv) + ", s' = " + tuple_text(store, vars, rv) +
                               ": " + store.str(a) + " and " + store.str(b) + " are not related by " +
                               to_char(v));
    }
  }
  return {true, u.depth, {}};
}

namespace {

// Shared witness search: some r' with r <_g r' (per variable) and, for each
// goal i, pattern_i[r'] <_{v2_i} target_i.
bool find_witness(TypeStore& store, RelatedLists& related,
                  const std::unordered_map<TypeId, std::size_t>& pos, const std::vector<Variance>& ws,
                  const std::vector<Pattern>& pats, std::vector<InstanceTable>& tables,
                  const std::vector<Variance>& v2s, const std::vector<TypeId>& targets,
                  const std::vector<std::size_t>& r) {
  const std::size_t k = r.size();
  std::vector<std::vector<TypeId>> matched(k);
  for (std::size_t i = 0; i < pats.size(); ++i) match(store, pats[i], targets[i], matched);
  std::vector<std::vector<std::size_t>> cands(k);
  for (std::size_t j = 0; j < k; ++j)
    cands[j] = ordered_candidates(related.get(ws[j], r[j]), matched[j], r[j], pos);
  std::vector<std::size_t> idx(k, 0), radix(k), pick(k);
  for (std::size_t j = 0; j < k; ++j) radix[j] = cands[j].size();
  for (bool more = nonempty(radix); more; more = advance(idx, radix)) {
    for (std::size_t j = 0; j < k; ++j) pick[j] = cands[j][idx[j]];
    bool ok = true;
    for (std::size_t i = 0; i < pats.size() && ok; ++i)
      ok = store.prec(v2s[i], tables[i].at(pick), targets[i]);
    if (ok) return true;
  }
  return false;
}

} // namespace

OracleVerdict sem_decomp(TypeStore& store, const GroundUniverse& u, const VarianceContext& g,
                         const TypeExpr& t, Variance v, Variance v2) {
  return sem_simultaneous_decomp(store, u, g, {{t, v, v2}});
}

OracleVerdict sem_simultaneous_decomp(TypeStore& store, const GroundUniverse& u,
                                      const VarianceContext& g, const std::vector<DecompGoal>& goals) {
  std::vector<std::string> used;
  for (const auto& goal : goals)
    for (auto& var : free_vars(goal.type))
      if (std::find(used.begin(), used.end(), var) == used.end()) used.push_back(var);
  const auto vars = vars_in_domain(g, used);
  const std::size_t k = vars.size(), n = goals.size();

  std::vector<Pattern> pats;
  for (const auto& goal : goals) pats.push_back(compile(store, goal.type, vars));
  std::vector<InstanceTable> tables;
  for (const auto& p : pats) tables.emplace_back(store, u, p, k);
  std::vector<Variance> ws, v2s;
  for (const auto& var : vars) ws.push_back(g.at(var));
  for (const auto& goal : goals) v2s.push_back(goal.v2);
  RelatedLists related(store, u);
  const auto pos = positions(u);

  std::vector<std::size_t> r(k, 0), rradix(k, u.size());
  std::vector<TypeId> inst_r(n);
  for (bool more = nonempty(rradix); more; more = advance(r, rradix)) {
    // Targets s'_i with goal_i[r] <_{v_i} s'_i.
    std::vector<std::vector<TypeId>> targets(n);
    for (std::size_t i = 0; i < n; ++i) {
      inst_r[i] = tables[i].at(r);
      for (TypeId s : u.types)
        if (store.prec(goals[i].v, inst_r[i], s)) targets[i].push_back(s);
    }
    std::vector<std::size_t> sidx(n, 0), sradix(n);
    for (std::size_t i = 0; i < n; ++i) sradix[i] = targets[i].size();
    std::vector<TypeId> chosen(n);
    for (bool smore = nonempty(sradix); smore; smore = advance(sidx, sradix)) {
      for (std::size_t i = 0; i < n; ++i) chosen[i] = targets[i][sidx[i]];
      if (find_witness(store, related, pos, ws, pats, tables, v2s, chosen, r)) continue;
      std::vector<TypeId> rv(k);
      for (std::size_t j = 0; j < k; ++j) rv[j] = u.types[r[j]];
      std::string why = "r = " + tuple_text(store, vars, rv) + ":";
      for (std::size_t i = 0; i < n; ++i)
        why += " " + store.str(inst_r[i]) + " " + to_char(goals[i].v) + "-below " + store.str(chosen[i]);
      why += ", no witness r'";
      return fail(u.depth, why);
    }
  }
  return {true, u.depth, {}};
}

OracleVerdict sem_intermediate_value(TypeStore& store, const GroundUniverse& u,
                                     const VarianceContext& g, const TypeExpr& t) {
  const auto vars = vars_in_domain(g, free_vars(t));
  const std::size_t k = vars.size();
  const Pattern p = compile(store, t, vars);
  InstanceTable table(store, u, p, k);
  RelatedLists related(store, u);
  std::vector<Variance> ws;
  for (const auto& var : vars) ws.push_back(g.at(var));

  std::vector<std::size_t> r1(k, 0), radix(k, u.size());
  for (bool m1 = nonempty(radix); m1; m1 = advance(r1, radix)) {
    const TypeId t1 = table.at(r1);
    // r3 ranges over the tuples with r1 <_g r3.
    std::vector<std::vector<std::size_t>> up(k);
    for (std::size_t j = 0; j < k; ++j) up[j] = related.get(ws[j], r1[j]);
    std::vector<std::size_t> i3(k, 0), radix3(k), r3(k);
    for (std::size_t j = 0; j < k; ++j) radix3[j] = up[j].size();
    for (bool m3 = nonempty(radix3); m3; m3 = advance(i3, radix3)) {
      for (std::size_t j = 0; j < k; ++j) r3[j] = up[j][i3[j]];
      const TypeId t3 = table.at(r3);
      if (!store.subtype(t1, t3)) continue;
      std::vector<std::size_t> r2(k, 0);
      for (bool m2 = nonempty(radix); m2; m2 = advance(r2, radix)) {
        const TypeId t2 = table.at(r2);
        if (!store.subtype(t1, t2) || !store.subtype(t2, t3)) continue;
        // Witness r2' between r1 and r3 with the same image.
        std::vector<std::vector<std::size_t>> between(k);
        for (std::size_t j = 0; j < k; ++j)
          for (std::size_t c : up[j])
            if (store.prec(ws[j], u.types[c], u.types[r3[j]])) between[j].push_back(c);
        std::vector<std::size_t> iw(k, 0), wr(k), pick(k);
        for (std::size_t j = 0; j < k; ++j) wr[j] = between[j].size();
        bool found = false;
        for (bool mw = nonempty(wr); mw && !found; mw = advance(iw, wr)) {
          for (std::size_t j = 0; j < k; ++j) pick[j] = between[j][iw[j]];
          found = store.prec(Variance::Inv, table.at(pick), t2);
        }
        if (!found)
          return fail(u.depth, store.str(t1) + " <= " + store.str(t2) + " <= " + store.str(t3) +
                                   " has no intermediate witness");
      }
    }
  }
  return {true, u.depth, {}};
}

OracleVerdict sem_inversion(TypeStore& store, const GroundUniverse& u, const VarianceContext& delta,
                            const TypeExpr& t, Variance v) {
  const auto vars = vars_in_domain(delta, free_vars(t));
  const std::size_t k = vars.size();
  const Pattern p = compile(store, t, vars);
  InstanceTable table(store, u, p, k);
  std::vector<std::size_t> a(k, 0), radix(k, u.size());
  for (bool ma = nonempty(radix); ma; ma = advance(a, radix)) {
    std::vector<std::size_t> b(k, 0);
    for (bool mb = nonempty(radix); mb; mb = advance(b, radix)) {
      if (!store.prec(v, table.at(a), table.at(b))) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (store.prec(delta.at(vars[j]), u.types[a[j]], u.types[b[j]])) continue;
        return fail(u.depth, store.str(table.at(a)) + " " + to_char(v) + "-below " + store.str(table.at(b)) +
                                 " but '" + vars[j] + " := " + store.str(u.types[a[j]]) + " vs " +
                                 store.str(u.types[b[j]]) + " is not " + to_char(delta.at(vars[j])));
      }
    }
  }
  return {true, u.depth, {}};
}

OracleVerdict sem_closed(TypeStore& store, const GroundUniverse& u, std::string_view ctor, Variance v) {
  auto c = store.ctor_index(ctor);
  if (!c) throw std::invalid_argument("unknown type constructor '" + std::string(ctor) + "'");
  std::vector<TypeId> headed;
  for (TypeId x : u.types)
    if (store.node(x).ctor == *c) headed.push_back(x);
  for (TypeId a : headed)
    for (TypeId b : u.types) {
      if (!store.prec(v, a, b) || store.node(b).ctor == *c) continue;
      bool equivalent = std::any_of(headed.begin(), headed.end(),
                                    [&](TypeId h) { return store.prec(Variance::Inv, b, h); });
      if (!equivalent)
        return fail(u.depth, store.str(a) + " " + to_char(v) + "-below " + store.str(b));
    }
  return {true, u.depth, {}};
}

OracleVerdict req_sp(TypeStore& store, const GroundUniverse& u, const DatatypeDecl& d,
                     const DataConstructorDecl& k) {
  const auto& beta = k.existentials;
  const std::size_t m = beta.size(), n = d.params.size();
  const Pattern arg = compile(store, k.arg, beta);
  std::vector<const Constraint*> cons(n, nullptr);
  std::vector<Pattern> bounds(n);
  for (const auto& c : k.constraints) {
    cons.at(c.param) = &c;
    bounds[c.param] = compile(store, c.bound, beta);
  }
  auto holds = [&](std::size_t p, TypeId sigma, TypeId bound) {
    switch (cons[p]->rel) {
    case ConstraintRel::Eq: return store.prec(Variance::Inv, sigma, bound);
    case ConstraintRel::Sup: return store.subtype(bound, sigma);
    case ConstraintRel::Sub: return store.subtype(sigma, bound);
    }
    return false;
  };

  // Instances for every r in U^m.
  std::vector<std::size_t> radix_m(m, u.size());
  std::vector<TypeId> arg_at;
  std::vector<std::vector<TypeId>> bound_at;
  {
    std::vector<std::size_t> r(m, 0);
    std::vector<TypeId> vals(m);
    for (bool more = nonempty(radix_m); more; more = advance(r, radix_m)) {
      for (std::size_t j = 0; j < m; ++j) vals[j] = u.types[r[j]];
      arg_at.push_back(inst(store, arg, vals));
      std::vector<TypeId> bs(n, 0);
      for (std::size_t p = 0; p < n; ++p)
        if (cons[p]) bs[p] = inst(store, bounds[p], vals);
      bound_at.push_back(std::move(bs));
    }
  }
  const std::size_t nr = arg_at.size();
  auto satisfies = [&](const std::vector<TypeId>& sigma, std::size_t ri) {
    for (std::size_t p = 0; p < n; ++p)
      if (cons[p] && !holds(p, sigma[p], bound_at[ri][p])) return false;
    return true;
  };

  std::map<std::pair<std::vector<TypeId>, TypeId>, bool> memo;
  auto witness = [&](const std::vector<TypeId>& sigma2, TypeId a) {
    auto key = std::make_pair(sigma2, a);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool found = false;
    for (std::size_t ri = 0; ri < nr && !found; ++ri)
      found = satisfies(sigma2, ri) && store.subtype(a, arg_at[ri]);
    memo.emplace(std::move(key), found);
    return found;
  };

  auto rho_text = [&](std::size_t ri) {
    std::vector<TypeId> vals(m);
    for (std::size_t j = m; j-- > 0;) {
      vals[j] = u.types[ri % u.size()];
      ri /= u.size();
    }
    return tuple_text(store, beta, vals);
  };
  auto inst_text = [&](const std::vector<TypeId>& s) {
    TypeExpr t = TypeExpr::app(d.name);
    for (auto x : s) t.args.push_back(store.expr(x));
    return t.str();
  };

  for (std::size_t ri = 0; ri < nr; ++ri) {
    // s with D(s, r).
    std::vector<std::vector<TypeId>> sig_choices(n);
    for (std::size_t p = 0; p < n; ++p)
      for (TypeId s : u.types)
        if (!cons[p] || holds(p, s, bound_at[ri][p])) sig_choices[p].push_back(s);
    std::vector<std::size_t> si(n, 0), sr(n);
    for (std::size_t p = 0; p < n; ++p) sr[p] = sig_choices[p].size();
    std::vector<TypeId> sigma(n), sigma2(n);
    for (bool ms = nonempty(sr); ms; ms = advance(si, sr)) {
      for (std::size_t p = 0; p < n; ++p) sigma[p] = sig_choices[p][si[p]];
      // s' with t(s) <= t(s').
      std::vector<std::vector<TypeId>> up(n);
      for (std::size_t p = 0; p < n; ++p)
        for (TypeId s : u.types)
          if (store.prec(d.params[p].variance, sigma[p], s)) up[p].push_back(s);
      std::vector<std::size_t> ui(n, 0), ur(n);
      for (std::size_t p = 0; p < n; ++p) ur[p] = up[p].size();
      for (bool mu = nonempty(ur); mu; mu = advance(ui, ur)) {
        for (std::size_t p = 0; p < n; ++p) sigma2[p] = up[p][ui[p]];
        if (witness(sigma2, arg_at[ri])) continue;
        return fail(u.depth, inst_text(sigma) + " <= " + inst_text(sigma2) + " with r = " + rho_text(ri) +
                                 ": no r' satisfies the constraints at " + inst_text(sigma2) +
                                 " with " + store.str(arg_at[ri]) + " <= arg[r']");
      }
    }
  }
  return {true, u.depth, {}};
}

SpReport check_sp_requirements(TypeStore& store, const GroundUniverse& u) {
  SpReport report;
  report.depth = u.depth;
  const Signature& sig = store.signature();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> reported;
  const auto arrow = store.ctor_index(kArrow);
  const auto product = store.ctor_index(kProduct);
  for (TypeId a : u.types)
    for (TypeId b : u.types) {
      if (!store.subtype(a, b)) continue;
      const auto& na = store.node(a);
      const auto& nb = store.node(b);
      if (na.ctor != nb.ctor) {
        const auto& ha = store.ctor_name(na.ctor);
        const auto& hb = store.ctor_name(nb.ctor);
        bool bases = na.args.empty() && nb.args.empty() && sig.base_preorder_leq(ha, hb);
        auto key = std::make_pair(na.ctor, nb.ctor);
        if (!bases && std::find(reported.begin(), reported.end(), key) == reported.end()) {
          reported.push_back(key);
          report.violations.push_back("requirement 1: " + store.str(a) + " <= " + store.str(b) +
                                      " relates distinct heads '" + ha + "' and '" + hb + "'");
        }
        continue;
      }
      if (arrow && na.ctor == *arrow) {
        if (!store.subtype(nb.args[0], na.args[0]) || !store.subtype(na.args[1], nb.args[1]))
          report.violations.push_back("requirement 2: " + store.str(a) + " <= " + store.str(b) +
                                      " does not decompose");
      } else if (product && na.ctor == *product) {
        if (!store.subtype(na.args[0], nb.args[0]) || !store.subtype(na.args[1], nb.args[1]))
          report.violations.push_back("requirement 2: " + store.str(a) + " <= " + store.str(b) +
                                      " does not decompose");
      }
    }
  return report;
}

} // namespace vgadt
