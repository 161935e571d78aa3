#include "vgadt/syntax.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vgadt {

// --- TypeExpr ----------------------------------------------------------------

TypeExpr TypeExpr::var(std::string name) {
  TypeExpr t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  return t;
}

TypeExpr TypeExpr::app(std::string ctor, std::vector<TypeExpr> args) {
  TypeExpr t;
  t.kind = Kind::App;
  t.name = std::move(ctor);
  t.args = std::move(args);
  return t;
}

TypeExpr TypeExpr::arrow(TypeExpr dom, TypeExpr cod) {
  return app(std::string(kArrow), {std::move(dom), std::move(cod)});
}

TypeExpr TypeExpr::product(TypeExpr lhs, TypeExpr rhs) {
  return app(std::string(kProduct), {std::move(lhs), std::move(rhs)});
}

bool TypeExpr::is_ground() const {
  if (is_var()) return false;
  return std::all_of(args.begin(), args.end(), [](const TypeExpr& a) { return a.is_ground(); });
}

int TypeExpr::depth() const {
  int d = 0;
  for (const auto& a : args) d = std::max(d, a.depth());
  return d + 1;
}

namespace {

// Precedence levels: 0 arrow, 1 product, 2 postfix application, 3 atom.
int level_of(const TypeExpr& t) {
  if (t.is_var() || t.args.empty()) return 3;
  if (t.name == kArrow && t.args.size() == 2) return 0;
  if (t.name == kProduct && t.args.size() == 2) return 1;
  return 2;
}

void print_type(std::ostream& os, const TypeExpr& t, int min_level) {
  bool parens = level_of(t) < min_level;
  if (parens) os << '(';
  if (t.is_var()) {
    os << '\'' << t.name;
  } else if (t.args.empty()) {
    os << t.name;
  } else if (t.name == kArrow && t.args.size() == 2) {
    print_type(os, t.args[0], 1);
    os << " -> ";
    print_type(os, t.args[1], 0);
  } else if (t.name == kProduct && t.args.size() == 2) {
    print_type(os, t.args[0], 2);
    os << " * ";
    print_type(os, t.args[1], 1);
  } else if (t.args.size() == 1) {
    print_type(os, t.args[0], 2);
    os << ' ' << t.name;
  } else {
    os << '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) os << ", ";
      print_type(os, t.args[i], 0);
    }
    os << ") " << t.name;
  }
  if (parens) os << ')';
}

void collect_vars(const TypeExpr& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

} // namespace

std::string TypeExpr::str() const {
  std::ostringstream os;
  print_type(os, *this, 0);
  return os.str();
}

std::vector<std::string> free_vars(const TypeExpr& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

bool occurs(const TypeExpr& t, std::string_view var) {
  if (t.is_var()) return t.name == var;
  return std::any_of(t.args.begin(), t.args.end(),
                     [&](const TypeExpr& a) { return occurs(a, var); });
}

TypeExpr substitute(const TypeExpr& t, const std::map<std::string, TypeExpr, std::less<>>& subst) {
  if (t.is_var()) {
    auto it = subst.find(t.name);
    return it == subst.end() ? t : it->second;
  }
  TypeExpr out = TypeExpr::app(t.name);
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(substitute(a, subst));
  return out;
}

// --- small enums ---------------------------------------------------------------

std::string Diagnostic::str() const {
  if (loc.line <= 0) return message;
  return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message;
}

std::string_view to_string(ConstraintRel rel) {
  switch (rel) {
  case ConstraintRel::Eq: return "=";
  case ConstraintRel::Sup: return ">=";
  case ConstraintRel::Sub: return "<=";
  }
  return "?";
}

std::string_view to_string(ClosurePreset p) {
  switch (p) {
  case ClosurePreset::Atomic: return "atomic";
  case ClosurePreset::MlOpen: return "ml-open";
  case ClosurePreset::None: return "none";
  }
  return "?";
}

std::optional<ClosurePreset> preset_from_string(std::string_view s) {
  if (s == "atomic") return ClosurePreset::Atomic;
  if (s == "ml-open") return ClosurePreset::MlOpen;
  if (s == "none") return ClosurePreset::None;
  return std::nullopt;
}

// --- declarations ------------------------------------------------------------

const Constraint* DataConstructorDecl::constraint_for(std::size_t param) const {
  for (const auto& c : constraints)
    if (c.param == param) return &c;
  return nullptr;
}

std::optional<std::size_t> DatatypeDecl::param_index(std::string_view var) const {
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].var == var) return i;
  return std::nullopt;
}

std::vector<std::string> DatatypeDecl::param_vars() const {
  std::vector<std::string> out;
  for (const auto& p : params) out.push_back(p.var);
  return out;
}

std::vector<Variance> DatatypeDecl::param_variances() const {
  std::vector<Variance> out;
  for (const auto& p : params) out.push_back(p.variance);
  return out;
}

VarianceContext DatatypeDecl::param_context() const {
  VarianceContext g;
  for (const auto& p : params) g.add(p.var, p.variance);
  return g;
}

// --- Signature -----------------------------------------------------------------

Signature::Signature() {
  constructors_.push_back({std::string(kProduct), ConstructorKind::Builtin,
                           {Variance::Cov, Variance::Cov}, std::nullopt, std::nullopt, {}});
  constructors_.push_back({std::string(kArrow), ConstructorKind::Builtin,
                           {Variance::Contra, Variance::Cov}, std::nullopt, std::nullopt, {}});
  constructors_.push_back(
      {std::string(kUnit), ConstructorKind::Base, {}, std::nullopt, std::nullopt, {}});
  for (std::size_t i = 0; i < constructors_.size(); ++i) index_.emplace(constructors_[i].name, i);
}

bool Signature::is_predeclared(std::string_view name) const {
  return name == kProduct || name == kArrow || name == kUnit;
}

void Signature::add_base(std::string name, SourceLoc loc) {
  index_.emplace(name, constructors_.size());
  constructors_.push_back({std::move(name), ConstructorKind::Base, {}, std::nullopt, std::nullopt, loc});
}

void Signature::add_subbase(std::string lower, std::string upper, SourceLoc loc) {
  subbase_.push_back({std::move(lower), std::move(upper), loc});
}

void Signature::add_private(std::string lower, std::string upper, SourceLoc loc) {
  if (!find(lower)) {
    TypeConstructor tc;
    tc.name = lower;
    tc.loc = loc;
    tc.private_of = upper;
    if (const auto* up = find(upper)) {
      tc.variances = up->variances;
      tc.kind = up->arity() == 0 ? ConstructorKind::Base : ConstructorKind::Datatype;
    }
    index_.emplace(lower, constructors_.size());
    constructors_.push_back(std::move(tc));
  } else {
    constructors_[index_.find(lower)->second].private_of = upper;
  }
  private_.push_back({std::move(lower), std::move(upper), loc});
}

void Signature::add_closed(Variance flag, std::string ctor, SourceLoc loc) {
  closed_.push_back({flag, std::move(ctor), loc});
}

void Signature::add_datatype(DatatypeDecl decl) {
  TypeConstructor tc;
  tc.name = decl.name;
  tc.kind = ConstructorKind::Datatype;
  tc.variances = decl.param_variances();
  tc.body = datatypes_.size();
  tc.loc = decl.loc;
  index_.emplace(tc.name, constructors_.size());
  constructors_.push_back(std::move(tc));
  datatypes_.push_back(std::move(decl));
}

const TypeConstructor* Signature::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &constructors_[it->second];
}

const DatatypeDecl* Signature::datatype(std::string_view name) const {
  const auto* tc = find(name);
  if (!tc || !tc->body) return nullptr;
  return &datatypes_[*tc->body];
}

bool Signature::reaches(std::string_view from, std::string_view to, bool with_private) const {
  if (from == to) return true;
  std::set<std::string, std::less<>> seen{std::string(from)};
  std::deque<std::string> work{std::string(from)};
  auto step = [&](const std::string& lo, const std::string& hi, const std::string& cur) {
    if (lo != cur || seen.count(hi)) return false;
    if (hi == to) return true;
    seen.insert(hi);
    work.push_back(hi);
    return false;
  };
  while (!work.empty()) {
    std::string cur = work.front();
    work.pop_front();
    for (const auto& e : subbase_)
      if (step(e.lower, e.upper, cur)) return true;
    if (with_private)
      for (const auto& e : private_)
        if (step(e.lower, e.upper, cur)) return true;
  }
  return false;
}

bool Signature::head_leq(std::string_view lower, std::string_view upper) const {
  return reaches(lower, upper, true);
}

bool Signature::base_preorder_leq(std::string_view lower, std::string_view upper) const {
  return reaches(lower, upper, false);
}

bool Signature::head_strictly_below(std::string_view lower, std::string_view upper) const {
  return head_leq(lower, upper) && !head_leq(upper, lower);
}

void Signature::set_closure(ClosurePreset preset, ClosureTable table) {
  preset_ = preset;
  closure_ = std::move(table);
}

const ClosureTable& Signature::closure() const {
  if (!preset_) throw std::logic_error("closure flags have not been computed for this signature");
  return closure_;
}

// --- well-formedness -------------------------------------------------------------

namespace {

void check_type_into(const Signature& sig, const TypeExpr& t,
                     const std::vector<std::string>* bound, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (bound && std::find(bound->begin(), bound->end(), t.name) == bound->end())
      out.push_back("unbound type variable '" + t.name);
    return;
  }
  const auto* tc = sig.find(t.name);
  if (!tc) {
    out.push_back("unknown type constructor '" + t.name + "'");
  } else if (tc->arity() != t.args.size()) {
    out.push_back("type constructor '" + t.name + "' expects " + std::to_string(tc->arity()) +
                  " argument(s) but is applied to " + std::to_string(t.args.size()));
  }
  for (const auto& a : t.args) check_type_into(sig, a, bound, out);
}

bool contains(const std::vector<std::string>& xs, std::string_view x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

} // namespace

std::vector<std::string> check_type(const Signature& sig, const TypeExpr& t,
                                    const std::vector<std::string>* bound_vars) {
  std::vector<std::string> out;
  check_type_into(sig, t, bound_vars, out);
  return out;
}

std::vector<Diagnostic> wf_check(const Signature& sig) {
  std::vector<Diagnostic> diags;
  auto report = [&](SourceLoc loc, std::string msg) { diags.push_back({loc, std::move(msg)}); };

  std::set<std::string, std::less<>> seen;
  for (const auto& tc : sig.constructors()) {
    if (!seen.insert(tc.name).second)
      report(tc.loc, "duplicate type constructor '" + tc.name + "'");
  }

  for (const auto& e : sig.subbase_edges()) {
    for (const auto* name : {&e.lower, &e.upper}) {
      const auto* tc = sig.find(*name);
      if (!tc)
        report(e.loc, "unknown base type '" + *name + "' in subbase declaration");
      else if (tc->kind != ConstructorKind::Base || tc->arity() != 0)
        report(e.loc, "subbase edges relate base types only, '" + *name + "' is not one");
    }
  }

  for (const auto& e : sig.private_edges()) {
    const auto* lo = sig.find(e.lower);
    const auto* hi = sig.find(e.upper);
    if (!hi) {
      report(e.loc, "unknown type constructor '" + e.upper + "' in private declaration");
      continue;
    }
    if (!lo) continue;
    if (e.lower == e.upper) {
      report(e.loc, "private type '" + e.lower + "' cannot be its own representation");
      continue;
    }
    if (lo->kind == ConstructorKind::Builtin || hi->kind == ConstructorKind::Builtin)
      report(e.loc, "built-in constructors cannot take part in private declarations");
    if (lo->body)
      report(e.loc, "private type '" + e.lower + "' already has a datatype definition");
    if (lo->arity() != hi->arity())
      report(e.loc, "private type '" + e.lower + "' has arity " + std::to_string(lo->arity()) +
                        " but '" + e.upper + "' has arity " + std::to_string(hi->arity()));
    else if (lo->variances != hi->variances)
      report(e.loc, "private type '" + e.lower + "' must have the same variances as '" +
                        e.upper + "'");
  }
  {
    std::set<std::string, std::less<>> seen;
    for (const auto& e : sig.private_edges())
      if (!seen.insert(e.lower).second)
        report(e.loc, "private type '" + e.lower + "' has more than one representation");
  }
  // Acyclicity of the private edges alone.
  for (const auto& e : sig.private_edges()) {
    std::set<std::string, std::less<>> reach{e.upper};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& f : sig.private_edges())
        if (reach.count(f.lower) && reach.insert(f.upper).second) grew = true;
    }
    if (reach.count(e.lower))
      report(e.loc, "private declarations form a cycle through '" + e.lower + "'");
  }

  for (const auto& c : sig.closed_decls()) {
    if (!sig.find(c.ctor)) report(c.loc, "unknown type constructor '" + c.ctor + "' in closed declaration");
    if (c.flag == Variance::Irr) report(c.loc, "closure flags are one of + - =");
  }

  std::set<std::string, std::less<>> ctor_names;
  for (const auto& d : sig.datatypes()) {
    std::set<std::string, std::less<>> pvars;
    for (const auto& p : d.params)
      if (!pvars.insert(p.var).second)
        report(d.loc, "duplicate parameter '" + p.var + " in type '" + d.name + "'");
    for (const auto& k : d.ctors) {
      if (!ctor_names.insert(k.name).second)
        report(k.loc, "duplicate data constructor '" + k.name + "'");
      std::set<std::string, std::less<>> evars;
      for (const auto& b : k.existentials)
        if (!evars.insert(b).second)
          report(k.loc, "duplicate existential '" + b + " in constructor '" + k.name + "'");
      std::vector<bool> constrained(d.params.size(), false);
      for (const auto& c : k.constraints) {
        if (c.param >= d.params.size()) {
          report(k.loc, "constraint in '" + k.name + "' refers to parameter #" +
                            std::to_string(c.param + 1) + " of a type with " +
                            std::to_string(d.params.size()) + " parameter(s)");
          continue;
        }
        if (constrained[c.param])
          report(k.loc, "parameter '" + d.params[c.param].var + " is constrained twice in '" +
                            k.name + "'");
        constrained[c.param] = true;
        for (auto& m : check_type(sig, c.bound, &k.existentials))
          report(k.loc, "in constraint of '" + k.name + "': " + m);
      }
      for (auto& m : check_type(sig, k.arg, &k.existentials))
        report(k.loc, "in argument of '" + k.name + "': " + m);
    }
  }
  return diags;
}

// --- normalization -----------------------------------------------------------------

namespace {

std::vector<std::string> all_vars_of(const DataConstructorDecl& k) {
  std::vector<std::string> vars = k.existentials;
  for (const auto& c : k.constraints)
    for (auto& v : free_vars(c.bound))
      if (!contains(vars, v)) vars.push_back(v);
  for (auto& v : free_vars(k.arg))
    if (!contains(vars, v)) vars.push_back(v);
  return vars;
}

class FreshNames {
 public:
  explicit FreshNames(std::vector<std::string> taken) : taken_(std::move(taken)) {}
  std::string fresh(const std::string& base) {
    for (int n = 1;; ++n) {
      std::string cand = base + std::to_string(n);
      if (!contains(taken_, cand)) {
        taken_.push_back(cand);
        return cand;
      }
    }
  }

 private:
  std::vector<std::string> taken_;
};

} // namespace

std::vector<std::string> scope_check(const DatatypeDecl& d, const DataConstructorDecl& k) {
  std::vector<std::string> out;
  const auto params = d.param_vars();
  std::vector<std::string> seen;
  for (const auto& b : k.existentials) {
    if (contains(seen, b)) out.push_back("existential '" + b + " is listed twice");
    seen.push_back(b);
    if (contains(params, b)) out.push_back("existential '" + b + " shadows a parameter of '" + d.name + "'");
  }
  std::vector<const Constraint*> by_param(params.size(), nullptr);
  for (const auto& c : k.constraints) {
    if (c.param >= params.size()) {
      out.push_back("constraint refers to a parameter that '" + d.name + "' does not have");
      continue;
    }
    if (by_param[c.param])
      out.push_back("parameter '" + params[c.param] + " is constrained more than once");
    by_param[c.param] = &c;
  }
  auto check_vars = [&](const TypeExpr& t, const char* where) {
    for (const auto& v : free_vars(t)) {
      if (contains(k.existentials, v)) continue;
      auto p = d.param_index(v);
      if (!p) {
        out.push_back("unbound type variable '" + v + " in " + where);
        continue;
      }
      const Constraint* c = by_param[*p];
      if (!c) continue;
      if (std::string_view(where) != "argument" || c->rel != ConstraintRel::Eq)
        out.push_back("parameter '" + v + " is constrained by '" + v + " " +
                      std::string(to_string(c->rel)) + " " + c->bound.str() +
                      " and cannot also appear in the " + where);
    }
  };
  for (const auto& c : k.constraints) check_vars(c.bound, "constraint bound");
  check_vars(k.arg, "argument");
  return out;
}

std::vector<std::string> scope_check(const DatatypeDecl& d, const CodomainConstructor& k) {
  std::vector<std::string> out;
  std::vector<std::string> seen;
  for (const auto& b : k.foralls) {
    if (contains(seen, b)) out.push_back("variable '" + b + " is quantified twice");
    seen.push_back(b);
  }
  if (!k.codomain.is_app() || k.codomain.name != d.name)
    out.push_back("the result type of '" + k.name + "' must be an instance of '" + d.name +
                  "', not " + k.codomain.str());
  else if (k.codomain.args.size() != d.params.size())
    out.push_back("the result type of '" + k.name + "' applies '" + d.name + "' to " +
                  std::to_string(k.codomain.args.size()) + " argument(s), expected " +
                  std::to_string(d.params.size()));
  return out;
}

DataConstructorDecl normalize_constructor(const DatatypeDecl& d, const DataConstructorDecl& k) {
  if (auto problems = scope_check(d, k); !problems.empty())
    throw std::invalid_argument("constructor '" + k.name + "': " + problems.front());

  const std::size_t n = d.params.size();
  std::vector<std::string> taken = d.param_vars();
  for (auto& v : all_vars_of(k))
    if (!contains(taken, v)) taken.push_back(v);
  FreshNames names(std::move(taken));

  std::vector<std::optional<Constraint>> by_param(n);
  for (const auto& c : k.constraints) by_param[c.param] = c;

  DataConstructorDecl out;
  out.name = k.name;
  out.form = k.form;
  out.loc = k.loc;
  out.existentials = k.existentials;

  std::map<std::string, TypeExpr, std::less<>> fresh_subst;
  for (std::size_t p = 0; p < n; ++p) {
    if (by_param[p]) continue;
    std::string b = names.fresh(d.params[p].var);
    out.existentials.push_back(b);
    by_param[p] = Constraint{p, ConstraintRel::Eq, TypeExpr::var(b)};
    fresh_subst.emplace(d.params[p].var, TypeExpr::var(b));
  }

  std::map<std::string, TypeExpr, std::less<>> arg_subst = fresh_subst;
  for (std::size_t p = 0; p < n; ++p) {
    Constraint c = *by_param[p];
    c.bound = substitute(c.bound, fresh_subst);
    if (c.rel == ConstraintRel::Eq) arg_subst.emplace(d.params[p].var, c.bound);
    out.constraints.push_back(std::move(c));
  }
  out.arg = substitute(k.arg, arg_subst);
  return out;
}

DataConstructorDecl normalize_constructor(const DatatypeDecl& d, const CodomainConstructor& k) {
  if (auto problems = scope_check(d, k); !problems.empty())
    throw std::invalid_argument("constructor '" + k.name + "': " + problems.front());

  // Every variable is local to the constructor; order: quantified first, then
  // by first occurrence in the argument and the result.
  std::vector<std::string> locals = k.foralls;
  for (const auto* t : {&k.arg, &k.codomain})
    for (auto& v : free_vars(*t))
      if (!contains(locals, v)) locals.push_back(v);

  const auto params = d.param_vars();
  std::vector<std::string> taken = params;
  for (const auto& v : locals) taken.push_back(v);
  FreshNames names(std::move(taken));
  std::map<std::string, TypeExpr, std::less<>> rename;
  DataConstructorDecl raw;
  raw.name = k.name;
  raw.form = ConstructorForm::Codomain;
  raw.loc = k.loc;
  for (const auto& v : locals) {
    if (contains(params, v)) {
      std::string fresh = names.fresh(v);
      rename.emplace(v, TypeExpr::var(fresh));
      raw.existentials.push_back(fresh);
    } else {
      raw.existentials.push_back(v);
    }
  }
  for (std::size_t i = 0; i < k.codomain.args.size(); ++i)
    raw.constraints.push_back({i, ConstraintRel::Eq, substitute(k.codomain.args[i], rename)});
  raw.arg = substitute(k.arg, rename);
  return normalize_constructor(d, raw);
}

// --- printing ------------------------------------------------------------------------

std::optional<TypeExpr> adt_argument(const DatatypeDecl& d, const DataConstructorDecl& k) {
  if (k.constraints.size() != d.params.size() || k.existentials.size() != d.params.size())
    return std::nullopt;
  std::map<std::string, TypeExpr, std::less<>> back;
  for (std::size_t p = 0; p < d.params.size(); ++p) {
    const Constraint* c = k.constraint_for(p);
    if (!c || c->rel != ConstraintRel::Eq || !c->bound.is_var()) return std::nullopt;
    if (!back.emplace(c->bound.name, TypeExpr::var(d.params[p].var)).second) return std::nullopt;
  }
  return substitute(k.arg, back);
}

namespace {

std::string tyvar(const std::string& v) { return "'" + v; }

bool codomain_printable(const DataConstructorDecl& k) {
  return std::all_of(k.constraints.begin(), k.constraints.end(),
                     [](const Constraint& c) { return c.rel == ConstraintRel::Eq; });
}

} // namespace

std::string print_constructor(const DatatypeDecl& d, const DataConstructorDecl& k) {
  std::string out = k.name;
  if (k.form == ConstructorForm::Adt) {
    if (auto arg = adt_argument(d, k)) return out + " of " + arg->str();
  }
  if (k.form == ConstructorForm::Codomain && codomain_printable(k) &&
      k.constraints.size() == d.params.size()) {
    std::vector<TypeExpr> cod_args(d.params.size());
    for (const auto& c : k.constraints) cod_args[c.param] = c.bound;
    out += " : forall";
    for (const auto& b : k.existentials) out += " " + tyvar(b);
    out += ". " + TypeExpr::arrow(k.arg, TypeExpr::app(d.name, std::move(cod_args))).str();
    return out;
  }
  out += " :";
  for (const auto& b : k.existentials) out += " " + tyvar(b);
  out += k.existentials.empty() ? "[" : " [";
  for (std::size_t i = 0; i < k.constraints.size(); ++i) {
    const auto& c = k.constraints[i];
    if (i) out += ", ";
    out += tyvar(d.params[c.param].var) + " " + std::string(to_string(c.rel)) + " " + c.bound.str();
  }
  out += "]. " + k.arg.str();
  return out;
}

std::string print_datatype(const DatatypeDecl& d) {
  std::string out = "type ";
  if (!d.params.empty()) {
    out += "(";
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      if (i) out += ", ";
      out += to_char(d.params[i].variance);
      out += tyvar(d.params[i].var);
    }
    out += ") ";
  }
  out += d.name + " =";
  for (const auto& k : d.ctors) out += "\n  | " + print_constructor(d, k);
  return out;
}

std::string print_signature(const Signature& sig) {
  std::ostringstream os;
  for (const auto& tc : sig.constructors())
    if (tc.kind == ConstructorKind::Base && !tc.private_of && !sig.is_predeclared(tc.name))
      os << "base " << tc.name << "\n";
  for (const auto& d : sig.datatypes()) os << print_datatype(d) << "\n";
  for (const auto& e : sig.private_edges()) os << "private " << e.lower << " = " << e.upper << "\n";
  for (const auto& e : sig.subbase_edges()) os << "subbase " << e.lower << " <= " << e.upper << "\n";
  for (const auto& c : sig.closed_decls()) os << "closed " << to_char(c.flag) << " " << c.ctor << "\n";
  return os.str();
}

} // namespace vgadt
