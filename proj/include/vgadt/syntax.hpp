#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vgadt/variance.hpp"

namespace vgadt {

inline constexpr std::string_view kArrow = "->";
inline constexpr std::string_view kProduct = "*";
inline constexpr std::string_view kUnit = "unit";

/// A type expression: a variable or a constructor applied to arguments.
/// Arrow and product are ordinary binary constructors; base types are
/// nullary applications.
struct TypeExpr {
  enum class Kind { Var, App };

  Kind kind = Kind::App;
  std::string name;
  std::vector<TypeExpr> args;

  static TypeExpr var(std::string name);
  static TypeExpr app(std::string ctor, std::vector<TypeExpr> args = {});
  static TypeExpr arrow(TypeExpr dom, TypeExpr cod);
  static TypeExpr product(TypeExpr lhs, TypeExpr rhs);

  bool is_var() const { return kind == Kind::Var; }
  bool is_app() const { return kind == Kind::App; }
  bool is_ground() const;
  /// Nesting depth: a variable or nullary constructor has depth 1.
  int depth() const;

  bool operator==(const TypeExpr&) const = default;
  auto operator<=>(const TypeExpr&) const = default;

  /// Surface syntax, minimally parenthesized.
  std::string str() const;
};

/// Distinct variables of `t` in order of first occurrence.
std::vector<std::string> free_vars(const TypeExpr& t);
bool occurs(const TypeExpr& t, std::string_view var);
TypeExpr substitute(const TypeExpr& t, const std::map<std::string, TypeExpr, std::less<>>& subst);

struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct Diagnostic {
  SourceLoc loc;
  std::string message;

  /// `line:col: message`, or just the message when no location is known.
  std::string str() const;
};

enum class ConstraintRel {
  Eq,  // =
  Sup, // >= : the parameter lies above the bound
  Sub, // <= : the parameter lies below the bound
};

std::string_view to_string(ConstraintRel rel);

/// One guard `alpha_param rel bound`, where `bound` is a type over the
/// constructor's existential variables.
struct Constraint {
  std::size_t param = 0;
  ConstraintRel rel = ConstraintRel::Eq;
  TypeExpr bound;

  bool operator==(const Constraint&) const = default;
};

/// How the constructor was written; only affects printing.
enum class ConstructorForm { Adt, Constrained, Codomain };

struct DataConstructorDecl {
  std::string name;
  ConstructorForm form = ConstructorForm::Constrained;
  std::vector<std::string> existentials;
  std::vector<Constraint> constraints;
  TypeExpr arg;
  SourceLoc loc;

  const Constraint* constraint_for(std::size_t param) const;

  /// Structural equality; source locations are ignored.
  bool operator==(const DataConstructorDecl& o) const {
    return name == o.name && form == o.form && existentials == o.existentials &&
           constraints == o.constraints && arg == o.arg;
  }
};

/// `K : forall b... . arg -> (T...) t`, before conversion to the constrained
/// form.
struct CodomainConstructor {
  std::string name;
  std::vector<std::string> foralls;
  TypeExpr arg;
  TypeExpr codomain;
  SourceLoc loc;
};

struct Parameter {
  std::string var;
  Variance variance = Variance::Inv;

  bool operator==(const Parameter&) const = default;
};

struct DatatypeDecl {
  std::string name;
  std::vector<Parameter> params;
  std::vector<DataConstructorDecl> ctors;
  SourceLoc loc;

  std::optional<std::size_t> param_index(std::string_view var) const;
  std::vector<std::string> param_vars() const;
  std::vector<Variance> param_variances() const;
  /// The annotation as a context over the parameters.
  VarianceContext param_context() const;

  bool operator==(const DatatypeDecl& o) const {
    return name == o.name && params == o.params && ctors == o.ctors;
  }
};

enum class ConstructorKind { Base, Builtin, Datatype };

struct TypeConstructor {
  std::string name;
  ConstructorKind kind = ConstructorKind::Base;
  std::vector<Variance> variances;
  /// Index into Signature::datatypes() when a body is known.
  std::optional<std::size_t> body;
  /// Set for constructors introduced by a `private t = u` declaration.
  std::optional<std::string> private_of;
  SourceLoc loc;

  std::size_t arity() const { return variances.size(); }
};

struct SubbaseEdge {
  std::string lower;
  std::string upper;
  SourceLoc loc;
};

/// `lower` is a private type of `upper`: lower <= upper but not conversely.
struct PrivateEdge {
  std::string lower;
  std::string upper;
  SourceLoc loc;
};

/// An explicit `closed v t` declaration.
struct ClosedDecl {
  Variance flag = Variance::Cov;
  std::string ctor;
  SourceLoc loc;
};

enum class ClosurePreset { Atomic, MlOpen, None };

std::string_view to_string(ClosurePreset p);
std::optional<ClosurePreset> preset_from_string(std::string_view s);

/// Per-constructor closure flags, each a subset of {+,-,=}.
using ClosureTable = std::map<std::string, VarianceSet, std::less<>>;

/// The declaration table. Builder methods never validate; wf_check() reports
/// every violated invariant.
class Signature {
 public:
  /// Predeclares `*` (+,+), `->` (-,+) and the base `unit`.
  Signature();

  void add_base(std::string name, SourceLoc loc = {});
  void add_subbase(std::string lower, std::string upper, SourceLoc loc = {});
  /// Declares `lower` with `upper`'s arity and variances when it is new.
  void add_private(std::string lower, std::string upper, SourceLoc loc = {});
  void add_closed(Variance flag, std::string ctor, SourceLoc loc = {});
  /// Registers the datatype's constructor and stores its body as given.
  void add_datatype(DatatypeDecl decl);

  const TypeConstructor* find(std::string_view name) const;
  const DatatypeDecl* datatype(std::string_view name) const;

  const std::vector<TypeConstructor>& constructors() const { return constructors_; }
  const std::vector<DatatypeDecl>& datatypes() const { return datatypes_; }
  const std::vector<SubbaseEdge>& subbase_edges() const { return subbase_; }
  const std::vector<PrivateEdge>& private_edges() const { return private_; }
  const std::vector<ClosedDecl>& closed_decls() const { return closed_; }

  /// Reflexive-transitive closure of subbase and private edges: whether a
  /// type headed by `lower` may sit below one headed by `upper`.
  bool head_leq(std::string_view lower, std::string_view upper) const;
  /// Reflexive-transitive closure of the subbase edges alone.
  bool base_preorder_leq(std::string_view lower, std::string_view upper) const;
  /// `lower` below `upper` but not conversely.
  bool head_strictly_below(std::string_view lower, std::string_view upper) const;

  bool is_predeclared(std::string_view name) const;

  /// Installs closure flags computed for `preset` (see compute_closure_flags).
  void set_closure(ClosurePreset preset, ClosureTable table);
  const std::optional<ClosurePreset>& preset() const { return preset_; }
  /// Throws std::logic_error when no flags have been installed.
  const ClosureTable& closure() const;

 private:
  bool reaches(std::string_view from, std::string_view to, bool with_private) const;

  std::vector<TypeConstructor> constructors_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<DatatypeDecl> datatypes_;
  std::vector<SubbaseEdge> subbase_;
  std::vector<PrivateEdge> private_;
  std::vector<ClosedDecl> closed_;
  std::optional<ClosurePreset> preset_;
  ClosureTable closure_;
};

/// Every violated Signature/DatatypeDecl invariant, one diagnostic each.
std::vector<Diagnostic> wf_check(const Signature& sig);

/// Arity and declaredness of every constructor in `t`, plus (when
/// `bound_vars` is given) scoping of its variables.
std::vector<std::string> check_type(const Signature& sig, const TypeExpr& t,
                                    const std::vector<std::string>* bound_vars = nullptr);

/// Scoping problems that would make normalize_constructor ill-defined.
std::vector<std::string> scope_check(const DatatypeDecl& d, const DataConstructorDecl& k);
std::vector<std::string> scope_check(const DatatypeDecl& d, const CodomainConstructor& k);

/// Rewrites a constructor into fully constrained form: every parameter has
/// exactly one constraint, and neither the argument nor any bound mentions
/// a parameter. Fresh existentials are named after the parameter they
/// replace plus a counter ('a -> 'a1). Throws std::invalid_argument when
/// scope_check() reports a problem.
DataConstructorDecl normalize_constructor(const DatatypeDecl& d, const DataConstructorDecl& k);
DataConstructorDecl normalize_constructor(const DatatypeDecl& d, const CodomainConstructor& k);

/// For a normalized constructor whose constraints are `'a_i = 'b_i` over
/// distinct existentials (the shape an ADT constructor normalizes to), the
/// argument rewritten over the datatype parameters.
std::optional<TypeExpr> adt_argument(const DatatypeDecl& d, const DataConstructorDecl& k);

/// Surface text for one constructor / datatype / whole signature, in the
/// grammar accepted by parse_signature().
std::string print_constructor(const DatatypeDecl& d, const DataConstructorDecl& k);
std::string print_datatype(const DatatypeDecl& d);
std::string print_signature(const Signature& sig);

} // namespace vgadt
