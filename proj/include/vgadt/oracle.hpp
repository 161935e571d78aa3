#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vgadt/syntax.hpp"
#include "vgadt/variance.hpp"

namespace vgadt {

using TypeId = std::uint32_t;

/// Hash-consed ground types over a signature, with memoized subtyping.
/// Not thread-safe; use one store per thread.
class TypeStore {
 public:
  struct Node {
    std::uint32_t ctor = 0;
    std::vector<TypeId> args;
  };

  explicit TypeStore(const Signature& sig);

  const Signature& signature() const { return sig_; }

  /// Throws std::invalid_argument for a variable or undeclared constructor.
  TypeId intern(const TypeExpr& t);
  TypeId make(std::uint32_t ctor, std::vector<TypeId> args);
  std::optional<std::uint32_t> ctor_index(std::string_view name) const;
  const std::string& ctor_name(std::uint32_t ctor) const { return names_[ctor]; }
  std::uint32_t ctor_arity(std::uint32_t ctor) const {
    return static_cast<std::uint32_t>(variances_[ctor].size());
  }

  const Node& node(TypeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  TypeExpr expr(TypeId id) const;
  std::string str(TypeId id) const { return expr(id).str(); }
  /// A nullary type has depth 1.
  int depth(TypeId id) const { return depths_[id]; }

  /// Structural subtyping: the heads are related by the declared preorder
  /// and private edges, and arguments compare under the shared variances.
  bool subtype(TypeId a, TypeId b);
  /// <= for +, >= for -, both for =, always for ~.
  bool prec(Variance v, TypeId a, TypeId b);

  /// `t` with its variables replaced, `vars[i]` by `values[i]`.
  TypeId instantiate(const TypeExpr& t, const std::vector<std::string>& vars,
                     std::span<const TypeId> values);

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& k) const;
  };

  const Signature& sig_;
  std::vector<std::string> names_;
  std::vector<std::vector<Variance>> variances_;
  std::vector<std::vector<bool>> head_leq_;
  std::vector<Node> nodes_;
  std::vector<int> depths_;
  std::unordered_map<std::vector<std::uint32_t>, TypeId, KeyHash> index_;
  std::unordered_map<std::uint64_t, bool> subtype_memo_;
};

/// Every ground type of depth <= `depth` over a constructor list.
struct GroundUniverse {
  int depth = 0;
  std::vector<std::string> ctors;
  std::vector<TypeId> types;

  std::size_t size() const { return types.size(); }
};

inline constexpr std::size_t kDefaultUniverseCap = 200000;

/// The constructors used when none are named: everything declared except
/// the predeclared `unit`.
std::vector<std::string> default_universe_ctors(const Signature& sig);

/// Size of the universe enumerate_types would build, without building it.
/// Saturates at SIZE_MAX.
std::size_t count_types(const Signature& sig, int depth, const std::vector<std::string>& ctors);

/// Deterministic order: nullary constructors first, then each constructor
/// in list order applied to argument tuples in lexicographic order. Throws
/// std::length_error beyond `cap` types, std::invalid_argument for depth < 1
/// or an unknown constructor.
GroundUniverse enumerate_types(TypeStore& store, int depth, std::vector<std::string> ctors = {},
                               std::size_t cap = kDefaultUniverseCap);

/// A bounded semantic verdict. `holds` is only claimed for the universe of
/// the recorded depth.
struct OracleVerdict {
  bool holds = true;
  int depth = 0;
  std::string counterexample;

  explicit operator bool() const { return holds; }
  std::string label() const;
};

/// For all s, s' with s <_g s': t[s] <_v t[s'].
OracleVerdict sem_variance(TypeStore& store, const GroundUniverse& u, const VarianceContext& g,
                           const TypeExpr& t, Variance v);

/// For all r and s' with t[r] <_v s', some r' in the universe has r <_g r'
/// and t[r'] <_v2 s'.
OracleVerdict sem_decomp(TypeStore& store, const GroundUniverse& u, const VarianceContext& g,
                         const TypeExpr& t, Variance v, Variance v2);

struct DecompGoal {
  TypeExpr type;
  Variance v = Variance::Cov;
  Variance v2 = Variance::Inv;
};

/// The simultaneous closure property of a family of goals under one context.
OracleVerdict sem_simultaneous_decomp(TypeStore& store, const GroundUniverse& u,
                                      const VarianceContext& g, const std::vector<DecompGoal>& goals);

/// For r1, r2, r3 with t[r1] <= t[r2] <= t[r3] and r1 <_g r3, some r2' has
/// r1 <_g r2' <_g r3 and t[r2'] equivalent to t[r2].
OracleVerdict sem_intermediate_value(TypeStore& store, const GroundUniverse& u,
                                     const VarianceContext& g, const TypeExpr& t);

/// t[r] <_v t[r'] implies r <_delta r'.
OracleVerdict sem_inversion(TypeStore& store, const GroundUniverse& u, const VarianceContext& delta,
                            const TypeExpr& t, Variance v);

/// Whether `ctor` is v-closed over the universe: t(s) <_v x forces x to be
/// equivalent to a ctor-headed type of the universe.
OracleVerdict sem_closed(TypeStore& store, const GroundUniverse& u, std::string_view ctor, Variance v);

/// The per-constructor soundness requirement on a normalized constructor:
/// t(s) <= t(s') and D(s, r) imply some r' with D(s', r') and arg[r] <= arg[r'].
OracleVerdict req_sp(TypeStore& store, const GroundUniverse& u, const DatatypeDecl& d,
                     const DataConstructorDecl& k);

struct SpReport {
  int depth = 0;
  std::vector<std::string> violations;

  bool holds() const { return violations.empty(); }
};

/// Requirement 1: types with distinct heads are unrelated, except bases
/// ordered by `subbase`. Requirement 2: arrows and products decompose.
SpReport check_sp_requirements(TypeStore& store, const GroundUniverse& u);

} // namespace vgadt
