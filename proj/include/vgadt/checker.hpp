#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "vgadt/syntax.hpp"
#include "vgadt/variance.hpp"

namespace vgadt {

/// Per-variable subsets of the four variances, in a fixed variable order.
class VarianceSetMap {
 public:
  VarianceSetMap() = default;
  /// Every variable of `vars` mapped to `s`.
  VarianceSetMap(const std::vector<std::string>& vars, VarianceSet s);

  void set(const std::string& var, VarianceSet s);
  /// Throws std::out_of_range when `var` is missing.
  VarianceSet at(std::string_view var) const;
  bool contains(std::string_view var) const;
  std::vector<std::string> vars() const;
  const std::vector<std::pair<std::string, VarianceSet>>& entries() const { return entries_; }
  /// Variables whose set is empty.
  std::vector<std::string> empty_vars() const;
  bool admits(const VarianceContext& g) const;

  bool operator==(const VarianceSetMap&) const = default;

  /// `a: {+,=}  b: {=}`
  std::string str() const;

 private:
  std::vector<std::pair<std::string, VarianceSet>> entries_;
};

// --- variance assignment -----------------------------------------------------

/// Whether g |- t : v is derivable. Throws std::out_of_range for a variable
/// outside g and std::invalid_argument for an undeclared constructor.
bool check_variance(const Signature& sig, const VarianceContext& g, const TypeExpr& t, Variance v);

/// The least context over free_vars(t) deriving t : v.
VarianceContext principal_context(const Signature& sig, const TypeExpr& t, Variance v);
/// Same over an explicit domain; variables absent from t map to `~`.
VarianceContext principal_context(const Signature& sig, const TypeExpr& t, Variance v,
                                  const std::vector<std::string>& domain);

/// For each variable, the variances under which t : v holds (the up-set of
/// the principal context).
VarianceSetMap variance_sets(const Signature& sig, const TypeExpr& t, Variance v);
VarianceSetMap variance_sets(const Signature& sig, const TypeExpr& t, Variance v,
                             const std::vector<std::string>& domain);

// --- closure flags -------------------------------------------------------------

struct ClosureResult {
  ClosureTable table;
  /// `closed` declarations contradicted by the subtyping order.
  std::vector<Diagnostic> diagnostics;
};

ClosureResult compute_closure_flags(const Signature& sig, ClosurePreset preset);
/// Computes and installs the flags; returns the diagnostics.
std::vector<Diagnostic> apply_preset(Signature& sig, ClosurePreset preset);

/// Table lookup. Always false for `~`. Throws std::logic_error when flags are
/// not installed and std::invalid_argument for an unknown constructor.
bool is_closed(const Signature& sig, std::string_view ctor, Variance v);

// --- sets of contexts ------------------------------------------------------------

inline constexpr std::size_t kMaxContextVars = 8;

/// A set of contexts over a fixed variable list, as a bitset indexed by the
/// context read as a base-4 number (first variable most significant, digits
/// in enumerator order = + - ~). Lower indices are preferred witnesses.
class ContextSet {
 public:
  /// The empty set. Throws std::length_error beyond kMaxContextVars variables.
  explicit ContextSet(std::vector<std::string> vars = {});

  static ContextSet full(std::vector<std::string> vars);
  /// The product of per-variable sets.
  static ContextSet product(const VarianceSetMap& m);

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t universe_size() const { return std::size_t{1} << (2 * vars_.size()); }

  bool test(std::size_t index) const { return (bits_[index >> 6] >> (index & 63)) & 1u; }
  void set(std::size_t index) { bits_[index >> 6] |= std::uint64_t{1} << (index & 63); }
  bool contains(const VarianceContext& g) const;
  void insert(const VarianceContext& g);

  bool empty() const;
  std::size_t count() const;
  std::optional<std::size_t> first() const;
  std::vector<std::size_t> members() const;

  std::size_t index_of(const VarianceContext& g) const;
  VarianceContext context_at(std::size_t index) const;
  Variance digit(std::size_t index, std::size_t var_pos) const {
    return static_cast<Variance>((index >> (2 * (vars_.size() - 1 - var_pos))) & 3u);
  }

  ContextSet& operator|=(const ContextSet& o);
  ContextSet& operator&=(const ContextSet& o);

  /// The same set seen over `wider`, a superset of vars(); new variables
  /// are unconstrained.
  ContextSet lift(const std::vector<std::string>& wider) const;
  /// Per-variable projections.
  VarianceSetMap projection() const;

  bool operator==(const ContextSet& o) const { return vars_ == o.vars_ && bits_ == o.bits_; }

 private:
  std::vector<std::string> vars_;
  std::vector<std::uint64_t> bits_;
};

/// { zip(r, s) | r in a, s in b, zip defined }. Same variable list required.
ContextSet zip_context_sets(const ContextSet& a, const ContextSet& b);

/// Some pair (r, s) with r in a, s in b and zip(r, s) == target, preferring
/// to give each non-`~` entry to r.
std::optional<std::pair<std::size_t, std::size_t>> unzip_in(const ContextSet& a,
                                                            const ContextSet& b,
                                                            std::size_t target);

// --- derivations ------------------------------------------------------------------

/// A derivation tree for --explain output.
struct Derivation {
  std::string rule;
  std::string judgment;
  std::vector<Derivation> premises;

  std::string render(int indent = 0) const;
};

std::optional<Derivation> explain_variance(const Signature& sig, const VarianceContext& g,
                                           const TypeExpr& t, Variance v);

// --- decomposability -----------------------------------------------------------------

/// Exact decision procedure for g |- t : v => v2. Computes, per subterm, the
/// set of contexts over the subterm's variables from which the judgment is
/// derivable; variables absent from a subterm are unconstrained there, and a
/// closed constant decomposes under every context. Results are memoized per
/// (subterm, v, v2) for the lifetime of the solver; subterms are keyed by
/// address, so the queried types must outlive it.
class DecompSolver {
 public:
  explicit DecompSolver(const Signature& sig) : sig_(sig) {}

  /// Valid contexts over free_vars(t).
  const ContextSet& valid(const TypeExpr& t, Variance v, Variance v2);
  /// Valid contexts over `domain` (a superset of free_vars(t)).
  ContextSet valid_over(const TypeExpr& t, Variance v, Variance v2,
                        const std::vector<std::string>& domain);

  bool check(const VarianceContext& g, const TypeExpr& t, Variance v, Variance v2);
  std::optional<Derivation> explain(const VarianceContext& g, const TypeExpr& t, Variance v,
                                    Variance v2);

 private:
  ContextSet compute(const TypeExpr& t, Variance v, Variance v2);
  std::optional<ContextSet> constr_set(const TypeExpr& t, Variance v, Variance v2);
  Derivation derive(const VarianceContext& g, const TypeExpr& t, Variance v, Variance v2);

  const Signature& sig_;
  std::map<std::tuple<const TypeExpr*, Variance, Variance>, ContextSet> memo_;
};

/// Whether g |- t : v => v2 is derivable (exact).
bool check_decomp(const Signature& sig, const VarianceContext& g, const TypeExpr& t, Variance v,
                  Variance v2);
std::optional<Derivation> explain_decomp(const Signature& sig, const VarianceContext& g,
                                         const TypeExpr& t, Variance v, Variance v2);

/// Per-variable over-approximation of the valid contexts (fast mode). Every
/// context accepted by check_decomp lies in the product of these sets.
/// std::nullopt when no context can work at all. Variables of `domain`
/// absent from t get the full set.
std::optional<VarianceSetMap> decomp_sets(const Signature& sig, const TypeExpr& t, Variance v,
                                          Variance v2);
std::optional<VarianceSetMap> decomp_sets(const Signature& sig, const TypeExpr& t, Variance v,
                                          Variance v2, const std::vector<std::string>& domain);

/// `g |- t : v` and `g |- t : v => v2` in ASCII.
std::string judgment_text(const VarianceContext& g, const TypeExpr& t, Variance v);
std::string judgment_text(const VarianceContext& g, const TypeExpr& t, Variance v, Variance v2);

} // namespace vgadt
