#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vgadt/checker.hpp"
#include "vgadt/syntax.hpp"

namespace vgadt {

enum class Mode { Fast, Exact };

std::string_view to_string(Mode m);
std::optional<Mode> mode_from_string(std::string_view s);

/// Printed after rejections: uninhabited constructors can be sound yet
/// rejected.
inline constexpr std::string_view kIncompletenessNote =
    "the check is not complete: a rejected constructor may still be sound if "
    "the offending instances are uninhabited";

struct Verdict {
  std::string type;
  std::string ctor;
  bool accepted = false;
  Mode mode = Mode::Exact;

  /// Context for the argument type over the existentials (the declared
  /// annotation for an ADT constructor).
  std::optional<VarianceContext> gamma;
  /// One context per constraint, zipping to `gamma`. Empty for ADT
  /// constructors and in fast mode.
  std::vector<VarianceContext> gammas;

  /// Rejections only.
  std::optional<std::size_t> failing_constraint;
  std::vector<std::string> empty_vars;
  std::string reason;
};

/// Well-signedness of `K of arg`, arg over d's parameters.
Verdict check_adt_constructor(const Signature& sig, const DatatypeDecl& d, const TypeExpr& arg,
                              std::string ctor_name = {});

/// Eq -> =, Sup -> +, Sub -> -.
Variance target_variance(ConstraintRel rel);

/// The GADT criterion on a normalized constructor: some Gamma and family
/// (Gamma_i) over the existentials with zip(Gamma_i) = Gamma, Gamma |- arg : +
/// and Gamma_i |- T_i : v_i => target(rel_i). An existential that occurs in
/// no constraint is unconstrained (this matters only for a datatype without
/// parameters). Exact mode decides the existence exactly and records
/// re-verified witnesses; fast mode uses per-variable sets.
Verdict check_gadt_constructor(const Signature& sig, const DatatypeDecl& d,
                               const DataConstructorDecl& k, Mode mode);

/// ADT-shaped constructors go through check_adt_constructor, the rest
/// through check_gadt_constructor.
Verdict check_constructor(const Signature& sig, const DatatypeDecl& d, const DataConstructorDecl& k,
                          Mode mode);

struct SignatureReport {
  std::vector<Verdict> verdicts;
  bool all_accepted() const;
};

/// One verdict per constructor in declaration order. Closure flags must be
/// installed.
SignatureReport check_signature(const Signature& sig, Mode mode);

/// Derivation trees (accepted) or the per-constraint context sets
/// (rejected) behind a verdict, for --explain.
std::string explain_verdict(const Signature& sig, const DatatypeDecl& d,
                            const DataConstructorDecl& k, const Verdict& verdict);

/// `'a = 'b * 'c`
std::string constraint_text(const DatatypeDecl& d, const Constraint& c);

} // namespace vgadt
