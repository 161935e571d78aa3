#include "vgadt/criterion.hpp"

#include <algorithm>
#include <stdexcept>

namespace vgadt {

std::string_view to_string(Mode m) { return m == Mode::Fast ? "fast" : "exact"; }

std::optional<Mode> mode_from_string(std::string_view s) {
  if (s == "fast") return Mode::Fast;
  if (s == "exact") return Mode::Exact;
  return std::nullopt;
}

Variance target_variance(ConstraintRel rel) {
  switch (rel) {
  case ConstraintRel::Eq: return Variance::Inv;
  case ConstraintRel::Sup: return Variance::Cov;
  case ConstraintRel::Sub: return Variance::Contra;
  }
  return Variance::Inv;
}

std::string constraint_text(const DatatypeDecl& d, const Constraint& c) {
  return "'" + d.params.at(c.param).var + " " + std::string(to_string(c.rel)) + " " + c.bound.str();
}

bool SignatureReport::all_accepted() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.accepted; });
}

// --- ADT ----------------------------------------------------------------------------

Verdict check_adt_constructor(const Signature& sig, const DatatypeDecl& d, const TypeExpr& arg,
                              std::string ctor_name) {
  Verdict out;
  out.type = d.name;
  out.ctor = std::move(ctor_name);
  out.gamma = d.param_context();
  const auto need = principal_context(sig, arg, Variance::Cov, d.param_vars());
  for (const auto& [var, w] : need) {
    Variance declared = out.gamma->at(var);
    if (var_leq(w, declared)) continue;
    out.empty_vars.push_back(var);
    if (!out.reason.empty()) out.reason += "; ";
    out.reason += "'" + var + " is used at " + to_char(w) + " but declared " + to_char(declared);
  }
  out.accepted = out.empty_vars.empty();
  return out;
}

// --- GADT ---------------------------------------------------------------------------

namespace {

Variance param_variance(const DatatypeDecl& d, const Constraint& c) {
  return d.params.at(c.param).variance;
}

std::string set_pair_zips(VarianceSet a, VarianceSet b) {
  std::string out;
  for (Variance x : a.members())
    for (Variance y : b.members())
      if (!zip(x, y)) {
        if (!out.empty()) out += ", ";
        out += std::string("zip(") + to_char(x) + "," + to_char(y) + ") undefined";
      }
  return out;
}

std::string not_decomposable(const Signature& sig, const DatatypeDecl& d, const Constraint& c,
                             std::size_t i) {
  Variance v = param_variance(d, c);
  Variance tgt = target_variance(c.rel);
  std::string why = "constraint " + std::to_string(i + 1) + " (" + constraint_text(d, c) + "): " +
                    c.bound.str() + " is not decomposable at " + to_char(v) + " => " + to_char(tgt) +
                    " under any context";
  if (c.bound.is_app() && !is_closed(sig, c.bound.name, v))
    why += std::string(" ('") + c.bound.name + "' is not " + to_char(v) + "-closed)";
  return why;
}

// Per-variable explanation of an empty zip between the earlier constraints
// and constraint i.
void explain_clash(const DatatypeDecl& d, const Constraint& c, std::size_t i,
                   const VarianceSetMap& before, const VarianceSetMap& here, Verdict& out) {
  std::string detail;
  for (const auto& var : before.vars()) {
    VarianceSet a = before.at(var), b = here.at(var);
    if (!zip_sets(a, b).empty()) continue;
    out.empty_vars.push_back(var);
    if (!detail.empty()) detail += "; ";
    detail += "'" + var + " gets " + a.str() + " from the earlier constraints and " + b.str() +
              " here, " + set_pair_zips(a, b);
  }
  out.reason = "constraint " + std::to_string(i + 1) + " (" + constraint_text(d, c) + "): " +
               (detail.empty() ? "no context family decomposes the constraints simultaneously"
                               : detail);
}

void explain_argument(const VarianceSetMap& allowed, const VarianceSetMap& needed, Verdict& out) {
  std::string detail;
  for (const auto& var : needed.vars()) {
    VarianceSet a = allowed.at(var), n = needed.at(var);
    if (!(a & n).empty()) continue;
    out.empty_vars.push_back(var);
    if (!detail.empty()) detail += "; ";
    detail += "'" + var + " must be in " + n.str() + " for the argument but the constraints allow " + a.str();
  }
  out.reason = detail.empty() ? "no single context satisfies the argument and the constraints together"
                              : detail;
}

Verdict fast_gadt(const Signature& sig, const DatatypeDecl& d, const DataConstructorDecl& k,
                  Verdict out) {
  const auto& beta = k.existentials;
  const auto needed = variance_sets(sig, k.arg, Variance::Cov, beta);
  VarianceSetMap acc(beta, k.constraints.empty() ? VarianceSet::full() : VarianceSet::single(Variance::Irr));
  for (std::size_t i = 0; i < k.constraints.size(); ++i) {
    const auto& c = k.constraints[i];
    auto s = decomp_sets(sig, c.bound, param_variance(d, c), target_variance(c.rel), beta);
    if (!s) {
      out.failing_constraint = i;
      out.reason = not_decomposable(sig, d, c, i);
      return out;
    }
    VarianceSetMap next;
    for (const auto& var : beta) next.set(var, zip_sets(acc.at(var), s->at(var)));
    if (!next.empty_vars().empty()) {
      out.failing_constraint = i;
      explain_clash(d, c, i, acc, *s, out);
      return out;
    }
    acc = std::move(next);
  }
  VarianceContext gamma;
  for (const auto& var : beta) {
    VarianceSet both = acc.at(var) & needed.at(var);
    if (both.empty()) {
      explain_argument(acc, needed, out);
      return out;
    }
    for (Variance w : kAllVariances)
      if (both.contains(w)) {
        gamma.add(var, w);
        break;
      }
  }
  out.accepted = true;
  out.gamma = std::move(gamma);
  return out;
}

Verdict exact_gadt(const Signature& sig, const DatatypeDecl& d, const DataConstructorDecl& k,
                   Verdict out) {
  const auto& beta = k.existentials;
  const std::size_t n = k.constraints.size();
  DecompSolver solver(sig);

  std::vector<ContextSet> prefix{ContextSet(beta)};
  prefix[0].set(prefix[0].universe_size() - 1);
  std::vector<ContextSet> parts;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = k.constraints[i];
    parts.push_back(solver.valid_over(c.bound, param_variance(d, c), target_variance(c.rel), beta));
    if (parts.back().empty()) {
      out.failing_constraint = i;
      out.reason = not_decomposable(sig, d, c, i);
      return out;
    }
    prefix.push_back(zip_context_sets(prefix.back(), parts.back()));
    if (prefix.back().empty()) {
      out.failing_constraint = i;
      explain_clash(d, c, i, prefix[i].projection(), parts.back().projection(), out);
      return out;
    }
  }
  ContextSet combined = n == 0 ? ContextSet::full(beta) : prefix.back();
  const auto needed = variance_sets(sig, k.arg, Variance::Cov, beta);
  ContextSet ok = combined;
  ok &= ContextSet::product(needed);
  auto first = ok.first();
  if (!first) {
    explain_argument(combined.projection(), needed, out);
    return out;
  }

  VarianceContext gamma = ok.context_at(*first);
  std::vector<VarianceContext> gammas(n);
  std::size_t target = *first;
  for (std::size_t i = n; i-- > 0;) {
    auto split = unzip_in(prefix[i], parts[i], target);
    if (!split) throw std::logic_error("witness extraction failed for constructor '" + k.name + "'");
    gammas[i] = prefix[i].context_at(split->second);
    target = split->first;
  }

  // Re-verify the witnesses with the boolean judgments.
  bool verified = check_variance(sig, gamma, k.arg, Variance::Cov);
  if (n > 0) {
    auto z = ctx_zip(gammas, beta);
    verified = verified && z && *z == gamma;
  }
  for (std::size_t i = 0; i < n && verified; ++i) {
    const auto& c = k.constraints[i];
    verified = solver.check(gammas[i], c.bound, param_variance(d, c), target_variance(c.rel));
  }
  if (!verified) throw std::logic_error("witnesses for constructor '" + k.name + "' do not re-verify");

  out.accepted = true;
  out.gamma = std::move(gamma);
  out.gammas = std::move(gammas);
  return out;
}

} // namespace

Verdict check_gadt_constructor(const Signature& sig, const DatatypeDecl& d,
                               const DataConstructorDecl& k, Mode mode) {
  Verdict out;
  out.type = d.name;
  out.ctor = k.name;
  out.mode = mode;
  return mode == Mode::Fast ? fast_gadt(sig, d, k, std::move(out)) : exact_gadt(sig, d, k, std::move(out));
}

Verdict check_constructor(const Signature& sig, const DatatypeDecl& d, const DataConstructorDecl& k,
                          Mode mode) {
  if (k.form == ConstructorForm::Adt) {
    if (auto arg = adt_argument(d, k)) {
      Verdict v = check_adt_constructor(sig, d, *arg, k.name);
      v.mode = mode;
      return v;
    }
  }
  return check_gadt_constructor(sig, d, k, mode);
}

SignatureReport check_signature(const Signature& sig, Mode mode) {
  SignatureReport report;
  for (const auto& d : sig.datatypes())
    for (const auto& k : d.ctors) report.verdicts.push_back(check_constructor(sig, d, k, mode));
  return report;
}

std::string explain_verdict(const Signature& sig, const DatatypeDecl& d,
                            const DataConstructorDecl& k, const Verdict& verdict) {
  std::string out;
  const bool adt = k.form == ConstructorForm::Adt && adt_argument(d, k).has_value();
  if (adt) {
    TypeExpr arg = *adt_argument(d, k);
    if (auto der = explain_variance(sig, d.param_context(), arg, Variance::Cov)) return der->render();
    return "needed: " + principal_context(sig, arg, Variance::Cov, d.param_vars()).str() +
           "  declared: " + d.param_context().str() + "\n";
  }
  if (verdict.accepted && verdict.gamma) {
    if (auto der = explain_variance(sig, *verdict.gamma, k.arg, Variance::Cov)) out += der->render();
    DecompSolver solver(sig);
    for (std::size_t i = 0; i < verdict.gammas.size(); ++i) {
      const auto& c = k.constraints[i];
      if (auto der = solver.explain(verdict.gammas[i], c.bound, param_variance(d, c),
                                    target_variance(c.rel)))
        out += der->render();
    }
    return out;
  }
  out += "argument " + k.arg.str() + " at +: " +
         variance_sets(sig, k.arg, Variance::Cov, k.existentials).str() + "\n";
  DecompSolver solver(sig);
  for (std::size_t i = 0; i < k.constraints.size(); ++i) {
    const auto& c = k.constraints[i];
    Variance v = param_variance(d, c), tgt = target_variance(c.rel);
    auto valid = solver.valid_over(c.bound, v, tgt, k.existentials);
    out += "constraint " + std::to_string(i + 1) + " (" + constraint_text(d, c) + ") at " +
           to_char(v) + " => " + to_char(tgt) + ": ";
    out += valid.empty() ? std::string("no context") : valid.projection().str();
    out += "\n";
  }
  return out;
}

} // namespace vgadt
