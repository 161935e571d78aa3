#include "vgadt/variance.hpp"

#include <bit>
#include <stdexcept>

namespace vgadt {

namespace {

constexpr Variance E = Variance::Inv;
constexpr Variance P = Variance::Cov;
constexpr Variance M = Variance::Contra;
constexpr Variance I = Variance::Irr;

// Rows and columns in enumerator order: = + - ~
constexpr Variance kCompose[4][4] = {
    {E, E, E, I},
    {E, P, M, I},
    {E, M, P, I},
    {I, I, I, I},
};

int idx(Variance v) { return static_cast<int>(v); }

} // namespace

char to_char(Variance v) {
  switch (v) {
  case Variance::Inv: return '=';
  case Variance::Cov: return '+';
  case Variance::Contra: return '-';
  case Variance::Irr: return '~';
  }
  return '?';
}

std::optional<Variance> variance_from_char(char c) {
  switch (c) {
  case '=': return Variance::Inv;
  case '+': return Variance::Cov;
  case '-': return Variance::Contra;
  case '~': return Variance::Irr;
  default: return std::nullopt;
  }
}

Variance compose(Variance v, Variance w) { return kCompose[idx(v)][idx(w)]; }

bool var_leq(Variance v, Variance w) {
  return v == w || v == Variance::Irr || w == Variance::Inv;
}

Variance var_glb(Variance v, Variance w) {
  if (var_leq(v, w)) return v;
  if (var_leq(w, v)) return w;
  return Variance::Irr;
}

Variance var_lub(Variance v, Variance w) {
  if (var_leq(v, w)) return w;
  if (var_leq(w, v)) return v;
  return Variance::Inv;
}

std::optional<Variance> zip(Variance v, Variance w) {
  if (v == Variance::Irr) return w;
  if (w == Variance::Irr) return v;
  if (v == Variance::Inv && w == Variance::Inv) return Variance::Inv;
  return std::nullopt;
}

// --- VarianceSet -----------------------------------------------------------

VarianceSet::VarianceSet(std::initializer_list<Variance> vs) {
  for (Variance v : vs) insert(v);
}

VarianceSet VarianceSet::up(Variance v) {
  VarianceSet s;
  for (Variance w : kAllVariances)
    if (var_leq(v, w)) s.insert(w);
  return s;
}

VarianceSet VarianceSet::single(Variance v) {
  VarianceSet s;
  s.insert(v);
  return s;
}

int VarianceSet::size() const { return std::popcount(static_cast<unsigned>(bits_)); }

std::vector<Variance> VarianceSet::members() const {
  std::vector<Variance> out;
  for (Variance v : kLatticeOrder)
    if (contains(v)) out.push_back(v);
  return out;
}

std::string VarianceSet::str() const {
  std::string out = "{";
  bool first = true;
  for (Variance v : members()) {
    if (!first) out += ',';
    out += to_char(v);
    first = false;
  }
  out += '}';
  return out;
}

VarianceSet zip_sets(VarianceSet s, VarianceSet t) {
  VarianceSet out;
  for (Variance a : kAllVariances) {
    if (!s.contains(a)) continue;
    for (Variance b : kAllVariances) {
      if (!t.contains(b)) continue;
      if (auto z = zip(a, b)) out.insert(*z);
    }
  }
  return out;
}

// --- VarianceContext -------------------------------------------------------

VarianceContext::VarianceContext(std::initializer_list<Entry> entries) {
  for (const auto& [var, v] : entries) add(var, v);
}

VarianceContext::VarianceContext(std::vector<Entry> entries) {
  for (auto& [var, v] : entries) add(std::move(var), v);
}

VarianceContext VarianceContext::uniform(std::span<const std::string> vars, Variance v) {
  VarianceContext g;
  for (const auto& var : vars) g.add(var, v);
  return g;
}

void VarianceContext::add(std::string var, Variance v) {
  if (contains(var))
    throw std::invalid_argument("duplicate variable '" + var + "' in variance context");
  entries_.emplace_back(std::move(var), v);
}

void VarianceContext::set(std::string_view var, Variance v) {
  for (auto& entry : entries_) {
    if (entry.first == var) {
      entry.second = v;
      return;
    }
  }
  throw std::out_of_range("variable '" + std::string(var) + "' not in context");
}

std::optional<Variance> VarianceContext::find(std::string_view var) const {
  for (const auto& [name, v] : entries_)
    if (name == var) return v;
  return std::nullopt;
}

Variance VarianceContext::at(std::string_view var) const {
  if (auto v = find(var)) return *v;
  throw std::out_of_range("unbound type variable '" + std::string(var) + "'");
}

std::vector<std::string> VarianceContext::vars() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& entry : entries_) out.push_back(entry.first);
  return out;
}

bool VarianceContext::same_domain(const VarianceContext& other) const {
  if (size() != other.size()) return false;
  for (const auto& [var, v] : entries_)
    if (!other.contains(var)) return false;
  return true;
}

std::string VarianceContext::str() const {
  std::string out = "(";
  bool first = true;
  for (const auto& [var, v] : entries_) {
    if (!first) out += ',';
    out += to_char(v);
    out += var;
    first = false;
  }
  out += ')';
  return out;
}

namespace {

void require_same_domain(const VarianceContext& g1, const VarianceContext& g2) {
  if (!g1.same_domain(g2))
    throw std::invalid_argument("variance contexts " + g1.str() + " and " + g2.str() +
                                " have different domains");
}

} // namespace

bool ctx_leq(const VarianceContext& g1, const VarianceContext& g2) {
  require_same_domain(g1, g2);
  for (const auto& [var, v] : g1)
    if (!var_leq(v, g2.at(var))) return false;
  return true;
}

std::optional<VarianceContext> ctx_zip(const VarianceContext& g1, const VarianceContext& g2) {
  require_same_domain(g1, g2);
  VarianceContext out;
  for (const auto& [var, v] : g1) {
    auto z = zip(v, g2.at(var));
    if (!z) return std::nullopt;
    out.add(var, *z);
  }
  return out;
}

std::optional<VarianceContext> ctx_zip(std::span<const VarianceContext> family,
                                       std::span<const std::string> domain) {
  std::optional<VarianceContext> acc = VarianceContext::uniform(domain, Variance::Irr);
  for (const auto& g : family) {
    acc = ctx_zip(*acc, g);
    if (!acc) return std::nullopt;
  }
  return acc;
}

} // namespace vgadt
