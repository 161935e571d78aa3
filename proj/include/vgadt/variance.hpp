#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vgadt {

/// The four variances. The enumerator order is also the order in which
/// witness searches try candidates: `=` first, `~` last.
enum class Variance : std::uint8_t {
  Inv = 0,    // =
  Cov = 1,    // +
  Contra = 2, // -
  Irr = 3,    // ~ (irrelevant: the full relation)
};

inline constexpr std::array<Variance, 4> kAllVariances = {
    Variance::Inv, Variance::Cov, Variance::Contra, Variance::Irr};

/// Bottom-up lattice order, used when printing sets: ~ + - =.
inline constexpr std::array<Variance, 4> kLatticeOrder = {
    Variance::Irr, Variance::Cov, Variance::Contra, Variance::Inv};

char to_char(Variance v);
std::optional<Variance> variance_from_char(char c);

/// Composition: the variance of a `w` position nested inside a `v` position.
Variance compose(Variance v, Variance w);

/// Information order: `~` is bottom, `=` is top, `+` and `-` incomparable.
bool var_leq(Variance v, Variance w);
Variance var_glb(Variance v, Variance w);
Variance var_lub(Variance v, Variance w);

/// Partial merge of two occurrences of the same variable. Defined iff one
/// side is `~` or both are `=`.
std::optional<Variance> zip(Variance v, Variance w);

/// A subset of the four variances, stored as a bitmask.
class VarianceSet {
 public:
  constexpr VarianceSet() = default;
  VarianceSet(std::initializer_list<Variance> vs);

  static constexpr VarianceSet full() { return VarianceSet(0xF); }
  static constexpr VarianceSet none() { return VarianceSet(0); }
  /// Every variance at or above `v`.
  static VarianceSet up(Variance v);
  static VarianceSet single(Variance v);

  bool contains(Variance v) const { return (bits_ >> static_cast<int>(v)) & 1u; }
  bool empty() const { return bits_ == 0; }
  int size() const;
  void insert(Variance v) { bits_ |= static_cast<std::uint8_t>(1u << static_cast<int>(v)); }

  VarianceSet operator|(VarianceSet o) const { return VarianceSet(bits_ | o.bits_); }
  VarianceSet operator&(VarianceSet o) const { return VarianceSet(bits_ & o.bits_); }
  VarianceSet& operator|=(VarianceSet o) { bits_ |= o.bits_; return *this; }
  VarianceSet& operator&=(VarianceSet o) { bits_ &= o.bits_; return *this; }
  bool operator==(const VarianceSet&) const = default;

  std::uint8_t bits() const { return bits_; }
  /// Members in lattice order (~ + - =).
  std::vector<Variance> members() const;
  /// Renders as `{+,=}`.
  std::string str() const;

 private:
  constexpr explicit VarianceSet(unsigned bits) : bits_(static_cast<std::uint8_t>(bits)) {}
  std::uint8_t bits_ = 0;
};

/// { zip(a, b) | a in s, b in t, zip defined }
VarianceSet zip_sets(VarianceSet s, VarianceSet t);

/// An ordered assignment of variances to type variables. Iteration order is
/// insertion order, which callers keep equal to declaration order.
class VarianceContext {
 public:
  using Entry = std::pair<std::string, Variance>;

  VarianceContext() = default;
  /// Throws std::invalid_argument on a duplicate variable.
  VarianceContext(std::initializer_list<Entry> entries);
  explicit VarianceContext(std::vector<Entry> entries);

  /// Every variable of `vars` mapped to `v`.
  static VarianceContext uniform(std::span<const std::string> vars, Variance v);

  void add(std::string var, Variance v);
  void set(std::string_view var, Variance v);

  std::optional<Variance> find(std::string_view var) const;
  /// Throws std::out_of_range when `var` is unbound.
  Variance at(std::string_view var) const;
  bool contains(std::string_view var) const { return find(var).has_value(); }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<std::string> vars() const;
  bool same_domain(const VarianceContext& other) const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const VarianceContext&) const = default;

  /// Renders as `(+a,=b)`.
  std::string str() const;

 private:
  std::vector<Entry> entries_;
};

/// Pointwise order. Precondition: same domain (std::invalid_argument otherwise).
bool ctx_leq(const VarianceContext& g1, const VarianceContext& g2);

/// Pointwise zip, undefined if any entry is. Precondition: same domain.
std::optional<VarianceContext> ctx_zip(const VarianceContext& g1, const VarianceContext& g2);

/// Zip of a family over `domain`. The empty family zips to the all-`~`
/// context, the identity of zip.
std::optional<VarianceContext> ctx_zip(std::span<const VarianceContext> family,
                                       std::span<const std::string> domain);

} // namespace vgadt
