#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "vgadt/syntax.hpp"

namespace vgadt {

struct ParseResult {
  /// Set only when there are no diagnostics.
  std::optional<Signature> signature;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return signature.has_value(); }
};

/// Parses a whole declaration file, normalizes every constructor and runs
/// wf_check(). Declarations may refer to types declared later in the file.
ParseResult parse_signature(std::string_view text);

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostic d) : std::runtime_error(d.str()), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

/// A single type expression, e.g. "'a * ('b ref)". No signature lookup is
/// done; throws ParseError on malformed input.
TypeExpr parse_type(std::string_view text);

} // namespace vgadt
