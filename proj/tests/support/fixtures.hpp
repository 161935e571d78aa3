#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vgadt/syntax.hpp"

namespace fixtures {

// Parses `text`, installs the preset's closure flags, and throws
// std::runtime_error with the diagnostics on any problem.
vgadt::Signature signature(std::string_view text,
                           vgadt::ClosurePreset preset = vgadt::ClosurePreset::Atomic);

std::string read_corpus(const std::string& file);
vgadt::Signature corpus(const std::string& file,
                        vgadt::ClosurePreset preset = vgadt::ClosurePreset::Atomic);
std::vector<std::string> corpus_files();

const vgadt::DatatypeDecl& datatype(const vgadt::Signature& sig, std::string_view name);
const vgadt::DataConstructorDecl& ctor(const vgadt::Signature& sig, std::string_view type,
                                       std::string_view name);

// Two ordered bases plus one datatype per variance, for judgment sweeps.
extern const char* const kTypeWorld;
// Open types over that world with at most three variables.
std::vector<vgadt::TypeExpr> type_corpus();

} // namespace fixtures
