#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vgadt/checker.hpp"
#include "vgadt/parser.hpp"

namespace fixtures {

vgadt::Signature signature(std::string_view text, vgadt::ClosurePreset preset) {
  auto res = vgadt::parse_signature(text);
  if (!res.ok()) {
    std::string msg = "signature does not parse:";
    for (const auto& d : res.diagnostics) msg += "\n  " + d.str();
    throw std::runtime_error(msg);
  }
  auto diags = vgadt::apply_preset(*res.signature, preset);
  if (!diags.empty()) throw std::runtime_error("closure: " + diags.front().str());
  return std::move(*res.signature);
}

std::string read_corpus(const std::string& file) {
  std::ifstream in(std::string(VGADT_CORPUS_DIR) + "/" + file);
  if (!in) throw std::runtime_error("cannot open corpus file " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

vgadt::Signature corpus(const std::string& file, vgadt::ClosurePreset preset) {
  return signature(read_corpus(file), preset);
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(VGADT_CORPUS_DIR))
    if (e.path().extension() == ".vt") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

const vgadt::DatatypeDecl& datatype(const vgadt::Signature& sig, std::string_view name) {
  const auto* d = sig.datatype(name);
  if (!d) throw std::runtime_error("no datatype " + std::string(name));
  return *d;
}

const vgadt::DataConstructorDecl& ctor(const vgadt::Signature& sig, std::string_view type,
                                       std::string_view name) {
  for (const auto& k : datatype(sig, type).ctors)
    if (k.name == name) return k;
  throw std::runtime_error("no constructor " + std::string(name));
}

const char* const kTypeWorld =
    "base int\n"
    "base bool\n"
    "subbase bool <= int\n"
    "type (='a) ref = Ref of 'a -> 'a\n"
    "type (+'a) list = Nil of unit | Cons of 'a * 'a list\n"
    "type (-'a) sink = Sink of 'a -> unit\n"
    "type (~'a) phantom = Ph of unit\n";

std::vector<vgadt::TypeExpr> type_corpus() {
  const char* texts[] = {
      "'a",
      "int",
      "'a * 'b",
      "'a -> 'b",
      "'a -> 'a",
      "'a * 'a",
      "'a ref",
      "'a list",
      "'a sink",
      "'a phantom",
      "'a * 'b ref",
      "('a -> 'b) list",
      "'a list -> 'a",
      "('a * 'b) ref",
      "'a sink sink",
      "('a -> int) -> 'b",
      "'a * int",
      "'b ref * 'b ref",
      "'a phantom * 'a",
      "('a -> 'a) -> 'b",
      "'a * ('b * 'c)",
      "'a -> 'b -> 'c",
      "('a * 'b) * 'a",
      "'a sink * 'b list",
      "int -> 'a phantom",
  };
  std::vector<vgadt::TypeExpr> out;
  for (const char* t : texts) out.push_back(vgadt::parse_type(t));
  return out;
}

} // namespace fixtures
