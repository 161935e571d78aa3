#include "doctest.h"

#include <algorithm>

#include "fixtures.hpp"
#include "vgadt/parser.hpp"
#include "vgadt/syntax.hpp"

using namespace vgadt;

namespace {

std::vector<Diagnostic> diagnostics_of(std::string_view text) {
  return parse_signature(text).diagnostics;
}

bool mentions(const std::vector<Diagnostic>& ds, std::string_view needle) {
  return std::any_of(ds.begin(), ds.end(),
                     [&](const Diagnostic& d) { return d.message.find(needle) != std::string::npos; });
}

TypeExpr V(const char* n) { return TypeExpr::var(n); }

} // namespace

TEST_CASE("type printing and parsing") {
  const char* cases[] = {
      "'a",
      "int",
      "'a * 'b ref",
      "'a -> 'b -> 'c",
      "('a -> 'b) -> 'c",
      "('a * 'b) * 'c",
      "'a * 'b * 'c",
      "'a list list",
      "('a, 'b) eq",
      "('a -> 'a) list",
      "'b expr * ('b -> 'a) -> 'a expr",
  };
  for (const char* c : cases) {
    CAPTURE(c);
    CHECK(parse_type(c).str() == c);
  }
  CHECK(parse_type("'a -> 'b -> 'c") == TypeExpr::arrow(V("a"), TypeExpr::arrow(V("b"), V("c"))));
  CHECK(parse_type("'a * 'b -> 'c") ==
        TypeExpr::arrow(TypeExpr::product(V("a"), V("b")), V("c")));
  CHECK(parse_type("'a * 'b ref") == TypeExpr::product(V("a"), TypeExpr::app("ref", {V("b")})));
  CHECK(parse_type("((int))") == TypeExpr::app("int"));
  CHECK_THROWS_AS(parse_type("'a *"), ParseError);
  CHECK_THROWS_AS(parse_type("('a, 'b)"), ParseError);
}

TEST_CASE("free variables") {
  auto names = [](const char* t) { return free_vars(parse_type(t)); };
  CHECK(names("'b * 'c") == std::vector<std::string>{"b", "c"});
  CHECK(names("int").empty());
  CHECK(names("'b -> 'b") == std::vector<std::string>{"b"});
  CHECK(occurs(parse_type("'a list"), "a"));
  CHECK_FALSE(occurs(parse_type("'a list"), "b"));
}

TEST_CASE("substitution") {
  auto t = substitute(parse_type("'a * ('b -> 'a)"), {{"a", parse_type("int")}});
  CHECK(t.str() == "int * ('b -> int)");
  CHECK(parse_type("int * bool").is_ground());
  CHECK(parse_type("(int -> int) list").depth() == 3);
}

TEST_CASE("an ADT declaration") {
  auto r = parse_signature("type (+'a) list = Nil of unit | Cons of 'a * 'a list");
  REQUIRE(r.ok());
  const auto& d = fixtures::datatype(*r.signature, "list");
  CHECK(d.params.size() == 1);
  CHECK(d.params[0].variance == Variance::Cov);
  CHECK(d.ctors.size() == 2);
  CHECK(r.signature->find("list")->arity() == 1);
}

TEST_CASE("a constrained GADT constructor") {
  auto r = parse_signature(
      "type (+'a) expr =\n"
      "  | Int : ['a = int]. int\n"
      "  | Prod : 'b 'c ['a = 'b * 'c]. 'b expr * 'c expr\n"
      "base int\n");
  REQUIRE(r.ok());
  const auto& k = fixtures::ctor(*r.signature, "expr", "Prod");
  CHECK(k.existentials == std::vector<std::string>{"b", "c"});
  REQUIRE(k.constraints.size() == 1);
  CHECK(k.constraints[0].param == 0);
  CHECK(k.constraints[0].rel == ConstraintRel::Eq);
  CHECK(k.constraints[0].bound.str() == "'b * 'c");
  CHECK(k.arg.str() == "'b expr * 'c expr");
}

TEST_CASE("rejection is not a parse error") {
  auto r = parse_signature("type (+'a, +'b) t = Fun of 'a -> 'b");
  CHECK(r.ok());
  CHECK(r.diagnostics.empty());
}

TEST_CASE("normalizing the generalized codomain form") {
  auto sig = fixtures::corpus("expr.vt");
  const auto& prod = fixtures::ctor(sig, "expr", "Prod");
  CHECK(prod.existentials == std::vector<std::string>{"b", "c"});
  REQUIRE(prod.constraints.size() == 1);
  CHECK(prod.constraints[0].rel == ConstraintRel::Eq);
  CHECK(prod.constraints[0].bound.str() == "'b * 'c");
  CHECK(prod.arg.str() == "'b expr * 'c expr");

  // A local that clashes with the parameter gets a fresh name.
  const auto& thunk = fixtures::ctor(sig, "expr", "Thunk");
  CHECK(thunk.existentials == std::vector<std::string>{"b", "a1"});
  CHECK(thunk.constraints[0].bound.str() == "'a1");
  CHECK(thunk.arg.str() == "'b expr * ('b -> 'a1)");

  // No arrow: the argument is unit.
  auto eq = fixtures::corpus("eq_inv.vt");
  const auto& refl = fixtures::ctor(eq, "eq", "Refl");
  CHECK(refl.arg.str() == "unit");
  REQUIRE(refl.constraints.size() == 2);
  CHECK(refl.constraints[0].bound.str() == "'g");
  CHECK(refl.constraints[1].bound.str() == "'g");
}

TEST_CASE("normalizing an ADT constructor") {
  auto r = parse_signature("type (+'a) t = Val of 'a");
  REQUIRE(r.ok());
  const auto& d = fixtures::datatype(*r.signature, "t");
  const auto& k = d.ctors[0];
  CHECK(k.existentials == std::vector<std::string>{"a1"});
  REQUIRE(k.constraints.size() == 1);
  CHECK(k.constraints[0].param == 0);
  CHECK(k.constraints[0].rel == ConstraintRel::Eq);
  CHECK(k.constraints[0].bound == V("a1"));
  CHECK(k.arg == V("a1"));
  REQUIRE(adt_argument(d, k));
  CHECK(adt_argument(d, k)->str() == "'a");
}

TEST_CASE("unconstrained parameters get a fresh equation") {
  auto r = parse_signature("type (+'a, ='b) t = K : 'c ['a = 'c list]. 'b * 'c\n"
                           "type (+'a) list = Nil of unit");
  REQUIRE(r.ok());
  const auto& k = fixtures::ctor(*r.signature, "t", "K");
  CHECK(k.existentials == std::vector<std::string>{"c", "b1"});
  REQUIRE(k.constraints.size() == 2);
  CHECK(k.constraints[1].param == 1);
  CHECK(k.constraints[1].bound == V("b1"));
  CHECK(k.arg.str() == "'b1 * 'c");
}

TEST_CASE("normalization is idempotent") {
  for (const auto& file : fixtures::corpus_files()) {
    CAPTURE(file);
    auto sig = fixtures::corpus(file);
    for (const auto& d : sig.datatypes())
      for (const auto& k : d.ctors) {
        auto again = normalize_constructor(d, k);
        CHECK(again == k);
        // The normalized form mentions only existentials.
        for (const auto& v : free_vars(k.arg))
          CHECK(std::find(k.existentials.begin(), k.existentials.end(), v) != k.existentials.end());
        for (const auto& c : k.constraints)
          for (const auto& v : free_vars(c.bound))
            CHECK(std::find(k.existentials.begin(), k.existentials.end(), v) != k.existentials.end());
      }
  }
}

TEST_CASE("print then parse is a fixed point on the corpus") {
  for (const auto& file : fixtures::corpus_files()) {
    CAPTURE(file);
    auto first = parse_signature(fixtures::read_corpus(file));
    REQUIRE(first.ok());
    std::string printed = print_signature(*first.signature);
    auto second = parse_signature(printed);
    INFO(printed);
    REQUIRE(second.ok());
    CHECK(second.signature->datatypes() == first.signature->datatypes());
    CHECK(print_signature(*second.signature) == printed);
  }
}

TEST_CASE("well-formedness diagnostics") {
  CHECK(mentions(diagnostics_of("type (+'a, +'b) pair = P of 'a * 'b\n"
                                "type (+'a) t = K of ('a, 'a, 'a) pair"),
                 "argument"));
  CHECK(mentions(diagnostics_of("type (+'a) t = K of 'a\nbase int\nprivate t = int"), "arity"));
  CHECK(mentions(diagnostics_of("type (+'a) t = K of 'a nope"), "nope"));
  CHECK(mentions(diagnostics_of("base int\nbase int"), "int"));
  CHECK(mentions(diagnostics_of("type (+'a, -'a) t = K of unit"), "'a"));
  CHECK(mentions(diagnostics_of("type (+'a) t = K of 'b"), "'b"));
  CHECK_FALSE(diagnostics_of("type (+'a) t = K of 'a\nbase int\nsubbase t <= int").empty());
  CHECK_FALSE(diagnostics_of("base int\nprivate fd = int\nprivate fd = int").empty());
  CHECK_FALSE(diagnostics_of("base int\nprivate int = int").empty());
  CHECK_FALSE(diagnostics_of("type (+'a) t = K : ['a = int]. int").empty());
  for (const auto& file : fixtures::corpus_files()) {
    CAPTURE(file);
    auto r = parse_signature(fixtures::read_corpus(file));
    CHECK(r.diagnostics.empty());
    REQUIRE(r.ok());
    CHECK(wf_check(*r.signature).empty());
  }
}

TEST_CASE("syntax errors carry positions and recovery continues") {
  auto r = parse_signature("base int\ntype (+'a) t = K of )\nbase 'x\ntype (+'b) u = U of 'b");
  CHECK_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() >= 2);
  CHECK(r.diagnostics[0].loc.line == 2);
  CHECK(r.diagnostics[0].loc.column > 0);
  CHECK(r.diagnostics[1].loc.line == 3);
  CHECK(r.diagnostics[0].str().rfind("2:", 0) == 0);
}

TEST_CASE("empty input") {
  auto r = parse_signature("# nothing here\n");
  REQUIRE(r.ok());
  CHECK(r.signature->datatypes().empty());
}

TEST_CASE("builtins are predeclared") {
  Signature sig;
  REQUIRE(sig.find("*"));
  CHECK(sig.find("*")->variances == std::vector<Variance>{Variance::Cov, Variance::Cov});
  CHECK(sig.find("->")->variances == std::vector<Variance>{Variance::Contra, Variance::Cov});
  CHECK(sig.find("unit")->arity() == 0);
  CHECK(sig.is_predeclared("->"));
}

TEST_CASE("base preorder and private edges") {
  auto sig = fixtures::corpus("private_fd.vt");
  CHECK(sig.base_preorder_leq("bool", "int"));
  CHECK_FALSE(sig.base_preorder_leq("int", "bool"));
  CHECK(sig.head_leq("fd", "int"));
  CHECK_FALSE(sig.head_leq("int", "fd"));
  CHECK(sig.head_strictly_below("fd", "int"));
  CHECK(sig.find("fd")->private_of == std::optional<std::string>("int"));
}
