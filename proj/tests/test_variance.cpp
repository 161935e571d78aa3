#include "doctest.h"

#include <stdexcept>

#include "reference.hpp"
#include "vgadt/variance.hpp"

using namespace vgadt;

namespace {
const Variance V[] = {Variance::Inv, Variance::Cov, Variance::Contra, Variance::Irr};
constexpr Variance Inv = Variance::Inv, Cov = Variance::Cov, Contra = Variance::Contra,
                   Irr = Variance::Irr;
} // namespace

TEST_CASE("compose matches the published table and the relational model") {
  for (Variance v : V)
    for (Variance w : V) {
      CAPTURE(to_char(v));
      CAPTURE(to_char(w));
      CHECK(compose(v, w) == ref::table_compose(v, w));
      CHECK(compose(v, w) == ref::relational_compose(v, w));
    }
  CHECK(compose(Cov, Contra) == Contra);
  CHECK(compose(Inv, Irr) == Irr);
  for (Variance w : V) CHECK(compose(Cov, w) == w);
}

TEST_CASE("compose is associative, commutative and monotone") {
  for (Variance a : V)
    for (Variance b : V) {
      CHECK(compose(a, b) == compose(b, a));
      for (Variance c : V) {
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
        if (var_leq(a, b)) {
          CHECK(var_leq(compose(a, c), compose(b, c)));
          CHECK(var_leq(compose(c, a), compose(c, b)));
        }
      }
    }
}

TEST_CASE("var_leq is the diamond lattice") {
  for (Variance v : V)
    for (Variance w : V) {
      CHECK(var_leq(v, w) == ref::table_leq(v, w));
      CHECK(var_leq(v, w) == ref::relational_leq(v, w));
    }
  CHECK(var_leq(Irr, Cov));
  CHECK_FALSE(var_leq(Cov, Contra));
  CHECK_FALSE(var_leq(Contra, Cov));
  for (Variance v : V) {
    CHECK(var_leq(v, v));
    CHECK(var_leq(Irr, v));
    CHECK(var_leq(v, Inv));
  }
}

TEST_CASE("glb and lub") {
  for (Variance v : V)
    for (Variance w : V) {
      CHECK(var_glb(v, w) == ref::brute_glb(v, w));
      CHECK(var_lub(v, w) == ref::brute_lub(v, w));
    }
  CHECK(var_glb(Cov, Contra) == Irr);
  CHECK(var_lub(Cov, Contra) == Inv);
  CHECK(var_glb(Inv, Cov) == Cov);
}

TEST_CASE("zip matches the published table") {
  int undefined = 0;
  for (Variance v : V)
    for (Variance w : V) {
      CHECK(zip(v, w) == ref::table_zip(v, w));
      bool defined = v == Irr || w == Irr || (v == Inv && w == Inv);
      CHECK(zip(v, w).has_value() == defined);
      CHECK(zip(v, w) == zip(w, v));
      if (!zip(v, w)) ++undefined;
    }
  CHECK(undefined == 8);
  for (Variance v : V) {
    CHECK(zip(Irr, v) == v);
    CHECK(zip(v, Irr) == v);
  }
  CHECK(zip(Irr, Cov) == Cov);
  CHECK_FALSE(zip(Cov, Cov));
  CHECK(zip(Inv, Inv) == Inv);
}

TEST_CASE("zip is associative where defined") {
  for (Variance a : V)
    for (Variance b : V)
      for (Variance c : V) {
        auto ab = zip(a, b), bc = zip(b, c);
        auto left = ab ? zip(*ab, c) : std::nullopt;
        auto right = bc ? zip(a, *bc) : std::nullopt;
        CHECK(left == right);
      }
}

TEST_CASE("a defined zip is the least upper bound") {
  for (Variance v : V)
    for (Variance w : V)
      if (auto z = zip(v, w)) CHECK(*z == var_lub(v, w));
}

TEST_CASE("context order") {
  VarianceContext irr_a{{"a", Irr}}, cov_a{{"a", Cov}};
  CHECK(ctx_leq(irr_a, cov_a));
  CHECK_FALSE(ctx_leq(VarianceContext{{"a", Cov}, {"b", Inv}}, VarianceContext{{"a", Inv}, {"b", Cov}}));
  for (const auto& g : ref::all_contexts({"a", "b"})) CHECK(ctx_leq(g, g));
  CHECK_THROWS_AS(ctx_leq(irr_a, VarianceContext{{"b", Irr}}), std::invalid_argument);
}

TEST_CASE("context zip") {
  auto z = ctx_zip(VarianceContext{{"a", Cov}, {"b", Irr}}, VarianceContext{{"a", Irr}, {"b", Inv}});
  REQUIRE(z);
  CHECK(*z == VarianceContext{{"a", Cov}, {"b", Inv}});
  CHECK_FALSE(ctx_zip(VarianceContext{{"a", Cov}}, VarianceContext{{"a", Cov}}));

  std::vector<std::string> dom{"a", "b"};
  auto empty = ctx_zip(std::span<const VarianceContext>{}, dom);
  REQUIRE(empty);
  CHECK(*empty == VarianceContext{{"a", Irr}, {"b", Irr}});

  // Pointwise against the table, all pairs over two variables.
  for (const auto& g1 : ref::all_contexts(dom))
    for (const auto& g2 : ref::all_contexts(dom)) {
      auto za = ref::table_zip(g1.at("a"), g2.at("a"));
      auto zb = ref::table_zip(g1.at("b"), g2.at("b"));
      auto got = ctx_zip(g1, g2);
      REQUIRE(got.has_value() == (za && zb));
      if (got) CHECK(*got == VarianceContext{{"a", *za}, {"b", *zb}});
    }
}

TEST_CASE("variance sets") {
  CHECK(VarianceSet::up(Cov).str() == "{+,=}");
  CHECK(VarianceSet::up(Irr) == VarianceSet::full());
  CHECK(VarianceSet::up(Contra).str() == "{-,=}");
  CHECK(VarianceSet{}.str() == "{}");
  CHECK(VarianceSet::full().str() == "{~,+,-,=}");
  CHECK(VarianceSet::full().size() == 4);
  CHECK(zip_sets(VarianceSet{Cov}, VarianceSet{Cov}).empty());
  CHECK(zip_sets(VarianceSet{Cov, Irr}, VarianceSet{Irr}) == VarianceSet({Cov, Irr}));
  for (Variance v : V) CHECK(variance_from_char(to_char(v)) == v);
  CHECK_FALSE(variance_from_char('x'));
}

TEST_CASE("contexts keep declaration order and reject duplicates") {
  VarianceContext g{{"b", Cov}, {"a", Inv}};
  CHECK(g.str() == "(+b,=a)");
  CHECK(g.vars() == std::vector<std::string>{"b", "a"});
  CHECK_THROWS_AS((VarianceContext{{"a", Cov}, {"a", Inv}}), std::invalid_argument);
  CHECK_THROWS_AS(g.at("c"), std::out_of_range);
}
