#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "lucretia/types.hpp"

using namespace lucretia;
using lucretia::testing::Gen;
using lucretia::testing::must_contract;

namespace {

Type tint() { return Type::base(BaseType::Int); }
Type tstring() { return Type::base(BaseType::String); }
Type tbool() { return Type::base(BaseType::Bool); }

}  // namespace

TEST_CASE("ftv of a closed contract is empty") {
  // forall X. [X; X <# {}] => [X; X <# {m: int}]
  ConstraintSet pre{{"X", RecordType{}}};
  RecordType post_rec;
  post_rec.fields.emplace("m", FieldType::present(tint()));
  ConstraintSet post{{"X", post_rec}};
  FunctionContract c =
      make_contract({"X"}, pre, {Type::var("X")}, Type::var("X"), post);
  CHECK(ftv(c).empty());
  CHECK(ftv(Type::functions({c})).empty());
}

TEST_CASE("ftv sees constrained variables and record payloads") {
  RecordType rec;
  rec.fields.emplace("a", FieldType::present(Type::var("Y")));
  ConstraintSet psi{{"X", rec}};
  CHECK(ftv(psi) == std::set<std::string>{"X", "Y"});
}

TEST_CASE("ftv of the empty constraint set is empty") {
  CHECK(ftv(ConstraintSet{}).empty());
}

TEST_CASE("normalize flattens, dedupes and collapses unions") {
  CHECK(equal(normalize(Type::union_of({tint(), tint()})), tint()));
  Type nested = Type::union_of({Type::union_of({tint(), tstring()}), tint()});
  CHECK(to_text(normalize(nested)) == "int | string");
  FieldType q = FieldType::maybe(tbool());
  CHECK(to_text(normalize(q)) == "bool | bot");
}

TEST_CASE("normalize is idempotent on random types") {
  Gen gen(7);
  for (int i = 0; i < 500; ++i) {
    Type t = gen.small_type(4);
    Type u = Type::union_of({t, gen.small_type(4), gen.small_type(4)});
    CHECK(equal(normalize(u), normalize(normalize(u))));
  }
}

TEST_CASE("union order is canonical: base < var < functions") {
  FunctionContract c = must_contract("[int; ] => [int; ]");
  Type u = Type::union_of({Type::functions({c}), Type::var("A"), tint()});
  std::string text = to_text(u);
  CHECK(text.find("int") < text.find("A"));
  CHECK(text.find("A") < text.find("(forall"));
}

TEST_CASE("renaming maps a constraint onto the call-site variable") {
  RecordType rec;
  rec.fields.emplace("m", FieldType::present(tint()));
  ConstraintSet psi{{"Xs", rec}};
  Renaming theta({{"Xs", "Xo"}});
  ConstraintSet renamed = apply_renaming(theta, psi);
  CHECK(renamed.has("Xo"));
  CHECK_FALSE(renamed.has("Xs"));
  CHECK(to_text(renamed) == "Xo <# {m: int}");
}

TEST_CASE("renaming leaves bound variables alone") {
  FunctionContract c = must_contract("[X; ] => [X; ]");
  Type t = Type::functions({c});
  Renaming theta({{"X", "Y"}});
  CHECK(equal(apply_renaming(theta, t), t));
}

TEST_CASE("renaming freshens a colliding binder before substituting") {
  // [X := Y] applied to forall Y. [Y; Y <# {a: X}] => [int; Y <# {a: X}]
  RecordType rec;
  rec.fields.emplace("a", FieldType::present(Type::var("X")));
  ConstraintSet pre{{"Y", rec}};
  FunctionContract c = make_contract({"Y"}, pre, {Type::var("Y")}, tint(), pre);
  Renaming theta({{"X", "Y"}});
  FunctionContract renamed = apply_renaming(theta, c);
  // X became Y; the binder moved out of the way, so the new Y is free.
  auto free = ftv(renamed);
  CHECK(free == std::set<std::string>{"Y"});
  CHECK(renamed.quantified.size() == 1);
  CHECK(renamed.quantified[0] != "Y");
}

TEST_CASE("renamings are bijections") {
  CHECK_THROWS_AS(Renaming({{"X", "Z"}, {"Y", "Z"}}), std::invalid_argument);
  CHECK_THROWS_AS(Renaming({{"X", "A"}, {"X", "B"}}), std::invalid_argument);
}

TEST_CASE("renaming round-trip on random constraint sets") {
  Gen gen(11);
  for (int i = 0; i < 500; ++i) {
    ConstraintSet psi = gen.constraints(4);
    Renaming theta({{"G0", "H0"}, {"G1", "H1"}, {"G2", "H2"}, {"G3", "H3"}});
    ConstraintSet there = apply_renaming(theta, psi);
    ConstraintSet back = apply_renaming(theta.inverse(), there);
    CHECK(equal(back, psi));
  }
}

TEST_CASE("ftv commutes with renaming") {
  Gen gen(13);
  Renaming theta({{"G0", "H0"}, {"G2", "H2"}});
  for (int i = 0; i < 500; ++i) {
    ConstraintSet psi = gen.constraints(4);
    std::set<std::string> expected;
    for (const auto& v : ftv(psi)) expected.insert(theta.apply_name(v));
    CHECK(ftv(apply_renaming(theta, psi)) == expected);
  }
}

TEST_CASE("parallel_ok checks A against img minus dom") {
  Renaming theta({{"X", "Y"}});
  CHECK(parallel_ok({"X"}, theta));       // img - dom = {Y}
  CHECK_FALSE(parallel_ok({"Y"}, theta));
  CHECK(parallel_ok({}, theta));
  CHECK(parallel_ok({"A", "B"}, Renaming{}));
}

TEST_CASE("substitution instantiates a quantified variable to a base type") {
  TypeSubst s{{"T", tint()}};
  RecordType rec;
  rec.fields.emplace("m", FieldType::present(Type::var("T")));
  CHECK(to_text(apply_subst(s, rec)) == "{m: int}");
  CHECK_THROWS_AS(apply_subst(s, ConstraintSet{{"T", RecordType{}}}), std::logic_error);
}

TEST_CASE("function type equality is alpha equality") {
  FunctionContract a = must_contract("[X, int; ] => [int; X.m:int]");
  FunctionContract b = must_contract("[Q, int; ] => [int; Q.m:int]");
  FunctionContract c = must_contract("[Q, int; ] => [int; Q.m:string]");
  CHECK(equal(Type::functions({a}), Type::functions({b})));
  CHECK_FALSE(equal(Type::functions({a}), Type::functions({c})));
}

TEST_CASE("canonical text renders records sorted by field name") {
  RecordType rec;
  rec.fields.emplace("n", FieldType::present(tint()));
  rec.fields.emplace("a", FieldType::maybe(tstring()));
  ConstraintSet psi{{"X", rec}};
  CHECK(to_text(psi) == "X <# {a: string | bot, n: int}");
}

TEST_CASE("surface rendering of a contract reparses to an equal contract") {
  FunctionContract c = must_contract("[X, Y; Y.m:U] => [U; X.m:int]");
  FunctionContract again = must_contract(to_surface(c));
  CHECK(equal(Type::functions({c}), Type::functions({again})));
}
