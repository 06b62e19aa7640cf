#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "lucretia/checker.hpp"
#include "lucretia/interp.hpp"
#include "lucretia/parser.hpp"

using namespace lucretia;
using namespace lucretia::testing;

namespace {

ConstraintSet cs(const std::string& text) { return parse_constraint_set(text); }

TypingContext ctx_of(std::initializer_list<std::pair<std::string, std::string>> entries) {
  TypingContext ctx;
  for (const auto& [name, type_text] : entries) ctx.emplace(name, parse_type(type_text));
  return ctx;
}

}  // namespace

TEST_CASE("(const) leaves the precondition untouched") {
  Judgment j = must_check_with(cs("X <# {m: int}"), {}, must_parse("5"));
  CHECK(to_text(j.type) == "int");
  CHECK(equal(j.post, cs("X <# {m: int}")));
}

TEST_CASE("(new) from nothing") {
  Judgment j = must_check(must_parse("new"));
  CHECK(judgment_matches(j, "A", "A <# {}"));
}

TEST_CASE("both branches set the field: union-free postcondition") {
  TypingContext ctx = ctx_of({{"ha", "bool"}, {"a", "string"}, {"x", "X"}});
  Judgment j = must_check_with(cs("X <# {}"), ctx,
                               must_parse("if ha then x.m = a else x.m = \"help\""));
  CHECK(to_text(j.type) == "string");
  CHECK(to_text(j.post) == "X <# {m: string}");
}

TEST_CASE("one branch sets the field: bot joins in") {
  TypingContext ctx = ctx_of({{"ha", "bool"}, {"a", "string"}, {"x", "X"}});
  // From the paper's precondition X <# {m: bot} the join needs no freshness.
  Judgment j = must_check_with(cs("X <# {m: bot}"), ctx,
                               must_parse("if ha then x.m = a else \"\""));
  CHECK(to_text(j.type) == "string");
  CHECK(to_text(j.post) == "X <# {m: string | bot}");
}

TEST_CASE("object creation in one branch only") {
  TypingContext ctx = ctx_of({{"b", "bool"}, {"x", "X"}});
  Judgment j = must_check_with(cs("X <# {a: bot}"), ctx,
                               must_parse("if b then x.a = new; 0 else 0"));
  CHECK(to_text(j.type) == "int");
  CHECK(judgment_matches(j, "int", "X <# {a: Y | bot}, Y <# {}"));
}

TEST_CASE("t_add checks and applies; renaming sends the formal to the actual") {
  TypingContext ctx = ctx_of({{"o", "Xo"}, {"init", "([X, int; ] => [int; X.m:int])"}});
  Judgment j = must_check_with(cs("Xo <# {}"), ctx, must_parse("init(o, 42)"));
  CHECK(to_text(j.type) == "int");
  CHECK(to_text(j.post) == "Xo <# {m: int}");
}

TEST_CASE("width subtyping: extra fields at the call site are kept") {
  TypingContext ctx = ctx_of({{"o", "Xo"}, {"init", "([X, int; ] => [int; X.m:int])"}});
  Judgment j = must_check_with(cs("Xo <# {n: u}"), ctx, must_parse("init(o, 42)"));
  CHECK(to_text(j.type) == "int");
  CHECK(to_text(j.post) == "Xo <# {m: int, n: u}");
}

TEST_CASE("the generic t_add instantiates its value type per call") {
  const char* src =
      "init : [X, T; ] => [T; X.m:T]\n"
      "func init(self, x) { self.m = x }\n"
      "let o = new in\n"
      "init(o, \"hello\")";
  Judgment j = must_check(must_parse(src));
  CHECK(to_text(j.type) == "string");
  CHECK(judgment_matches(j, "string", "A <# {m: string}"));
}

TEST_CASE("intersection contracts: aliased and non-aliased scenarios") {
  const char* header =
      "f : [X, Y; Y.m:U] => [U; X.m:int]\n"
      "f : [X, X; ] => [int; X.m:int]\n"
      "func f(x, y) { x.m = 1; y.m }\n";

  Judgment aliased = must_check(must_parse(std::string(header) + "let o = new in f(o, o)"));
  CHECK(to_text(aliased.type) == "int");
  CHECK(judgment_matches(aliased, "int", "A <# {m: int}"));

  Judgment distinct = must_check(must_parse(std::string(header) +
                                            "let p = new in let q = new in q.m = \"v\"; "
                                            "f(p, q)"));
  CHECK(to_text(distinct.type) == "string");
  CHECK(judgment_matches(distinct, "string", "A <# {m: int}, B <# {m: string}"));
}

TEST_CASE("the shared-m body fails with only the two-distinct-objects contract") {
  const char* src =
      "f : [X, Y; ] => [int; X.m:int]\n"
      "func f(x, y) { x.m = 1; y.m }\n"
      "0";
  CheckResult r = check_program(must_parse(src));
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.front().code == "E-RACC-UNKNOWN");  // y.m unknown under Y <# {}
}

TEST_CASE("no conjunct applies when the argument lacks the field") {
  const char* src =
      "f : [X, Y; Y.m:U] => [U; X.m:int]\n"
      "f : [X, X; ] => [int; X.m:int]\n"
      "func f(x, y) { x.m = 1; y.m }\n"
      "let p = new in let q = new in f(p, q)";
  CheckResult r = check_program(must_parse(src));
  REQUIRE_FALSE(r.ok());
  CHECK(first_code(r) == "E-APPLY-NONE");
}

TEST_CASE("the introspection contract types the probing function") {
  const char* src =
      "g : [X; X.m:bot] => [int; X.m:bot|int]\n"
      "func g(x) { ifhasattr(x, m) then x.m + 1 else 0 }\n"
      "0";
  CHECK(must_check(must_parse(src)).type.as_base() == BaseType::Int);
}

TEST_CASE("ifhasattr on a maybe field checks both narrowed branches") {
  TypingContext ctx = ctx_of({{"x", "X"}});
  Judgment j = must_check_with(cs("X <# {m: int | bot}"), ctx,
                               must_parse("ifhasattr(x, m) then x.m else 0"));
  CHECK(to_text(j.type) == "int");
  CHECK(to_text(j.post) == "X <# {m: int | bot}");
}

TEST_CASE("ifhasattr on a statically known field checks one branch only") {
  TypingContext ctx = ctx_of({{"x", "X"}});
  // present: the else branch may be arbitrary dead code
  Judgment then_only = must_check_with(
      cs("X <# {m: int}"), ctx, must_parse("ifhasattr(x, m) then x.m else unknown_name"));
  CHECK(to_text(then_only.type) == "int");
  // absent: the then branch is dead
  Judgment else_only = must_check_with(
      cs("X <# {m: bot}"), ctx, must_parse("ifhasattr(x, m) then unknown_name else 7"));
  CHECK(to_text(else_only.type) == "int");
}

TEST_CASE("field access rejections: maybe, absent, unknown") {
  TypingContext ctx = ctx_of({{"x", "X"}});
  CheckResult maybe = check_with(cs("X <# {m: int | bot}"), ctx, must_parse("x.m"));
  CHECK(first_code(maybe) == "E-RACC-MAYBE");
  CheckResult absent = check_with(cs("X <# {m: bot}"), ctx, must_parse("x.m"));
  CHECK(first_code(absent) == "E-RACC-ABSENT");
  CheckResult unknown = check_program(must_parse("let x = new in x.m"));
  CHECK(first_code(unknown) == "E-RACC-UNKNOWN");
}

TEST_CASE("plus admits bool/int/real and unions thereof") {
  TypingContext ctx = ctx_of({{"x", "int | bool"}});
  Judgment j = must_check_with({}, ctx, must_parse("x + 1"));
  CHECK(to_text(j.type) == "int");
  Judgment mixed = must_check_with({}, {}, must_parse("1 + 1.5"));
  CHECK(to_text(mixed.type) == "int | real");
  CheckResult bad = check_with({}, ctx_of({{"s", "string"}}), must_parse("s + 1"));
  CHECK(first_code(bad) == "E-OP-TYPE");
}

TEST_CASE("comparisons need one base type; not needs bool") {
  CHECK(to_text(must_check(must_parse("1 < 2")).type) == "bool");
  CHECK(to_text(must_check(must_parse("not true")).type) == "bool");
  CHECK(first_code(check_program(must_parse("true == 1"))) == "E-OP-TYPE");
  CHECK(first_code(check_program(must_parse("true < false"))) == "E-OP-TYPE");
  CHECK(first_code(check_program(must_parse("not 1"))) == "E-OP-TYPE");
}

TEST_CASE("conditions must be boolean") {
  CHECK(first_code(check_program(must_parse("if 1 then 2 else 3"))) == "E-COND-BOOL");
}

TEST_CASE("branch result types union") {
  Judgment j = must_check(must_parse("let b = true in if b then 1 else \"s\""));
  CHECK(to_text(j.type) == "int | string");
}

TEST_CASE("unknown variables and non-function callees") {
  CHECK(first_code(check_program(must_parse("nope"))) == "E-UNKNOWN-VAR");
  CHECK(first_code(check_program(must_parse("let x = 5 in x(1)"))) ==
        "E-APPLY-NOT-FUNCTION");
}

TEST_CASE("rejection: contract forgetting the created object") {
  const char* src = "g : [; ] => [int; ]\nfunc g() { let t = new in 5 }\ng()";
  CheckResult r = check_program(must_parse(src));
  REQUIRE_FALSE(r.ok());
  CHECK(first_code(r) == "E-CONTRACT-BODY");
}

TEST_CASE("rejection: contract forgetting the written field") {
  const char* src = "g : [X; ] => [int; ]\nfunc g(x) { x.m = 1 }\n0";
  CheckResult r = check_program(must_parse(src));
  REQUIRE_FALSE(r.ok());
  CHECK(first_code(r) == "E-CONTRACT-BODY");
}

TEST_CASE("rejection: bot injection on an argument variable") {
  const char* src =
      "g : [X; ] => [int; X.m:int|bot]\n"
      "func g(x) { ifhasattr(x, m) then x.m + 1 else 0 }\n0";
  CheckResult r = check_program(must_parse(src));
  REQUIRE_FALSE(r.ok());
  CHECK(first_code(r) == "E-IFHAT-UNKNOWN");
}

TEST_CASE("rejection: one-sided write to an argument object cannot join") {
  const char* src =
      "g : [X, bool; ] => [int; X.m:int|bot]\n"
      "func g(x, b) { if b then x.m = 1; 0 else 0 }\n0";
  CheckResult r = check_program(must_parse(src));
  REQUIRE_FALSE(r.ok());
  CHECK(first_code(r) == "E-JOIN");
}

TEST_CASE("the unsound call is rejected and the unchecked run crashes") {
  const char* src =
      "g : [X; X.m:bot] => [int; X.m:bot|int]\n"
      "func g(x) { ifhasattr(x, m) then x.m + 1 else 0 }\n"
      "let o = new in o.m = \"boom\"; g(o)";
  ExprPtr program = must_parse(src);
  CheckResult r = check_program(program);
  REQUIRE_FALSE(r.ok());
  CHECK(first_code(r) == "E-APPLY-NONE");
  RunOutcome out = run(program, 1000);
  REQUIRE(std::holds_alternative<RuntimeError>(out));
  CHECK(std::get<RuntimeError>(out).kind == RuntimeErrorKind::PrimOpError);
}

TEST_CASE("aliased call selects the honest conjunct; runtime agrees") {
  // Through the first contract the aliased call would claim the stale field
  // type; injectivity forces the aliased conjunct, whose postcondition and
  // result match what actually happens on the heap.
  const char* src =
      "f : [X, Y; Y.m:U] => [U; X.m:int]\n"
      "f : [X, X; ] => [int; X.m:int]\n"
      "func f(x, y) { x.m = 1; y.m }\n"
      "let o = new in\n"
      "o.m = \"stale\";\n"
      "f(o, o) + 1";
  Judgment j = must_check(must_parse(src));
  CHECK(to_text(j.type) == "int");
  RunOutcome out = run(must_parse(src), 1000);
  REQUIRE(std::holds_alternative<RunHalted>(out));
  CHECK(to_text(std::get<RunHalted>(out).value) == "2");
}

TEST_CASE("aliasing through stored references: one object, two names") {
  const char* src =
      "let o = new in\n"
      "let p = new in\n"
      "o.ref = p;\n"
      "let q = o.ref in\n"
      "q.m = 5;\n"
      "p.m";
  Judgment j = must_check(must_parse(src));
  CHECK(to_text(j.type) == "int");
  RunOutcome out = run(must_parse(src), 1000);
  REQUIRE(std::holds_alternative<RunHalted>(out));
  CHECK(to_text(std::get<RunHalted>(out).value) == "5");
}

TEST_CASE("nested literals may capture enclosing contract variables") {
  const char* src =
      "mk : [X; X.w:int] => [([Y; ^X.w:int, Y.w:int] => [bool; ^X.w:int, Y.w:int]); "
      "X.w:int]\n"
      "func mk(x) { func(y) : [Y; ^X.w:int, Y.w:int] => [bool; ^X.w:int, Y.w:int] "
      "{ x.w == y.w } }\n"
      "0";
  CHECK(check_program(must_parse(src)).ok());
}

TEST_CASE("under-generalization: a nonlocal that names nothing is rejected") {
  const char* src =
      "g : [^Q; ^Q.m:int] => [int; ^Q.m:int]\nfunc g(x) { x.m }\n0";
  CheckResult r = check_program(must_parse(src));
  REQUIRE_FALSE(r.ok());
  CHECK(first_code(r) == "E-CONTRACT-GEN");
}

TEST_CASE("contracts may declare objects the body returns") {
  const char* src =
      "mk : [; ] => [Y; Y.a:int]\n"
      "func mk() { let o = new in o.a = 7; o }\n"
      "let p = mk() in p.a";
  Judgment j = must_check(must_parse(src));
  CHECK(to_text(j.type) == "int");
  CHECK(judgment_matches(j, "int", "A <# {a: int}"));
}

TEST_CASE("methods: function values stored in fields can be read and called") {
  const char* src =
      "let o = new in\n"
      "o.x = 7;\n"
      "o.mv = func(s, dx) : [S, int; S.x:int] => [int; S.x:int] { s.x = s.x + dx };\n"
      "let m = o.mv in\n"
      "m(o, 3);\n"
      "o.x";
  Judgment j = must_check(must_parse(src));
  CHECK(to_text(j.type) == "int");
}

TEST_CASE("judgment postcondition domain includes the precondition domain") {
  Judgment j = must_check_with(cs("F <# {k: int}"), ctx_of({{"b", "bool"}}),
                               must_parse("let x = new in if b then x.a = 1; 0 else 0"));
  CHECK(j.post.has("F"));
  CHECK(judgment_matches(j, "int", "F <# {k: int}, A <# {a: int | bot}"));
}

TEST_CASE("frame property on the golden judgments") {
  struct GoldenCase {
    ConstraintSet pre;
    TypingContext ctx;
    const char* src;
  };
  std::vector<GoldenCase> cases = {
      {cs("X <# {}"), ctx_of({{"ha", "bool"}, {"a", "string"}, {"x", "X"}}),
       "if ha then x.m = a else x.m = \"help\""},
      {cs("X <# {m: bot}"), ctx_of({{"ha", "bool"}, {"a", "string"}, {"x", "X"}}),
       "if ha then x.m = a else \"\""},
      {cs("X <# {a: bot}"), ctx_of({{"b", "bool"}, {"x", "X"}}),
       "if b then x.a = new; 0 else 0"},
      {cs("Xo <# {}"), ctx_of({{"o", "Xo"}, {"init", "([X, int; ] => [int; X.m:int])"}}),
       "init(o, 42)"},
  };
  Gen gen(404);
  for (const auto& golden : cases) {
    ExprPtr program = must_parse(golden.src);
    TypingContext ctx = golden.ctx;
    Judgment base = must_check_with(golden.pre, ctx, program);
    for (int i = 0; i < 25; ++i) {
      ConstraintSet frame;
      int vars = 1 + static_cast<int>(gen.pick(3));
      for (int v = 0; v < vars; ++v)
        frame.set("F" + std::to_string(gen.pick(50)), gen.record(4));
      Judgment framed = must_check_with(update(frame, golden.pre), ctx, program);
      CHECK(equal(framed.post, update(frame, base.post)));
      CHECK(equal(framed.type, base.type));
    }
  }
}
