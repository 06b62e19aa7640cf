#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "lucretia/constraints.hpp"
#include "lucretia/parser.hpp"

using namespace lucretia;
using lucretia::testing::Gen;

namespace {

ConstraintSet cs(const std::string& text) { return parse_constraint_set(text); }

RecordType rec(const std::string& text) {
  ConstraintSet psi = parse_constraint_set("X <# " + text);
  return *psi.find("X");
}

FieldType q(const std::string& text) {
  RecordType r = rec("{f: " + text + "}");
  return r.fields.at("f");
}

}  // namespace

// One exact-match case per displayed clause of the update figure.
TEST_CASE("update: record clauses") {
  CHECK(equal(update(rec("{a: int}"), RecordType{}), rec("{a: int}")));  // r + {} = r
  CHECK(equal(update(rec("{a: int, b: string}"), rec("{a: string}")),
              rec("{a: string, b: string}")));  // overwrite
  CHECK(equal(update(rec("{b: int}"), rec("{a: string}")),
              rec("{a: string, b: int}")));  // add when absent
  // sequential clause: r + {a:u'', r'} = (r + {a:u''}) + r'
  CHECK(equal(update(rec("{a: int}"), rec("{a: bool, b: string}")),
              update(update(rec("{a: int}"), rec("{a: bool}")), rec("{b: string}"))));
}

TEST_CASE("update: constraint clauses") {
  CHECK(equal(update(cs("X <# {m: int}"), ConstraintSet{}), cs("X <# {m: int}")));
  CHECK(equal(update(cs("X <# {m: int}"), cs("X <# {m: string}")),
              cs("X <# {m: string}")));  // per-variable record update
  CHECK(equal(update(cs("X <# {}"), cs("Y <# {a: int}")),
              cs("X <# {}, Y <# {a: int}")));  // X not in dom: append
  CHECK(equal(update(cs("X <# {m: int}, Y <# {}"), cs("Y <# {w: bool}, Z <# {}")),
              cs("X <# {m: int}, Y <# {w: bool}, Z <# {}")));
}

TEST_CASE("entails: field type clauses") {
  CHECK(entails(q("int"), q("int")));              // (refl)
  CHECK(entails(q("int"), q("int | string")));     // (ror)
  CHECK(entails(q("bot"), q("string | bot")));     // bot counts as a disjunct
  CHECK(entails(q("string"), q("string | bot")));
  CHECK_FALSE(entails(q("int | string"), q("int")));
  CHECK_FALSE(entails(q("int | bot"), q("int")));
  CHECK_FALSE(entails(q("bot"), q("int")));
}

TEST_CASE("entails: the two derivation steps displayed in the examples") {
  CHECK(entails(rec("{m: bot}"), rec("{m: string | bot}")));
  CHECK(entails(cs("X <# {a: bot}"), cs("X <# {a: bot}, Y <# {}")));  // (evolve)
}

TEST_CASE("entails: records need identical field sets") {
  CHECK(entails(rec("{}"), rec("{}")));                        // (rrefl)
  CHECK(entails(rec("{m: int, n: bool}"), rec("{m: int | string, n: bool}")));
  CHECK_FALSE(entails(rec("{m: int, n: bool}"), rec("{m: int}")));  // field forgetting
  CHECK_FALSE(entails(rec("{m: int}"), rec("{m: int, n: bool}")));  // field injection
}

TEST_CASE("entails: constraint sets") {
  CHECK(entails(ConstraintSet{}, ConstraintSet{}));             // (crefl)
  CHECK_FALSE(entails(cs("X <# {m: int}"), ConstraintSet{}));   // constraint forgetting
  CHECK(entails(cs("X <# {m: int}"), cs("X <# {m: int}, Y <# {}")));
  // (evolve) side condition: the new variable may not occur in the left set.
  CHECK_FALSE(entails(cs("X <# {a: Y}"), cs("X <# {a: Y}, Y <# {}")));
  CHECK(entails(cs("X <# {a: Z}"), cs("X <# {a: Z}, Y <# {}")));
}

TEST_CASE("definiteness: plus strips bot, minus forces it") {
  CHECK(equal(*definiteness(cs("X <# {m: int | bot}"), "X", "m", DefSign::Plus),
              cs("X <# {m: int}")));
  CHECK(equal(*definiteness(cs("X <# {m: int}"), "X", "m", DefSign::Minus),
              cs("X <# {m: bot}")));
  CHECK(equal(*definiteness(cs("X <# {m: int}"), "X", "m", DefSign::Plus),
              cs("X <# {m: int}")));  // (t)+ = t
  CHECK(equal(*definiteness(cs("X <# {m: bot}"), "X", "m", DefSign::Minus),
              cs("X <# {m: bot}")));
}

TEST_CASE("definiteness: unchanged when the variable is unconstrained") {
  ConstraintSet psi = cs("Y <# {m: int}");
  auto out = definiteness(psi, "X", "m", DefSign::Plus);
  REQUIRE(out.has_value());
  CHECK(equal(*out, psi));
}

TEST_CASE("definiteness: undefined cases") {
  CHECK_FALSE(definiteness(cs("X <# {m: bot}"), "X", "m", DefSign::Plus).has_value());
  CHECK_FALSE(definiteness(cs("X <# {}"), "X", "m", DefSign::Plus).has_value());
  CHECK_FALSE(definiteness(cs("X <# {}"), "X", "m", DefSign::Minus).has_value());
}

TEST_CASE("definiteness then entails: (q)+ and bot are incomparable") {
  // Exhaustive over the field types built from one base type.
  FieldType plus = q("int");          // (int | bot)+
  FieldType minus = q("bot");
  CHECK_FALSE(entails(plus, minus));
  CHECK_FALSE(entails(minus, plus));
  CHECK(entails(plus, q("int | bot")));
  CHECK(entails(minus, q("int | bot")));
}

TEST_CASE("join: the three conditional examples") {
  std::set<std::string> no_fresh;
  auto j1 = join(cs("X <# {m: string}"), cs("X <# {m: string}"), no_fresh);
  CHECK(equal(std::get<ConstraintSet>(j1), cs("X <# {m: string}")));

  auto j2 = join(cs("X <# {m: string}"), cs("X <# {m: bot}"), {"X"});
  CHECK(equal(std::get<ConstraintSet>(j2), cs("X <# {m: string | bot}")));

  auto j3 = join(cs("X <# {a: Y}, Y <# {}"), cs("X <# {a: bot}"), {"X", "Y"});
  CHECK(equal(std::get<ConstraintSet>(j3), cs("X <# {a: Y | bot}, Y <# {}")));
}

TEST_CASE("join: lazy bot extension only applies to fresh variables") {
  // Field known in one branch only, variable not created here: unjoinable.
  auto bad = join(cs("X <# {m: string}"), cs("X <# {}"), {});
  CHECK(std::holds_alternative<JoinError>(bad));
  auto ok = join(cs("X <# {m: string}"), cs("X <# {}"), {"X"});
  CHECK(equal(std::get<ConstraintSet>(ok), cs("X <# {m: string | bot}")));
}

TEST_CASE("join: one-sided variables survive by evolve or freshness") {
  auto evolve = join(cs("X <# {m: int}"), cs("Y <# {m: int}"), {});
  REQUIRE(std::holds_alternative<ConstraintSet>(evolve));
  ConstraintSet joined = std::get<ConstraintSet>(evolve);
  CHECK(equal(joined, cs("X <# {m: int}, Y <# {m: int}")));
  CHECK(entails(cs("X <# {m: int}"), joined));
  CHECK(entails(cs("Y <# {m: int}"), joined));
  // Cross-referenced one-sided variables cannot evolve in.
  auto bad = join(cs("X <# {a: Y}"), cs("Y <# {}"), {});
  CHECK(std::holds_alternative<JoinError>(bad));
}

TEST_CASE("join field least upper bounds") {
  CHECK(equal(join_fields(q("int"), q("string")), q("int | string")));
  CHECK(equal(join_fields(q("int"), q("bot")), q("int | bot")));
  CHECK(equal(join_fields(q("bot"), q("bot")), q("bot")));
  CHECK(equal(join_fields(q("int | bot"), q("string")), q("int | string | bot")));
}

// -- property suites ---------------------------------------------------------

TEST_CASE("property: entails is reflexive and transitive") {
  Gen gen(101);
  for (int i = 0; i < 10000; ++i) {
    ConstraintSet a = gen.constraints(4);
    CHECK(entails(a, a));
    ConstraintSet b = gen.weaken_constraints(a, 4, i * 2);
    ConstraintSet c = gen.weaken_constraints(b, 4, i * 2 + 1);
    REQUIRE(entails(a, b));
    REQUIRE(entails(b, c));
    CHECK(entails(a, c));
  }
}

TEST_CASE("property: update right-idempotence and associativity") {
  Gen gen(202);
  for (int i = 0; i < 10000; ++i) {
    RecordType r = gen.record(4);
    RecordType r1 = gen.record(4);
    RecordType r2 = gen.record(4);
    CHECK(equal(update(update(r, r1), r1), update(r, r1)));
    CHECK(equal(update(update(r, r1), r2), update(r, update(r1, r2))));
    ConstraintSet p = gen.constraints(4);
    ConstraintSet p1 = gen.constraints(4);
    CHECK(equal(update(update(p, p1), p1), update(p, p1)));
  }
}

TEST_CASE("property: join is an upper bound of bot-extended inputs") {
  Gen gen(303);
  int produced = 0;
  for (int i = 0; produced < 1000 && i < 20000; ++i) {
    ConstraintSet a = gen.constraints(3);
    ConstraintSet b = gen.constraints(3);
    std::set<std::string> fresh = {"G0", "G1", "G2"};
    JoinResult out = join(a, b, fresh);
    if (!std::holds_alternative<ConstraintSet>(out)) continue;
    ++produced;
    const ConstraintSet& j = std::get<ConstraintSet>(out);
    CHECK(entails(bot_extend(a, j, fresh), j));
    CHECK(entails(bot_extend(b, j, fresh), j));
  }
  CHECK(produced == 1000);
  // join(psi, psi, .) = psi
  for (int i = 0; i < 200; ++i) {
    ConstraintSet a = gen.constraints(3);
    JoinResult out = join(a, a, {});
    REQUIRE(std::holds_alternative<ConstraintSet>(out));
    CHECK(equal(std::get<ConstraintSet>(out), a));
  }
}
