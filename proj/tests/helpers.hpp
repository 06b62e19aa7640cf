#pragma once

#include <random>
#include <string>
#include <vector>

#include "lucretia/ast.hpp"
#include "lucretia/checker.hpp"
#include "lucretia/constraints.hpp"
#include "lucretia/parser.hpp"
#include "lucretia/types.hpp"

namespace lucretia::testing {

inline ExprPtr must_parse(const std::string& src) {
  ParseResult r = parse_program(src);
  if (!r.ok()) {
    std::string message = "parse failed";
    for (const auto& d : r.diagnostics) message += "\n" + to_text(d);
    throw std::runtime_error(message);
  }
  return r.expr;
}

inline FunctionContract must_contract(const std::string& src) {
  auto r = parse_contract(src);
  if (auto* d = std::get_if<Diagnostic>(&r))
    throw std::runtime_error("contract parse failed: " + to_text(*d));
  return std::get<FunctionContract>(r);
}

inline Judgment must_check(const ExprPtr& e) {
  CheckResult r = check_program(e);
  if (!r.ok()) {
    std::string message = "check failed";
    for (const auto& d : r.diagnostics) message += "\n" + to_text(d);
    throw std::runtime_error(message);
  }
  return *r.judgment;
}

inline Judgment must_check_with(const ConstraintSet& pre, const TypingContext& ctx,
                                const ExprPtr& e) {
  CheckResult r = check_with(pre, ctx, e);
  if (!r.ok()) {
    std::string message = "check failed";
    for (const auto& d : r.diagnostics) message += "\n" + to_text(d);
    throw std::runtime_error(message);
  }
  return *r.judgment;
}

inline std::string first_code(const CheckResult& r) {
  return r.diagnostics.empty() ? std::string() : r.diagnostics.front().code;
}

/// Order-sensitive alpha comparison of constraint sets: entries are zipped
/// in display order and variable names matched by a bijection.
inline bool alpha_match(const ConstraintSet& actual, const ConstraintSet& expected,
                        const Type* actual_type = nullptr,
                        const Type* expected_type = nullptr) {
  if (actual.size() != expected.size()) return false;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < actual.entries().size(); ++i) {
    const auto& [a, ra] = actual.entries()[i];
    const auto& [b, rb] = expected.entries()[i];
    if (a != b) pairs.emplace_back(a, b);
  }
  Renaming theta(pairs);
  if (!equal(apply_renaming(theta, actual), expected)) return false;
  if (actual_type && expected_type)
    return equal(apply_renaming(theta, *actual_type), *expected_type);
  return true;
}

/// Convenience: compare a judgment against display-syntax expectations.
inline bool judgment_matches(const Judgment& j, const std::string& type_text,
                             const std::string& post_text) {
  Type expected_type = parse_type(type_text);
  ConstraintSet expected_post = parse_constraint_set(post_text);
  return alpha_match(j.post, expected_post, &j.type, &expected_type);
}

// Deterministic generators for the property suites.
struct Gen {
  std::mt19937_64 rng;

  explicit Gen(std::uint64_t seed) : rng(seed) {}

  std::uint64_t pick(std::uint64_t n) { return rng() % n; }

  Type base_type() {
    static const BaseType bases[] = {BaseType::Int, BaseType::Bool, BaseType::String,
                                     BaseType::Real, BaseType::Unit};
    return Type::base(bases[pick(5)]);
  }

  std::string var_name(int pool) { return "G" + std::to_string(pick(pool)); }

  Type small_type(int pool) {
    switch (pick(4)) {
      case 0: return Type::var(var_name(pool));
      case 1: return Type::union_of({base_type(), base_type()});
      default: return base_type();
    }
  }

  FieldType field_type(int pool) {
    switch (pick(3)) {
      case 0: return FieldType::absent();
      case 1: return FieldType::maybe(small_type(pool));
      default: return FieldType::present(small_type(pool));
    }
  }

  RecordType record(int pool) {
    static const char* names[] = {"m", "n", "a", "b", "w"};
    RecordType r;
    std::uint64_t fields = pick(4);
    for (std::uint64_t i = 0; i < fields; ++i) r.fields[names[pick(5)]] = field_type(pool);
    return r;
  }

  ConstraintSet constraints(int pool) {
    ConstraintSet psi;
    std::uint64_t vars = pick(4);
    for (std::uint64_t i = 0; i < vars; ++i) psi.set(var_name(pool), record(pool));
    return psi;
  }

  /// Weakens q within the q grammar: adds disjuncts and possibly bot.
  FieldType weaken_field(const FieldType& q, int pool) {
    std::vector<Type> members;
    bool bot = q.admits_absence();
    if (!q.is_absent()) members.push_back(q.payload());
    std::uint64_t extra = pick(3);
    for (std::uint64_t i = 0; i < extra; ++i) members.push_back(small_type(pool));
    if (pick(2) == 0) bot = true;
    if (members.empty()) return FieldType::absent();
    Type payload = normalize(members.size() == 1 ? members[0] : Type::union_of(members));
    return bot ? FieldType::maybe(payload) : FieldType::present(payload);
  }

  /// Builds rhs with entails(lhs, rhs) by construction: pointwise weakening
  /// plus evolve-fresh variables unknown to lhs.
  ConstraintSet weaken_constraints(const ConstraintSet& lhs, int pool, int salt) {
    ConstraintSet rhs;
    for (const auto& [var, rec] : lhs.entries()) {
      RecordType weakened;
      for (const auto& [name, q] : rec.fields) weakened.fields[name] = weaken_field(q, pool);
      rhs.set(var, std::move(weakened));
    }
    std::uint64_t extra = pick(2);
    for (std::uint64_t i = 0; i < extra; ++i)
      rhs.set("E" + std::to_string(salt) + "_" + std::to_string(i), record(pool));
    return rhs;
  }
};

}  // namespace lucretia::testing
