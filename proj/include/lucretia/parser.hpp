#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "lucretia/ast.hpp"
#include "lucretia/diagnostics.hpp"
#include "lucretia/types.hpp"

namespace lucretia {

struct ParseResult {
  ExprPtr expr;  // null on failure
  Diagnostics diagnostics;

  bool ok() const { return expr != nullptr && diagnostics.empty(); }
};

/// Parses a `.luc` program into a validated, ANF-lowered AST. Non-atomic
/// operands are let-bound left to right with reserved `$t<n>` temporaries.
ParseResult parse_program(std::string_view src);

/// Parses one contract in the surface syntax
/// `[t1, ..., tn; X.f:q, ...] => [t; X.f:q, ...]`.
/// All type variables are quantified unless `^`-prefixed (nonlocal).
/// Variables in the argument list without a constraint entry get `X <# {}`
/// in the precondition; precondition records carry into the postcondition,
/// updated by the stated entries.
std::variant<FunctionContract, Diagnostic> parse_contract(std::string_view src);

/// Test and tooling helpers for the canonical display syntax,
/// e.g. `X <# {m: int | bot}, Y <# {}`. Throws std::invalid_argument on
/// malformed input.
ConstraintSet parse_constraint_set(std::string_view src);
Type parse_type(std::string_view src);

}  // namespace lucretia
