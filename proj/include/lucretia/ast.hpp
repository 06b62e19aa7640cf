#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lucretia/diagnostics.hpp"
#include "lucretia/source.hpp"
#include "lucretia/types.hpp"

namespace lucretia {

/// Runtime constants. Integers are 64-bit signed; overflow in primitive
/// operations is a runtime error, not a wrap.
struct Const {
  struct Unit {
    bool operator==(const Unit&) const = default;
  };
  using Value = std::variant<std::int64_t, double, bool, std::string, Unit>;
  Value value;

  static Const integer(std::int64_t v) { return Const{Value{v}}; }
  static Const real(double v) { return Const{Value{v}}; }
  static Const boolean(bool v) { return Const{Value{v}}; }
  static Const text(std::string v) { return Const{Value{std::move(v)}}; }
  static Const unit() { return Const{Value{Unit{}}}; }

  bool operator==(const Const&) const = default;
};

BaseType type_of_const(const Const& c);
std::string to_text(const Const& c);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Function literal: parameters, one or more contracts (annotation-driven
/// checking), and a body. Doubles as the runtime function value.
struct FunctionLit {
  std::vector<std::string> params;
  std::vector<FunctionContract> contracts;
  ExprPtr body;
};

struct Expr {
  struct VarAtom {
    std::string name;
  };
  struct ConstAtom {
    Const value;
  };
  struct FuncAtom {
    FunctionLit fn;
  };
  struct LocAtom {
    std::uint64_t id;  // runtime only; never occurs in parsed source
  };
  struct PrimOp {
    std::string op;
    std::vector<ExprPtr> args;  // atoms
  };
  struct New {};
  struct GetField {
    ExprPtr object;  // atom
    std::string field;
  };
  struct SetField {
    ExprPtr object;  // atom
    std::string field;
    ExprPtr value;  // atom
  };
  struct Let {
    std::string name;
    ExprPtr bound;
    ExprPtr body;
  };
  struct If {
    ExprPtr cond;  // atom
    ExprPtr then_branch;
    ExprPtr else_branch;
  };
  struct IfHasAttr {
    ExprPtr object;  // atom
    std::string field;
    ExprPtr then_branch;
    ExprPtr else_branch;
  };
  struct App {
    ExprPtr callee;  // variable or function literal
    std::vector<ExprPtr> args;  // atoms
  };

  using Node = std::variant<VarAtom, ConstAtom, FuncAtom, LocAtom, PrimOp, New, GetField,
                            SetField, Let, If, IfHasAttr, App>;

  SourceSpan span;
  Node node;
};

ExprPtr make_expr(Expr::Node node, SourceSpan span = {});

ExprPtr var_expr(std::string name, SourceSpan span = {});
ExprPtr const_expr(Const c, SourceSpan span = {});
ExprPtr func_expr(FunctionLit fn, SourceSpan span = {});
ExprPtr loc_expr(std::uint64_t id, SourceSpan span = {});
ExprPtr primop_expr(std::string op, std::vector<ExprPtr> args, SourceSpan span = {});
ExprPtr new_expr(SourceSpan span = {});
ExprPtr getfield_expr(ExprPtr object, std::string field, SourceSpan span = {});
ExprPtr setfield_expr(ExprPtr object, std::string field, ExprPtr value, SourceSpan span = {});
ExprPtr let_expr(std::string name, ExprPtr bound, ExprPtr body, SourceSpan span = {});
ExprPtr if_expr(ExprPtr cond, ExprPtr t, ExprPtr e, SourceSpan span = {});
ExprPtr ifhasattr_expr(ExprPtr object, std::string field, ExprPtr t, ExprPtr e,
                       SourceSpan span = {});
ExprPtr app_expr(ExprPtr callee, std::vector<ExprPtr> args, SourceSpan span = {});

/// Atoms are variables, constants, function literals and locations.
bool is_atom(const Expr& e);
bool is_value_atom(const Expr& e);  // constant, function literal or location

const std::set<std::string>& reserved_words();
bool is_valid_ident(const std::string& name);

/// Structural well-formedness: identifier shape, distinct parameters,
/// at least one contract per literal, no locations, atoms in operand
/// positions. Total; reports one diagnostic per violation.
Diagnostics validate(const ExprPtr& e);

/// Variables occurring free; `let` and function parameters bind.
std::set<std::string> free_names(const ExprPtr& e);

/// Capture-avoiding substitution of a closed atom value for a variable.
ExprPtr substitute(const ExprPtr& e, const std::string& name, const ExprPtr& value);

/// Source text that reparses to an alpha-equivalent expression. ANF
/// temporaries (`$t...`) are renamed to parseable identifiers.
std::string pretty(const ExprPtr& e);

/// Alpha-equivalence (bound term variables may differ).
bool alpha_equal(const ExprPtr& a, const ExprPtr& b);

}  // namespace lucretia
