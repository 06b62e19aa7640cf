#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lucretia/ast.hpp"
#include "lucretia/constraints.hpp"
#include "lucretia/diagnostics.hpp"
#include "lucretia/types.hpp"

namespace lucretia {

/// Gamma: term variables to types. Source programs never bind locations.
using TypingContext = std::map<std::string, Type>;

/// The Hoare-style triple produced for an accepted program:
/// pre; ctx |- expr : type; post.
struct Judgment {
  ConstraintSet pre;
  TypingContext ctx;
  ExprPtr expr;
  Type type;
  ConstraintSet post;
};

/// `|- <expr-summary> : <type> ; <post>` in canonical text.
std::string to_text(const Judgment& j);

struct CheckResult {
  std::optional<Judgment> judgment;
  Diagnostics diagnostics;

  bool ok() const { return judgment.has_value(); }
};

/// Checks a closed program from the empty precondition and context.
CheckResult check_program(const ExprPtr& e);

/// Checks an expression under an ambient precondition and context (the
/// judgment shapes used by derivations); variables in `pre`/`ctx` are not
/// treated as created in the current scope.
CheckResult check_with(const ConstraintSet& pre, const TypingContext& ctx, const ExprPtr& e);

/// Thrown internally and converted to diagnostics at the API boundary.
struct CheckFailure {
  Diagnostics diagnostics;
};

/// Syntax-directed checker. One instance per program; fresh type variable
/// names depend only on traversal order.
class Checker {
 public:
  Checker() = default;

  /// Rule dispatch on the head constructor; returns the result type and
  /// postcondition or throws CheckFailure.
  std::pair<Type, ConstraintSet> check_expr(const ConstraintSet& pre, TypingContext& ctx,
                                            const ExprPtr& e);

  /// Checks a function literal against each of its contracts ((fdecl) plus
  /// the intersection introduction); returns the intersection type.
  Type check_function(const ConstraintSet& pre, const TypingContext& ctx,
                      const FunctionLit& fn, SourceSpan span);

  /// (fapp): instantiates contract conjuncts in declaration order against
  /// the actual argument types; first succeeding conjunct wins.
  std::pair<Type, ConstraintSet> match_application(
      const ConstraintSet& pre, const std::vector<FunctionContract>& contracts,
      const std::vector<std::pair<SourceSpan, Type>>& actuals, SourceSpan call_span);

  /// Seeds the fresh-name supply; any variable mentioned here is never
  /// generated by (new) or by callee instantiation.
  void note_names(const std::set<std::string>& names);
  void note_type_names(const Type& t);

  const std::set<std::string>& locally_fresh() const { return locally_fresh_; }

 private:
  std::set<std::string> used_;
  std::set<std::string> locally_fresh_;

  std::string fresh_var();
  void note_contract_names(const FunctionContract& c);

  Type atom_type(const ConstraintSet& pre, TypingContext& ctx, const ExprPtr& e);
  std::string receiver_var(const ConstraintSet& pre, TypingContext& ctx, const ExprPtr& e,
                           const char* rule);

  std::pair<Type, ConstraintSet> check_if(const ConstraintSet& pre, TypingContext& ctx,
                                          const Expr::If& node, SourceSpan span);
  std::pair<Type, ConstraintSet> check_ifhasattr(const ConstraintSet& pre, TypingContext& ctx,
                                                 const Expr::IfHasAttr& node, SourceSpan span);
  std::pair<Type, ConstraintSet> check_primop(const ConstraintSet& pre, TypingContext& ctx,
                                              const Expr::PrimOp& node, SourceSpan span);
  std::pair<Type, ConstraintSet> check_app(const ConstraintSet& pre, TypingContext& ctx,
                                           const Expr::App& node, SourceSpan span);

  ConstraintSet join_or_fail(const ConstraintSet& a, const ConstraintSet& b, SourceSpan span,
                             const char* rule);
};

}  // namespace lucretia
