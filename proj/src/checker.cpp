#include "lucretia/checker.hpp"

#include <algorithm>

namespace lucretia {

namespace {

[[noreturn]] void fail_one(Diagnostic d) { throw CheckFailure{{std::move(d)}}; }

[[noreturn]] void fail(std::string code, std::string message, SourceSpan span,
                       std::string rule, std::optional<std::string> expected = std::nullopt,
                       std::optional<std::string> actual = std::nullopt) {
  Diagnostic d = make_error(std::move(code), std::move(message), span, std::move(rule));
  d.expected = std::move(expected);
  d.actual = std::move(actual);
  fail_one(std::move(d));
}

std::string summary_of(const ExprPtr& e) {
  std::string s = pretty(e);
  if (s.size() > 40) s = s.substr(0, 37) + "...";
  return s;
}

Type bool_type() { return Type::base(BaseType::Bool); }

// Admissible operand type for +: bool | int | real.
Type plus_operand_union() {
  return Type::union_of(
      {Type::base(BaseType::Bool), Type::base(BaseType::Int), Type::base(BaseType::Real)});
}

Type numeric_union() {
  return Type::union_of({Type::base(BaseType::Int), Type::base(BaseType::Real)});
}

// delta evaluates booleans as 0/1 integers, so + result disjuncts read
// bool as int.
Type plus_result(const Type& t1, const Type& t2) {
  Type joined = normalize(Type::union_of({t1, t2}));
  auto map_member = [](const Type& m) {
    if (auto b = m.as_base(); b && *b == BaseType::Bool) return Type::base(BaseType::Int);
    return m;
  };
  if (auto* u = joined.as_union()) {
    std::vector<Type> members;
    members.reserve(u->size());
    for (const auto& m : *u) members.push_back(map_member(m));
    return normalize(Type::union_of(std::move(members)));
  }
  return normalize(map_member(joined));
}

std::set<std::string> ftv_of_ctx(const TypingContext& ctx) {
  std::set<std::string> out;
  for (const auto& [name, t] : ctx) {
    auto vars = ftv(t);
    out.insert(vars.begin(), vars.end());
  }
  return out;
}

// ftv of a contract's components without removing the quantified names.
std::set<std::string> contract_component_vars(const FunctionContract& c) {
  std::set<std::string> out;
  for (const auto& a : c.args) {
    auto vars = ftv(a);
    out.insert(vars.begin(), vars.end());
  }
  for (const auto& part : {c.pre, c.post}) {
    auto vars = ftv(part);
    out.insert(vars.begin(), vars.end());
  }
  auto vars = ftv(c.result_type());
  out.insert(vars.begin(), vars.end());
  return out;
}

std::string join_names(const std::set<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out.empty() ? "(none)" : out;
}

}  // namespace

std::string to_text(const Judgment& j) {
  return "|- " + summary_of(j.expr) + " : " + to_text(j.type) + " ; " + to_text(j.post);
}

// -- fresh names -------------------------------------------------------------------

std::string Checker::fresh_var() {
  static const char* pool[] = {"X", "Y", "Z", "W", "V", "U", "T", "S"};
  for (int round = 0;; ++round) {
    for (const char* base : pool) {
      std::string candidate =
          round == 0 ? std::string(base) : std::string(base) + std::to_string(round);
      if (used_.insert(candidate).second) return candidate;
    }
  }
}

void Checker::note_names(const std::set<std::string>& names) {
  used_.insert(names.begin(), names.end());
}

void Checker::note_type_names(const Type& t) {
  note_names(ftv(t));
  if (auto* fs = t.as_functions()) {
    for (const auto& c : *fs) note_contract_names(c);
  } else if (auto* u = t.as_union()) {
    for (const auto& m : *u) note_type_names(m);
  }
}

void Checker::note_contract_names(const FunctionContract& c) {
  note_names(contract_component_vars(c));
  note_names({c.quantified.begin(), c.quantified.end()});
}

// -- atoms -------------------------------------------------------------------------

Type Checker::atom_type(const ConstraintSet& pre, TypingContext& ctx, const ExprPtr& e) {
  if (auto* v = std::get_if<Expr::VarAtom>(&e->node)) {
    auto it = ctx.find(v->name);
    if (it == ctx.end())
      fail("E-UNKNOWN-VAR", "unknown variable '" + v->name + "'", e->span, "var");
    return it->second;
  }
  if (auto* c = std::get_if<Expr::ConstAtom>(&e->node))
    return Type::base(type_of_const(c->value));
  if (auto* f = std::get_if<Expr::FuncAtom>(&e->node))
    return check_function(pre, ctx, f->fn, e->span);
  if (std::holds_alternative<Expr::LocAtom>(e->node))
    fail("E-VALIDATE-LOC", "locations cannot be typed in source programs", e->span, "var");
  fail("E-VALIDATE-ANF", "operand position holds a non-atomic expression", e->span, "var");
}

std::string Checker::receiver_var(const ConstraintSet& pre, TypingContext& ctx,
                                  const ExprPtr& e, const char* rule) {
  Type t = atom_type(pre, ctx, e);
  const std::string* var = t.as_var();
  if (!var)
    fail("E-NON-OBJECT", "receiver must have a constrained object type", e->span, rule,
         "a type variable X with X <# {...}", to_text(t));
  return *var;
}

// -- expression dispatch -------------------------------------------------------------

std::pair<Type, ConstraintSet> Checker::check_expr(const ConstraintSet& pre,
                                                   TypingContext& ctx, const ExprPtr& e) {
  if (is_atom(*e)) return {atom_type(pre, ctx, e), pre};

  if (std::holds_alternative<Expr::New>(e->node)) {
    std::string x = fresh_var();
    locally_fresh_.insert(x);
    ConstraintSet post = pre;
    post.set(x, RecordType{});
    return {Type::var(x), post};
  }

  if (auto* g = std::get_if<Expr::GetField>(&e->node)) {
    std::string x = receiver_var(pre, ctx, g->object, "racc");
    const RecordType* rec = pre.find(x);
    if (!rec)
      fail("E-NON-OBJECT", "no constraint for " + x + " in the precondition", e->span, "racc",
           x + " <# {...}", to_text(pre));
    const FieldType* q = rec->find(g->field);
    if (!q)
      fail("E-RACC-UNKNOWN",
           "field '" + g->field + "' is not mentioned in the constraint for " + x, e->span,
           "racc", x + " <# {" + g->field + ": t}", x + " <# " + to_text(*rec));
    if (q->is_absent())
      fail("E-RACC-ABSENT", "field '" + g->field + "' of " + x + " is definitely absent",
           e->span, "racc", x + " <# {" + g->field + ": t}", x + " <# " + to_text(*rec));
    if (q->is_maybe())
      fail("E-RACC-MAYBE", "field '" + g->field + "' of " + x + " is possibly absent",
           e->span, "racc", x + " <# {" + g->field + ": t}", x + " <# " + to_text(*rec));
    return {q->payload(), pre};
  }

  if (auto* s = std::get_if<Expr::SetField>(&e->node)) {
    std::string x = receiver_var(pre, ctx, s->object, "update");
    Type t = atom_type(pre, ctx, s->value);
    note_type_names(t);
    ConstraintSet delta;
    RecordType rec;
    rec.fields.emplace(s->field, FieldType::present(t));
    delta.set(x, std::move(rec));
    return {t, update(pre, delta)};
  }

  if (auto* op = std::get_if<Expr::PrimOp>(&e->node))
    return check_primop(pre, ctx, *op, e->span);

  if (auto* let = std::get_if<Expr::Let>(&e->node)) {
    auto [t1, psi2] = check_expr(pre, ctx, let->bound);
    auto saved = ctx.find(let->name) != ctx.end()
                     ? std::optional<Type>(ctx[let->name])
                     : std::nullopt;
    ctx[let->name] = t1;
    auto [t, psi3] = check_expr(psi2, ctx, let->body);
    if (saved)
      ctx[let->name] = *saved;
    else
      ctx.erase(let->name);
    return {t, psi3};
  }

  if (auto* i = std::get_if<Expr::If>(&e->node)) return check_if(pre, ctx, *i, e->span);

  if (auto* i = std::get_if<Expr::IfHasAttr>(&e->node))
    return check_ifhasattr(pre, ctx, *i, e->span);

  if (auto* a = std::get_if<Expr::App>(&e->node)) return check_app(pre, ctx, *a, e->span);

  fail("E-VALIDATE-ANF", "unsupported expression form", e->span, "");
}

// -- primitive operators ----------------------------------------------------------------

std::pair<Type, ConstraintSet> Checker::check_primop(const ConstraintSet& pre,
                                                     TypingContext& ctx,
                                                     const Expr::PrimOp& node,
                                                     SourceSpan span) {
  std::vector<Type> args;
  args.reserve(node.args.size());
  for (const auto& a : node.args) args.push_back(atom_type(pre, ctx, a));

  auto require = [&](const Type& operand, const Type& admitted, std::size_t index) {
    if (!entails(normalize(operand), admitted))
      fail("E-OP-TYPE",
           "operand " + std::to_string(index + 1) + " of '" + node.op +
               "' has inadmissible type",
           node.args[index]->span, node.op == "+" ? "plus" : "op", to_text(admitted),
           to_text(operand));
  };

  if (node.op == "+") {
    require(args[0], plus_operand_union(), 0);
    require(args[1], plus_operand_union(), 1);
    return {plus_result(args[0], args[1]), pre};
  }
  if (node.op == "-" || node.op == "*") {
    require(args[0], numeric_union(), 0);
    require(args[1], numeric_union(), 1);
    return {normalize(Type::union_of({args[0], args[1]})), pre};
  }
  if (node.op == "==" || node.op == "<") {
    auto b1 = normalize(args[0]).as_base();
    auto b2 = normalize(args[1]).as_base();
    if (!b1 || !b2 || *b1 != *b2)
      fail("E-OP-TYPE", "'" + node.op + "' needs two operands of one base type", span, "op",
           "t_b == t_b", to_text(args[0]) + " vs " + to_text(args[1]));
    if (node.op == "<" && *b1 != BaseType::Int && *b1 != BaseType::Real &&
        *b1 != BaseType::String)
      fail("E-OP-TYPE", "'<' is not defined on " + to_text(args[0]), span, "op");
    return {bool_type(), pre};
  }
  if (node.op == "not") {
    require(args[0], bool_type(), 0);
    return {bool_type(), pre};
  }
  fail("E-OP-TYPE", "unknown operator '" + node.op + "'", span, "op");
}

// -- conditionals -------------------------------------------------------------------------

ConstraintSet Checker::join_or_fail(const ConstraintSet& a, const ConstraintSet& b,
                                    SourceSpan span, const char* rule) {
  JoinResult joined = join(a, b, locally_fresh_);
  if (auto* err = std::get_if<JoinError>(&joined))
    fail("E-JOIN", "branch postconditions do not join: " + err->message, span, rule,
         std::nullopt, to_text(a) + "  vs  " + to_text(b));
  ConstraintSet result = std::get<ConstraintSet>(std::move(joined));
  // Every weakening step re-verifies: both (bot-extended) inputs must entail
  // the join.
  if (!entails(bot_extend(a, result, locally_fresh_), result) ||
      !entails(bot_extend(b, result, locally_fresh_), result))
    fail("E-INTERNAL", "join produced a non-weakening of its inputs", span, rule,
         to_text(result), to_text(a) + "  vs  " + to_text(b));
  return result;
}

std::pair<Type, ConstraintSet> Checker::check_if(const ConstraintSet& pre, TypingContext& ctx,
                                                 const Expr::If& node, SourceSpan span) {
  Type cond = atom_type(pre, ctx, node.cond);
  if (!entails(normalize(cond), bool_type()))
    fail("E-COND-BOOL", "if condition must be bool", node.cond->span, "cond", "bool",
         to_text(cond));
  auto [t1, post1] = check_expr(pre, ctx, node.then_branch);
  auto [t2, post2] = check_expr(pre, ctx, node.else_branch);
  ConstraintSet post = join_or_fail(post1, post2, span, "cond");
  return {normalize(Type::union_of({t1, t2})), post};
}

std::pair<Type, ConstraintSet> Checker::check_ifhasattr(const ConstraintSet& pre,
                                                        TypingContext& ctx,
                                                        const Expr::IfHasAttr& node,
                                                        SourceSpan span) {
  std::string x = receiver_var(pre, ctx, node.object, "ifhat");
  const RecordType* rec = pre.find(x);
  if (!rec)
    fail("E-NON-OBJECT", "no constraint for " + x + " in the precondition", span, "ifhat",
         x + " <# {...}", to_text(pre));
  const FieldType* q = rec->find(node.field);
  if (!q)
    fail("E-IFHAT-UNKNOWN",
         "constraint for " + x + " does not mention field '" + node.field +
             "'; declare it as bot or t | bot",
         span, "ifhat", x + " <# {" + node.field + ": bot | ...}", x + " <# " + to_text(*rec));

  if (q->is_present()) {
    // Statically present: only the then-branch is checked ((ifhat-te), +).
    return check_expr(pre, ctx, node.then_branch);
  }
  if (q->is_absent()) {
    // Statically absent: only the else-branch is checked ((ifhat-te), -).
    return check_expr(pre, ctx, node.else_branch);
  }

  auto plus = definiteness(pre, x, node.field, DefSign::Plus);
  auto minus = definiteness(pre, x, node.field, DefSign::Minus);
  if (!plus || !minus)
    fail("E-INTERNAL", "definiteness update undefined on a maybe field", span, "ifhat");
  auto [t1, post1] = check_expr(*plus, ctx, node.then_branch);
  auto [t2, post2] = check_expr(*minus, ctx, node.else_branch);
  ConstraintSet post = join_or_fail(post1, post2, span, "ifhat");
  return {normalize(Type::union_of({t1, t2})), post};
}

// -- application ---------------------------------------------------------------------------

std::pair<Type, ConstraintSet> Checker::check_app(const ConstraintSet& pre, TypingContext& ctx,
                                                  const Expr::App& node, SourceSpan span) {
  Type callee;
  if (auto* v = std::get_if<Expr::VarAtom>(&node.callee->node)) {
    auto it = ctx.find(v->name);
    if (it == ctx.end())
      fail("E-UNKNOWN-VAR", "unknown function '" + v->name + "'", node.callee->span, "fapp");
    callee = it->second;
  } else if (auto* f = std::get_if<Expr::FuncAtom>(&node.callee->node)) {
    callee = check_function(pre, ctx, f->fn, node.callee->span);
  } else {
    fail("E-VALIDATE-ANF", "callee must be a variable or a function literal",
         node.callee->span, "fapp");
  }
  const std::vector<FunctionContract>* contracts = callee.as_functions();
  if (!contracts)
    fail("E-APPLY-NOT-FUNCTION", "callee is not function-typed", node.callee->span, "fapp",
         "a contract type", to_text(callee));

  std::vector<std::pair<SourceSpan, Type>> actuals;
  actuals.reserve(node.args.size());
  for (const auto& a : node.args) actuals.emplace_back(a->span, atom_type(pre, ctx, a));
  return match_application(pre, *contracts, actuals, span);
}

namespace {

struct ConjunctFailure {
  std::string reason;
};

// Instantiation state for one conjunct trial.
struct Instantiation {
  TypeSubst theta;
  std::set<std::string> quantified;
  std::vector<std::string> order;  // quantified, declaration order

  bool bound(const std::string& x) const { return theta.count(x) != 0; }

  void bind(const std::string& x, const Type& t, const char* why) {
    auto [it, inserted] = theta.emplace(x, t);
    if (!inserted && !equal(it->second, t))
      throw ConjunctFailure{std::string(why) + " forces " + x + " to both " +
                            to_text(it->second) + " and " + to_text(t)};
  }
};

}  // namespace

std::pair<Type, ConstraintSet> Checker::match_application(
    const ConstraintSet& pre, const std::vector<FunctionContract>& contracts,
    const std::vector<std::pair<SourceSpan, Type>>& actuals, SourceSpan call_span) {
  std::vector<std::string> failures;

  for (std::size_t index = 0; index < contracts.size(); ++index) {
    const FunctionContract& c = contracts[index];
    note_contract_names(c);
    try {
      if (c.args.size() != actuals.size())
        throw ConjunctFailure{"arity: contract takes " + std::to_string(c.args.size()) +
                              " arguments, call passes " + std::to_string(actuals.size())};

      Instantiation inst;
      inst.quantified.insert(c.quantified.begin(), c.quantified.end());
      inst.order = c.quantified;

      // Structural matching of formal argument types against actual types.
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        const std::string* v = c.args[i].as_var();
        if (v && inst.quantified.count(*v))
          inst.bind(*v, actuals[i].second, "argument matching");
      }

      // Quantified variables constrained in the precondition but not fixed
      // by the arguments are resolved against the caller's records.
      for (const auto& x : inst.order) {
        if (!inst.bound(x) || !inst.quantified.count(x)) continue;
        const Type& target = inst.theta.at(x);
        const std::string* w = target.as_var();
        if (!w) continue;
        const RecordType* formal = c.pre.find(x);
        const RecordType* actual = pre.find(*w);
        if (!formal || !actual) continue;
        for (const auto& [field, q_formal] : formal->fields) {
          if (q_formal.is_absent()) continue;
          const std::string* payload_var = q_formal.payload().as_var();
          if (!payload_var || !inst.quantified.count(*payload_var) ||
              inst.bound(*payload_var))
            continue;
          const FieldType* q_actual = actual->find(field);
          if (!q_actual || q_actual->is_absent()) continue;
          inst.bind(*payload_var, q_actual->payload(), "precondition matching");
        }
      }

      // Remaining quantified variables realize callee-created objects.
      for (const auto& x : inst.order) {
        if (inst.bound(x)) continue;
        inst.theta.emplace(x, Type::var(fresh_var()));
      }

      // theta must not merge variables (aliasing would be hidden).
      std::map<std::string, std::string> var_targets;
      for (const auto& x : inst.order) {
        const std::string* w = inst.theta.at(x).as_var();
        if (!w) continue;
        auto [it, inserted] = var_targets.emplace(*w, x);
        if (!inserted)
          throw ConjunctFailure{"renaming is not injective: " + it->second + " and " + x +
                                " are both instantiated to " + *w};
      }

      // FTV(t_f) || theta: nonlocal variables cannot be instantiation targets.
      std::set<std::string> nonlocals = ftv(Type::functions({c}));
      for (const auto& [w, x] : var_targets)
        if (nonlocals.count(w) && !inst.quantified.count(w))
          throw ConjunctFailure{"instantiating " + x + " to nonlocal variable " + w +
                                " would hide aliasing"};

      // Constraint entries whose variable is instantiated to a non-variable
      // type are vacuous if empty (value-type parameters such as the t of
      // t_add get an empty record from contract completion) and an error
      // otherwise. Entries that survive must name objects known here:
      // dom(theta(Psi_s)) is contained in dom(Psi).
      ConstraintSet pre_pruned;
      ConstraintSet post_pruned;
      for (const auto& [x, r] : c.pre.entries()) {
        auto it = inst.theta.find(x);
        if (it != inst.theta.end() && !it->second.as_var()) {
          if (r.empty()) continue;
          throw ConjunctFailure{"precondition constrains fields of " + x +
                                ", which is instantiated to the non-variable type " +
                                to_text(it->second)};
        }
        pre_pruned.set(x, r);
      }
      for (const auto& [x, r] : c.post.entries()) {
        auto it = inst.theta.find(x);
        if (it != inst.theta.end() && !it->second.as_var()) {
          if (r.empty()) continue;
          throw ConjunctFailure{"postcondition constrains fields of " + x +
                                ", which is instantiated to the non-variable type " +
                                to_text(it->second)};
        }
        post_pruned.set(x, r);
      }
      for (const auto& [x, r] : pre_pruned.entries()) {
        auto it = inst.theta.find(x);
        const std::string* w = it != inst.theta.end() ? it->second.as_var() : &x;
        if (!pre.has(*w))
          throw ConjunctFailure{"precondition needs " + *w +
                                " to be constrained at the call site"};
      }

      // Argument types must entail the instantiated formals.
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        Type expected = apply_subst(inst.theta, c.args[i]);
        if (!entails(normalize(actuals[i].second), normalize(expected)))
          throw ConjunctFailure{"argument " + std::to_string(i + 1) + " has type " +
                                to_text(actuals[i].second) + ", contract expects " +
                                to_text(expected)};
      }

      ConstraintSet pre_inst = apply_subst(inst.theta, pre_pruned);
      ConstraintSet post_inst = apply_subst(inst.theta, post_pruned);

      // Freshness premise: variables the callee creates must be new here.
      std::set<std::string> caller_vars = ftv(pre);
      for (const auto& [x, rec] : post_inst.entries()) {
        if (!pre_inst.has(x) && caller_vars.count(x))
          throw ConjunctFailure{"callee-created variable " + x +
                                " collides with the call-site state"};
      }

      // Call-site precondition check, with (bot) applied lazily to locally
      // fresh variables whose records lack a required field.
      ConstraintSet psi_ext = bot_extend(pre, pre_inst, locally_fresh_);
      ConstraintSet required = update(psi_ext, pre_inst);
      if (auto why = explain_entailment_failure(psi_ext, required))
        throw ConjunctFailure{"call-site state does not entail the precondition (" + *why +
                              "): have " + to_text(psi_ext) + ", need " + to_text(required)};

      // Everything the postcondition introduces beyond the call-site state
      // realizes an object the callee created (or a phantom).
      for (const auto& [x, r] : post_inst.entries())
        if (!pre_inst.has(x) && !pre.has(x)) locally_fresh_.insert(x);
      Type result = apply_subst(inst.theta, c.result_type());
      return {result, update(psi_ext, post_inst)};
    } catch (const ConjunctFailure& f) {
      failures.push_back("contract " + std::to_string(index + 1) + ": " + f.reason);
    }
  }

  std::string message = "no contract conjunct applies";
  for (const auto& f : failures) message += "\n  - " + f;
  fail("E-APPLY-NONE", message, call_span, "fapp");
}

// -- function literals -----------------------------------------------------------------------

Type Checker::check_function(const ConstraintSet& /*ambient*/, const TypingContext& ctx,
                             const FunctionLit& fn, SourceSpan span) {
  if (fn.contracts.empty())
    fail("E-UNANNOTATED", "function literal carries no contract", span, "fdecl");

  std::set<std::string> ctx_vars = ftv_of_ctx(ctx);

  for (const FunctionContract& declared_contract : fn.contracts) {
    note_contract_names(declared_contract);
    if (declared_contract.args.size() != fn.params.size())
      fail("E-ARITY",
           "contract declares " + std::to_string(declared_contract.args.size()) +
               " argument types for " + std::to_string(fn.params.size()) + " parameters",
           span, "fdecl");

    // Quantified names are binders: alpha-freshen any that collide with a
    // type variable free in the context, so the bound name cannot capture
    // an ambient object's variable.
    FunctionContract c = declared_contract;
    {
      TypeSubst freshen;
      for (auto& q : c.quantified) {
        if (!ctx_vars.count(q)) continue;
        std::string fresh = fresh_var();
        freshen.emplace(q, Type::var(fresh));
        q = fresh;
      }
      if (!freshen.empty()) {
        std::vector<Type> args;
        args.reserve(c.args.size());
        for (const auto& a : c.args) args.push_back(apply_subst(freshen, a));
        c = make_contract(c.quantified, apply_subst(freshen, c.pre), std::move(args),
                          apply_subst(freshen, c.result_type()),
                          apply_subst(freshen, c.post));
      }
    }

    TypingContext body_ctx = ctx;
    for (std::size_t i = 0; i < fn.params.size(); ++i) body_ctx[fn.params[i]] = c.args[i];

    // Body scope: locally fresh starts empty; contract-quantified argument
    // variables are not bot-extensible inside the body.
    std::set<std::string> saved_fresh;
    saved_fresh.swap(locally_fresh_);
    std::pair<Type, ConstraintSet> body;
    try {
      body = check_expr(c.pre, body_ctx, fn.body);
    } catch (CheckFailure& f) {
      locally_fresh_.swap(saved_fresh);
      f.diagnostics.push_back(make_error(
          "E-CONTRACT-BODY", "while checking the body against " + to_surface(c), span,
          "fdecl"));
      throw;
    }
    std::set<std::string> body_fresh;
    body_fresh.swap(locally_fresh_);
    locally_fresh_.swap(saved_fresh);

    auto& [body_type, body_post] = body;

    // Contract conformance. Objects the body created are matched to the
    // postcondition's new variables by first-appearance order.
    std::vector<std::string> body_new;
    for (const auto& [x, rec] : body_post.entries())
      if (!c.pre.has(x)) body_new.push_back(x);
    std::vector<std::string> contract_new;
    for (const auto& [x, rec] : c.post.entries())
      if (!c.pre.has(x)) contract_new.push_back(x);
    if (body_new.size() > contract_new.size())
      fail("E-CONTRACT-BODY",
           "the body creates " + std::to_string(body_new.size()) +
               " object(s) but the contract postcondition declares " +
               std::to_string(contract_new.size()) +
               "; constraints cannot be forgotten",
           span, "fdecl", to_text(c.post), to_text(body_post));

    std::vector<std::pair<std::string, std::string>> pairs;
    if (!body_new.empty()) {
      std::set<std::string> body_free = ftv(body_post);
      auto type_vars = ftv(body_type);
      body_free.insert(type_vars.begin(), type_vars.end());
      for (std::size_t i = 0; i < body_new.size(); ++i) {
        if (body_free.count(contract_new[i]))
          fail("E-CONTRACT-BODY",
               "cannot match the created object " + body_new[i] +
                   " to the postcondition variable " + contract_new[i] +
                   ", which the body already refers to",
               span, "fdecl");
        pairs.emplace_back(body_new[i], contract_new[i]);
      }
    }
    Renaming theta_b(pairs);
    ConstraintSet mapped_post = apply_renaming(theta_b, body_post);
    Type mapped_type = apply_renaming(theta_b, body_type);
    std::set<std::string> mapped_fresh;
    for (const auto& x : body_fresh) mapped_fresh.insert(theta_b.apply_name(x));

    ConstraintSet extended = bot_extend(mapped_post, c.post, mapped_fresh);
    if (auto why = explain_entailment_failure(extended, c.post))
      fail("E-CONTRACT-BODY",
           "the body's postcondition does not entail the contract's (" + *why + ")", span,
           "fdecl", to_text(c.post), to_text(extended));
    if (!entails(normalize(mapped_type), normalize(c.result_type())))
      fail("E-CONTRACT-BODY", "the body's result type does not entail the contract's", span,
           "fdecl", to_text(c.result_type()), to_text(mapped_type));

    // Generalization check: quantify exactly what (fdecl) would.
    std::set<std::string> required = contract_component_vars(c);
    std::set<std::string> ctx_vars = ftv_of_ctx(ctx);
    for (const auto& v : ctx_vars) required.erase(v);
    std::set<std::string> declared(c.quantified.begin(), c.quantified.end());
    if (required != declared)
      fail("E-CONTRACT-GEN",
           "contract must quantify exactly the variables not free in the context", span,
           "fdecl", "forall " + join_names(required), "forall " + join_names(declared));
  }

  return Type::functions(fn.contracts);
}

// -- drivers ------------------------------------------------------------------------------------

CheckResult check_with(const ConstraintSet& pre, const TypingContext& ctx, const ExprPtr& e) {
  CheckResult result;
  Diagnostics bad = validate(e);
  if (!bad.empty()) {
    result.diagnostics = std::move(bad);
    return result;
  }
  Checker checker;
  checker.note_names(ftv(pre));
  TypingContext mutable_ctx = ctx;
  for (const auto& [name, t] : ctx) checker.note_type_names(t);
  try {
    auto [t, post] = checker.check_expr(pre, mutable_ctx, e);
    // dom(pre) never shrinks: the checker cannot forget constraints.
    for (const auto& [x, rec] : pre.entries()) {
      if (!post.has(x)) {
        result.diagnostics.push_back(make_error(
            "E-INTERNAL", "postcondition lost the constraint on " + x, e->span, "let"));
        return result;
      }
    }
    // Variable/location correspondence: anything new in the postcondition
    // was introduced by (new) or a callee inside this expression.
    for (const auto& [x, rec] : post.entries()) {
      if (!pre.has(x) && !checker.locally_fresh().count(x)) {
        result.diagnostics.push_back(make_error(
            "E-INTERNAL", "postcondition names " + x + ", which nothing created", e->span,
            "new"));
        return result;
      }
    }
    result.judgment = Judgment{pre, ctx, e, t, post};
  } catch (const CheckFailure& f) {
    result.diagnostics = f.diagnostics;
  }
  return result;
}

CheckResult check_program(const ExprPtr& e) { return check_with({}, {}, e); }

}  // namespace lucretia
