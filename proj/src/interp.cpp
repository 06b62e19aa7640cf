#include "lucretia/interp.hpp"

#include <algorithm>
#include <cmath>

namespace lucretia {

std::string to_text(const Value& v) {
  if (auto* c = v.as_const()) return to_text(*c);
  if (v.as_function()) return "<func>";
  return "@l" + std::to_string(*v.as_location());
}

std::string runtime_type_name(const Value& v) {
  if (auto* c = v.as_const()) return to_text(type_of_const(*c));
  if (v.as_function()) return "func";
  return "loc";
}

std::optional<Value> value_of_atom(const ExprPtr& e) {
  if (auto* c = std::get_if<Expr::ConstAtom>(&e->node)) return Value::constant(c->value);
  if (auto* f = std::get_if<Expr::FuncAtom>(&e->node)) return Value::function(f->fn);
  if (auto* l = std::get_if<Expr::LocAtom>(&e->node)) return Value::location(l->id);
  return std::nullopt;
}

ExprPtr atom_of_value(const Value& v, SourceSpan span) {
  if (auto* c = v.as_const()) return const_expr(*c, span);
  if (auto* f = v.as_function()) return func_expr(*f, span);
  return loc_expr(*v.as_location(), span);
}

std::uint64_t Heap::allocate() {
  std::uint64_t loc = next_location++;
  objects.emplace(loc, ObjectRecord{});
  return loc;
}

const ObjectRecord* Heap::find(std::uint64_t loc) const {
  auto it = objects.find(loc);
  return it == objects.end() ? nullptr : &it->second;
}

std::string Heap::digest() const {
  std::string out = std::to_string(objects.size()) + " objects";
  if (!objects.empty()) out += ';';
  for (const auto& [loc, record] : objects) {
    out += " l" + std::to_string(loc) + ":{";
    bool first = true;
    for (const auto& [field, value] : record) {
      if (!first) out += ',';
      first = false;
      out += field;
    }
    out += '}';
  }
  return out;
}

const char* to_text(RuntimeErrorKind k) {
  switch (k) {
    case RuntimeErrorKind::MessageNotUnderstood: return "message-not-understood";
    case RuntimeErrorKind::TypeMismatch: return "type-mismatch";
    case RuntimeErrorKind::PrimOpError: return "primop-error";
    case RuntimeErrorKind::UnboundVariable: return "unbound-variable";
    case RuntimeErrorKind::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

// -- delta ---------------------------------------------------------------------

namespace {

RuntimeError op_error(std::string message, SourceSpan span) {
  return RuntimeError{RuntimeErrorKind::PrimOpError, std::move(message), span, {}};
}

struct Numeric {
  bool is_real = false;
  std::int64_t i = 0;
  double r = 0;

  double as_real() const { return is_real ? r : static_cast<double>(i); }
};

std::optional<Numeric> numeric_of(const Const& c, bool allow_bool) {
  if (auto* i = std::get_if<std::int64_t>(&c.value)) return Numeric{false, *i, 0};
  if (auto* r = std::get_if<double>(&c.value)) return Numeric{true, 0, *r};
  if (allow_bool) {
    if (auto* b = std::get_if<bool>(&c.value)) return Numeric{false, *b ? 1 : 0, 0};
  }
  return std::nullopt;
}

std::variant<Const, RuntimeError> arith(const std::string& op, const Const& a, const Const& b,
                                        bool allow_bool, SourceSpan span) {
  auto na = numeric_of(a, allow_bool);
  auto nb = numeric_of(b, allow_bool);
  if (!na || !nb)
    return op_error("operator '" + op + "' is undefined on " +
                        std::string(to_text(type_of_const(a))) + " and " +
                        to_text(type_of_const(b)),
                    span);
  if (na->is_real || nb->is_real) {
    double x = na->as_real();
    double y = nb->as_real();
    double out = op == "+" ? x + y : op == "-" ? x - y : x * y;
    return Const::real(out);
  }
  std::int64_t out = 0;
  bool overflow = false;
  if (op == "+")
    overflow = __builtin_add_overflow(na->i, nb->i, &out);
  else if (op == "-")
    overflow = __builtin_sub_overflow(na->i, nb->i, &out);
  else
    overflow = __builtin_mul_overflow(na->i, nb->i, &out);
  if (overflow) return op_error("integer overflow in '" + op + "'", span);
  return Const::integer(out);
}

}  // namespace

std::variant<Const, RuntimeError> delta(const std::string& op, const std::vector<Const>& args,
                                        SourceSpan span) {
  if (op == "not") {
    if (args.size() != 1) return op_error("'not' takes one operand", span);
    if (auto* b = std::get_if<bool>(&args[0].value)) return Const::boolean(!*b);
    return op_error(std::string("'not' is undefined on ") + to_text(type_of_const(args[0])), span);
  }
  if (args.size() != 2) return op_error("'" + op + "' takes two operands", span);
  const Const& a = args[0];
  const Const& b = args[1];
  if (op == "+") return arith(op, a, b, /*allow_bool=*/true, span);
  if (op == "-" || op == "*") return arith(op, a, b, /*allow_bool=*/false, span);
  if (op == "==" || op == "<") {
    if (type_of_const(a) != type_of_const(b))
      return op_error("'" + op + "' needs operands of one base type, got " +
                          std::string(to_text(type_of_const(a))) + " and " +
                          to_text(type_of_const(b)),
                      span);
    if (op == "==") return Const::boolean(a == b);
    switch (type_of_const(a)) {
      case BaseType::Int:
        return Const::boolean(std::get<std::int64_t>(a.value) <
                              std::get<std::int64_t>(b.value));
      case BaseType::Real:
        return Const::boolean(std::get<double>(a.value) < std::get<double>(b.value));
      case BaseType::String:
        return Const::boolean(std::get<std::string>(a.value) <
                              std::get<std::string>(b.value));
      default:
        return op_error(std::string("'<' is undefined on ") + to_text(type_of_const(a)), span);
    }
  }
  return op_error("unknown operator '" + op + "'", span);
}

// -- step ----------------------------------------------------------------------

namespace {

struct LetFrame {
  std::string name;
  ExprPtr body;
  SourceSpan span;
};

// Splits the control into its let spine and the focused redex.
ExprPtr decompose(const ExprPtr& control, std::vector<LetFrame>& frames) {
  ExprPtr cur = control;
  while (auto* let = std::get_if<Expr::Let>(&cur->node)) {
    if (is_value_atom(*let->bound)) break;  // Let-Reduce fires here
    frames.push_back({let->name, let->body, cur->span});
    cur = let->bound;
  }
  return cur;
}

ExprPtr reassemble(ExprPtr redex, const std::vector<LetFrame>& frames) {
  for (auto it = frames.rbegin(); it != frames.rend(); ++it)
    redex = let_expr(it->name, std::move(redex), it->body, it->span);
  return redex;
}

RuntimeError rt_error(RuntimeErrorKind kind, std::string message, SourceSpan span,
                      const Heap& heap) {
  return RuntimeError{kind, std::move(message), span, heap.digest()};
}

// Applies the unique rule at a non-let redex. Returns the replacement
// expression or an error; `heap` is updated in place.
struct RedexOutcome {
  std::variant<ExprPtr, RuntimeError> result;
  std::string rule;
};

RedexOutcome step_redex(Heap& heap, const ExprPtr& redex) {
  struct Visitor {
    Heap& heap;
    const ExprPtr& e;

    RedexOutcome operator()(const Expr::VarAtom& v) const {
      return {rt_error(RuntimeErrorKind::UnboundVariable,
                       "unbound variable '" + v.name + "'", e->span, heap),
              {}};
    }
    RedexOutcome operator()(const Expr::ConstAtom&) const { return stuck_value(); }
    RedexOutcome operator()(const Expr::FuncAtom&) const { return stuck_value(); }
    RedexOutcome operator()(const Expr::LocAtom&) const { return stuck_value(); }

    RedexOutcome stuck_value() const {
      // decompose never focuses a value unless the whole control is one;
      // step() handles that case before calling us.
      return {rt_error(RuntimeErrorKind::TypeMismatch, "internal: value in redex position",
                       e->span, heap),
              {}};
    }

    RedexOutcome operator()(const Expr::Let& l) const {
      // Let-Reduce: the bound expression is a value atom.
      Value v = *value_of_atom(l.bound);
      return {substitute(l.body, l.name, atom_of_value(v, l.bound->span)), "Let-Reduce"};
    }

    RedexOutcome operator()(const Expr::PrimOp& op) const {
      std::vector<Const> consts;
      consts.reserve(op.args.size());
      for (const auto& a : op.args) {
        auto v = value_of_atom(a);
        if (!v)
          return {rt_error(RuntimeErrorKind::UnboundVariable,
                           "unbound variable in operand", a->span, heap),
                  {}};
        const Const* c = v->as_const();
        if (!c)
          return {rt_error(RuntimeErrorKind::PrimOpError,
                           "operator '" + op.op + "' applied to a " + runtime_type_name(*v),
                           a->span, heap),
                  {}};
        consts.push_back(*c);
      }
      auto out = delta(op.op, consts, e->span);
      if (auto* err = std::get_if<RuntimeError>(&out)) {
        RuntimeError with_heap = *err;
        with_heap.heap_digest = heap.digest();
        return {with_heap, {}};
      }
      return {const_expr(std::get<Const>(out), e->span), "Op-Eval"};
    }

    RedexOutcome operator()(const Expr::New&) const {
      std::uint64_t loc = heap.allocate();
      return {loc_expr(loc, e->span), "New"};
    }

    RedexOutcome operator()(const Expr::GetField& g) const {
      auto v = value_of_atom(g.object);
      if (!v)
        return {rt_error(RuntimeErrorKind::UnboundVariable, "unbound variable in field access",
                         g.object->span, heap),
                {}};
      const std::uint64_t* loc = v->as_location();
      if (!loc)
        return {rt_error(RuntimeErrorKind::TypeMismatch,
                         "field access on a " + runtime_type_name(*v), e->span, heap),
                {}};
      const ObjectRecord* record = heap.find(*loc);
      auto it = record ? record->find(g.field) : ObjectRecord::const_iterator{};
      if (!record || it == record->end())
        return {rt_error(RuntimeErrorKind::MessageNotUnderstood,
                         "object @l" + std::to_string(*loc) + " has no field '" + g.field + "'",
                         e->span, heap),
                {}};
      return {atom_of_value(it->second, e->span), "GetAttr"};
    }

    RedexOutcome operator()(const Expr::SetField& s) const {
      auto obj = value_of_atom(s.object);
      auto val = value_of_atom(s.value);
      if (!obj || !val)
        return {rt_error(RuntimeErrorKind::UnboundVariable, "unbound variable in field update",
                         e->span, heap),
                {}};
      const std::uint64_t* loc = obj->as_location();
      if (!loc)
        return {rt_error(RuntimeErrorKind::TypeMismatch,
                         "field update on a " + runtime_type_name(*obj), e->span, heap),
                {}};
      auto it = heap.objects.find(*loc);
      if (it == heap.objects.end())
        return {rt_error(RuntimeErrorKind::TypeMismatch,
                         "dangling location @l" + std::to_string(*loc), e->span, heap),
                {}};
      it->second[s.field] = *val;
      return {atom_of_value(*val, e->span), "SetAttr"};
    }

    RedexOutcome operator()(const Expr::If& i) const {
      auto v = value_of_atom(i.cond);
      if (!v)
        return {rt_error(RuntimeErrorKind::UnboundVariable, "unbound variable in condition",
                         i.cond->span, heap),
                {}};
      const Const* c = v->as_const();
      const bool* b = c ? std::get_if<bool>(&c->value) : nullptr;
      if (!b)
        return {rt_error(RuntimeErrorKind::TypeMismatch,
                         "if condition is not a boolean", i.cond->span, heap),
                {}};
      return {*b ? i.then_branch : i.else_branch, *b ? "If-True" : "If-False"};
    }

    RedexOutcome operator()(const Expr::IfHasAttr& i) const {
      auto v = value_of_atom(i.object);
      if (!v)
        return {rt_error(RuntimeErrorKind::UnboundVariable, "unbound variable in ifhasattr",
                         i.object->span, heap),
                {}};
      const std::uint64_t* loc = v->as_location();
      if (!loc)
        return {rt_error(RuntimeErrorKind::TypeMismatch,
                         "ifhasattr on a " + runtime_type_name(*v), e->span, heap),
                {}};
      const ObjectRecord* record = heap.find(*loc);
      bool has = record && record->count(i.field);
      return {has ? i.then_branch : i.else_branch, has ? "Ifhtr-True" : "Ifhtr-False"};
    }

    RedexOutcome operator()(const Expr::App& a) const {
      auto callee = value_of_atom(a.callee);
      if (!callee)
        return {rt_error(RuntimeErrorKind::UnboundVariable, "unbound function variable",
                         a.callee->span, heap),
                {}};
      const FunctionLit* fn = callee->as_function();
      if (!fn)
        return {rt_error(RuntimeErrorKind::TypeMismatch,
                         "call of a " + runtime_type_name(*callee), e->span, heap),
                {}};
      if (fn->params.size() != a.args.size())
        return {rt_error(RuntimeErrorKind::TypeMismatch,
                         "arity mismatch: " + std::to_string(fn->params.size()) +
                             " parameters, " + std::to_string(a.args.size()) + " arguments",
                         e->span, heap),
                {}};
      std::vector<Value> values;
      values.reserve(a.args.size());
      for (const auto& arg : a.args) {
        auto v = value_of_atom(arg);
        if (!v)
          return {rt_error(RuntimeErrorKind::UnboundVariable, "unbound variable in argument",
                           arg->span, heap),
                  {}};
        values.push_back(*v);
      }
      // Simultaneous substitution of parameters by values (all closed).
      ExprPtr body = fn->body;
      for (std::size_t k = 0; k < values.size(); ++k)
        body = substitute(body, fn->params[k], atom_of_value(values[k], a.args[k]->span));
      return {body, "BetaV"};
    }
  };
  return std::visit(Visitor{heap, redex}, redex->node);
}

}  // namespace

StepOutcome step(Config c) {
  if (is_value_atom(*c.control))
    return {Halted{*value_of_atom(c.control)}, {}};
  std::vector<LetFrame> frames;
  ExprPtr redex = decompose(c.control, frames);
  RedexOutcome out = step_redex(c.heap, redex);
  if (auto* err = std::get_if<RuntimeError>(&out.result)) return {*err, {}};
  ExprPtr next = reassemble(std::get<ExprPtr>(out.result), frames);
  return {Config{std::move(c.heap), std::move(next)}, out.rule};
}

RunOutcome run(const ExprPtr& program, std::uint64_t fuel) {
  Config c{Heap{}, program};
  for (std::uint64_t used = 0; used < fuel; ++used) {
    if (is_value_atom(*c.control))
      return RunHalted{*value_of_atom(c.control), std::move(c.heap), used};
    StepOutcome out = step(std::move(c));
    if (auto* err = std::get_if<RuntimeError>(&out.result)) return *err;
    c = std::get<Config>(std::move(out.result));
  }
  if (is_value_atom(*c.control))
    return RunHalted{*value_of_atom(c.control), std::move(c.heap), fuel};
  return FuelExhausted{fuel};
}

TraceResult trace(const ExprPtr& program, std::uint64_t fuel) {
  TraceResult result{{}, FuelExhausted{fuel}};
  Config c{Heap{}, program};
  for (std::uint64_t used = 0; used < fuel; ++used) {
    if (is_value_atom(*c.control)) {
      result.outcome = RunHalted{*value_of_atom(c.control), std::move(c.heap), used};
      return result;
    }
    std::string before = pretty(c.control);
    StepOutcome out = step(std::move(c));
    if (auto* err = std::get_if<RuntimeError>(&out.result)) {
      result.outcome = *err;
      return result;
    }
    c = std::get<Config>(std::move(out.result));
    if (before.size() > 80) before = before.substr(0, 77) + "...";
    result.entries.push_back(
        TraceEntry{used + 1, out.rule, std::move(before), c.heap.objects.size()});
  }
  if (is_value_atom(*c.control))
    result.outcome = RunHalted{*value_of_atom(c.control), std::move(c.heap), fuel};
  return result;
}

std::string to_text(const TraceEntry& entry) {
  return "#" + std::to_string(entry.index) + " " + entry.rule + " | " + entry.control +
         " | heap: " + std::to_string(entry.heap_objects) + " objects";
}

// -- applicable_rules ------------------------------------------------------------

namespace {

bool all_value_atoms(const std::vector<ExprPtr>& exprs) {
  return std::all_of(exprs.begin(), exprs.end(),
                     [](const ExprPtr& e) { return is_value_atom(*e); });
}

void rules_at(const Heap& heap, const ExprPtr& e, std::vector<std::string>& out) {
  if (auto* let = std::get_if<Expr::Let>(&e->node)) {
    if (is_value_atom(*let->bound)) {
      out.push_back("Let-Reduce");
    } else {
      // Let-Propag applies exactly when the bound expression can step;
      // report the inner rule set so determinism is checked recursively.
      rules_at(heap, let->bound, out);
    }
    return;
  }
  if (auto* op = std::get_if<Expr::PrimOp>(&e->node)) {
    if (!all_value_atoms(op->args)) return;
    std::vector<Const> consts;
    for (const auto& a : op->args) {
      auto v = value_of_atom(a);
      if (!v || !v->as_const()) return;
      consts.push_back(*v->as_const());
    }
    if (std::holds_alternative<Const>(delta(op->op, consts))) out.push_back("Op-Eval");
    return;
  }
  if (std::holds_alternative<Expr::New>(e->node)) {
    out.push_back("New");
    return;
  }
  if (auto* g = std::get_if<Expr::GetField>(&e->node)) {
    auto v = value_of_atom(g->object);
    if (!v) return;
    const std::uint64_t* loc = v->as_location();
    if (!loc) return;
    const ObjectRecord* record = heap.find(*loc);
    if (record && record->count(g->field)) out.push_back("GetAttr");
    return;
  }
  if (auto* s = std::get_if<Expr::SetField>(&e->node)) {
    auto obj = value_of_atom(s->object);
    auto val = value_of_atom(s->value);
    if (obj && val && obj->as_location() && heap.find(*obj->as_location()))
      out.push_back("SetAttr");
    return;
  }
  if (auto* i = std::get_if<Expr::If>(&e->node)) {
    auto v = value_of_atom(i->cond);
    const Const* c = v ? v->as_const() : nullptr;
    const bool* b = c ? std::get_if<bool>(&c->value) : nullptr;
    if (b) out.push_back(*b ? "If-True" : "If-False");
    return;
  }
  if (auto* i = std::get_if<Expr::IfHasAttr>(&e->node)) {
    auto v = value_of_atom(i->object);
    if (!v) return;
    const std::uint64_t* loc = v->as_location();
    if (!loc) return;
    const ObjectRecord* record = heap.find(*loc);
    if (!record) return;
    out.push_back(record->count(i->field) ? "Ifhtr-True" : "Ifhtr-False");
    return;
  }
  if (auto* a = std::get_if<Expr::App>(&e->node)) {
    auto callee = value_of_atom(a->callee);
    if (!callee) return;
    const FunctionLit* fn = callee->as_function();
    if (fn && fn->params.size() == a->args.size() && all_value_atoms(a->args))
      out.push_back("BetaV");
    return;
  }
}

}  // namespace

std::vector<std::string> applicable_rules(const Config& c) {
  std::vector<std::string> out;
  if (is_value_atom(*c.control)) return out;
  rules_at(c.heap, c.control, out);
  return out;
}

}  // namespace lucretia
