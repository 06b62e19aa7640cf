#include "lucretia/ast.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>

namespace lucretia {

BaseType type_of_const(const Const& c) {
  struct Visitor {
    BaseType operator()(std::int64_t) const { return BaseType::Int; }
    BaseType operator()(double) const { return BaseType::Real; }
    BaseType operator()(bool) const { return BaseType::Bool; }
    BaseType operator()(const std::string&) const { return BaseType::String; }
    BaseType operator()(Const::Unit) const { return BaseType::Unit; }
  };
  return std::visit(Visitor{}, c.value);
}

std::string to_text(const Const& c) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string s = buf;
      if (s.find_first_of(".eEnN") == std::string::npos) s += ".0";
      return s;
    }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const {
      std::string out = "\"";
      for (char ch : v) {
        switch (ch) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\t': out += "\\t"; break;
          default: out += ch;
        }
      }
      out += '"';
      return out;
    }
    std::string operator()(Const::Unit) const { return "()"; }
  };
  return std::visit(Visitor{}, c.value);
}

std::string to_text(const Diagnostic& d) {
  std::string out = to_text(d.span);
  out += d.severity == Severity::Error ? ": error [" : ": warning [";
  out += d.code;
  out += "] ";
  out += d.message;
  if (!d.rule.empty()) out += " (rule " + d.rule + ")";
  if (d.expected) out += "\n  expected: " + *d.expected;
  if (d.actual) out += "\n  actual:   " + *d.actual;
  return out;
}

ExprPtr make_expr(Expr::Node node, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->span = span;
  e->node = std::move(node);
  return e;
}

ExprPtr var_expr(std::string name, SourceSpan span) {
  return make_expr(Expr::VarAtom{std::move(name)}, span);
}
ExprPtr const_expr(Const c, SourceSpan span) {
  return make_expr(Expr::ConstAtom{std::move(c)}, span);
}
ExprPtr func_expr(FunctionLit fn, SourceSpan span) {
  return make_expr(Expr::FuncAtom{std::move(fn)}, span);
}
ExprPtr loc_expr(std::uint64_t id, SourceSpan span) {
  return make_expr(Expr::LocAtom{id}, span);
}
ExprPtr primop_expr(std::string op, std::vector<ExprPtr> args, SourceSpan span) {
  return make_expr(Expr::PrimOp{std::move(op), std::move(args)}, span);
}
ExprPtr new_expr(SourceSpan span) { return make_expr(Expr::New{}, span); }
ExprPtr getfield_expr(ExprPtr object, std::string field, SourceSpan span) {
  return make_expr(Expr::GetField{std::move(object), std::move(field)}, span);
}
ExprPtr setfield_expr(ExprPtr object, std::string field, ExprPtr value, SourceSpan span) {
  return make_expr(Expr::SetField{std::move(object), std::move(field), std::move(value)}, span);
}
ExprPtr let_expr(std::string name, ExprPtr bound, ExprPtr body, SourceSpan span) {
  return make_expr(Expr::Let{std::move(name), std::move(bound), std::move(body)}, span);
}
ExprPtr if_expr(ExprPtr cond, ExprPtr t, ExprPtr e, SourceSpan span) {
  return make_expr(Expr::If{std::move(cond), std::move(t), std::move(e)}, span);
}
ExprPtr ifhasattr_expr(ExprPtr object, std::string field, ExprPtr t, ExprPtr e,
                       SourceSpan span) {
  return make_expr(
      Expr::IfHasAttr{std::move(object), std::move(field), std::move(t), std::move(e)}, span);
}
ExprPtr app_expr(ExprPtr callee, std::vector<ExprPtr> args, SourceSpan span) {
  return make_expr(Expr::App{std::move(callee), std::move(args)}, span);
}

bool is_atom(const Expr& e) {
  return std::holds_alternative<Expr::VarAtom>(e.node) ||
         std::holds_alternative<Expr::ConstAtom>(e.node) ||
         std::holds_alternative<Expr::FuncAtom>(e.node) ||
         std::holds_alternative<Expr::LocAtom>(e.node);
}

bool is_value_atom(const Expr& e) {
  return std::holds_alternative<Expr::ConstAtom>(e.node) ||
         std::holds_alternative<Expr::FuncAtom>(e.node) ||
         std::holds_alternative<Expr::LocAtom>(e.node);
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {"let",  "in",    "if",        "then",
                                              "else", "ifhasattr", "func",  "new",
                                              "true", "false", "not"};
  return words;
}

bool is_valid_ident(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  for (char ch : name)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  return reserved_words().count(name) == 0;
}

// -- validate -----------------------------------------------------------------

namespace {

void check_atom_position(const ExprPtr& e, const char* where, Diagnostics& out) {
  if (!is_atom(*e)) {
    out.push_back(make_error("E-VALIDATE-ANF",
                             std::string("non-atomic expression in ") + where +
                                 " position; expected a variable, constant or literal",
                             e->span));
  }
}

void check_ident(const std::string& name, SourceSpan span, Diagnostics& out) {
  // ANF temporaries ($t...) are legal internally even though the surface
  // grammar rejects them.
  std::string probe = name;
  if (probe.rfind("$t", 0) == 0) probe = "_" + probe.substr(1);
  if (!is_valid_ident(probe)) {
    out.push_back(
        make_error("E-VALIDATE-IDENT", "invalid or reserved identifier '" + name + "'", span));
  }
}

void validate_into(const ExprPtr& e, Diagnostics& out);

void validate_contracts(const FunctionLit& fn, SourceSpan span, Diagnostics& out) {
  if (fn.contracts.empty()) {
    out.push_back(make_error("E-UNANNOTATED",
                             "function literal carries no contract; checking is "
                             "annotation-driven",
                             span));
  }
  for (const auto& c : fn.contracts) {
    std::set<std::string> seen;
    for (const auto& x : c.quantified) {
      if (!seen.insert(x).second) {
        out.push_back(make_error("E-VALIDATE-CONTRACT",
                                 "contract quantifies '" + x + "' twice", span));
      }
    }
    if (c.args.size() != fn.params.size()) {
      out.push_back(make_error(
          "E-ARITY",
          "contract declares " + std::to_string(c.args.size()) + " argument types for " +
              std::to_string(fn.params.size()) + " parameters",
          span));
    }
  }
}

void validate_into(const ExprPtr& e, Diagnostics& out) {
  struct Visitor {
    const ExprPtr& e;
    Diagnostics& out;

    void operator()(const Expr::VarAtom& v) const { check_ident(v.name, e->span, out); }
    void operator()(const Expr::ConstAtom&) const {}
    void operator()(const Expr::FuncAtom& f) const {
      std::set<std::string> seen;
      for (const auto& p : f.fn.params) {
        check_ident(p, e->span, out);
        if (!seen.insert(p).second) {
          out.push_back(make_error("E-VALIDATE-DUP-PARAM",
                                   "duplicate parameter '" + p + "'", e->span));
        }
      }
      validate_contracts(f.fn, e->span, out);
      validate_into(f.fn.body, out);
    }
    void operator()(const Expr::LocAtom& l) const {
      out.push_back(make_error("E-VALIDATE-LOC",
                               "location @l" + std::to_string(l.id) +
                                   " may not occur in a source program",
                               e->span));
    }
    void operator()(const Expr::PrimOp& p) const {
      for (const auto& a : p.args) {
        check_atom_position(a, "operand", out);
        validate_into(a, out);
      }
    }
    void operator()(const Expr::New&) const {}
    void operator()(const Expr::GetField& g) const {
      check_atom_position(g.object, "field access", out);
      check_ident(g.field, e->span, out);
      validate_into(g.object, out);
    }
    void operator()(const Expr::SetField& s) const {
      check_atom_position(s.object, "field update", out);
      check_atom_position(s.value, "field update value", out);
      check_ident(s.field, e->span, out);
      validate_into(s.object, out);
      validate_into(s.value, out);
    }
    void operator()(const Expr::Let& l) const {
      check_ident(l.name, e->span, out);
      validate_into(l.bound, out);
      validate_into(l.body, out);
    }
    void operator()(const Expr::If& i) const {
      check_atom_position(i.cond, "condition", out);
      validate_into(i.cond, out);
      validate_into(i.then_branch, out);
      validate_into(i.else_branch, out);
    }
    void operator()(const Expr::IfHasAttr& i) const {
      check_atom_position(i.object, "ifhasattr scrutinee", out);
      check_ident(i.field, e->span, out);
      validate_into(i.object, out);
      validate_into(i.then_branch, out);
      validate_into(i.else_branch, out);
    }
    void operator()(const Expr::App& a) const {
      if (!std::holds_alternative<Expr::VarAtom>(a.callee->node) &&
          !std::holds_alternative<Expr::FuncAtom>(a.callee->node)) {
        out.push_back(make_error("E-VALIDATE-ANF",
                                 "callee must be a variable or a function literal",
                                 a.callee->span));
      }
      validate_into(a.callee, out);
      for (const auto& arg : a.args) {
        check_atom_position(arg, "argument", out);
        validate_into(arg, out);
      }
    }
  };
  std::visit(Visitor{e, out}, e->node);
}

}  // namespace

Diagnostics validate(const ExprPtr& e) {
  Diagnostics out;
  validate_into(e, out);
  return out;
}

// -- free names ---------------------------------------------------------------

namespace {

void free_into(const ExprPtr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  struct Visitor {
    const ExprPtr& e;
    std::set<std::string>& bound;
    std::set<std::string>& out;

    void operator()(const Expr::VarAtom& v) const {
      if (!bound.count(v.name)) out.insert(v.name);
    }
    void operator()(const Expr::ConstAtom&) const {}
    void operator()(const Expr::FuncAtom& f) const {
      std::vector<std::string> added;
      for (const auto& p : f.fn.params)
        if (bound.insert(p).second) added.push_back(p);
      free_into(f.fn.body, bound, out);
      for (const auto& p : added) bound.erase(p);
    }
    void operator()(const Expr::LocAtom&) const {}
    void operator()(const Expr::PrimOp& p) const {
      for (const auto& a : p.args) free_into(a, bound, out);
    }
    void operator()(const Expr::New&) const {}
    void operator()(const Expr::GetField& g) const { free_into(g.object, bound, out); }
    void operator()(const Expr::SetField& s) const {
      free_into(s.object, bound, out);
      free_into(s.value, bound, out);
    }
    void operator()(const Expr::Let& l) const {
      free_into(l.bound, bound, out);
      bool added = bound.insert(l.name).second;
      free_into(l.body, bound, out);
      if (added) bound.erase(l.name);
    }
    void operator()(const Expr::If& i) const {
      free_into(i.cond, bound, out);
      free_into(i.then_branch, bound, out);
      free_into(i.else_branch, bound, out);
    }
    void operator()(const Expr::IfHasAttr& i) const {
      free_into(i.object, bound, out);
      free_into(i.then_branch, bound, out);
      free_into(i.else_branch, bound, out);
    }
    void operator()(const Expr::App& a) const {
      free_into(a.callee, bound, out);
      for (const auto& arg : a.args) free_into(arg, bound, out);
    }
  };
  std::visit(Visitor{e, bound, out}, e->node);
}

}  // namespace

std::set<std::string> free_names(const ExprPtr& e) {
  std::set<std::string> bound, out;
  free_into(e, bound, out);
  return out;
}

// -- substitution ---------------------------------------------------------------

ExprPtr substitute(const ExprPtr& e, const std::string& name, const ExprPtr& value) {
  struct Visitor {
    const ExprPtr& e;
    const std::string& name;
    const ExprPtr& value;

    ExprPtr sub(const ExprPtr& x) const { return substitute(x, name, value); }

    ExprPtr operator()(const Expr::VarAtom& v) const {
      if (v.name != name) return e;
      auto copy = std::make_shared<Expr>(*value);
      copy->span = e->span;
      return copy;
    }
    ExprPtr operator()(const Expr::ConstAtom&) const { return e; }
    ExprPtr operator()(const Expr::FuncAtom& f) const {
      for (const auto& p : f.fn.params)
        if (p == name) return e;  // parameters shadow
      FunctionLit fn = f.fn;
      fn.body = sub(fn.body);
      return func_expr(std::move(fn), e->span);
    }
    ExprPtr operator()(const Expr::LocAtom&) const { return e; }
    ExprPtr operator()(const Expr::PrimOp& p) const {
      std::vector<ExprPtr> args;
      args.reserve(p.args.size());
      for (const auto& a : p.args) args.push_back(sub(a));
      return primop_expr(p.op, std::move(args), e->span);
    }
    ExprPtr operator()(const Expr::New&) const { return e; }
    ExprPtr operator()(const Expr::GetField& g) const {
      return getfield_expr(sub(g.object), g.field, e->span);
    }
    ExprPtr operator()(const Expr::SetField& s) const {
      return setfield_expr(sub(s.object), s.field, sub(s.value), e->span);
    }
    ExprPtr operator()(const Expr::Let& l) const {
      ExprPtr bound = sub(l.bound);
      ExprPtr body = l.name == name ? l.body : sub(l.body);
      return let_expr(l.name, std::move(bound), std::move(body), e->span);
    }
    ExprPtr operator()(const Expr::If& i) const {
      return if_expr(sub(i.cond), sub(i.then_branch), sub(i.else_branch), e->span);
    }
    ExprPtr operator()(const Expr::IfHasAttr& i) const {
      return ifhasattr_expr(sub(i.object), i.field, sub(i.then_branch), sub(i.else_branch),
                            e->span);
    }
    ExprPtr operator()(const Expr::App& a) const {
      std::vector<ExprPtr> args;
      args.reserve(a.args.size());
      for (const auto& arg : a.args) args.push_back(sub(arg));
      return app_expr(sub(a.callee), std::move(args), e->span);
    }
  };
  return std::visit(Visitor{e, name, value}, e->node);
}

// -- pretty --------------------------------------------------------------------

namespace {

void collect_idents(const ExprPtr& e, std::set<std::string>& out) {
  struct Visitor {
    const ExprPtr& e;
    std::set<std::string>& out;
    void operator()(const Expr::VarAtom& v) const { out.insert(v.name); }
    void operator()(const Expr::ConstAtom&) const {}
    void operator()(const Expr::FuncAtom& f) const {
      for (const auto& p : f.fn.params) out.insert(p);
      collect_idents(f.fn.body, out);
    }
    void operator()(const Expr::LocAtom&) const {}
    void operator()(const Expr::PrimOp& p) const {
      for (const auto& a : p.args) collect_idents(a, out);
    }
    void operator()(const Expr::New&) const {}
    void operator()(const Expr::GetField& g) const { collect_idents(g.object, out); }
    void operator()(const Expr::SetField& s) const {
      collect_idents(s.object, out);
      collect_idents(s.value, out);
    }
    void operator()(const Expr::Let& l) const {
      out.insert(l.name);
      collect_idents(l.bound, out);
      collect_idents(l.body, out);
    }
    void operator()(const Expr::If& i) const {
      collect_idents(i.cond, out);
      collect_idents(i.then_branch, out);
      collect_idents(i.else_branch, out);
    }
    void operator()(const Expr::IfHasAttr& i) const {
      collect_idents(i.object, out);
      collect_idents(i.then_branch, out);
      collect_idents(i.else_branch, out);
    }
    void operator()(const Expr::App& a) const {
      collect_idents(a.callee, out);
      for (const auto& arg : a.args) collect_idents(arg, out);
    }
  };
  std::visit(Visitor{e, out}, e->node);
}

struct Printer {
  std::set<std::string> used;
  std::map<std::string, std::string> temp_names;
  int next_temp = 0;

  std::string show_name(const std::string& name) {
    if (name.rfind('$', 0) != 0) return name;
    auto it = temp_names.find(name);
    if (it != temp_names.end()) return it->second;
    std::string fresh;
    do {
      fresh = "_t" + std::to_string(next_temp++);
    } while (used.count(fresh));
    used.insert(fresh);
    temp_names.emplace(name, fresh);
    return fresh;
  }

  bool needs_parens_as_bound(const Expr& e) const {
    return std::holds_alternative<Expr::Let>(e.node) ||
           std::holds_alternative<Expr::If>(e.node) ||
           std::holds_alternative<Expr::IfHasAttr>(e.node);
  }

  void print(const ExprPtr& e, std::string& out) {
    struct Visitor {
      Printer& p;
      const ExprPtr& e;
      std::string& out;

      void atom(const ExprPtr& a) { p.print(a, out); }

      void operator()(const Expr::VarAtom& v) { out += p.show_name(v.name); }
      void operator()(const Expr::ConstAtom& c) { out += to_text(c.value); }
      void operator()(const Expr::FuncAtom& f) {
        out += "func(";
        bool first = true;
        for (const auto& par : f.fn.params) {
          if (!first) out += ", ";
          first = false;
          out += p.show_name(par);
        }
        out += ") : ";
        first = true;
        for (const auto& c : f.fn.contracts) {
          if (!first) out += " & ";
          first = false;
          out += to_surface(c);
        }
        out += " { ";
        p.print(f.fn.body, out);
        out += " }";
      }
      void operator()(const Expr::LocAtom& l) { out += "@l" + std::to_string(l.id); }
      void operator()(const Expr::PrimOp& op) {
        if (op.op == "not") {
          out += "not ";
          atom(op.args[0]);
          return;
        }
        atom(op.args[0]);
        out += ' ';
        out += op.op;
        out += ' ';
        atom(op.args[1]);
      }
      void operator()(const Expr::New&) { out += "new"; }
      void operator()(const Expr::GetField& g) {
        atom(g.object);
        out += '.';
        out += g.field;
      }
      void operator()(const Expr::SetField& s) {
        atom(s.object);
        out += '.';
        out += s.field;
        out += " = ";
        atom(s.value);
      }
      void operator()(const Expr::Let& l) {
        out += "let ";
        out += p.show_name(l.name);
        out += " = ";
        bool parens = p.needs_parens_as_bound(*l.bound);
        if (parens) out += '(';
        p.print(l.bound, out);
        if (parens) out += ')';
        out += " in ";
        p.print(l.body, out);
      }
      void operator()(const Expr::If& i) {
        out += "if ";
        atom(i.cond);
        out += " then ";
        p.print(i.then_branch, out);
        out += " else ";
        p.print(i.else_branch, out);
      }
      void operator()(const Expr::IfHasAttr& i) {
        out += "ifhasattr(";
        atom(i.object);
        out += ", ";
        out += i.field;
        out += ") then ";
        p.print(i.then_branch, out);
        out += " else ";
        p.print(i.else_branch, out);
      }
      void operator()(const Expr::App& a) {
        atom(a.callee);
        out += '(';
        bool first = true;
        for (const auto& arg : a.args) {
          if (!first) out += ", ";
          first = false;
          atom(arg);
        }
        out += ')';
      }
    };
    std::visit(Visitor{*this, e, out}, e->node);
  }
};

}  // namespace

std::string pretty(const ExprPtr& e) {
  Printer p;
  collect_idents(e, p.used);
  std::string out;
  p.print(e, out);
  return out;
}

// -- alpha equivalence ----------------------------------------------------------

namespace {

bool alpha_eq(const ExprPtr& a, const ExprPtr& b, std::map<std::string, std::string>& env);

bool alpha_eq_binders(const ExprPtr& ba, const ExprPtr& bb,
                      const std::vector<std::pair<std::string, std::string>>& binders,
                      std::map<std::string, std::string>& env) {
  std::vector<std::pair<std::string, std::optional<std::string>>> saved;
  for (const auto& [na, nb] : binders) {
    auto it = env.find(na);
    saved.emplace_back(na, it == env.end() ? std::nullopt : std::optional(it->second));
    env[na] = nb;
  }
  bool ok = alpha_eq(ba, bb, env);
  for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
    if (it->second)
      env[it->first] = *it->second;
    else
      env.erase(it->first);
  }
  return ok;
}

bool contracts_equal(const std::vector<FunctionContract>& a,
                     const std::vector<FunctionContract>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (canonical_key(Type::functions({a[i]})) != canonical_key(Type::functions({b[i]})))
      return false;
  }
  return true;
}

bool alpha_eq(const ExprPtr& a, const ExprPtr& b, std::map<std::string, std::string>& env) {
  if (a->node.index() != b->node.index()) return false;
  if (auto* va = std::get_if<Expr::VarAtom>(&a->node)) {
    const auto& vb = std::get<Expr::VarAtom>(b->node);
    auto it = env.find(va->name);
    return it == env.end() ? va->name == vb.name : it->second == vb.name;
  }
  if (auto* ca = std::get_if<Expr::ConstAtom>(&a->node)) {
    return ca->value == std::get<Expr::ConstAtom>(b->node).value;
  }
  if (auto* fa = std::get_if<Expr::FuncAtom>(&a->node)) {
    const auto& fb = std::get<Expr::FuncAtom>(b->node);
    if (fa->fn.params.size() != fb.fn.params.size()) return false;
    if (!contracts_equal(fa->fn.contracts, fb.fn.contracts)) return false;
    std::vector<std::pair<std::string, std::string>> binders;
    for (std::size_t i = 0; i < fa->fn.params.size(); ++i)
      binders.emplace_back(fa->fn.params[i], fb.fn.params[i]);
    return alpha_eq_binders(fa->fn.body, fb.fn.body, binders, env);
  }
  if (auto* la = std::get_if<Expr::LocAtom>(&a->node)) {
    return la->id == std::get<Expr::LocAtom>(b->node).id;
  }
  if (auto* pa = std::get_if<Expr::PrimOp>(&a->node)) {
    const auto& pb = std::get<Expr::PrimOp>(b->node);
    if (pa->op != pb.op || pa->args.size() != pb.args.size()) return false;
    for (std::size_t i = 0; i < pa->args.size(); ++i)
      if (!alpha_eq(pa->args[i], pb.args[i], env)) return false;
    return true;
  }
  if (std::holds_alternative<Expr::New>(a->node)) return true;
  if (auto* ga = std::get_if<Expr::GetField>(&a->node)) {
    const auto& gb = std::get<Expr::GetField>(b->node);
    return ga->field == gb.field && alpha_eq(ga->object, gb.object, env);
  }
  if (auto* sa = std::get_if<Expr::SetField>(&a->node)) {
    const auto& sb = std::get<Expr::SetField>(b->node);
    return sa->field == sb.field && alpha_eq(sa->object, sb.object, env) &&
           alpha_eq(sa->value, sb.value, env);
  }
  if (auto* la = std::get_if<Expr::Let>(&a->node)) {
    const auto& lb = std::get<Expr::Let>(b->node);
    if (!alpha_eq(la->bound, lb.bound, env)) return false;
    return alpha_eq_binders(la->body, lb.body, {{la->name, lb.name}}, env);
  }
  if (auto* ia = std::get_if<Expr::If>(&a->node)) {
    const auto& ib = std::get<Expr::If>(b->node);
    return alpha_eq(ia->cond, ib.cond, env) &&
           alpha_eq(ia->then_branch, ib.then_branch, env) &&
           alpha_eq(ia->else_branch, ib.else_branch, env);
  }
  if (auto* ia = std::get_if<Expr::IfHasAttr>(&a->node)) {
    const auto& ib = std::get<Expr::IfHasAttr>(b->node);
    return ia->field == ib.field && alpha_eq(ia->object, ib.object, env) &&
           alpha_eq(ia->then_branch, ib.then_branch, env) &&
           alpha_eq(ia->else_branch, ib.else_branch, env);
  }
  const auto& aa = std::get<Expr::App>(a->node);
  const auto& ab = std::get<Expr::App>(b->node);
  if (aa.args.size() != ab.args.size()) return false;
  if (!alpha_eq(aa.callee, ab.callee, env)) return false;
  for (std::size_t i = 0; i < aa.args.size(); ++i)
    if (!alpha_eq(aa.args[i], ab.args[i], env)) return false;
  return true;
}

}  // namespace

bool alpha_equal(const ExprPtr& a, const ExprPtr& b) {
  std::map<std::string, std::string> env;
  return alpha_eq(a, b, env);
}

}  // namespace lucretia
