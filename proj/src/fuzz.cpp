#include "lucretia/fuzz.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "lucretia/checker.hpp"
#include "lucretia/interp.hpp"
#include "lucretia/parser.hpp"

namespace lucretia {

namespace {

// Generation-time approximation of one object's interface.
struct FieldState {
  bool maybe = false;       // possibly absent
  std::string base;         // "int", "string", "bool" or "obj:<var>"
};

struct ObjState {
  std::map<std::string, FieldState> fields;
};

using ObjRef = std::shared_ptr<ObjState>;

struct Binding {
  std::string kind;  // "int", "string", "bool", "obj"
  ObjRef obj;
};

struct GenEnv {
  std::vector<std::pair<std::string, Binding>> vars;
  int next_var = 0;

  std::string fresh() { return "v" + std::to_string(next_var++); }

  std::vector<std::string> of_kind(const std::string& kind) const {
    std::vector<std::string> out;
    for (const auto& [name, b] : vars)
      if (b.kind == kind) out.push_back(name);
    return out;
  }

  const Binding* find(const std::string& name) const {
    for (const auto& [n, b] : vars)
      if (n == name) return &b;
    return nullptr;
  }
};

class Generator {
 public:
  Generator(std::mt19937_64& rng, int depth) : rng_(rng), max_depth_(depth) {}

  ExprPtr program() {
    GenEnv env;
    return chain(env, max_depth_, 3 + static_cast<int>(rng_() % 4));
  }

 private:
  std::mt19937_64& rng_;
  int max_depth_;
  static constexpr const char* kFields[4] = {"m", "n", "a", "w"};

  std::uint64_t pick(std::uint64_t n) { return rng_() % n; }

  const char* field_name() { return kFields[pick(4)]; }

  ExprPtr const_of(const std::string& kind) {
    if (kind == "int") return const_expr(Const::integer(static_cast<std::int64_t>(pick(100))));
    if (kind == "string") {
      static const char* words[] = {"hi", "ok", "blue", "x"};
      return const_expr(Const::text(words[pick(4)]));
    }
    return const_expr(Const::boolean(pick(2) == 0));
  }

  // A value atom of the given kind: an in-scope variable or a constant.
  ExprPtr atom_of(GenEnv& env, const std::string& kind) {
    auto candidates = env.of_kind(kind);
    if (kind != "obj" && (candidates.empty() || pick(2) == 0)) return const_of(kind);
    if (candidates.empty()) return nullptr;
    return var_expr(candidates[pick(candidates.size())]);
  }

  // One let-bound statement; registers the binding it produces.
  ExprPtr statement(GenEnv& env, int depth, std::string& bound_name) {
    auto objs = env.of_kind("obj");
    bound_name = env.fresh();
    for (int attempt = 0; attempt < 8; ++attempt) {
      switch (pick(10)) {
        case 0:
        case 1: {  // new
          env.vars.emplace_back(bound_name, Binding{"obj", std::make_shared<ObjState>()});
          return new_expr();
        }
        case 2:
        case 3:
        case 4: {  // set a field
          if (objs.empty()) continue;
          const std::string& target = objs[pick(objs.size())];
          std::string field = field_name();
          std::string kind = pick(5) == 0 && objs.size() > 1 ? "obj" : "int";
          if (kind == "int" && pick(3) == 0) kind = pick(2) == 0 ? "string" : "bool";
          ExprPtr value = atom_of(env, kind);
          if (!value) continue;
          ObjRef obj = env.find(target)->obj;
          std::string base = kind;
          if (kind == "obj") {
            auto* v = std::get_if<Expr::VarAtom>(&value->node);
            base = "obj:" + v->name;
          }
          obj->fields[field] = FieldState{false, base};
          // The write's value is also the statement's value.
          Binding b;
          b.kind = kind;
          if (kind == "obj") b.obj = env.find(std::get<Expr::VarAtom>(value->node).name)->obj;
          env.vars.emplace_back(bound_name, b);
          return setfield_expr(var_expr(target), field, value);
        }
        case 5: {  // read a definitely-present field
          std::vector<std::pair<std::string, std::string>> readable;
          for (const auto& name : objs) {
            for (const auto& [f, st] : env.find(name)->obj->fields)
              if (!st.maybe) readable.emplace_back(name, f);
          }
          if (readable.empty()) continue;
          auto [target, field] = readable[pick(readable.size())];
          const FieldState& st = env.find(target)->obj->fields.at(field);
          Binding b;
          if (st.base.rfind("obj:", 0) == 0) {
            const Binding* aliased = env.find(st.base.substr(4));
            if (!aliased || !aliased->obj) continue;
            b.kind = "obj";
            b.obj = aliased->obj;
          } else {
            b.kind = st.base;
          }
          env.vars.emplace_back(bound_name, b);
          return getfield_expr(var_expr(target), field);
        }
        case 6: {  // conditional with joinable effects
          if (depth <= 0) continue;
          ExprPtr cond = atom_of(env, "bool");
          GenEnv then_env = clone(env);
          GenEnv else_env = clone(env);
          ExprPtr then_branch = chain(then_env, depth - 1, 1 + static_cast<int>(pick(2)));
          ExprPtr else_branch = chain(else_env, depth - 1, 1 + static_cast<int>(pick(2)));
          merge(env, then_env, else_env);
          env.vars.emplace_back(bound_name, Binding{"int", nullptr});
          return if_expr(cond, then_branch, else_branch);
        }
        case 7: {  // probe a maybe field
          std::vector<std::pair<std::string, std::string>> probeable;
          for (const auto& name : objs) {
            for (const auto& [f, st] : env.find(name)->obj->fields)
              if (st.maybe && st.base == "int") probeable.emplace_back(name, f);
          }
          if (probeable.empty()) continue;
          auto [target, field] = probeable[pick(probeable.size())];
          ExprPtr then_branch = getfield_expr(var_expr(target), field);
          ExprPtr else_branch = const_expr(Const::integer(0));
          env.vars.emplace_back(bound_name, Binding{"int", nullptr});
          return ifhasattr_expr(var_expr(target), field, then_branch, else_branch);
        }
        case 8: {  // call a template function
          if (objs.empty()) continue;
          const std::string& target = objs[pick(objs.size())];
          std::string field = field_name();
          ObjRef obj = env.find(target)->obj;
          if (pick(2) == 0) {
            // setter: [S, int;] => [int; S.<f>:int] { s.<f> = v }
            ExprPtr fn = setter_template(field);
            obj->fields[field] = FieldState{false, "int"};
            env.vars.emplace_back(bound_name, Binding{"int", nullptr});
            return app_expr(fn, {var_expr(target), const_of("int")});
          }
          // prober: [S; S.<f>:int|bot] => [int; S.<f>:int|bot]
          auto it = obj->fields.find(field);
          if (it != obj->fields.end() && it->second.base != "int") continue;
          ExprPtr fn = prober_template(field);
          obj->fields[field] = FieldState{true, "int"};
          env.vars.emplace_back(bound_name, Binding{"int", nullptr});
          return app_expr(fn, {var_expr(target)});
        }
        default: {  // arithmetic
          ExprPtr a = atom_of(env, "int");
          ExprPtr b = atom_of(env, "int");
          env.vars.emplace_back(bound_name, Binding{"int", nullptr});
          return primop_expr("+", {a, b});
        }
      }
    }
    env.vars.emplace_back(bound_name, Binding{"int", nullptr});
    return const_expr(Const::integer(static_cast<std::int64_t>(pick(10))));
  }

  ExprPtr chain(GenEnv& env, int depth, int statements) {
    if (statements <= 0) return final_atom(env);
    std::string name;
    ExprPtr stmt = statement(env, depth, name);
    ExprPtr rest = chain(env, depth, statements - 1);
    return let_expr(name, stmt, rest);
  }

  ExprPtr final_atom(GenEnv& env) {
    auto ints = env.of_kind("int");
    if (!ints.empty() && pick(2) == 0) return var_expr(ints[pick(ints.size())]);
    return const_of("int");
  }

  static GenEnv clone(const GenEnv& env) {
    GenEnv out;
    out.next_var = env.next_var;
    std::map<const ObjState*, ObjRef> copies;
    for (const auto& [name, b] : env.vars) {
      Binding nb;
      nb.kind = b.kind;
      if (b.obj) {
        auto it = copies.find(b.obj.get());
        if (it == copies.end())
          it = copies.emplace(b.obj.get(), std::make_shared<ObjState>(*b.obj)).first;
        nb.obj = it->second;
      }
      out.vars.emplace_back(name, nb);
    }
    return out;
  }

  // Re-joins the branch environments into env, mirroring the checker's join.
  static void merge(GenEnv& env, const GenEnv& then_env, const GenEnv& else_env) {
    for (auto& [name, b] : env.vars) {
      if (!b.obj) continue;
      const Binding* tb = then_env.find(name);
      const Binding* eb = else_env.find(name);
      if (!tb || !eb || !tb->obj || !eb->obj) continue;
      std::map<std::string, FieldState> joined;
      std::set<std::string> names;
      for (const auto& [f, st] : tb->obj->fields) names.insert(f);
      for (const auto& [f, st] : eb->obj->fields) names.insert(f);
      for (const auto& f : names) {
        auto ti = tb->obj->fields.find(f);
        auto ei = eb->obj->fields.find(f);
        if (ti != tb->obj->fields.end() && ei != eb->obj->fields.end()) {
          FieldState st = ti->second;
          st.maybe = st.maybe || ei->second.maybe || st.base != ei->second.base;
          if (ti->second.base != ei->second.base) st.base = "mixed";
          joined[f] = st;
        } else {
          FieldState st = ti != tb->obj->fields.end() ? ti->second : ei->second;
          st.maybe = true;
          joined[f] = st;
        }
      }
      b.obj->fields = std::move(joined);
    }
    env.next_var = std::max(then_env.next_var, else_env.next_var);
  }

  ExprPtr setter_template(const std::string& field) {
    auto parsed = parse_contract("[S, int; ] => [int; S." + field + ":int]");
    FunctionLit fn;
    fn.params = {"s", "v"};
    fn.contracts = {std::get<FunctionContract>(parsed)};
    fn.body = setfield_expr(var_expr("s"), field, var_expr("v"));
    return func_expr(std::move(fn));
  }

  ExprPtr prober_template(const std::string& field) {
    auto parsed =
        parse_contract("[S; S." + field + ":int|bot] => [int; S." + field + ":int|bot]");
    FunctionLit fn;
    fn.params = {"s"};
    fn.contracts = {std::get<FunctionContract>(parsed)};
    fn.body = ifhasattr_expr(var_expr("s"), field, getfield_expr(var_expr("s"), field),
                             const_expr(Const::integer(0)));
    return func_expr(std::move(fn));
  }
};

bool is_safety_violation(const RuntimeError& err) {
  switch (err.kind) {
    case RuntimeErrorKind::MessageNotUnderstood:
    case RuntimeErrorKind::TypeMismatch:
    case RuntimeErrorKind::UnboundVariable: return true;
    default: return false;
  }
}

std::optional<std::string> violation_of(const ExprPtr& program, std::uint64_t fuel) {
  RunOutcome out = run(program, fuel);
  if (auto* err = std::get_if<RuntimeError>(&out)) {
    if (is_safety_violation(*err))
      return std::string(to_text(err->kind)) + ": " + err->message;
  }
  return std::nullopt;
}

// Greedy structural shrink: replace subtrees by `0` or a let by its body,
// keeping the program closed, checker-accepted and still crashing.
class Shrinker {
 public:
  explicit Shrinker(std::uint64_t fuel) : fuel_(fuel) {}

  ExprPtr shrink(ExprPtr program) {
    bool progress = true;
    int budget = 200;
    while (progress && budget-- > 0) {
      progress = false;
      std::vector<ExprPtr> candidates = rewrites(program);
      for (const ExprPtr& candidate : candidates) {
        if (!still_fails(candidate)) continue;
        program = candidate;
        progress = true;
        break;
      }
    }
    return program;
  }

 private:
  std::uint64_t fuel_;

  bool still_fails(const ExprPtr& candidate) const {
    if (!free_names(candidate).empty()) return false;
    if (!validate(candidate).empty()) return false;
    if (!check_program(candidate).ok()) return false;
    return violation_of(candidate, fuel_).has_value();
  }

  // All single-node rewrites, outermost first.
  std::vector<ExprPtr> rewrites(const ExprPtr& e) const {
    std::vector<ExprPtr> out;
    if (auto* let = std::get_if<Expr::Let>(&e->node)) {
      out.push_back(let->body);
      std::vector<ExprPtr> bound_rewrites = rewrites(let->bound);
      for (const auto& r : bound_rewrites)
        out.push_back(let_expr(let->name, r, let->body, e->span));
      std::vector<ExprPtr> body_rewrites = rewrites(let->body);
      for (const auto& r : body_rewrites)
        out.push_back(let_expr(let->name, let->bound, r, e->span));
      return out;
    }
    if (!is_atom(*e)) out.push_back(const_expr(Const::integer(0), e->span));
    if (auto* i = std::get_if<Expr::If>(&e->node)) {
      out.push_back(i->then_branch);
      out.push_back(i->else_branch);
    }
    if (auto* i = std::get_if<Expr::IfHasAttr>(&e->node)) {
      out.push_back(i->then_branch);
      out.push_back(i->else_branch);
    }
    return out;
  }
};

}  // namespace

ExprPtr generate_program(std::mt19937_64& rng, int depth) {
  Generator g(rng, depth);
  return g.program();
}

FuzzReport run_fuzz(const FuzzOptions& options) {
  FuzzReport report;
  report.options = options;
  std::mt19937_64 rng(options.seed);
  for (int i = 0; i < options.count; ++i) {
    ExprPtr program = generate_program(rng, options.depth);
    ++report.generated;
    CheckResult checked = check_program(program);
    if (!checked.ok()) {
      ++report.rejected;
      continue;
    }
    ++report.accepted;
    auto violation = violation_of(program, options.fuel);
    if (!violation) continue;
    FuzzViolation v;
    v.index = i;
    v.error = *violation;
    v.program = pretty(program);
    v.minimized = pretty(Shrinker(options.fuel).shrink(program));
    report.violations.push_back(std::move(v));
  }
  return report;
}

std::string to_text(const FuzzReport& report) {
  std::string out = "fuzz seed=" + std::to_string(report.options.seed) +
                    " count=" + std::to_string(report.options.count) +
                    " depth=" + std::to_string(report.options.depth) +
                    " fuel=" + std::to_string(report.options.fuel) + "\n";
  out += "generated=" + std::to_string(report.generated) +
         " accepted=" + std::to_string(report.accepted) +
         " rejected=" + std::to_string(report.rejected) +
         " violations=" + std::to_string(report.violations.size()) + "\n";
  for (const auto& v : report.violations) {
    out += "violation #" + std::to_string(v.index) + ": " + v.error + "\n";
    out += "  program:   " + v.program + "\n";
    out += "  minimized: " + v.minimized + "\n";
  }
  return out;
}

}  // namespace lucretia
