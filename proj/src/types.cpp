#include "lucretia/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace lucretia {

const char* to_text(BaseType b) {
  switch (b) {
    case BaseType::Bool: return "bool";
    case BaseType::Int: return "int";
    case BaseType::Real: return "real";
    case BaseType::String: return "string";
    case BaseType::Unit: return "unit";
  }
  return "?";
}

// -- FieldType ---------------------------------------------------------------

FieldType::FieldType() : kind_(Kind::Absent) {}

FieldType FieldType::present(Type t) {
  FieldType q;
  q.kind_ = Kind::Present;
  q.payload_ = std::make_shared<const Type>(std::move(t));
  return q;
}

FieldType FieldType::absent() { return FieldType(); }

FieldType FieldType::maybe(Type t) {
  FieldType q;
  q.kind_ = Kind::Maybe;
  q.payload_ = std::make_shared<const Type>(std::move(t));
  return q;
}

const Type& FieldType::payload() const {
  if (!payload_) throw std::logic_error("FieldType::payload on bot");
  return *payload_;
}

// -- RecordType / ConstraintSet ----------------------------------------------

const FieldType* RecordType::find(const std::string& name) const {
  auto it = fields.find(name);
  return it == fields.end() ? nullptr : &it->second;
}

ConstraintSet::ConstraintSet(std::initializer_list<Entry> entries) {
  for (const auto& e : entries) set(e.first, e.second);
}

bool ConstraintSet::has(const std::string& var) const { return find(var) != nullptr; }

const RecordType* ConstraintSet::find(const std::string& var) const {
  for (const auto& [name, rec] : entries_)
    if (name == var) return &rec;
  return nullptr;
}

void ConstraintSet::set(const std::string& var, RecordType rec) {
  for (auto& [name, r] : entries_) {
    if (name == var) {
      r = std::move(rec);
      return;
    }
  }
  entries_.emplace_back(var, std::move(rec));
}

bool ConstraintSet::erase(const std::string& var) {
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->first == var) {
      entries_.erase(it);
      return true;
    }
  }
  return false;
}

std::vector<std::string> ConstraintSet::dom() const {
  std::vector<std::string> names;
  names.reserve(entries_.size());
  for (const auto& [name, rec] : entries_) names.push_back(name);
  return names;
}

FunctionContract make_contract(std::vector<std::string> quantified, ConstraintSet pre,
                               std::vector<Type> args, Type result, ConstraintSet post) {
  FunctionContract c;
  c.quantified = std::move(quantified);
  c.pre = std::move(pre);
  c.args = std::move(args);
  c.result = std::make_shared<const Type>(std::move(result));
  c.post = std::move(post);
  return c;
}

// -- Type --------------------------------------------------------------------

Type::Type() : Type(Node{Base{BaseType::Unit}}) {}
Type::Type(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

Type Type::base(BaseType b) { return Type(Node{Base{b}}); }
Type Type::var(std::string name) { return Type(Node{Var{std::move(name)}}); }

Type Type::functions(std::vector<FunctionContract> contracts) {
  if (contracts.empty()) throw std::invalid_argument("function type needs >= 1 contract");
  return Type(Node{Functions{std::move(contracts)}});
}

bool Type::is_base() const { return std::holds_alternative<Base>(*node_); }
bool Type::is_var() const { return std::holds_alternative<Var>(*node_); }
bool Type::is_functions() const { return std::holds_alternative<Functions>(*node_); }
bool Type::is_union() const { return std::holds_alternative<Union>(*node_); }

std::optional<BaseType> Type::as_base() const {
  if (auto* b = std::get_if<Base>(node_.get())) return b->base;
  return std::nullopt;
}

const std::string* Type::as_var() const {
  if (auto* v = std::get_if<Var>(node_.get())) return &v->name;
  return nullptr;
}

const std::vector<FunctionContract>* Type::as_functions() const {
  if (auto* f = std::get_if<Functions>(node_.get())) return &f->contracts;
  return nullptr;
}

const std::vector<Type>* Type::as_union() const {
  if (auto* u = std::get_if<Union>(node_.get())) return &u->members;
  return nullptr;
}

// -- ftv ---------------------------------------------------------------------

namespace {

void collect_ftv(const Type& t, std::set<std::string>& out);

void collect_ftv(const FieldType& q, std::set<std::string>& out) {
  if (!q.is_absent()) collect_ftv(q.payload(), out);
}

void collect_ftv(const RecordType& r, std::set<std::string>& out) {
  for (const auto& [name, q] : r.fields) collect_ftv(q, out);
}

void collect_ftv(const ConstraintSet& psi, std::set<std::string>& out) {
  for (const auto& [var, rec] : psi.entries()) {
    out.insert(var);
    collect_ftv(rec, out);
  }
}

void collect_ftv(const FunctionContract& c, std::set<std::string>& out) {
  std::set<std::string> inner;
  for (const auto& a : c.args) collect_ftv(a, inner);
  collect_ftv(c.pre, inner);
  collect_ftv(c.result_type(), inner);
  collect_ftv(c.post, inner);
  for (const auto& x : c.quantified) inner.erase(x);
  out.insert(inner.begin(), inner.end());
}

void collect_ftv(const Type& t, std::set<std::string>& out) {
  if (auto* v = t.as_var()) {
    out.insert(*v);
  } else if (auto* fs = t.as_functions()) {
    for (const auto& c : *fs) collect_ftv(c, out);
  } else if (auto* u = t.as_union()) {
    for (const auto& m : *u) collect_ftv(m, out);
  }
}

}  // namespace

std::set<std::string> ftv(const Type& t) {
  std::set<std::string> out;
  collect_ftv(t, out);
  return out;
}
std::set<std::string> ftv(const FieldType& q) {
  std::set<std::string> out;
  collect_ftv(q, out);
  return out;
}
std::set<std::string> ftv(const RecordType& r) {
  std::set<std::string> out;
  collect_ftv(r, out);
  return out;
}
std::set<std::string> ftv(const ConstraintSet& psi) {
  std::set<std::string> out;
  collect_ftv(psi, out);
  return out;
}
std::set<std::string> ftv(const FunctionContract& c) {
  std::set<std::string> out;
  collect_ftv(c, out);
  return out;
}

// -- canonical key -----------------------------------------------------------

namespace {

// Alpha-normalization environment: quantified names -> positional names.
using AlphaEnv = std::map<std::string, std::string>;

int rank_of(const Type& t) {
  if (t.is_base()) return 0;
  if (t.is_var()) return 1;
  if (t.is_functions()) return 2;
  return 3;
}

void key_of(const Type& t, const AlphaEnv& env, std::string& out);

void key_of(const FieldType& q, const AlphaEnv& env, std::string& out) {
  switch (q.kind()) {
    case FieldType::Kind::Absent: out += "bot"; break;
    case FieldType::Kind::Present: key_of(q.payload(), env, out); break;
    case FieldType::Kind::Maybe:
      key_of(q.payload(), env, out);
      out += " | bot";
      break;
  }
}

void key_of(const RecordType& r, const AlphaEnv& env, std::string& out) {
  out += '{';
  bool first = true;
  for (const auto& [name, q] : r.fields) {
    if (!first) out += ", ";
    first = false;
    out += name;
    out += ": ";
    key_of(q, env, out);
  }
  out += '}';
}

void key_of(const ConstraintSet& psi, const AlphaEnv& env, std::string& out) {
  bool first = true;
  for (const auto& [var, rec] : psi.entries()) {
    if (!first) out += ", ";
    first = false;
    auto it = env.find(var);
    out += it == env.end() ? var : it->second;
    out += " <# ";
    key_of(rec, env, out);
  }
}

void key_of(const FunctionContract& c, const AlphaEnv& env, std::string& out) {
  AlphaEnv inner = env;
  int i = 0;
  for (const auto& x : c.quantified) inner[x] = "%" + std::to_string(i++);
  out += "forall ";
  out += std::to_string(c.quantified.size());
  out += ". [";
  key_of(c.pre, inner, out);
  out += "; ";
  bool first = true;
  for (const auto& a : c.args) {
    if (!first) out += ", ";
    first = false;
    key_of(a, inner, out);
  }
  out += "] => [";
  key_of(c.result_type(), inner, out);
  out += "; ";
  key_of(c.post, inner, out);
  out += ']';
}

void key_of(const Type& t, const AlphaEnv& env, std::string& out) {
  if (auto b = t.as_base()) {
    out += to_text(*b);
  } else if (auto* v = t.as_var()) {
    auto it = env.find(*v);
    out += it == env.end() ? *v : it->second;
  } else if (auto* fs = t.as_functions()) {
    out += '(';
    bool first = true;
    for (const auto& c : *fs) {
      if (!first) out += " & ";
      first = false;
      key_of(c, env, out);
    }
    out += ')';
  } else if (auto* u = t.as_union()) {
    bool first = true;
    for (const auto& m : *u) {
      if (!first) out += " | ";
      first = false;
      key_of(m, env, out);
    }
  }
}

}  // namespace

std::string canonical_key(const Type& t) {
  std::string out;
  key_of(normalize(t), {}, out);
  return out;
}

std::string canonical_key(const FieldType& q) {
  std::string out;
  key_of(normalize(q), {}, out);
  return out;
}

bool equal(const Type& a, const Type& b) { return canonical_key(a) == canonical_key(b); }
bool equal(const FieldType& a, const FieldType& b) {
  return canonical_key(a) == canonical_key(b);
}

bool equal(const RecordType& a, const RecordType& b) {
  if (a.fields.size() != b.fields.size()) return false;
  auto ia = a.fields.begin();
  auto ib = b.fields.begin();
  for (; ia != a.fields.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !equal(ia->second, ib->second)) return false;
  }
  return true;
}

bool equal(const ConstraintSet& a, const ConstraintSet& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [var, rec] : a.entries()) {
    const RecordType* other = b.find(var);
    if (!other || !equal(rec, *other)) return false;
  }
  return true;
}

// -- normalize ---------------------------------------------------------------

namespace {

FunctionContract normalize_contract(const FunctionContract& c) {
  std::vector<Type> args;
  args.reserve(c.args.size());
  for (const auto& a : c.args) args.push_back(normalize(a));
  auto norm_set = [](const ConstraintSet& psi) {
    ConstraintSet out;
    for (const auto& [var, rec] : psi.entries()) {
      RecordType nr;
      for (const auto& [name, q] : rec.fields) nr.fields.emplace(name, normalize(q));
      out.set(var, std::move(nr));
    }
    return out;
  };
  return make_contract(c.quantified, norm_set(c.pre), std::move(args),
                       normalize(c.result_type()), norm_set(c.post));
}

void flatten_into(const Type& t, std::vector<Type>& members) {
  if (auto* u = t.as_union()) {
    for (const auto& m : *u) flatten_into(m, members);
  } else {
    members.push_back(t);
  }
}

}  // namespace

Type normalize(const Type& t) {
  if (t.is_base() || t.is_var()) return t;
  if (auto* fs = t.as_functions()) {
    std::vector<FunctionContract> contracts;
    contracts.reserve(fs->size());
    for (const auto& c : *fs) contracts.push_back(normalize_contract(c));
    return Type::functions(std::move(contracts));
  }
  std::vector<Type> flat;
  flatten_into(t, flat);
  for (auto& m : flat) m = normalize(m);
  return Type::union_of(std::move(flat));
}

Type Type::union_of(std::vector<Type> members) {
  std::vector<Type> flat;
  for (const auto& m : members) flatten_into(m, flat);
  if (flat.empty()) throw std::invalid_argument("empty union");
  // Dedupe and sort by (rank, canonical key); keys of members are computed
  // without further normalization to avoid recursion surprises.
  std::vector<std::pair<std::pair<int, std::string>, Type>> keyed;
  keyed.reserve(flat.size());
  for (const auto& m : flat) {
    std::string k;
    key_of(m, {}, k);
    keyed.emplace_back(std::make_pair(rank_of(m), std::move(k)), m);
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  if (keyed.size() == 1) return keyed.front().second;
  std::vector<Type> result;
  result.reserve(keyed.size());
  for (auto& [k, m] : keyed) result.push_back(std::move(m));
  return Type(Node{Union{std::move(result)}});
}

FieldType normalize(const FieldType& q) {
  switch (q.kind()) {
    case FieldType::Kind::Absent: return q;
    case FieldType::Kind::Present: return FieldType::present(normalize(q.payload()));
    case FieldType::Kind::Maybe: return FieldType::maybe(normalize(q.payload()));
  }
  return q;
}

// -- display rendering -------------------------------------------------------

std::string to_text(const Type& t) {
  std::string out;
  key_of(t, {}, out);
  return out;
}

std::string to_text(const FieldType& q) {
  std::string out;
  key_of(q, {}, out);
  return out;
}

std::string to_text(const RecordType& r) {
  std::string out;
  key_of(r, {}, out);
  return out;
}

std::string to_text(const ConstraintSet& psi) {
  if (psi.empty()) return "(empty)";
  std::string out;
  key_of(psi, {}, out);
  return out;
}

std::string to_text(const FunctionContract& c) {
  std::string out;
  key_of(c, {}, out);
  return out;
}

// -- surface rendering (reparseable) ------------------------------------------

namespace {

void surface_type(const Type& t, const std::set<std::string>& free, std::string& out);

void surface_field(const FieldType& q, const std::set<std::string>& free, std::string& out) {
  switch (q.kind()) {
    case FieldType::Kind::Absent: out += "bot"; break;
    case FieldType::Kind::Present: surface_type(q.payload(), free, out); break;
    case FieldType::Kind::Maybe:
      surface_type(q.payload(), free, out);
      out += " | bot";
      break;
  }
}

void surface_items(const ConstraintSet& psi, const std::set<std::string>& free,
                   std::string& out) {
  bool first = true;
  for (const auto& [var, rec] : psi.entries()) {
    std::string shown = free.count(var) ? "^" + var : var;
    if (rec.fields.empty()) {
      if (!first) out += ", ";
      first = false;
      out += shown;
      continue;
    }
    for (const auto& [name, q] : rec.fields) {
      if (!first) out += ", ";
      first = false;
      out += shown;
      out += '.';
      out += name;
      out += ':';
      surface_field(q, free, out);
    }
  }
}

void surface_contract(const FunctionContract& c, std::string& out) {
  std::set<std::string> free = ftv(c);
  out += '[';
  bool first = true;
  for (const auto& a : c.args) {
    if (!first) out += ", ";
    first = false;
    surface_type(a, free, out);
  }
  out += "; ";
  surface_items(c.pre, free, out);
  out += "] => [";
  surface_type(c.result_type(), free, out);
  out += "; ";
  surface_items(c.post, free, out);
  out += ']';
}

void surface_type(const Type& t, const std::set<std::string>& free, std::string& out) {
  if (auto b = t.as_base()) {
    out += to_text(*b);
  } else if (auto* v = t.as_var()) {
    if (free.count(*v)) out += '^';
    out += *v;
  } else if (auto* fs = t.as_functions()) {
    out += '(';
    bool first = true;
    for (const auto& c : *fs) {
      if (!first) out += " & ";
      first = false;
      surface_contract(c, out);
    }
    out += ')';
  } else if (auto* u = t.as_union()) {
    bool first = true;
    for (const auto& m : *u) {
      if (!first) out += " | ";
      first = false;
      surface_type(m, free, out);
    }
  }
}

}  // namespace

std::string to_surface(const FunctionContract& c) {
  std::string out;
  surface_contract(c, out);
  return out;
}

std::string to_surface_type(const Type& t) {
  std::string out;
  surface_type(t, ftv(t), out);
  return out;
}

// -- renaming ----------------------------------------------------------------

Renaming::Renaming(std::vector<std::pair<std::string, std::string>> pairs) {
  std::set<std::string> targets;
  for (auto& [from, to] : pairs) {
    if (map_.count(from))
      throw std::invalid_argument("renaming maps " + from + " twice");
    if (!targets.insert(to).second)
      throw std::invalid_argument("renaming is not injective on " + to);
    map_.emplace(std::move(from), std::move(to));
  }
}

const std::string* Renaming::find(const std::string& name) const {
  auto it = map_.find(name);
  return it == map_.end() ? nullptr : &it->second;
}

std::string Renaming::apply_name(const std::string& name) const {
  const std::string* to = find(name);
  return to ? *to : name;
}

std::set<std::string> Renaming::dom() const {
  std::set<std::string> out;
  for (const auto& [from, to] : map_) out.insert(from);
  return out;
}

std::set<std::string> Renaming::img() const {
  std::set<std::string> out;
  for (const auto& [from, to] : map_) out.insert(to);
  return out;
}

Renaming Renaming::inverse() const {
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(map_.size());
  for (const auto& [from, to] : map_) pairs.emplace_back(to, from);
  return Renaming(std::move(pairs));
}

bool parallel_ok(const std::set<std::string>& a, const Renaming& theta) {
  for (const auto& y : theta.img()) {
    if (!theta.find(y) && a.count(y)) return false;
  }
  return true;
}

// Renaming application is substitution restricted to variable targets.
namespace {

TypeSubst to_subst(const Renaming& theta) {
  TypeSubst s;
  for (const auto& x : theta.dom()) s.emplace(x, Type::var(*theta.find(x)));
  return s;
}

}  // namespace

Type apply_renaming(const Renaming& theta, const Type& t) {
  return apply_subst(to_subst(theta), t);
}
FieldType apply_renaming(const Renaming& theta, const FieldType& q) {
  return apply_subst(to_subst(theta), q);
}
RecordType apply_renaming(const Renaming& theta, const RecordType& r) {
  return apply_subst(to_subst(theta), r);
}
ConstraintSet apply_renaming(const Renaming& theta, const ConstraintSet& psi) {
  return apply_subst(to_subst(theta), psi);
}
FunctionContract apply_renaming(const Renaming& theta, const FunctionContract& c) {
  return apply_subst(to_subst(theta), c);
}

// -- substitution ------------------------------------------------------------

namespace {

std::string freshen_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

}  // namespace

Type apply_subst(const TypeSubst& s, const Type& t) {
  if (s.empty()) return t;
  if (t.is_base()) return t;
  if (auto* v = t.as_var()) {
    auto it = s.find(*v);
    return it == s.end() ? t : it->second;
  }
  if (auto* fs = t.as_functions()) {
    std::vector<FunctionContract> contracts;
    contracts.reserve(fs->size());
    for (const auto& c : *fs) contracts.push_back(apply_subst(s, c));
    return Type::functions(std::move(contracts));
  }
  const auto* u = t.as_union();
  std::vector<Type> members;
  members.reserve(u->size());
  for (const auto& m : *u) members.push_back(apply_subst(s, m));
  return Type::union_of(std::move(members));
}

FieldType apply_subst(const TypeSubst& s, const FieldType& q) {
  switch (q.kind()) {
    case FieldType::Kind::Absent: return q;
    case FieldType::Kind::Present: return FieldType::present(apply_subst(s, q.payload()));
    case FieldType::Kind::Maybe: return FieldType::maybe(apply_subst(s, q.payload()));
  }
  return q;
}

RecordType apply_subst(const TypeSubst& s, const RecordType& r) {
  RecordType out;
  for (const auto& [name, q] : r.fields) out.fields.emplace(name, apply_subst(s, q));
  return out;
}

ConstraintSet apply_subst(const TypeSubst& s, const ConstraintSet& psi) {
  ConstraintSet out;
  for (const auto& [var, rec] : psi.entries()) {
    std::string target = var;
    auto it = s.find(var);
    if (it != s.end()) {
      const std::string* v = it->second.as_var();
      if (!v)
        throw std::logic_error("substitution maps constrained variable " + var +
                               " to a non-variable type");
      target = *v;
    }
    if (out.has(target))
      throw std::logic_error("substitution merges constrained variables onto " + target);
    out.set(target, apply_subst(s, rec));
  }
  return out;
}

FunctionContract apply_subst(const TypeSubst& s, const FunctionContract& c) {
  // Bound variables shadow the substitution.
  TypeSubst restricted;
  std::set<std::string> bound(c.quantified.begin(), c.quantified.end());
  for (const auto& [from, to] : s)
    if (!bound.count(from)) restricted.emplace(from, to);
  if (restricted.empty()) return c;

  // Alpha-freshen bound names that collide with the substitution image.
  std::set<std::string> img_vars;
  for (const auto& [from, to] : restricted) {
    auto vars = ftv(to);
    img_vars.insert(vars.begin(), vars.end());
  }
  std::vector<std::string> quantified = c.quantified;
  TypeSubst freshen;
  std::set<std::string> avoid = img_vars;
  {
    auto inner = ftv(c);
    avoid.insert(inner.begin(), inner.end());
    for (const auto& x : quantified) avoid.insert(x);
    for (const auto& [from, to] : restricted) avoid.insert(from);
  }
  for (auto& x : quantified) {
    if (img_vars.count(x)) {
      std::string fresh = freshen_name(x, avoid);
      avoid.insert(fresh);
      freshen.emplace(x, Type::var(fresh));
      x = fresh;
    }
  }

  auto rename_body = [&](const FunctionContract& body) {
    if (freshen.empty()) return body;
    return make_contract(quantified, apply_subst(freshen, body.pre),
                         [&] {
                           std::vector<Type> args;
                           args.reserve(body.args.size());
                           for (const auto& a : body.args) args.push_back(apply_subst(freshen, a));
                           return args;
                         }(),
                         apply_subst(freshen, body.result_type()),
                         apply_subst(freshen, body.post));
  };
  FunctionContract renamed = rename_body(c);
  renamed.quantified = quantified;

  std::vector<Type> args;
  args.reserve(renamed.args.size());
  for (const auto& a : renamed.args) args.push_back(apply_subst(restricted, a));
  return make_contract(quantified, apply_subst(restricted, renamed.pre), std::move(args),
                       apply_subst(restricted, renamed.result_type()),
                       apply_subst(restricted, renamed.post));
}

}  // namespace lucretia
