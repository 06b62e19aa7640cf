#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lucretia {

enum class BaseType { Bool, Int, Real, String, Unit };

const char* to_text(BaseType b);

class Type;
struct FunctionContract;

/// Field type q ::= t | bot | t \/ bot. `bot` marks a definitely absent
/// field; the Maybe payload never contains bot itself.
class FieldType {
 public:
  enum class Kind { Present, Absent, Maybe };

  FieldType();  // Absent
  static FieldType present(Type t);
  static FieldType absent();
  static FieldType maybe(Type t);

  Kind kind() const { return kind_; }
  bool is_present() const { return kind_ == Kind::Present; }
  bool is_absent() const { return kind_ == Kind::Absent; }
  bool is_maybe() const { return kind_ == Kind::Maybe; }
  /// Payload of Present/Maybe; must not be called on Absent.
  const Type& payload() const;

  bool admits_absence() const { return kind_ != Kind::Present; }

 private:
  Kind kind_;
  std::shared_ptr<const Type> payload_;
};

/// Record r ::= { n:q, ... }; field names unique, displayed sorted by name.
struct RecordType {
  std::map<std::string, FieldType> fields;

  bool has(const std::string& name) const { return fields.count(name) != 0; }
  const FieldType* find(const std::string& name) const;
  bool empty() const { return fields.empty(); }
};

/// Constraint set Psi: a finite map X |-> record, insertion order retained
/// for display.
class ConstraintSet {
 public:
  using Entry = std::pair<std::string, RecordType>;

  ConstraintSet() = default;
  ConstraintSet(std::initializer_list<Entry> entries);

  bool has(const std::string& var) const;
  const RecordType* find(const std::string& var) const;
  /// Insert or overwrite; insertion order is kept for new variables.
  void set(const std::string& var, RecordType rec);
  bool erase(const std::string& var);

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<std::string> dom() const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
};

/// One function contract [Psi_s; args] -> [result; Psi_t], universally
/// quantified over `quantified`. An intersection type is a non-empty list
/// of these (Type::Functions).
struct FunctionContract {
  std::vector<std::string> quantified;
  ConstraintSet pre;
  std::vector<Type> args;
  std::shared_ptr<const Type> result;
  ConstraintSet post;

  const Type& result_type() const { return *result; }
};

FunctionContract make_contract(std::vector<std::string> quantified, ConstraintSet pre,
                               std::vector<Type> args, Type result, ConstraintSet post);

/// t, u ::= base | X | function contracts (intersection) | union.
class Type {
 public:
  struct Base {
    BaseType base;
  };
  struct Var {
    std::string name;
  };
  struct Functions {
    std::vector<FunctionContract> contracts;  // declaration order, size >= 1
  };
  struct Union {
    std::vector<Type> members;  // canonicalized: flat, unique, sorted, size >= 2
  };
  using Node = std::variant<Base, Var, Functions, Union>;

  Type();  // unit
  static Type base(BaseType b);
  static Type var(std::string name);
  static Type functions(std::vector<FunctionContract> contracts);
  static Type union_of(std::vector<Type> members);  // normalizes

  const Node& node() const { return *node_; }
  bool is_base() const;
  bool is_var() const;
  bool is_functions() const;
  bool is_union() const;
  std::optional<BaseType> as_base() const;
  const std::string* as_var() const;
  const std::vector<FunctionContract>* as_functions() const;
  const std::vector<Type>* as_union() const;

 private:
  explicit Type(Node n);
  std::shared_ptr<const Node> node_;
};

// -- free type variables ----------------------------------------------------

std::set<std::string> ftv(const Type& t);
std::set<std::string> ftv(const FieldType& q);
std::set<std::string> ftv(const RecordType& r);
std::set<std::string> ftv(const ConstraintSet& psi);  // includes dom(psi)
std::set<std::string> ftv(const FunctionContract& c);

// -- canonical forms ---------------------------------------------------------

/// Flattens unions, removes duplicate disjuncts, collapses singleton unions
/// and orders members Base < Var (name order) < Functions (canonical text).
Type normalize(const Type& t);
FieldType normalize(const FieldType& q);

/// Alpha-invariant canonical text; doubles as the total order on types.
std::string canonical_key(const Type& t);
std::string canonical_key(const FieldType& q);

bool equal(const Type& a, const Type& b);
bool equal(const FieldType& a, const FieldType& b);
bool equal(const RecordType& a, const RecordType& b);
bool equal(const ConstraintSet& a, const ConstraintSet& b);

// -- rendering ---------------------------------------------------------------

/// Canonical display used in diagnostics and golden files:
/// `int | string`, `X <# {m: int | bot}`, fields sorted by name,
/// constraint entries in insertion order.
std::string to_text(const Type& t);
std::string to_text(const FieldType& q);
std::string to_text(const RecordType& r);
std::string to_text(const ConstraintSet& psi);
std::string to_text(const FunctionContract& c);

/// Reparseable contract syntax (`[t1, t2; X.m:q] => [t; ...]`); free type
/// variables are printed with a `^` prefix so reparsing quantifies exactly
/// the quantified ones.
std::string to_surface(const FunctionContract& c);
std::string to_surface_type(const Type& t);

// -- renaming (Definition: bijective, capture-avoiding) ----------------------

/// A finite bijection of type variable names. Construction rejects
/// non-injective maps: renamings never merge variables.
class Renaming {
 public:
  Renaming() = default;
  /// Throws std::invalid_argument if `pairs` is not injective.
  explicit Renaming(std::vector<std::pair<std::string, std::string>> pairs);
  Renaming(std::initializer_list<std::pair<std::string, std::string>> pairs)
      : Renaming(std::vector<std::pair<std::string, std::string>>(pairs)) {}

  const std::string* find(const std::string& name) const;
  std::string apply_name(const std::string& name) const;
  std::set<std::string> dom() const;
  std::set<std::string> img() const;
  Renaming inverse() const;
  bool empty() const { return map_.empty(); }

 private:
  std::map<std::string, std::string> map_;
};

Type apply_renaming(const Renaming& theta, const Type& t);
FieldType apply_renaming(const Renaming& theta, const FieldType& q);
RecordType apply_renaming(const Renaming& theta, const RecordType& r);
ConstraintSet apply_renaming(const Renaming& theta, const ConstraintSet& psi);
FunctionContract apply_renaming(const Renaming& theta, const FunctionContract& c);

/// A || theta: true iff A and img(theta) - dom(theta) are disjoint.
bool parallel_ok(const std::set<std::string>& a, const Renaming& theta);

// -- substitution (type-for-variable, used at call sites) --------------------

/// Quantifier instantiation: maps type variable names to whole types.
/// Bound variables are alpha-freshened to avoid capture.
using TypeSubst = std::map<std::string, Type>;

Type apply_subst(const TypeSubst& s, const Type& t);
FieldType apply_subst(const TypeSubst& s, const FieldType& q);
RecordType apply_subst(const TypeSubst& s, const RecordType& r);
/// Domain variables must be mapped to variables (or left alone); throws
/// std::logic_error otherwise.
ConstraintSet apply_subst(const TypeSubst& s, const ConstraintSet& psi);
FunctionContract apply_subst(const TypeSubst& s, const FunctionContract& c);

}  // namespace lucretia
