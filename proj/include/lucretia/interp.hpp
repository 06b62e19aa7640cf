#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lucretia/ast.hpp"

namespace lucretia {

/// Runtime values: constants, function values (closed literals), locations.
struct Value {
  using Repr = std::variant<Const, FunctionLit, std::uint64_t>;
  Repr repr;

  static Value constant(Const c) { return Value{Repr{std::move(c)}}; }
  static Value function(FunctionLit f) { return Value{Repr{std::move(f)}}; }
  static Value location(std::uint64_t id) { return Value{Repr{id}}; }

  const Const* as_const() const { return std::get_if<Const>(&repr); }
  const FunctionLit* as_function() const { return std::get_if<FunctionLit>(&repr); }
  const std::uint64_t* as_location() const { return std::get_if<std::uint64_t>(&repr); }
};

std::string to_text(const Value& v);
/// Dynamic type name for display: base type of constants, "func", "loc".
std::string runtime_type_name(const Value& v);

/// Converts a value atom expression to a Value and back.
std::optional<Value> value_of_atom(const ExprPtr& e);
ExprPtr atom_of_value(const Value& v, SourceSpan span = {});

using ObjectRecord = std::map<std::string, Value>;

struct Heap {
  std::map<std::uint64_t, ObjectRecord> objects;
  std::uint64_t next_location = 0;

  std::uint64_t allocate();
  const ObjectRecord* find(std::uint64_t loc) const;
  /// `3 objects; l0:{m,n} l1:{}` — bounded digest for error payloads.
  std::string digest() const;
};

struct Config {
  Heap heap;
  ExprPtr control;
};

enum class RuntimeErrorKind {
  MessageNotUnderstood,
  TypeMismatch,
  PrimOpError,
  UnboundVariable,
  FuelExhausted,
};

const char* to_text(RuntimeErrorKind k);

struct RuntimeError {
  RuntimeErrorKind kind;
  std::string message;
  SourceSpan span;
  std::string heap_digest;
};

struct Halted {
  Value value;
};

/// One small step. `rule` reports the innermost rule fired (Let-Propag
/// context traversal is implicit).
struct StepOutcome {
  std::variant<Config, Halted, RuntimeError> result;
  std::string rule;
};

StepOutcome step(Config c);

/// delta: the semantic counterpart of a primitive operator symbol.
/// + takes any mix of int/real/bool (bool as 0/1, widening to real);
/// - and * take int/real; == and < compare equal base types; not takes bool.
/// Integer overflow is a PrimOpError (wrap-forbidden semantics).
std::variant<Const, RuntimeError> delta(const std::string& op, const std::vector<Const>& args,
                                        SourceSpan span = {});

struct RunHalted {
  Value value;
  Heap heap;
  std::uint64_t steps = 0;
};
struct FuelExhausted {
  std::uint64_t fuel;
};
using RunOutcome = std::variant<RunHalted, RuntimeError, FuelExhausted>;

constexpr std::uint64_t kDefaultFuel = 100000;

/// Transitive closure of step, at most `fuel` steps.
RunOutcome run(const ExprPtr& program, std::uint64_t fuel = kDefaultFuel);

struct TraceEntry {
  std::uint64_t index;  // 1-based
  std::string rule;
  std::string control;  // pretty-print of the control before the step, <= 80 chars
  std::size_t heap_objects;  // after the step
};

struct TraceResult {
  std::vector<TraceEntry> entries;
  RunOutcome outcome;
};

TraceResult trace(const ExprPtr& program, std::uint64_t fuel = kDefaultFuel);
std::string to_text(const TraceEntry& entry);

/// Names of semantic rules whose guards hold for this configuration,
/// enumerated independently of step's dispatch. Empty for halted or stuck
/// configurations; the semantics is deterministic iff this is a singleton
/// for every non-halted, non-stuck configuration.
std::vector<std::string> applicable_rules(const Config& c);

}  // namespace lucretia
