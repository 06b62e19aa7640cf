#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>

#include "lucretia/types.hpp"

namespace lucretia {

// -- update (right-biased merge) ----------------------------------------------

RecordType update(const RecordType& lhs, const RecordType& rhs);
ConstraintSet update(const ConstraintSet& lhs, const ConstraintSet& rhs);

// -- entailment (the weakening order) -----------------------------------------

/// Field types: disjunct-set inclusion, counting bot as a disjunct.
bool entails(const FieldType& lhs, const FieldType& rhs);
/// Types: disjunct-set inclusion (function disjuncts compared alpha-canonically).
bool entails(const Type& lhs, const Type& rhs);
/// Records: identical field-name sets and pointwise field entailment.
bool entails(const RecordType& lhs, const RecordType& rhs);
/// Constraint sets: dom(lhs) subseteq dom(rhs), pointwise record entailment
/// on shared variables, and every rhs-only variable absent from ftv(lhs).
bool entails(const ConstraintSet& lhs, const ConstraintSet& rhs);

// -- definiteness update -------------------------------------------------------

enum class DefSign { Plus, Minus };

/// Psi[X <-+ {a}] / Psi[X <-- {a}]. Returns nullopt (Undefined) when no
/// clause applies: plus on a bare bot field, or the field missing from the
/// record. Psi is returned unchanged when X is not constrained.
std::optional<ConstraintSet> definiteness(const ConstraintSet& psi, const std::string& var,
                                          const std::string& field, DefSign sign);

// -- join ----------------------------------------------------------------------

struct JoinError {
  std::string var;
  std::string field;  // empty when the variable itself is unjoinable
  std::string message;
};

using JoinResult = std::variant<ConstraintSet, JoinError>;

/// Smallest common weakening of two branch postconditions. `fresh` lists
/// type variables introduced inside the branches' scope; only those may be
/// bot-extended (fields missing on one side read as definitely absent) or
/// kept when present on one side only.
JoinResult join(const ConstraintSet& a, const ConstraintSet& b,
                const std::set<std::string>& fresh);

/// Pointwise least upper bound in the q grammar.
FieldType join_fields(const FieldType& a, const FieldType& b);

/// Adds `field: bot` to each locally fresh variable's record in `psi` for
/// fields that `against` mentions but the record lacks (the lazy (bot) rule).
ConstraintSet bot_extend(const ConstraintSet& psi, const ConstraintSet& against,
                         const std::set<std::string>& fresh);

/// Names the first reason entails(lhs, rhs) fails ("X.m: have string, need
/// bot"); nullopt when the entailment holds.
std::optional<std::string> explain_entailment_failure(const ConstraintSet& lhs,
                                                      const ConstraintSet& rhs);

}  // namespace lucretia
