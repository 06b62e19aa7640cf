#include "lucretia/constraints.hpp"

#include <algorithm>

namespace lucretia {

// -- update --------------------------------------------------------------------

RecordType update(const RecordType& lhs, const RecordType& rhs) {
  RecordType out = lhs;
  for (const auto& [name, q] : rhs.fields) out.fields[name] = q;
  return out;
}

ConstraintSet update(const ConstraintSet& lhs, const ConstraintSet& rhs) {
  ConstraintSet out = lhs;
  for (const auto& [var, rec] : rhs.entries()) {
    if (const RecordType* existing = out.find(var))
      out.set(var, update(*existing, rec));
    else
      out.set(var, rec);
  }
  return out;
}

// -- entailment ------------------------------------------------------------------

namespace {

struct Disjuncts {
  std::set<std::string> members;  // canonical keys of non-bot disjuncts
  bool bot = false;

  bool included_in(const Disjuncts& other) const {
    if (bot && !other.bot) return false;
    return std::includes(other.members.begin(), other.members.end(), members.begin(),
                         members.end());
  }
};

Disjuncts disjuncts_of(const Type& t) {
  Disjuncts d;
  Type n = normalize(t);
  if (auto* u = n.as_union()) {
    for (const auto& m : *u) d.members.insert(canonical_key(m));
  } else {
    d.members.insert(canonical_key(n));
  }
  return d;
}

Disjuncts disjuncts_of(const FieldType& q) {
  switch (q.kind()) {
    case FieldType::Kind::Absent: {
      Disjuncts d;
      d.bot = true;
      return d;
    }
    case FieldType::Kind::Present: return disjuncts_of(q.payload());
    case FieldType::Kind::Maybe: {
      Disjuncts d = disjuncts_of(q.payload());
      d.bot = true;
      return d;
    }
  }
  return {};
}

}  // namespace

bool entails(const FieldType& lhs, const FieldType& rhs) {
  return disjuncts_of(lhs).included_in(disjuncts_of(rhs));
}

bool entails(const Type& lhs, const Type& rhs) {
  return disjuncts_of(lhs).included_in(disjuncts_of(rhs));
}

bool entails(const RecordType& lhs, const RecordType& rhs) {
  if (lhs.fields.size() != rhs.fields.size()) return false;
  auto il = lhs.fields.begin();
  auto ir = rhs.fields.begin();
  for (; il != lhs.fields.end(); ++il, ++ir) {
    if (il->first != ir->first) return false;
    if (!entails(il->second, ir->second)) return false;
  }
  return true;
}

bool entails(const ConstraintSet& lhs, const ConstraintSet& rhs) {
  // dom(lhs) may not shrink: forgetting a constraint is unsound.
  for (const auto& [var, rec] : lhs.entries()) {
    const RecordType* other = rhs.find(var);
    if (!other) return false;
    if (!entails(rec, *other)) return false;
  }
  // rhs-only variables enter by (evolve): they must not occur in lhs at all.
  std::set<std::string> lhs_vars = ftv(lhs);
  for (const auto& [var, rec] : rhs.entries()) {
    if (!lhs.has(var) && lhs_vars.count(var)) return false;
  }
  return true;
}

// -- definiteness -----------------------------------------------------------------

std::optional<ConstraintSet> definiteness(const ConstraintSet& psi, const std::string& var,
                                          const std::string& field, DefSign sign) {
  const RecordType* rec = psi.find(var);
  if (!rec) return psi;  // X not in dom(Psi): unchanged
  const FieldType* q = rec->find(field);
  if (!q) return std::nullopt;  // no clause for an unmentioned field
  FieldType updated;
  if (sign == DefSign::Minus) {
    updated = FieldType::absent();
  } else {
    switch (q->kind()) {
      case FieldType::Kind::Present: updated = *q; break;
      case FieldType::Kind::Maybe: updated = FieldType::present(q->payload()); break;
      case FieldType::Kind::Absent: return std::nullopt;  // bot+ is undefined
    }
  }
  RecordType out = *rec;
  out.fields[field] = updated;
  ConstraintSet result = psi;
  result.set(var, std::move(out));
  return result;
}

// -- join --------------------------------------------------------------------------

FieldType join_fields(const FieldType& a, const FieldType& b) {
  if (a.is_absent() && b.is_absent()) return FieldType::absent();
  bool bot = a.admits_absence() || b.admits_absence();
  std::vector<Type> payloads;
  if (!a.is_absent()) payloads.push_back(a.payload());
  if (!b.is_absent()) payloads.push_back(b.payload());
  Type merged = payloads.size() == 2 ? Type::union_of({payloads[0], payloads[1]})
                                     : payloads[0];
  merged = normalize(merged);
  return bot ? FieldType::maybe(merged) : FieldType::present(merged);
}

ConstraintSet bot_extend(const ConstraintSet& psi, const ConstraintSet& against,
                         const std::set<std::string>& fresh) {
  ConstraintSet out = psi;
  for (const auto& [var, rec] : psi.entries()) {
    if (!fresh.count(var)) continue;
    const RecordType* target = against.find(var);
    if (!target) continue;
    RecordType extended = rec;
    for (const auto& [name, q] : target->fields) {
      if (!extended.has(name)) extended.fields.emplace(name, FieldType::absent());
    }
    out.set(var, std::move(extended));
  }
  return out;
}

std::optional<std::string> explain_entailment_failure(const ConstraintSet& lhs,
                                                      const ConstraintSet& rhs) {
  for (const auto& [var, rec] : lhs.entries()) {
    const RecordType* other = rhs.find(var);
    if (!other)
      return "the constraint on " + var + " would be forgotten";
    for (const auto& [field, q] : rec.fields) {
      const FieldType* target = other->find(field);
      if (!target)
        return var + "." + field + ": the field would be forgotten";
      if (!entails(q, *target))
        return var + "." + field + ": have " + to_text(q) + ", need " + to_text(*target);
    }
    for (const auto& [field, q] : other->fields) {
      if (!rec.has(field))
        return var + "." + field + ": nothing is known about this field here";
    }
  }
  std::set<std::string> lhs_vars = ftv(lhs);
  for (const auto& [var, rec] : rhs.entries()) {
    if (!lhs.has(var) && lhs_vars.count(var))
      return var + " is mentioned here and cannot evolve in";
  }
  return std::nullopt;
}

namespace {

std::variant<RecordType, JoinError> join_records(const std::string& var, const RecordType& a,
                                                 const RecordType& b, bool var_is_fresh) {
  RecordType out;
  std::set<std::string> names;
  for (const auto& [name, q] : a.fields) names.insert(name);
  for (const auto& [name, q] : b.fields) names.insert(name);
  for (const auto& name : names) {
    const FieldType* qa = a.find(name);
    const FieldType* qb = b.find(name);
    if (qa && qb) {
      out.fields.emplace(name, join_fields(*qa, *qb));
      continue;
    }
    if (!var_is_fresh) {
      const char* side = qa ? "else" : "then";
      return JoinError{var, name,
                       "field '" + name + "' of " + var +
                           " is only known in one branch (" + side +
                           "-branch lacks it) and " + var +
                           " was not created in this scope"};
    }
    // (bot): a variable created here has all unmentioned fields absent.
    out.fields.emplace(name, join_fields(qa ? *qa : FieldType::absent(),
                                         qb ? *qb : FieldType::absent()));
  }
  return out;
}

}  // namespace

JoinResult join(const ConstraintSet& a, const ConstraintSet& b,
                const std::set<std::string>& fresh) {
  ConstraintSet out;
  std::set<std::string> ftv_a = ftv(a);
  std::set<std::string> ftv_b = ftv(b);

  auto add_one_sided = [&](const std::string& var, const RecordType& rec,
                           const std::set<std::string>& other_ftv)
      -> std::optional<JoinError> {
    // Keep by (evolve) when the variable is unknown to the other branch.
    // Variables created inside a branch are never mentioned by its sibling,
    // so branch-fresh variables always pass.
    if (!other_ftv.count(var)) {
      out.set(var, rec);
      return std::nullopt;
    }
    return JoinError{var, "",
                     "constraint on " + var +
                         " is only known in one branch and cannot be joined"};
  };

  for (const auto& [var, rec] : a.entries()) {
    const RecordType* other = b.find(var);
    if (!other) {
      if (auto err = add_one_sided(var, rec, ftv_b)) return *err;
      continue;
    }
    auto merged = join_records(var, rec, *other, fresh.count(var) != 0);
    if (auto* err = std::get_if<JoinError>(&merged)) return *err;
    out.set(var, std::get<RecordType>(std::move(merged)));
  }
  for (const auto& [var, rec] : b.entries()) {
    if (a.has(var)) continue;
    if (auto err = add_one_sided(var, rec, ftv_a)) return *err;
  }
  return out;
}

}  // namespace lucretia
