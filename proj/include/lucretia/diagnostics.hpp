#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lucretia/source.hpp"

namespace lucretia {

enum class Severity { Error, Warning };

/// A structured check/parse/runtime report. `code` is drawn from the closed
/// list published in the README; `rule` names the typing or semantic rule
/// that produced the report.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;
  std::string rule;
  std::optional<std::string> expected;
  std::optional<std::string> actual;
};

inline Diagnostic make_error(std::string code, std::string message, SourceSpan span,
                             std::string rule = {}) {
  Diagnostic d;
  d.code = std::move(code);
  d.message = std::move(message);
  d.span = span;
  d.rule = std::move(rule);
  return d;
}

std::string to_text(const Diagnostic& d);

using Diagnostics = std::vector<Diagnostic>;

}  // namespace lucretia
