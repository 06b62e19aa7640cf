#include "lucretia/driver.hpp"

#include <json.hpp>

#include "lucretia/checker.hpp"
#include "lucretia/interp.hpp"
#include "lucretia/parser.hpp"

namespace lucretia {

namespace {

using json = nlohmann::ordered_json;

json span_json(const SourceSpan& s) {
  json j;
  j["begin"] = s.begin;
  j["end"] = s.end;
  j["line"] = s.line;
  j["column"] = s.column;
  j["end_line"] = s.end_line;
  j["end_column"] = s.end_column;
  return j;
}

json diagnostic_json(const Diagnostic& d) {
  json j;
  j["severity"] = d.severity == Severity::Error ? "error" : "warning";
  j["code"] = d.code;
  j["message"] = d.message;
  j["span"] = span_json(d.span);
  j["rule"] = d.rule;
  j["expected"] = d.expected ? json(*d.expected) : json(nullptr);
  j["actual"] = d.actual ? json(*d.actual) : json(nullptr);
  return j;
}

json diagnostics_json(const Diagnostics& diagnostics) {
  json arr = json::array();
  for (const auto& d : diagnostics) arr.push_back(diagnostic_json(d));
  return arr;
}

json judgment_json(const Judgment& j) {
  json out;
  out["expr"] = pretty(j.expr);
  out["type"] = to_text(j.type);
  out["pre"] = to_text(j.pre);
  out["post"] = to_text(j.post);
  out["rendered"] = to_text(j);
  return out;
}

json skeleton(const std::string& status) {
  json j;
  j["status"] = status;
  j["judgment"] = nullptr;
  j["value"] = nullptr;
  j["diagnostics"] = json::array();
  j["trace"] = nullptr;
  j["fuzz_report"] = nullptr;
  return j;
}

std::string paint(const std::string& text, bool color) {
  if (!color) return text;
  return "\033[31m" + text + "\033[0m";
}

void render_diagnostics(const Diagnostics& diagnostics, const DriverOptions& options,
                        DriverResult& result) {
  for (const auto& d : diagnostics) result.err += paint(to_text(d), options.color) + "\n";
}

DriverResult finish(json j, const DriverOptions& options, DriverResult result) {
  if (options.json) {
    result.out = j.dump(2) + "\n";
    result.err.clear();
  }
  return result;
}

struct Frontend {
  ExprPtr program;
  std::optional<Judgment> judgment;
  Diagnostics diagnostics;
  std::string status;  // empty when the pipeline may continue
};

// parse, then check unless unchecked.
Frontend front(const std::string& source, const DriverOptions& options) {
  Frontend f;
  ParseResult parsed = parse_program(source);
  if (!parsed.ok()) {
    f.diagnostics = parsed.diagnostics;
    f.status = "parse-error";
    return f;
  }
  f.program = parsed.expr;
  if (options.unchecked) {
    // Execution still needs a closed program; substitution assumes it.
    std::set<std::string> free = free_names(f.program);
    if (!free.empty()) {
      std::string names;
      for (const auto& n : free) names += (names.empty() ? "" : ", ") + n;
      f.diagnostics.push_back(make_error(
          "E-OPEN", "program has free variables: " + names, f.program->span, "run"));
      f.status = "check-error";
    }
    return f;
  }
  CheckResult checked = check_program(parsed.expr);
  if (!checked.ok()) {
    f.diagnostics = checked.diagnostics;
    f.status = "check-error";
    return f;
  }
  f.judgment = checked.judgment;
  return f;
}

json value_json(const Value& v) {
  json j;
  j["text"] = to_text(v);
  j["type"] = runtime_type_name(v);
  return j;
}

json runtime_error_json(const RuntimeError& err) {
  Diagnostic d = make_error(std::string("R-") + to_text(err.kind), err.message, err.span);
  d.actual = err.heap_digest.empty() ? std::nullopt : std::optional(err.heap_digest);
  return diagnostic_json(d);
}

Diagnostic runtime_error_diagnostic(const RuntimeError& err) {
  Diagnostic d = make_error(std::string("R-") + to_text(err.kind), err.message, err.span);
  if (!err.heap_digest.empty()) d.actual = "heap: " + err.heap_digest;
  return d;
}

}  // namespace

DriverResult drive_check(const std::string& source, const DriverOptions& options) {
  DriverResult result;
  DriverOptions check_options = options;
  check_options.unchecked = false;
  Frontend f = front(source, check_options);
  if (!f.status.empty()) {
    json j = skeleton(f.status);
    j["diagnostics"] = diagnostics_json(f.diagnostics);
    result.exit_code = 1;
    render_diagnostics(f.diagnostics, options, result);
    return finish(std::move(j), options, std::move(result));
  }
  json j = skeleton("ok");
  j["judgment"] = judgment_json(*f.judgment);
  result.out = to_text(*f.judgment) + "\n";
  return finish(std::move(j), options, std::move(result));
}

DriverResult drive_run(const std::string& source, const DriverOptions& options) {
  DriverResult result;
  Frontend f = front(source, options);
  if (!f.status.empty()) {
    json j = skeleton(f.status);
    j["diagnostics"] = diagnostics_json(f.diagnostics);
    result.exit_code = 1;
    render_diagnostics(f.diagnostics, options, result);
    return finish(std::move(j), options, std::move(result));
  }

  RunOutcome outcome = run(f.program, options.fuel);
  if (auto* halted = std::get_if<RunHalted>(&outcome)) {
    json j = skeleton("ok");
    if (f.judgment) j["judgment"] = judgment_json(*f.judgment);
    j["value"] = value_json(halted->value);
    result.out = to_text(halted->value) + " : " + runtime_type_name(halted->value) + "\n";
    return finish(std::move(j), options, std::move(result));
  }
  if (auto* err = std::get_if<RuntimeError>(&outcome)) {
    json j = skeleton("runtime-error");
    j["diagnostics"].push_back(runtime_error_json(*err));
    result.exit_code = 1;
    render_diagnostics({runtime_error_diagnostic(*err)}, options, result);
    return finish(std::move(j), options, std::move(result));
  }
  const auto& fuel = std::get<FuelExhausted>(outcome);
  json j = skeleton("fuel-exhausted");
  result.exit_code = 1;
  result.err = "fuel exhausted after " + std::to_string(fuel.fuel) + " steps\n";
  Diagnostic d = make_error("R-fuel-exhausted",
                            "fuel exhausted after " + std::to_string(fuel.fuel) + " steps", {});
  j["diagnostics"].push_back(diagnostic_json(d));
  return finish(std::move(j), options, std::move(result));
}

DriverResult drive_trace(const std::string& source, const DriverOptions& options) {
  DriverResult result;
  Frontend f = front(source, options);
  if (!f.status.empty()) {
    json j = skeleton(f.status);
    j["diagnostics"] = diagnostics_json(f.diagnostics);
    result.exit_code = 1;
    render_diagnostics(f.diagnostics, options, result);
    return finish(std::move(j), options, std::move(result));
  }

  TraceResult traced = trace(f.program, options.fuel);
  json lines = json::array();
  for (const auto& entry : traced.entries) {
    std::string line = to_text(entry);
    lines.push_back(line);
    result.out += line + "\n";
  }

  if (auto* halted = std::get_if<RunHalted>(&traced.outcome)) {
    json j = skeleton("ok");
    if (f.judgment) j["judgment"] = judgment_json(*f.judgment);
    j["value"] = value_json(halted->value);
    j["trace"] = lines;
    result.out +=
        "halt " + to_text(halted->value) + " : " + runtime_type_name(halted->value) + "\n";
    return finish(std::move(j), options, std::move(result));
  }
  if (auto* err = std::get_if<RuntimeError>(&traced.outcome)) {
    json j = skeleton("runtime-error");
    j["trace"] = lines;
    j["diagnostics"].push_back(runtime_error_json(*err));
    result.exit_code = 1;
    render_diagnostics({runtime_error_diagnostic(*err)}, options, result);
    return finish(std::move(j), options, std::move(result));
  }
  json j = skeleton("fuel-exhausted");
  j["trace"] = lines;
  result.exit_code = 1;
  result.err =
      "fuel exhausted after " + std::to_string(std::get<FuelExhausted>(traced.outcome).fuel) +
      " steps\n";
  return finish(std::move(j), options, std::move(result));
}

DriverResult drive_fuzz(const FuzzOptions& fuzz_options, const DriverOptions& options) {
  DriverResult result;
  if (fuzz_options.count < 1 || fuzz_options.depth < 1) {
    result.exit_code = 2;
    result.err = "fuzz needs --count >= 1 and --depth >= 1\n";
    if (options.json) {
      json j = skeleton("usage-error");
      Diagnostic d = make_error("E-USAGE", "fuzz needs --count >= 1 and --depth >= 1", {});
      j["diagnostics"].push_back(diagnostic_json(d));
      return finish(std::move(j), options, std::move(result));
    }
    return result;
  }

  FuzzReport report = run_fuzz(fuzz_options);
  json j = skeleton(report.violations.empty() ? "ok" : "violations");
  json r;
  r["seed"] = report.options.seed;
  r["count"] = report.options.count;
  r["depth"] = report.options.depth;
  r["fuel"] = report.options.fuel;
  r["generated"] = report.generated;
  r["accepted"] = report.accepted;
  r["rejected"] = report.rejected;
  json violations = json::array();
  for (const auto& v : report.violations) {
    json vj;
    vj["index"] = v.index;
    vj["error"] = v.error;
    vj["program"] = v.program;
    vj["minimized"] = v.minimized;
    violations.push_back(vj);
  }
  r["violations"] = violations;
  j["fuzz_report"] = r;

  result.out = to_text(report);
  result.exit_code = report.violations.empty() ? 0 : 1;
  return finish(std::move(j), options, std::move(result));
}

}  // namespace lucretia
