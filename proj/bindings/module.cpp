#include <pybind11/pybind11.h>

#include "lucretia/ast.hpp"
#include "lucretia/driver.hpp"
#include "lucretia/interp.hpp"
#include "lucretia/parser.hpp"

namespace py = pybind11;

namespace {

lucretia::DriverOptions options_for(bool unchecked, std::uint64_t fuel) {
  lucretia::DriverOptions o;
  o.json = true;
  o.fuel = fuel;
  o.unchecked = unchecked;
  return o;
}

std::string check_json(const std::string& source) {
  return lucretia::drive_check(source, options_for(false, lucretia::kDefaultFuel)).out;
}

std::string run_json(const std::string& source, std::uint64_t fuel, bool unchecked) {
  return lucretia::drive_run(source, options_for(unchecked, fuel)).out;
}

std::string trace_json(const std::string& source, std::uint64_t fuel, bool unchecked) {
  return lucretia::drive_trace(source, options_for(unchecked, fuel)).out;
}

std::string fuzz_json(std::uint64_t seed, int count, int depth, std::uint64_t fuel) {
  lucretia::FuzzOptions fo;
  fo.seed = seed;
  fo.count = count;
  fo.depth = depth;
  fo.fuel = fuel;
  return lucretia::drive_fuzz(fo, options_for(false, fuel)).out;
}

std::string pretty_source(const std::string& source) {
  lucretia::ParseResult parsed = lucretia::parse_program(source);
  if (!parsed.ok()) {
    std::string message = "parse error";
    if (!parsed.diagnostics.empty()) message = to_text(parsed.diagnostics.front());
    throw py::value_error(message);
  }
  return lucretia::pretty(parsed.expr);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lucretia core: parser, small-step interpreter and Hoare-style checker";

  m.def("check_json", &check_json, py::arg("source"),
        "Type-check a program; returns the result as a JSON string.");
  m.def("run_json", &run_json, py::arg("source"), py::arg("fuel") = lucretia::kDefaultFuel,
        py::arg("unchecked") = false,
        "Check then execute a program; returns the result as a JSON string.");
  m.def("trace_json", &trace_json, py::arg("source"), py::arg("fuel") = lucretia::kDefaultFuel,
        py::arg("unchecked") = false,
        "Execute a program and return the small-step trace as a JSON string.");
  m.def("fuzz_json", &fuzz_json, py::arg("seed") = 42, py::arg("count") = 100,
        py::arg("depth") = 4, py::arg("fuel") = 10000,
        "Generate typed programs and report safety violations as a JSON string.");
  m.def("pretty", &pretty_source, py::arg("source"),
        "Parse a program and return its ANF-lowered pretty-print.");
}
