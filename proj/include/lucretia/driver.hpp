#pragma once

#include <cstdint>
#include <string>

#include "lucretia/fuzz.hpp"

namespace lucretia {

/// Shared front end for the CLI and the python bindings. Human-readable
/// output goes to `out`/`err`; with `json` set, `out` holds one JSON
/// document per the published schema
/// {status, judgment?, value?, diagnostics[], trace?, fuzz_report?}.
struct DriverOptions {
  bool json = false;
  bool color = false;
  std::uint64_t fuel = 100000;
  bool unchecked = false;
};

struct DriverResult {
  int exit_code = 0;  // 0 ok, 1 check/runtime failure, 2 usage error
  std::string out;
  std::string err;
};

DriverResult drive_check(const std::string& source, const DriverOptions& options);
DriverResult drive_run(const std::string& source, const DriverOptions& options);
DriverResult drive_trace(const std::string& source, const DriverOptions& options);
DriverResult drive_fuzz(const FuzzOptions& fuzz_options, const DriverOptions& options);

}  // namespace lucretia
