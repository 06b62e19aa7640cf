#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lucretia/ast.hpp"

namespace lucretia {

struct FuzzOptions {
  std::uint64_t seed = 42;
  int count = 100;
  int depth = 4;
  std::uint64_t fuel = 10000;
};

struct FuzzViolation {
  int index = 0;
  std::string error;      // runtime error kind + message
  std::string program;    // pretty-printed source
  std::string minimized;  // shrunk witness
};

struct FuzzReport {
  FuzzOptions options;
  int generated = 0;
  int accepted = 0;
  int rejected = 0;  // generator misses; never counted as violations
  std::vector<FuzzViolation> violations;
};

/// Generates programs by typed construction, checks each, runs the accepted
/// ones and reports checker-accepted programs that crash with
/// message-not-understood, type-mismatch or unbound-variable. Deterministic
/// per (seed, count, depth, fuel).
FuzzReport run_fuzz(const FuzzOptions& options);

std::string to_text(const FuzzReport& report);

/// One generated closed program (exposed for the property suites).
ExprPtr generate_program(std::mt19937_64& rng, int depth);

}  // namespace lucretia
