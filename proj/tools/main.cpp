#include <cstdio>
#include <cstdlib>
#if !defined(_WIN32)
#include <unistd.h>
#endif
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lucretia/driver.hpp"
#include "lucretia/interp.hpp"

namespace {

bool color_enabled() {
  const char* env = std::getenv("LUCRETIA_COLOR");
  if (env) return std::string(env) == "1";
#if defined(_WIN32)
  return false;
#else
  return isatty(fileno(stderr));
#endif
}

int emit(const lucretia::DriverResult& result) {
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}

// Keeps the every-exit-path JSON contract for errors raised before or
// outside the driver (bad flags, unreadable files).
int usage_error(const std::string& message, bool json) {
  if (json) {
    nlohmann::ordered_json j;
    j["status"] = "usage-error";
    j["judgment"] = nullptr;
    j["value"] = nullptr;
    nlohmann::ordered_json d;
    d["severity"] = "error";
    d["code"] = "E-USAGE";
    d["message"] = message;
    d["span"] = {{"begin", 0}, {"end", 0},      {"line", 1},
                 {"column", 1}, {"end_line", 1}, {"end_column", 1}};
    d["rule"] = "";
    d["expected"] = nullptr;
    d["actual"] = nullptr;
    j["diagnostics"] = nlohmann::ordered_json::array({d});
    j["trace"] = nullptr;
    j["fuzz_report"] = nullptr;
    std::cout << j.dump(2) << "\n";
  }
  std::cerr << message << "\n";
  return 2;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lucretia: checker and interpreter for a calculus of evolving objects"};
  app.require_subcommand(1);

  std::string file;
  bool json = false;
  bool unchecked = false;
  std::uint64_t fuel = lucretia::kDefaultFuel;
  std::uint64_t seed = 42;
  int count = 100;
  int depth = 4;
  std::uint64_t fuzz_fuel = 10000;

  auto add_common = [&](CLI::App* cmd, bool takes_file) {
    if (takes_file) cmd->add_option("FILE", file, "a .luc source file")->required();
    cmd->add_flag("--json", json, "machine-readable output on stdout");
  };

  CLI::App* check = app.add_subcommand("check", "type-check a program");
  add_common(check, true);

  CLI::App* run = app.add_subcommand("run", "check, then execute a program");
  add_common(run, true);
  run->add_option("--fuel", fuel, "maximum number of small steps");
  run->add_flag("--unchecked", unchecked, "skip the checker (demonstrates runtime errors)");

  CLI::App* trc = app.add_subcommand("trace", "print the small-step trace");
  add_common(trc, true);
  trc->add_option("--fuel", fuel, "maximum number of small steps");
  trc->add_flag("--unchecked", unchecked, "skip the checker");

  CLI::App* fuzz = app.add_subcommand("fuzz", "generate typed programs and hunt for crashes");
  add_common(fuzz, false);
  fuzz->add_option("--seed", seed, "generator seed");
  fuzz->add_option("--count", count, "number of programs");
  fuzz->add_option("--depth", depth, "nesting depth budget");
  fuzz->add_option("--fuel", fuzz_fuel, "fuel per generated program");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    bool wants_json = false;
    for (int i = 1; i < argc; ++i)
      if (std::string(argv[i]) == "--json") wants_json = true;
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::ostringstream message;
    message << e.get_name() << ": " << e.what();
    if (wants_json) return usage_error(message.str(), true);
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  lucretia::DriverOptions options;
  options.json = json;
  options.color = color_enabled();
  options.fuel = fuel;
  options.unchecked = unchecked;

  if (fuzz->parsed()) {
    lucretia::FuzzOptions fo;
    fo.seed = seed;
    fo.count = count;
    fo.depth = depth;
    fo.fuel = fuzz_fuel;
    return emit(lucretia::drive_fuzz(fo, options));
  }

  auto source = read_file(file);
  if (!source) return usage_error("cannot read '" + file + "'", json);

  if (check->parsed()) return emit(lucretia::drive_check(*source, options));
  if (run->parsed()) return emit(lucretia::drive_run(*source, options));
  return emit(lucretia::drive_trace(*source, options));
}
