#pragma once

#include "asdefect/engine.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace asdefect::cli {

using json = nlohmann::ordered_json;

enum class Command { simulate, synthesize, tower, distance, oracle, report };
enum class Format { json, csv };

struct RunConfig {
  Command command = Command::simulate;
  std::optional<std::string> input_path;
  std::vector<std::string> inputs;  // report only
  std::optional<std::string> output_path;
  Format format = Format::json;
  std::uint64_t seed_rng = 0x5eed2024ULL;
  int precision = 64;
  std::optional<std::size_t> depth;
  std::size_t cases = 200;
  bool strict_mbar = false;

  void validate() const;
};

// Parses JSON; syntax errors become input errors carrying line and column.
json parse_json(const std::string& text, const std::string& source);

struct ScheduleInput {
  long p = 2;
  ExtensionState seed;
  Schedule schedule;
};

ScheduleInput schedule_from_json(const json& j);
json schedule_to_json(const ExtensionState& seed, const Schedule& schedule);
// FNV-1a 64 of the compact schedule JSON, as 16 hex digits.
std::string schedule_hash(const json& schedule);

json distance_to_json(const DistanceBound& b);

// Entry point: returns the process exit code (0 ok, 1 input, 2 infeasible, 3 invariant).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace asdefect::cli
