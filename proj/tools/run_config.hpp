#pragma once

// Everything a run depends on. A config saved with --save-config reproduces
// the run exactly when passed back through --config.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wmset/correlation.hpp"
#include "wmset/family.hpp"
#include "wmset/hull.hpp"

namespace wmset::cli {

struct RunConfig {
  RawFamily family;
  std::string shape = "box";
  std::vector<std::int64_t> radii{1000};
  std::vector<std::int64_t> range;  // lo1,hi1,lo2,hi2,...; overrides shape/radii when set
  std::optional<std::size_t> truncation;
  std::uint64_t prime_bound = 10000;
  std::uint64_t admissible_bound = 50;  // primes checked by the hull coset test
  std::uint64_t oracle_prime_bound = 100;  // members kept by the inclusion-exclusion oracle
  std::vector<Shift> shifts;
  std::vector<std::string> freqs;  // "1/2,1/2"
  std::string kbox = "0,2,0,2";
  bool half_open = false;
  double threshold = 1e-6;
  std::int64_t m = 1;
  std::optional<PatchPattern> pattern;
  double tolerance = 1e-2;
  std::string out;
  std::string format;  // csv | json; empty selects the command default
  unsigned threads = 0;
};

/// Throws Error(ParseError).
RunConfig parse_config(const std::string& json_text);
std::string config_to_json(const RunConfig& cfg);

/// "1,0;1,1;2,0" -> {{1,0},{1,1},{2,0}}. Throws InvalidArgument.
std::vector<Shift> parse_shifts(const std::string& text);
std::vector<std::int64_t> parse_int_list(const std::string& text);

}  // namespace wmset::cli
