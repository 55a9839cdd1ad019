#include "run_config.hpp"

#include <sstream>

#include "json.hpp"
#include "wmset/error.hpp"
#include "wmset/io.hpp"

namespace wmset::cli {

namespace {

using json = nlohmann::ordered_json;

template <class T>
void read(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::ParseError, std::string("config field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(Errc::InvalidArgument, "not an integer: '" + item + "'");
    }
  }
  return out;
}

std::vector<Shift> parse_shifts(const std::string& text) {
  std::vector<Shift> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(parse_int_list(item));
  return out;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::ParseError, "config must be a JSON object");
  RunConfig cfg;
  if (j.contains("family")) cfg.family = io::parse_family(j.at("family").dump());
  read(j, "shape", cfg.shape);
  read(j, "radii", cfg.radii);
  read(j, "range", cfg.range);
  if (j.contains("truncation")) {
    std::size_t n = 0;
    read(j, "truncation", n);
    cfg.truncation = n;
  }
  read(j, "prime_bound", cfg.prime_bound);
  read(j, "admissible_bound", cfg.admissible_bound);
  read(j, "oracle_prime_bound", cfg.oracle_prime_bound);
  read(j, "shifts", cfg.shifts);
  read(j, "freqs", cfg.freqs);
  read(j, "kbox", cfg.kbox);
  read(j, "half_open", cfg.half_open);
  read(j, "threshold", cfg.threshold);
  read(j, "m", cfg.m);
  if (j.contains("pattern")) cfg.pattern = io::parse_pattern(j.at("pattern").dump());
  read(j, "tolerance", cfg.tolerance);
  read(j, "out", cfg.out);
  read(j, "format", cfg.format);
  read(j, "threads", cfg.threads);
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["family"] = json::parse(io::family_to_json(cfg.family));
  j["shape"] = cfg.shape;
  j["radii"] = cfg.radii;
  if (!cfg.range.empty()) j["range"] = cfg.range;
  if (cfg.truncation) j["truncation"] = *cfg.truncation;
  j["prime_bound"] = cfg.prime_bound;
  j["admissible_bound"] = cfg.admissible_bound;
  j["oracle_prime_bound"] = cfg.oracle_prime_bound;
  if (!cfg.shifts.empty()) j["shifts"] = cfg.shifts;
  if (!cfg.freqs.empty()) j["freqs"] = cfg.freqs;
  j["kbox"] = cfg.kbox;
  j["half_open"] = cfg.half_open;
  j["threshold"] = cfg.threshold;
  j["m"] = cfg.m;
  if (cfg.pattern) j["pattern"] = json::parse(io::pattern_to_json(*cfg.pattern));
  j["tolerance"] = cfg.tolerance;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  j["format"] = cfg.format;
  j["threads"] = cfg.threads;
  return j.dump(2) + "\n";
}

}  // namespace wmset::cli
