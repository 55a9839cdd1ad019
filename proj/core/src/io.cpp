#include "wmset/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "wmset/error.hpp"

namespace wmset::io {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(Errc::ParseError, what); }

BigInt to_bigint(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::runtime_error&) {
      parse_fail("not an integer: " + j.dump());
    }
  }
  parse_fail("expected an integer, got " + j.dump());
}

json from_bigint(const BigInt& v) {
  if (fits_i64(v)) return json(to_i64(v));
  return json(v.str());
}

IntVec to_intvec_json(const json& j) {
  if (!j.is_array()) parse_fail("expected an integer vector, got " + j.dump());
  IntVec v;
  for (const auto& e : j) v.push_back(to_bigint(e));
  return v;
}

std::vector<IntVec> to_columns(const json& j) {
  if (!j.is_array() || j.empty()) parse_fail("expected a non-empty list of basis columns");
  std::vector<IntVec> cols;
  for (const auto& c : j) cols.push_back(to_intvec_json(c));
  return cols;
}

json columns_json(const std::vector<IntVec>& cols) {
  json out = json::array();
  for (const auto& c : cols) {
    json col = json::array();
    for (const auto& v : c) col.push_back(from_bigint(v));
    out.push_back(std::move(col));
  }
  return out;
}

std::vector<std::int64_t> to_point(const json& j) {
  if (!j.is_array()) parse_fail("expected a point, got " + j.dump());
  std::vector<std::int64_t> p;
  for (const auto& e : j) {
    if (!e.is_number_integer()) parse_fail("point coordinates must be integers");
    p.push_back(e.get<std::int64_t>());
  }
  return p;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
std::optional<T> optional_field(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    parse_fail(std::string("field '") + key + "' has the wrong type");
  }
}

json vec_json(std::span<const std::int64_t> v) { return json(std::vector<std::int64_t>(v.begin(), v.end())); }

json interval_json(const BoundedValue& b) { return json{{"lower", b.lower()}, {"upper", b.upper()}}; }

json region_json(const Region& r) {
  return json{{"shape", to_string(r.shape())},
              {"center", r.center()},
              {"radius", r.radius()},
              {"lo", r.lo()},
              {"hi", r.hi()},
              {"volume", r.volume()}};
}

json rational_point_json(const RationalPoint& k) {
  json out = json::array();
  for (const Rational& q : k.coords) out.push_back(to_string(q));
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RawFamily parse_family(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) parse_fail("family must be a JSON object");
  RawFamily raw;
  raw.preset = optional_field<std::string>(j, "preset");
  raw.k = optional_field<long>(j, "k");
  raw.exponent = optional_field<long>(j, "exponent");
  raw.dim = optional_field<long>(j, "dim");
  if (j.contains("b")) raw.b = to_intvec_json(j.at("b"));
  if (j.contains("gamma")) raw.gamma = to_columns(j.at("gamma"));
  if (j.contains("subs")) {
    if (!j.at("subs").is_array()) parse_fail("'subs' must be a list of lattices");
    for (const auto& s : j.at("subs")) raw.subs.push_back(to_columns(s));
  }
  raw.prefix_only = optional_field<bool>(j, "prefix_only").value_or(false);
  if (!raw.preset && raw.subs.empty()) parse_fail("family needs 'preset' or 'subs'");
  return raw;
}

std::string family_to_json(const RawFamily& raw) {
  json j = json::object();
  if (raw.preset) j["preset"] = *raw.preset;
  if (raw.k) j["k"] = *raw.k;
  if (raw.exponent) j["exponent"] = *raw.exponent;
  if (raw.dim) j["dim"] = *raw.dim;
  if (!raw.b.empty()) {
    json b = json::array();
    for (const auto& v : raw.b) b.push_back(from_bigint(v));
    j["b"] = std::move(b);
  }
  if (raw.gamma) j["gamma"] = columns_json(*raw.gamma);
  if (!raw.subs.empty()) {
    json subs = json::array();
    for (const auto& s : raw.subs) subs.push_back(columns_json(s));
    j["subs"] = std::move(subs);
  }
  if (raw.prefix_only) j["prefix_only"] = true;
  return dump(j);
}

PatchPattern parse_pattern(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) parse_fail("pattern must be a JSON object");
  PatchPattern p;
  p.rho = optional_field<std::int64_t>(j, "rho").value_or(0);
  for (const char* key : {"occupied", "empty"}) {
    if (!j.contains(key)) continue;
    if (!j.at(key).is_array()) parse_fail(std::string("'") + key + "' must be a list of points");
    auto& dst = std::string(key) == "occupied" ? p.occupied : p.empty;
    for (const auto& e : j.at(key)) dst.push_back(to_point(e));
  }
  return p;
}

std::string pattern_to_json(const PatchPattern& pattern) {
  return dump(json{{"rho", pattern.rho}, {"occupied", pattern.occupied}, {"empty", pattern.empty}});
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + path + "'");
  out << contents;
}

std::string validation_json(const ValidationReport& report) {
  json j{{"ok", report.ok}, {"message", report.message}};
  if (report.error) j["error"] = to_string(*report.error);
  if (report.ok) {
    j["family"] = report.tag;
    j["dim"] = report.dim;
    j["size"] = report.size ? json(*report.size) : json("infinite");
    j["coprime_pairs_checked"] = report.coprime_pairs_checked;
    j["gcd_law_pairs_checked"] = report.gcd_law_pairs_checked;
    json idx = json::array();
    for (const auto& v : report.leading_indices) idx.push_back(from_bigint(v));
    j["leading_indices"] = std::move(idx);
  }
  return dump(j);
}

std::string patch_csv(const Patch& p) {
  std::string out;
  for (std::size_t i = 0; i < p.dim(); ++i) out += (i ? ",x" : "x") + std::to_string(i + 1);
  out += "\n";
  for (std::size_t n = 0; n < p.size(); ++n) {
    auto x = p.point(n);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(x[i]);
    }
    out += "\n";
  }
  return out;
}

std::string patch_json(const Patch& p) {
  json points = json::array();
  for (std::size_t n = 0; n < p.size(); ++n) points.push_back(vec_json(p.point(n)));
  return dump(json{{"family", p.family_tag()},
                   {"region", region_json(p.region())},
                   {"count", p.size()},
                   {"points", std::move(points)}});
}

std::string maximality_csv(const MaximalityReport& report) {
  std::string out = "radius,count,volume,density,target_lower,target_upper,distance,margin,consistent\n";
  for (const auto& e : report.entries) {
    out += std::to_string(e.estimate.region.radius()) + "," + std::to_string(e.estimate.count) + "," +
           format_double(e.estimate.volume) + "," + format_double(e.estimate.value) + "," +
           format_double(report.target.lower()) + "," + format_double(report.target.upper()) + "," +
           format_double(e.distance) + "," + format_double(e.margin) + "," +
           (e.consistent ? "true" : "false") + "\n";
  }
  return out;
}

std::string maximality_json(const MaximalityReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back(json{{"region", region_json(e.estimate.region)},
                           {"count", e.estimate.count},
                           {"density", e.estimate.value},
                           {"distance", e.distance},
                           {"margin", e.margin},
                           {"consistent", e.consistent}});
  }
  json j{{"model_density", interval_json(report.model_density)},
         {"tail_bound", report.tail_bound},
         {"target", interval_json(report.target)},
         {"tolerance", report.tolerance},
         {"consistent", report.consistent},
         {"entries", std::move(entries)}};
  if (!report.footnote.empty()) j["footnote"] = report.footnote;
  return dump(j);
}

std::string autocorr_csv(const AutocorrTable& table, const SandwichReport* sandwich) {
  const std::size_t d = table.region.dim();
  std::string out;
  for (std::size_t i = 0; i < d; ++i) out += "z" + std::to_string(i + 1) + ",";
  out += "pair_count,empirical,theo_lower,theo_upper,margin\n";
  for (std::size_t n = 0; n < table.entries.size(); ++n) {
    const AutocorrEntry& e = table.entries[n];
    for (std::int64_t v : e.z) out += std::to_string(v) + ",";
    out += std::to_string(e.pair_count) + "," + format_double(e.empirical) + ",";
    if (e.theoretical)
      out += format_double(e.theoretical->lower()) + "," + format_double(e.theoretical->upper()) + ",";
    else
      out += ",,";
    if (sandwich) out += format_double(sandwich->entries.at(n).margin);
    out += "\n";
  }
  return out;
}

std::string autocorr_json(const AutocorrTable& table, const SandwichReport* sandwich) {
  json entries = json::array();
  for (std::size_t n = 0; n < table.entries.size(); ++n) {
    const AutocorrEntry& e = table.entries[n];
    json row{{"z", e.z}, {"pair_count", e.pair_count}, {"empirical", e.empirical}};
    if (e.theoretical) row["theoretical"] = interval_json(*e.theoretical);
    if (sandwich) {
      const SandwichEntry& s = sandwich->entries.at(n);
      row["slack"] = s.slack;
      row["margin"] = s.margin;
      row["ok"] = s.ok;
    }
    entries.push_back(std::move(row));
  }
  json j{{"region", region_json(table.region)},
         {"volume", table.volume},
         {"truncation", table.truncation},
         {"entries", std::move(entries)}};
  if (sandwich) {
    j["sandwich_ok"] = sandwich->ok;
    j["worst_margin"] = sandwich->worst_margin;
  }
  return dump(j);
}

std::string spectrum_csv(const CoprimeFamily& f, const SpectrumTable& table) {
  const std::size_t d = table.region.lo.size();
  std::string out;
  for (std::size_t i = 0; i < d; ++i) {
    const std::string c = "k" + std::to_string(i + 1);
    out += c + "_num," + c + "_den,";
  }
  out += "Fk,amp_lower,amp_upper,int_lower,int_upper,rel_intensity\n";
  for (const SpectralLine& line : table.lines) {
    for (const Rational& q : line.k.coords)
      out += boost::multiprecision::numerator(q).str() + "," +
             boost::multiprecision::denominator(q).str() + ",";
    const auto labels = support_labels(f, line.support);
    for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? ";" : "") + labels[i];
    out += "," + format_double(line.amplitude.lower()) + "," + format_double(line.amplitude.upper()) +
           "," + format_double(line.intensity.lower()) + "," + format_double(line.intensity.upper()) +
           "," + format_double(static_cast<double>(line.relative_intensity)) + "\n";
  }
  return out;
}

std::string spectrum_json(const CoprimeFamily& f, const SpectrumTable& table) {
  json lines = json::array();
  for (const SpectralLine& line : table.lines) {
    lines.push_back(json{{"k", rational_point_json(line.k)},
                         {"Fk", support_labels(f, line.support)},
                         {"amplitude", interval_json(line.amplitude)},
                         {"intensity", interval_json(line.intensity)},
                         {"rel_intensity", to_string(line.relative_intensity)}});
  }
  json lo = json::array(), hi = json::array();
  for (const Rational& q : table.region.lo) lo.push_back(to_string(q));
  for (const Rational& q : table.region.hi) hi.push_back(to_string(q));
  return dump(json{{"family", f.describe()},
                   {"region", json{{"lo", lo}, {"hi", hi}, {"include_upper", table.region.include_upper}}},
                   {"threshold", table.threshold},
                   {"count", table.lines.size()},
                   {"lines", std::move(lines)}});
}

std::string hole_json(const CoprimeFamily& f, const Hole& hole) {
  auto vec = [](const IntVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(from_bigint(x));
    return a;
  };
  json w = json::array();
  for (const HoleWitness& h : hole.witnesses)
    w.push_back(json{{"offset", vec(h.offset)},
                     {"point", vec(h.point)},
                     {"member", support_labels(f, SupportSet{h.member}).front()}});
  return dump(json{{"t", vec(hole.t)}, {"witnesses", std::move(w)}});
}

std::string admissibility_json(const Admissibility& a) {
  json w = json::array();
  for (const CosetWitness& c : a.witnesses) w.push_back(json{{"prime", c.prime}, {"missed_coset", c.coset}});
  json j{{"admissible", a.admissible}, {"witnesses", std::move(w)}};
  if (a.failing_prime) j["failing_prime"] = *a.failing_prime;
  return dump(j);
}

}  // namespace wmset::io
