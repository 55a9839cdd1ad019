#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "run_config.hpp"
#include "wmset/correlation.hpp"
#include "wmset/diffraction.hpp"
#include "wmset/family.hpp"
#include "wmset/hull.hpp"
#include "wmset/io.hpp"
#include "wmset/parallel.hpp"
#include "wmset/pointset.hpp"

namespace wmset::cli {

int exit_code(Errc code) {
  switch (code) {
    case Errc::SingularBasis:
    case Errc::NotASublattice:
    case Errc::NotProper:
    case Errc::NotCoprime:
    case Errc::GcdLawViolation:
    case Errc::DivergentIndexSum:
      return kValidation;
    case Errc::NoTailBound:
    case Errc::NotEnoughMembers:
    case Errc::VerificationFailed:
    case Errc::SupportNotCovered:
      return kComputation;
    case Errc::ParseError:
      return kConfigParse;
    default:
      return kBadArgument;
  }
}

namespace {

struct Context {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
};

CoprimeFamily family(const RunConfig& cfg) {
  if (!cfg.family.preset && cfg.family.subs.empty())
    throw Error(Errc::InvalidArgument, "no family given; use --preset or --family");
  return validate(cfg.family);
}

std::size_t oracle_members(const RunConfig& cfg, const CoprimeFamily& f) {
  return f.is_finite() ? *f.size() : f.members_up_to_prime(cfg.oracle_prime_bound);
}

std::size_t truncation(const RunConfig& cfg, const CoprimeFamily& f) {
  if (cfg.truncation) return *cfg.truncation;
  if (f.is_finite()) return *f.size();
  return f.members_up_to_prime(cfg.prime_bound);
}

Shape shape(const RunConfig& cfg) {
  if (cfg.shape == "box") return Shape::Box;
  if (cfg.shape == "ball") return Shape::Ball;
  throw Error(Errc::InvalidArgument, "shape must be box or ball, got '" + cfg.shape + "'");
}

Region region(const RunConfig& cfg, std::size_t dim) {
  if (!cfg.range.empty()) {
    if (cfg.range.size() != 2 * dim)
      throw Error(Errc::DimensionMismatch, "--range needs lo,hi per coordinate");
    std::vector<std::int64_t> lo, hi;
    for (std::size_t i = 0; i < dim; ++i) {
      lo.push_back(cfg.range[2 * i]);
      hi.push_back(cfg.range[2 * i + 1]);
    }
    return Region::range(std::move(lo), std::move(hi));
  }
  if (cfg.radii.empty()) throw Error(Errc::InvalidArgument, "no radius given");
  return Region::centered(shape(cfg), dim, cfg.radii.back());
}

std::vector<Shift> shifts(const RunConfig& cfg, std::size_t dim) {
  if (!cfg.shifts.empty()) return cfg.shifts;
  if (dim == 2) return {{0, 0}, {1, 0}, {1, 1}, {2, 0}, {2, 1}, {3, 0}};
  std::vector<Shift> out;
  for (std::int64_t v = 0; v <= 5; ++v) {
    Shift z(dim, 0);
    z[0] = v;
    out.push_back(std::move(z));
  }
  return out;
}

DualBox dual_box(const RunConfig& cfg, std::size_t dim) {
  const RationalPoint bounds = RationalPoint::parse(cfg.kbox);
  if (bounds.dim() != 2 * dim) throw Error(Errc::DimensionMismatch, "--kbox needs lo,hi per coordinate");
  DualBox box;
  for (std::size_t i = 0; i < dim; ++i) {
    box.lo.push_back(bounds.coords[2 * i]);
    box.hi.push_back(bounds.coords[2 * i + 1]);
  }
  box.include_upper = !cfg.half_open;
  return box;
}

// Sample spectrum points used by compare when no --freq is given.
std::vector<RationalPoint> default_freqs(const RunConfig& cfg, const CoprimeFamily& f) {
  std::vector<RationalPoint> out;
  for (const auto& s : cfg.freqs) out.push_back(RationalPoint::parse(s));
  if (!out.empty()) return out;
  DualBox box;
  box.lo.assign(f.dim(), Rational(0));
  box.hi.assign(f.dim(), Rational(1));
  box.include_upper = false;
  out = spectral_support(f, box, 1e-3);
  if (out.size() > 12) out.resize(12);
  return out;
}

void emit(const Context& ctx, const std::string& text) {
  if (ctx.cfg.out.empty())
    ctx.out << text;
  else
    io::write_file(ctx.cfg.out, text);
}

bool want_json(const RunConfig& cfg, bool json_default) {
  if (cfg.format.empty()) return json_default;
  if (cfg.format == "json") return true;
  if (cfg.format == "csv") return false;
  throw Error(Errc::InvalidArgument, "format must be csv or json, got '" + cfg.format + "'");
}

std::string point_label(const RationalPoint& k) {
  std::string s;
  for (std::size_t i = 0; i < k.dim(); ++i) s += (i ? " " : "") + to_string(k.coords[i]);
  return s;
}

int cmd_validate(const Context& ctx) {
  if (!ctx.cfg.family.preset && ctx.cfg.family.subs.empty())
    throw Error(Errc::InvalidArgument, "no family given; use --preset or --family");
  const ValidationReport report = validation_report(ctx.cfg.family);
  emit(ctx, io::validation_json(report));
  if (!report.ok) ctx.err << "invalid family: " << report.message << "\n";
  return report.ok ? kOk : exit_code(*report.error);
}

int cmd_generate(const Context& ctx) {
  const CoprimeFamily f = family(ctx.cfg);
  const Patch p = generate(f, region(ctx.cfg, f.dim()), truncation(ctx.cfg, f));
  emit(ctx, want_json(ctx.cfg, false) ? io::patch_json(p) : io::patch_csv(p));
  return kOk;
}

int cmd_density(const Context& ctx) {
  const CoprimeFamily f = family(ctx.cfg);
  const std::size_t n = truncation(ctx.cfg, f);
  if (!ctx.cfg.range.empty()) {
    const DensityEstimate e = density_estimate(generate(f, region(ctx.cfg, f.dim()), n));
    const BoundedValue model = model_density(f, n);
    if (want_json(ctx.cfg, false)) {
      std::ostringstream js;
      js << "{\n  \"count\": " << e.count << ",\n  \"volume\": " << io::format_double(e.volume)
         << ",\n  \"density\": " << io::format_double(e.value) << ",\n  \"model_lower\": "
         << io::format_double(model.lower()) << ",\n  \"model_upper\": " << io::format_double(model.upper())
         << "\n}\n";
      emit(ctx, js.str());
    } else {
      emit(ctx, "count,volume,density,model_lower,model_upper\n" + std::to_string(e.count) + "," +
                    io::format_double(e.volume) + "," + io::format_double(e.value) + "," +
                    io::format_double(model.lower()) + "," + io::format_double(model.upper()) + "\n");
    }
    return kOk;
  }
  const MaximalityReport rep = maximality_report(f, ctx.cfg.radii, n, ctx.cfg.tolerance, shape(ctx.cfg));
  emit(ctx, want_json(ctx.cfg, false) ? io::maximality_json(rep) : io::maximality_csv(rep));
  return kOk;
}

int cmd_autocorr(const Context& ctx) {
  const CoprimeFamily f = family(ctx.cfg);
  const std::size_t n = truncation(ctx.cfg, f);
  const Patch p = generate(f, region(ctx.cfg, f.dim()), n);
  const AutocorrTable table = autocorr_table(f, p, shifts(ctx.cfg, f.dim()), n);
  const SandwichReport sw = sandwich_check(f, table, ctx.cfg.tolerance);
  emit(ctx, want_json(ctx.cfg, false) ? io::autocorr_json(table, &sw) : io::autocorr_csv(table, &sw));
  return kOk;
}

int cmd_diffract(const Context& ctx) {
  const CoprimeFamily f = family(ctx.cfg);
  const SpectrumTable table =
      spectrum_table(f, dual_box(ctx.cfg, f.dim()), ctx.cfg.threshold, truncation(ctx.cfg, f));
  emit(ctx, want_json(ctx.cfg, false) ? io::spectrum_json(f, table) : io::spectrum_csv(f, table));
  return kOk;
}

int cmd_amplitude(const Context& ctx) {
  const CoprimeFamily f = family(ctx.cfg);
  const std::size_t n = truncation(ctx.cfg, f);
  if (ctx.cfg.freqs.empty()) throw Error(Errc::InvalidArgument, "amplitude needs --freq");
  const Patch p = generate(f, region(ctx.cfg, f.dim()), n);
  std::string text =
      "k,Fk,amp_lower,amp_upper,ie_lower,ie_upper,empirical_re,empirical_im,empirical_abs\n";
  for (const std::string& s : ctx.cfg.freqs) {
    const RationalPoint k = RationalPoint::parse(s);
    const std::complex<double> emp = empirical_amplitude(p, k);
    std::string fk = "off-spectrum", amp = ",", ie = ",";
    try {
      const auto labels = support_labels(f, minimal_support(f, k));
      fk.clear();
      for (std::size_t i = 0; i < labels.size(); ++i) fk += (i ? ";" : "") + labels[i];
      const BoundedValue a = amplitude(f, k, n);
      amp = io::format_double(a.lower()) + "," + io::format_double(a.upper());
      const BoundedValue b = inclusion_exclusion_amplitude(f, k, oracle_members(ctx.cfg, f));
      ie = io::format_double(b.lower()) + "," + io::format_double(b.upper());
    } catch (const Error& e) {
      if (e.code() != Errc::NotInSpectrum && e.code() != Errc::SupportNotCovered) throw;
      if (e.code() == Errc::NotInSpectrum) amp = "0,0";
    }
    text += point_label(k) + "," + fk + "," + amp + "," + ie + "," + io::format_double(emp.real()) + "," +
            io::format_double(emp.imag()) + "," + io::format_double(std::abs(emp)) + "\n";
  }
  emit(ctx, text);
  return kOk;
}

int cmd_hole(const Context& ctx) {
  const CoprimeFamily f = family(ctx.cfg);
  const Hole hole = find_hole(f, ctx.cfg.m);
  if (want_json(ctx.cfg, true)) {
    emit(ctx, io::hole_json(f, hole));
    return kOk;
  }
  std::string text;
  for (std::size_t i = 0; i < f.dim(); ++i) text += "offset" + std::to_string(i + 1) + ",";
  for (std::size_t i = 0; i < f.dim(); ++i) text += "point" + std::to_string(i + 1) + ",";
  text += "member\n";
  for (const HoleWitness& w : hole.witnesses) {
    for (const auto& v : w.offset) text += v.str() + ",";
    for (const auto& v : w.point) text += v.str() + ",";
    text += support_labels(f, SupportSet{w.member}).front() + "\n";
  }
  emit(ctx, text);
  return kOk;
}

int cmd_hull(const Context& ctx) {
  const CoprimeFamily f = family(ctx.cfg);
  const std::size_t n = truncation(ctx.cfg, f);
  const Patch p = generate(f, region(ctx.cfg, f.dim()), n);
  const Admissibility adm = admissible(p, ctx.cfg.admissible_bound);
  std::string text = io::admissibility_json(adm);
  if (ctx.cfg.pattern) {
    const DensityEstimate emp = patch_frequency_empirical(p, *ctx.cfg.pattern);
    // extend the admissibility object rather than emitting a second document
    text.erase(text.rfind('}'));
    while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
    text += ",\n  \"pattern_points\": " + std::to_string(ctx.cfg.pattern->size()) + ",\n  \"empirical\": " +
            io::format_double(emp.value) + ",\n  \"translations\": " + io::format_double(emp.volume);
    if (f.prime_exponent() > 0) {
      const BoundedValue exact = patch_frequency_exact(f, *ctx.cfg.pattern, ctx.cfg.prime_bound);
      text += ",\n  \"exact_lower\": " + io::format_double(exact.lower()) +
              ",\n  \"exact_upper\": " + io::format_double(exact.upper());
    }
    text += "\n}\n";
  }
  emit(ctx, text);
  return kOk;
}

int cmd_compare(const Context& ctx) {
  const CoprimeFamily f = family(ctx.cfg);
  const std::size_t n = truncation(ctx.cfg, f);
  std::ostringstream text;
  bool pass = true;
  auto line = [&](bool ok, const std::string& what, double margin) {
    pass = pass && ok;
    text << (ok ? "PASS " : "FAIL ") << what << " margin=" << io::format_double(margin) << "\n";
  };

  const MaximalityReport rep = maximality_report(f, ctx.cfg.radii, n, ctx.cfg.tolerance, shape(ctx.cfg));
  for (const MaximalityEntry& e : rep.entries)
    line(e.consistent, "maximality radius=" + std::to_string(e.estimate.region.radius()), e.margin);

  const Patch p = generate(f, region(ctx.cfg, f.dim()), n);
  const SandwichReport sw = sandwich_check(f, autocorr_table(f, p, shifts(ctx.cfg, f.dim()), n), ctx.cfg.tolerance);
  for (const SandwichEntry& e : sw.entries) {
    std::string z;
    for (std::size_t i = 0; i < e.z.size(); ++i) z += (i ? "," : "") + std::to_string(e.z[i]);
    line(e.ok, "sandwich z=(" + z + ")", e.margin);
  }

  for (const RationalPoint& k : default_freqs(ctx.cfg, f)) {
    const BoundedValue a = amplitude(f, k, n);
    const BoundedValue b = inclusion_exclusion_amplitude(f, k, oracle_members(ctx.cfg, f));
    const double gap = std::max(a.lower() - b.upper(), b.lower() - a.upper());
    line(a.overlaps(b), "amplitude-oracles k=(" + point_label(k) + ")", -gap);
  }
  text << (pass ? "PASS" : "FAIL") << " summary\n";
  emit(ctx, text.str());
  return pass ? kOk : kContractFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak model sets from coprime sublattice families", "wmset"};
  app.require_subcommand(1);

  std::string config_path, save_config, preset, family_arg, shape_arg, radius_arg, range_arg, shifts_arg,
      kbox_arg, out_arg, format_arg, pattern_arg;
  std::vector<std::string> freq_args;
  long k = 0, exponent = 0, dim = 0;
  std::vector<std::string> b_args;
  std::size_t trunc = 0;
  std::uint64_t prime_bound = 0, admissible_bound = 0, oracle_bound = 0;
  double threshold = 0, tolerance = 0;
  std::int64_t m = 0;
  unsigned threads = 0;
  bool half_open = false;

  auto* o_config = app.add_option("--config", config_path, "RunConfig JSON file");
  app.add_option("--save-config", save_config, "Write the effective RunConfig to this file");
  auto* o_preset = app.add_option("--preset", preset, "visible-d2 | kfree | bfree | prime-power");
  auto* o_family = app.add_option("--family", family_arg, "Family JSON file or inline JSON object");
  auto* o_k = app.add_option("--k", k, "Exponent of the kfree preset");
  auto* o_exp = app.add_option("--exponent", exponent, "Exponent s of the prime-power preset");
  auto* o_dim = app.add_option("--dim", dim, "Dimension of the prime-power preset");
  auto* o_b = app.add_option("--b", b_args, "Moduli of the bfree preset")->delimiter(',');
  auto* o_shape = app.add_option("--shape", shape_arg, "box | ball");
  auto* o_radius = app.add_option("--radius", radius_arg, "Radius, or a comma list of radii");
  auto* o_range = app.add_option("--range", range_arg, "Explicit box lo1,hi1,lo2,hi2,...");
  auto* o_trunc = app.add_option("--truncation", trunc, "Number of family members N");
  auto* o_pb = app.add_option("--prime-bound", prime_bound, "Keep members with prime <= bound");
  auto* o_ab = app.add_option("--admissible-bound", admissible_bound, "Primes checked by hull");
  auto* o_ob = app.add_option("--oracle-prime-bound", oracle_bound,
                              "Members kept by the inclusion-exclusion oracle");
  auto* o_shifts = app.add_option("--shifts", shifts_arg, "Shifts, e.g. 1,0;1,1;2,0");
  auto* o_freq = app.add_option("--freq", freq_args, "Frequency, e.g. 1/2,1/2 (repeatable)");
  auto* o_kbox = app.add_option("--kbox", kbox_arg, "Dual box lo1,hi1,lo2,hi2");
  auto* o_half = app.add_flag("--half-open", half_open, "Exclude the upper faces of --kbox");
  auto* o_thr = app.add_option("--threshold", threshold, "Relative intensity floor");
  auto* o_m = app.add_option("--m", m, "Hole half-width");
  auto* o_pattern = app.add_option("--pattern", pattern_arg, "Pattern JSON file or inline object");
  auto* o_tol = app.add_option("--tolerance", tolerance, "Density tolerance");
  auto* o_out = app.add_option("--out", out_arg, "Output file (default stdout)");
  auto* o_format = app.add_option("--format", format_arg, "csv | json");
  auto* o_threads = app.add_option("--threads", threads, "Worker cap (0 = hardware)");

  const std::vector<std::pair<std::string, int (*)(const Context&)>> commands{
      {"validate", cmd_validate}, {"generate", cmd_generate}, {"density", cmd_density},
      {"autocorr", cmd_autocorr}, {"diffract", cmd_diffract}, {"amplitude", cmd_amplitude},
      {"hole", cmd_hole},         {"hull", cmd_hull},         {"compare", cmd_compare}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kBadArgument;
  }

  auto inline_or_file = [](const std::string& s) { return !s.empty() && s.front() == '{' ? s : io::read_file(s); };

  try {
    RunConfig cfg;
    if (o_config->count()) cfg = parse_config(io::read_file(config_path));
    if (o_family->count()) cfg.family = io::parse_family(inline_or_file(family_arg));
    if (o_preset->count()) {
      cfg.family = RawFamily{};
      cfg.family.preset = preset;
    }
    if (o_k->count()) cfg.family.k = k;
    if (o_exp->count()) cfg.family.exponent = exponent;
    if (o_dim->count()) cfg.family.dim = dim;
    if (o_b->count()) {
      cfg.family.b.clear();
      for (const auto& s : b_args) {
        try {
          cfg.family.b.emplace_back(s);
        } catch (const std::runtime_error&) {
          throw Error(Errc::InvalidArgument, "bad modulus '" + s + "'");
        }
      }
    }
    if (o_shape->count()) cfg.shape = shape_arg;
    if (o_radius->count()) cfg.radii = parse_int_list(radius_arg);
    if (o_range->count()) cfg.range = parse_int_list(range_arg);
    if (o_trunc->count()) cfg.truncation = trunc;
    if (o_pb->count()) cfg.prime_bound = prime_bound;
    if (o_ab->count()) cfg.admissible_bound = admissible_bound;
    if (o_ob->count()) cfg.oracle_prime_bound = oracle_bound;
    if (o_shifts->count()) cfg.shifts = parse_shifts(shifts_arg);
    if (o_freq->count()) cfg.freqs = freq_args;
    if (o_kbox->count()) cfg.kbox = kbox_arg;
    if (o_half->count()) cfg.half_open = half_open;
    if (o_thr->count()) cfg.threshold = threshold;
    if (o_m->count()) cfg.m = m;
    if (o_pattern->count()) cfg.pattern = io::parse_pattern(inline_or_file(pattern_arg));
    if (o_tol->count()) cfg.tolerance = tolerance;
    if (o_out->count()) cfg.out = out_arg;
    if (o_format->count()) cfg.format = format_arg;
    if (o_threads->count()) cfg.threads = threads;

    if (!save_config.empty()) io::write_file(save_config, config_to_json(cfg));
    parallel::set_max_threads(cfg.threads);

    const Context ctx{std::move(cfg), out, err};
    for (const auto& [name, fn] : commands)
      if (app.got_subcommand(name)) return fn(ctx);
    return kBadArgument;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.code());
  }
}

}  // namespace wmset::cli
