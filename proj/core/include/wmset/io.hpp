#pragma once

// Text formats: family and pattern JSON in, CSV and JSON tables out.
// Doubles are written in round-trip form, so identical inputs give
// byte-identical files.

#include <string>

#include "wmset/correlation.hpp"
#include "wmset/diffraction.hpp"
#include "wmset/family.hpp"
#include "wmset/hull.hpp"
#include "wmset/pointset.hpp"

namespace wmset::io {

std::string format_double(double v);

/// {"preset": "visible-d2"} | {"preset": "kfree", "k": 2} | {"preset": "bfree", "b": [2, 3]}
/// | {"preset": "prime-power", "exponent": 2, "dim": 1}
/// | {"gamma": [[1,0],[0,1]], "subs": [[[2,0],[0,2]], [[3,0],[0,3]]], "prefix_only": false}
/// Lattices are lists of basis columns; integers may be JSON numbers or decimal strings.
/// Throws ParseError.
RawFamily parse_family(const std::string& json_text);
std::string family_to_json(const RawFamily& raw);

/// {"rho": 1, "occupied": [[0,0],[1,0]], "empty": [[0,1]]}. Throws ParseError.
PatchPattern parse_pattern(const std::string& json_text);
std::string pattern_to_json(const PatchPattern& pattern);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

std::string validation_json(const ValidationReport& report);

std::string patch_csv(const Patch& p);
std::string patch_json(const Patch& p);

std::string maximality_csv(const MaximalityReport& report);
std::string maximality_json(const MaximalityReport& report);

/// Columns z1..zd,pair_count,empirical,theo_lower,theo_upper,margin. The margin
/// column comes from the sandwich report and is empty without one.
std::string autocorr_csv(const AutocorrTable& table, const SandwichReport* sandwich = nullptr);
std::string autocorr_json(const AutocorrTable& table, const SandwichReport* sandwich = nullptr);

/// Columns k1_num,k1_den,..,Fk,amp_lower,amp_upper,int_lower,int_upper,rel_intensity.
std::string spectrum_csv(const CoprimeFamily& f, const SpectrumTable& table);
std::string spectrum_json(const CoprimeFamily& f, const SpectrumTable& table);

std::string hole_json(const CoprimeFamily& f, const Hole& hole);
std::string admissibility_json(const Admissibility& a);

}  // namespace wmset::io
