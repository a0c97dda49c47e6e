#pragma once

#include "bratteli/character.hpp"
#include "bratteli/clopen.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/group.hpp"
#include "bratteli/measure.hpp"
#include "bratteli/rperm.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace bratteli::io {

using Json = nlohmann::ordered_json;

// Throws Error(ParseError) carrying the line and column of a syntax error.
Json parse_text(std::string_view text);

// "p/q" strings, integers, "[lo,hi]" strings or {"lo": .., "hi": ..}.
Value value_from_json(const Json& j, const std::string& where = "value");
Json value_to_json(const Value& v);
Json rational_to_json(const Rational& q);
// A number when it fits in 64 bits, a decimal string otherwise.
Json integer_to_json(const Integer& n);

// {"levels": [...], "incidence": [[[..]], ...], "tail": "explicit" | "br" |
//  {"stationary": M} | {"odometer": b} | {"telescope": {"base": {...}, "cuts": [...]}}}
BratteliDiagram diagram_from_json(const Json& j);
Json diagram_to_json(const BratteliDiagram& d);
Json diagram_summary(const BratteliDiagram& d, std::size_t depth);

Json path_to_json(const Path& p);
Path path_from_json(const Json& j);

// {"level": n, "perms": {"v": [images]}}; omitted vertices act as the identity.
GroupElement element_from_json(const BratteliDiagram& d, const Json& j);
Json element_to_json(const GroupElement& g);

// {"level": n, "sets": {"v": [indices]}}
ClopenSet clopen_from_json(const BratteliDiagram& d, const Json& j);
Json clopen_to_json(const ClopenSet& a);

// {"weights": {"n": {"v": "p/q"}}, "tail": "none" | "builtin" | {"geometric": "p/q"}}.
// A "builtin" tail checks the table against the built-in measure and then
// stands for it; the weights may be omitted. Certificate tables are written
// in full, rule-based measures as levels 0..depth with a "builtin" tail.
InvariantMeasure measure_from_json(const BratteliDiagram& d, const Json& j);
Json measure_to_json(const InvariantMeasure& mu, std::size_t depth);

// {"terms": [{"measure": "builtin" | {measure}, "alpha": k | "inf"}]}
CharacterSpec character_from_json(const BratteliDiagram& d, const Json& j);
Json character_to_json(const CharacterSpec& spec, std::size_t depth);
Exponent exponent_from_json(const Json& j);

// {"n": .., "perm": [...]}; "n" may be omitted.
RationalPermutation rperm_from_json(const Json& j);
Json rperm_to_json(const RationalPermutation& g);

// [[..], ..] or {"matrix": [[..], ..]}
ValueMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const ValueMatrix& m);

// Levels 0..depth as ranks; multi-edges drawn one by one unless collapsed
// into a single edge labelled with its multiplicity.
std::string to_dot(const BratteliDiagram& d, std::size_t depth, bool collapse_multiedges);

} // namespace bratteli::io
