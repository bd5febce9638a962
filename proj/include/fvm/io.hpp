#pragma once

#include <string>
#include <string_view>

#include "fvm/fvm_engine.hpp"

namespace fvm {

// Structure documents:
//   {"signature": {"E": 2}, "universe": ["a","b"], "relations": {"E": [["a","b"]]}, "point": "a"}
// "point" is optional; other keys are rejected.  Errors are ParseError with
// line:column for syntax and a JSON pointer for content.
Structure parse_structure(std::string_view text);
// Canonical one-line document; parse_structure(print_structure(a)) == a.
std::string print_structure(const Structure& a);

std::string read_file(const std::string& path);
Structure read_structure_file(const std::string& path);

// "E2", "P2,3", "P2,3*" (pointed), "M2", "Cos3".
ComonadSpec comonad_by_name(std::string_view name);

// Names as produced by the law constructors, e.g. "kappa-coproduct:E2x2",
// "kappa-product:M2x2", "kappa-merge-E:M1", "M2=>P2,3*", "E2=>P2,3",
// "Cos3=>P3,3", "id:E2".  "kappa-reduct:E2:E/2" gives τ explicitly (default
// {E/2}).  A trailing "~mutant" on a coproduct law selects the mutant.
KleisliLawSpec law_by_name(std::string_view name);

// Witness documents: {"type": "pe", "comonad": .., "a": .., "b": .., "f": {..}}
// and {"type": "counting", ..., "f": {..}, "g": {..}}; maps go from elements
// of C(a) (resp. C(b)) to elements of b (resp. a).
std::string print_witness(const PEWitness& w);
std::string print_witness(const CountingWitness& w);
std::string witness_type(std::string_view text);
PEWitness parse_pe_witness(std::string_view text);
CountingWitness parse_counting_witness(std::string_view text);

}  // namespace fvm
