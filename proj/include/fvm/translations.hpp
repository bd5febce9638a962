#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "fvm/fvm_engine.hpp"

namespace fvm {

// Signature-extending translations.  Each keeps the universe and every
// source relation; the new symbol must not already occur.

// Adds I/2 interpreted as equality.
Structure tr_equality(const Structure& a);
// Adds I/2 (equality) and Con/2: same Gaifman component.
Structure tr_connectivity(const Structure& a);
// Adds G/2, the total relation.  Point kept.
Structure tr_global(const Structure& a);

// What the weak translation does with S itself.
enum class WeakStep {
  plus,  // S⁺ = S*;S, one visible step after silent ones
  star,  // S*
  drop,  // S becomes empty: silent steps are invisible
};

struct WeakOptions {
  WeakStep step = WeakStep::plus;
  // Also close unary predicates under prior S-sequences.
  bool close_unary = false;
};

// Every binary R other than s becomes S*;R;S*.  Pointed modal input.
Structure tr_weak(const Structure& a, const std::string& s, const WeakOptions& opts = {});

struct Translation {
  std::string name;
  std::function<Structure(const Structure&)> apply;
};

// "eq", "con", "global", "weak:S" with optional suffixes "+star", "+drop",
// "+unary" (e.g. "weak:S+drop").
Translation make_translation(std::string_view spec);

// For each tuple over `family`: H'(tr_1 A1, ..., tr_n An) ≅ tr_{n+1}(H(A⃗)).
// With `related` (a relation on translated structures that H' preserves), for
// every pair of componentwise related tuples, checks the images under H' and
// then tr_{n+1}(H(A⃗)) vs tr_{n+1}(H(B⃗)).  With `reference` as well, the
// translated verdict on H(A⃗), H(B⃗) is compared with `reference` applied to
// the untranslated images.
LawReport check_translation_square(std::span<const Translation> trs, const OperationSpec& h,
                                   const OperationSpec& h2, std::span<const Structure> family,
                                   const RelationOracle& related = {}, const RelationOracle& reference = {});

}  // namespace fvm
