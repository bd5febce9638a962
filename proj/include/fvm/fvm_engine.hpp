#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fvm/kleisli_laws.hpp"

namespace fvm {

// A ⇛_C B: a hom f: C(A) -> B.
struct PEWitness {
  ComonadSpec comonad;
  Structure source;  // A
  StructMap f;       // C(A) -> B
  const Structure& target() const { return f.target(); }
};

// A ≡#_C B: Kleisli morphisms f: C(A) -> B and g: C(B) -> A, mutually inverse.
struct CountingWitness {
  ComonadSpec comonad;
  StructMap f;
  StructMap g;
  const Structure& a() const { return g.target(); }
  const Structure& b() const { return f.target(); }
};

// H(f1,...,fn) ∘ κ; throws IntegrityError when the composite is not a hom.
PEWitness compose_pe_witness(const KleisliLawSpec& law, std::span<const PEWitness> ws);
// Both composites, checked to be Kleisli inverses.
CountingWitness compose_counting_witness(const KleisliLawSpec& law, std::span<const CountingWitness> ws);

// g ∘ f* = ε_A and f ∘ g* = ε_B.
bool verify_kleisli_inverse(const ComonadSpec& c, const StructMap& f, const StructMap& g);

std::optional<PEWitness> search_pe_witness(const ComonadSpec& c, const Structure& a, const Structure& b);

enum class SearchVerdict { found, not_found, indeterminate };
std::string_view to_string(SearchVerdict v);

struct KleisliIsoResult {
  SearchVerdict verdict = SearchVerdict::not_found;
  std::optional<CountingWitness> witness;
  std::size_t work = 0;  // homs visited
};

// Complete search for a Kleisli isomorphism.  `budget` caps the number of
// homs visited; running out gives `indeterminate`.
KleisliIsoResult search_kleisli_iso(const ComonadSpec& c, const Structure& a, const Structure& b,
                                    std::size_t budget = 200000);

// Game oracles.  None of them uses comonads.
// One-sided k-round game: positive existential sentences of depth k without equality.
bool decide_pe_game(int k, const Structure& a, const Structure& b);
// Two-sided k-round game without equality.
bool decide_fo_noeq_equiv(int k, const Structure& a, const Structure& b);
// Ehrenfeucht–Fraïssé game with equality (positions are partial isomorphisms).
bool decide_fo_eq_equiv(int k, const Structure& a, const Structure& b);
// Depth-k simulation of pointed modal structures, from point to point.
bool decide_modal_sim(int k, const Structure& a, const Structure& b);

using RelationOracle = std::function<bool(const Structure&, const Structure&)>;

struct FvmCounterexample {
  std::vector<Structure> a, b;  // componentwise related
  Structure ha, hb;             // H(a⃗), H(b⃗): not related
};

// Searches argument tuples drawn from `candidates` for componentwise related
// inputs whose images under H are unrelated.  Candidates are tried in rounds
// of growing size bound; within a round, tuples go in lexicographic order of
// candidate positions.  The first hit is returned.
std::optional<FvmCounterexample> find_fvm_counterexample(const OperationSpec& op, const RelationOracle& related,
                                                         std::span<const Structure> candidates);

}  // namespace fvm
