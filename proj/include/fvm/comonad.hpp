#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fvm/operations.hpp"
#include "fvm/report.hpp"
#include "fvm/structure.hpp"

namespace fvm {

using ElemFn = std::function<Elem(const Elem&)>;

enum class CategoryKind { plain, pointed };

// A comonad in Kleisli form, given element-wise.  Counit and coextension
// only look at the element, so they work without materialising C(A); the
// relational part is available both materialised (object_map) and as a
// membership oracle over a materialised base (holds/contains).
struct ComonadSpec {
  std::string name;
  CategoryKind kind = CategoryKind::plain;

  // Throws DomainError for inputs outside the comonad's category.
  std::function<void(const Structure&)> validate;
  // Universe of C(A), without relations.
  std::function<std::vector<Elem>(const Structure&)> elements;
  std::function<Structure(const Structure&)> object_map;
  std::function<bool(const Structure& base, const std::string& symbol, std::span<const Elem> t)> holds;
  std::function<bool(const Structure& base, const Elem& w)> contains;

  std::function<Elem(const Elem&)> counit;
  // f is defined on C(A); returns f*(w).
  std::function<Elem(const ElemFn& f, const Elem& w)> coextend;

  // Distinguished point of C(A) for pointed comonads.
  std::function<Elem(const Structure& base)> point;

  // Prefix order on elements of C(A), when the comonad has one.  Used for
  // the forest order of coalgebras.
  std::function<bool(const Elem& u, const Elem& v)> prefix;
};

// C(A), validating A first.
Structure apply(const ComonadSpec& c, const Structure& a);

Elem delta(const ComonadSpec& c, const Elem& w);

StructMap counit_map(const ComonadSpec& c, const Structure& a);
StructMap counit_map(const ComonadSpec& c, const Structure& a, std::shared_ptr<const Structure> ca);

// f: C(A) -> B  gives  f*: C(A) -> C(B).
StructMap coextend_map(const ComonadSpec& c, const StructMap& f);
StructMap coextend_map(const ComonadSpec& c, const StructMap& f, std::shared_ptr<const Structure> cb);

// Element function for a StructMap (lookups by name).
ElemFn as_fn(const StructMap& f);

// C(f) = (f ∘ ε)*; f must be a hom.
StructMap functor_map(const ComonadSpec& c, const StructMap& f);
// δ_A as a map C(A) -> C(C(A)).  Materialises C(C(A)).
StructMap comultiplication(const ComonadSpec& c, const Structure& a);

struct KleisliMorphism {
  ComonadSpec comonad;
  Structure source;
  StructMap map;  // C(source) -> target
  const Structure& target() const { return map.target(); }
};

KleisliMorphism make_kleisli(const ComonadSpec& c, const Structure& source, const StructMap& map);
KleisliMorphism kleisli_identity(const ComonadSpec& c, const Structure& a);
// g • f = g ∘ f*
KleisliMorphism kleisli_compose(const KleisliMorphism& g, const KleisliMorphism& f);

// How universally quantified statements over homs are evaluated.
struct QuantifierPolicy {
  // Enumerate all homs A -> B when |B|^|A| is at most this.
  double exhaustive_limit = 1e5;
  // Otherwise: the first hom found by search plus this many randomised ones.
  std::size_t samples = 4;
  std::uint64_t seed = 20240601;
  // Cap on element evaluations spent on nested quantifiers per instance.
  std::size_t work_budget = 40000;
  // Element evaluations per argument tuple for naturality and coextension
  // checks of Kleisli laws (at least two hom choices are always tried).
  std::size_t naturality_budget = 4000;
  // Hom lists longer than this are thinned to an evenly spaced subsequence.
  std::size_t max_homs_per_pair = 64;
};

struct HomSample {
  std::vector<std::vector<Index>> homs;
  std::size_t total = 0;    // homs seen (all of them when exhaustive)
  bool exhaustive = true;   // homs holds every hom A -> B
};

HomSample sample_homomorphisms(const Structure& a, const Structure& b, const QuantifierPolicy& policy,
                               std::uint64_t salt);

LawReport check_comonad_laws(const ComonadSpec& c, std::span<const Structure> family,
                             const QuantifierPolicy& policy = {});

// Mutation used to exercise the checker: coextension drops the last letter
// of words longer than one.
ComonadSpec with_truncated_coextension(ComonadSpec c);

}  // namespace fvm
