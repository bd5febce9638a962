#pragma once

#include <optional>
#include <vector>

#include "fvm/kleisli_laws.hpp"

namespace fvm {

// A C-coalgebra (A, α).  α is kept element-wise (indexed like the carrier's
// universe); C(A) is never materialised.
struct Coalgebra {
  ComonadSpec comonad;
  Structure carrier;
  std::vector<Elem> alpha;

  const Elem& operator()(const Elem& x) const { return alpha[carrier.at(x)]; }
};

struct CoalgebraMorphism {
  Coalgebra source;
  Coalgebra target;
  StructMap map;  // carrier -> carrier
};

// α is a hom, ε∘α = id, C(α)∘α = δ∘α, and the induced order is a forest.
LawReport check_coalgebra(const Coalgebra& x);
bool is_coalgebra(const Coalgebra& x);

Coalgebra cofree(const ComonadSpec& c, const Structure& a);

// x ⊑ y iff α(x) is a prefix of α(y); leq[i][j] over carrier indices.
struct ForestOrder {
  std::vector<std::vector<char>> leq;
  bool is_forest = true;  // every down-set is a chain
};
ForestOrder forest_order(const Coalgebra& x);
// A nonempty coalgebra whose order is a chain.
bool is_path(const Coalgebra& x);

// β∘f = C(f)∘α, with f a hom of carriers.
bool is_coalgebra_morphism(const Coalgebra& x, const Coalgebra& y, const StructMap& f);
CoalgebraMorphism make_coalgebra_morphism(const Coalgebra& x, const Coalgebra& y, const StructMap& f);
CoalgebraMorphism coalgebra_identity(const Coalgebra& x);
CoalgebraMorphism compose(const CoalgebraMorphism& g, const CoalgebraMorphism& f);

// Sub-coalgebra on a down-closed subset, with α restricted.
Coalgebra sub_coalgebra(const Coalgebra& x, std::span<const Elem> subset);

struct PathEmbedding {
  Coalgebra path;
  CoalgebraMorphism embed;
};

// One path embedding per element v: the down-set of v with α restricted,
// included into x.  A coalgebra morphism out of a path lands on a down-closed
// chain and, being injective, is determined by that chain; so these
// represent every path embedding up to isomorphism of the path.
std::vector<PathEmbedding> canonical_path_embeddings(const Coalgebra& x);

bool is_pathwise_embedding(const CoalgebraMorphism& f);
// Every square e: P ↣ X, m: Q ↣ Y, g: P -> Q with f∘e = m∘g has a diagonal
// d: Q -> X.  For plain comonads the empty coalgebra is a path too, so every
// path of Y must lift along f.
bool is_open(const CoalgebraMorphism& f);

// All coalgebra morphisms x -> y (at most `limit`).
std::vector<CoalgebraMorphism> coalgebra_morphisms(const Coalgebra& x, const Coalgebra& y,
                                                   std::size_t limit = SIZE_MAX);
// Every coalgebra structure on every structure of `bases`.
std::vector<Coalgebra> all_coalgebras(const ComonadSpec& c, std::span<const Structure> bases);

// Surjective coalgebra morphism onto the image, then the image's inclusion.
struct CoalgebraFactorisation {
  CoalgebraMorphism q;
  CoalgebraMorphism e;
};
CoalgebraFactorisation factor_coalgebra_morphism(const CoalgebraMorphism& f);

// ---- lifting H along a Kleisli law ----------------------------------------------

// The equaliser of D(κ)∘δ and D(H(α⃗)) inside D(H(A⃗)), with α = δ restricted.
Coalgebra lift_operation(const KleisliLawSpec& law, std::span<const Coalgebra> xs);
// Ĥ(f⃗) = D(H(f⃗)) restricted to the equalisers.
CoalgebraMorphism lift_morphism(const KleisliLawSpec& law, std::span<const CoalgebraMorphism> fs);

// u = ε∘ι: carrier of Ĥ(ys) -> H(carriers of ys).
StructMap universal_bimorphism(const KleisliLawSpec& law, std::span<const Coalgebra> ys);
// f: carrier(x) -> H(carriers of ys) with H(β⃗)∘f = κ∘D(f)∘α.
bool check_bimorphism(const KleisliLawSpec& law, const StructMap& f, const Coalgebra& x,
                      std::span<const Coalgebra> ys);
// The coalgebra morphism f^o = D(f)∘α into Ĥ(ys), with u∘f^o = f.
CoalgebraMorphism from_bimorphism(const KleisliLawSpec& law, const StructMap& f, const Coalgebra& x,
                                  std::span<const Coalgebra> ys);

// For every path embedding into Ĥ(xs) (or, with `p`, every embedding of p),
// the corresponding bimorphism has a decomposition through H(e⃗) with path
// embeddings e_i, and one that factors through all the others.
LawReport check_s2prime(const KleisliLawSpec& law, std::span<const Coalgebra> xs);
LawReport check_s2prime(const KleisliLawSpec& law, const Coalgebra& p, std::span<const Coalgebra> xs);

// Ĥ(cofree A⃗) ≅ cofree(D, H(A⃗)), as an explicit pair of inverse coalgebra
// morphisms.  The canonical candidate (D(H(ε⃗)), κ*) is tried first, then a
// search.
struct LiftingIso {
  CoalgebraMorphism to_cofree;
  CoalgebraMorphism from_cofree;
};
std::optional<LiftingIso> lifting_iso(const KleisliLawSpec& law, std::span<const Structure> bases);

// A span X <- apex -> Y with both legs open pathwise-embeddings into
// cofree coalgebras.
struct FullSpan {
  Structure a, b;  // the legs land in cofree(a) and cofree(b)
  Coalgebra apex;
  CoalgebraMorphism left;
  CoalgebraMorphism right;
};
bool is_full_span(const FullSpan& s);
// Lifts component spans along H and transports the legs to cofree(D, H(A⃗))
// and cofree(D, H(B⃗)).  Throws IntegrityError when the result is not a span
// of open pathwise-embeddings.
FullSpan compose_full_witness(const KleisliLawSpec& law, std::span<const FullSpan> spans);

// Surjective coalgebra morphisms out of paths in `family` land on paths.
LawReport check_surjective_path_image(const ComonadSpec& c, std::span<const Coalgebra> family);

}  // namespace fvm
