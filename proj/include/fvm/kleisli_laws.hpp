#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fvm/comonad.hpp"

namespace fvm {

// Arguments of an operation, as pointers into materialised structures.
using ArgList = std::span<const Structure* const>;

// An n-ary functor H on structures.  Besides the object map, H is given
// element-wise: map_elem computes H(f1,...,fn) at one element of H(A1,...,An),
// and holds/contains/point decide H(A⃗) from its arguments without building it.
struct OperationSpec {
  std::string name;
  std::size_t arity = 1;
  std::vector<CategoryKind> slots;
  CategoryKind result = CategoryKind::plain;

  std::function<Structure(std::span<const Structure>)> apply;
  std::function<Elem(std::span<const ElemFn> fs, const Elem& x)> map_elem;
  std::function<bool(ArgList args, const std::string& symbol, std::span<const Elem> t)> holds;
  std::function<bool(ArgList args, const Elem& x)> contains;
  std::function<Elem(ArgList args)> point;  // pointed results only
};

OperationSpec identity_op(CategoryKind kind);
OperationSpec reduct_op(const Signature& tau, CategoryKind kind = CategoryKind::plain);
OperationSpec coproduct_op(std::size_t m);
OperationSpec product_op(std::size_t m, CategoryKind kind);
OperationSpec merge_op(const std::string& r);
OperationSpec vee_op();
// Only the object map: the quotient identifying the points has no uniform
// element-wise action, and it is used only as a counterexample operation.
OperationSpec pointed_coproduct_op();

Structure apply_op(const OperationSpec& h, std::span<const Structure> args);
// H(f1,...,fn): H(sources) -> H(targets).
StructMap apply_op_map(const OperationSpec& h, std::span<const StructMap> fs);

// κ: D ∘ H ⇒ H ∘ (C1 × ... × Cn), given uniformly as a function on elements.
struct KleisliLawSpec {
  std::string name;
  OperationSpec op;
  std::vector<ComonadSpec> sources;
  ComonadSpec target;
  ElemFn kappa;
};

// The component at A⃗ as a map D(H(A⃗)) -> H(C1 A1, ..., Cn An).
StructMap kappa_component(const KleisliLawSpec& law, std::span<const Structure> args);

KleisliLawSpec identity_law(const ComonadSpec& c);
KleisliLawSpec kappa_reduct(int k, const Signature& tau);
// Identity κ for the reduct; any word or path comonad (not Cos).
KleisliLawSpec kappa_reduct(const ComonadSpec& c, const Signature& tau);
// c must be an E_k or plain P_{k,l}.
KleisliLawSpec kappa_coproduct(const ComonadSpec& c, std::size_t m);
KleisliLawSpec kappa_product(const ComonadSpec& c, std::size_t m);
// M_{k+1} ∘ merge_R ⇒ merge_R ∘ (M_k × M_k).
KleisliLawSpec kappa_merge(int k, const std::string& r);
// M_k ⇒ P_{2,l} (pointed); needs l >= k+1.
KleisliLawSpec morph_modal_to_pebble2(int k, int l);
// E_k ⇒ P_{k,l}; needs l >= k.
KleisliLawSpec morph_ef_to_pebble(int k, int l);
// Cos_l ⇒ P_{3,l2}; needs l2 >= l.
KleisliLawSpec morph_cos_to_pebble3(int l, int l2);

// Mutation for the checker: the coproduct κ keeps the whole word instead of
// restricting it to the component of the last letter.
KleisliLawSpec with_unrestricted_coproduct(KleisliLawSpec law);

// Checks, for every argument tuple over `family`, that κ is a family of
// homs, (K1), (K2) and naturality, and separately the two coextension
// equations; the "agree" line compares the two verdicts.
LawReport check_kleisli_law(const KleisliLawSpec& law, std::span<const Structure> family,
                            const QuantifierPolicy& policy = {});
LawReport check_comonad_morphism(const KleisliLawSpec& law, std::span<const Structure> family,
                                 const QuantifierPolicy& policy = {});

}  // namespace fvm
