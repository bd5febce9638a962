#pragma once

#include "fvm/comonad.hpp"

namespace fvm {

// Elements of E_k(A): words [a1,...,an], 1 <= n <= k.
ComonadSpec ef_comonad(int k);

// P_{k,l}: words of (pebble, element) letters "(p,a)", length <= l.  With
// kind = pointed, inputs must be pointed and the image point is [(0,a0)].
ComonadSpec pebble_comonad(int k, int l, CategoryKind kind = CategoryKind::plain);

// M_k over pointed structures with a modal signature: paths {a0,R1,a1,...}
// of at most k steps from the point.
ComonadSpec modal_comonad(int k);

// Cos_l over loopless undirected graphs (signature {E/2}): walk points
// ([v0,...,vn],i) for closed walks with 2 <= n+1 <= l.
ComonadSpec cos_comonad(int l);

// Word and path helpers shared with the Kleisli laws.
std::vector<Elem> word_letters(const Elem& w);
Elem make_word(std::span<const Elem> letters);
Elem pebble_letter(int pebble, const Elem& a);
std::pair<int, Elem> split_pebble_letter(const Elem& letter);

// A modal path as alternating items a0, R1, a1, ..., Rn, an.
std::vector<Elem> path_items(const Elem& p);
Elem make_path(std::span<const Elem> items);

void require_graph(const Structure& g);

}  // namespace fvm
