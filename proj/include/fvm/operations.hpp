#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "fvm/structure.hpp"

namespace fvm {

// Fresh point introduced by merge, vee and the pointed coproduct.
inline const Elem kStar = "*";

Structure reduct(const Structure& a, const Signature& tau);

// Elements are tagged (i,a) with 1-based tags.  Inputs must be plain.
Structure disjoint_union(std::span<const Structure> family);
Structure disjoint_union(const Structure& a, const Structure& b);

// Disjoint union with the two points identified as kStar.
Structure pointed_coproduct(const Structure& a, const Structure& b);

// Elements are tuples <a1,...,an>; pointed iff every factor is.
Structure product(std::span<const Structure> family);
Structure product(const Structure& a, const Structure& b);

// New point kStar with R-edges to both old points.
Structure merge(const Structure& a, const Structure& b, const std::string& r);
// New point kStar copying the out-edges of both old points, for every binary symbol.
Structure vee(const Structure& a, const Structure& b);

struct Factorisation {
  StructMap q;  // surjective onto the image
  StructMap e;  // embedding of the image
};
Factorisation factor_morphism(const StructMap& f);

std::set<std::pair<Elem, Elem>> gaifman_closure(const Structure& a);

// ---- search ----------------------------------------------------------------

struct SearchOptions {
  bool injective = false;
  // Randomised value order when set; deterministic for a given seed.
  std::optional<std::uint64_t> seed;
  // Values fixed in advance, by source index.
  std::vector<std::optional<Index>> preassigned;
  // Extra pruning: called after each assignment with the partial map.
  std::function<bool(Index var, std::span<const std::optional<Index>> partial)> accept;
  // Stop after this many homs.
  std::size_t max_results = SIZE_MAX;
};

// Backtracking search over homomorphisms A -> B (pointed maps keep points).
// `visit` receives each complete hom and returns false to stop.  Returns the
// number of homs visited.
std::size_t enumerate_homomorphisms(const Structure& a, const Structure& b, const SearchOptions& opts,
                                    const std::function<bool(std::span<const Index>)>& visit);

std::optional<std::vector<Index>> first_homomorphism(const Structure& a, const Structure& b,
                                                     std::optional<std::uint64_t> seed = std::nullopt);
std::optional<StructMap> search_homomorphism(const Structure& a, const Structure& b);
std::optional<StructMap> search_isomorphism(const Structure& a, const Structure& b);
std::vector<std::vector<Index>> all_homomorphisms(const Structure& a, const Structure& b,
                                                  std::size_t limit = SIZE_MAX);

StructMap map_from_indices(const Structure& a, const Structure& b, std::span<const Index> img);

}  // namespace fvm
