#pragma once

#include <vector>

#include "fvm/structure.hpp"

namespace fvm {

// Element names used by the enumerations: a, b, c, ...
std::vector<Elem> letters(std::size_t n);

// Every labeled structure over `sig` with universe {a,...} of each size in
// [min_size, max_size], in a fixed order (by size, then by relation bits).
std::vector<Structure> all_structures(const Signature& sig, std::size_t max_size, std::size_t min_size = 1);

// Each structure of all_structures paired with every choice of point.
std::vector<Structure> all_pointed_structures(const Signature& sig, std::size_t max_size);

// Pointed structures with the point named "r" and up to `extra` other
// elements, in order of size.
std::vector<Structure> rooted_structures(const Signature& sig, std::size_t extra);

// Loopless undirected graphs with 1..max_vertices vertices over {E/2}, one
// per isomorphism class.
std::vector<Structure> graph_classes(std::size_t max_vertices);

// Every labeled loopless undirected graph on exactly n vertices.
std::vector<Structure> labeled_graphs(std::size_t n);

Structure graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

}  // namespace fvm
