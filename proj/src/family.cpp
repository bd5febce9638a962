#include "fvm/family.hpp"

#include <algorithm>
#include <numeric>

#include "fvm/errors.hpp"
#include "fvm/operations.hpp"

namespace fvm {

std::vector<Elem> letters(std::size_t n) {
  std::vector<Elem> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "x" + std::to_string(i));
  }
  return out;
}

namespace {

std::vector<IndexTuple> all_tuples(std::size_t n, int arity) {
  std::vector<IndexTuple> out;
  IndexTuple t(static_cast<std::size_t>(arity), 0);
  if (n == 0) return out;
  while (true) {
    out.push_back(t);
    int i = arity - 1;
    while (i >= 0 && ++t[i] == n) t[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

void structures_on(const Signature& sig, std::vector<Elem> universe, std::vector<Structure>& out) {
  std::vector<std::pair<std::string, IndexTuple>> slots;
  for (const auto& [name, ar] : sig.symbols()) {
    for (auto& t : all_tuples(universe.size(), ar)) slots.emplace_back(name, std::move(t));
  }
  if (slots.size() > 24) throw DomainError("structure enumeration too large");
  const std::uint64_t count = std::uint64_t{1} << slots.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::map<std::string, std::vector<IndexTuple>, std::less<>> rels;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (mask >> i & 1) rels[slots[i].first].push_back(slots[i].second);
    }
    out.push_back(Structure::from_indices(sig, universe, std::move(rels)));
  }
}

}  // namespace

std::vector<Structure> all_structures(const Signature& sig, std::size_t max_size, std::size_t min_size) {
  std::vector<Structure> out;
  for (std::size_t n = min_size; n <= max_size; ++n) structures_on(sig, letters(n), out);
  return out;
}

std::vector<Structure> all_pointed_structures(const Signature& sig, std::size_t max_size) {
  std::vector<Structure> out;
  for (const auto& s : all_structures(sig, max_size)) {
    for (const auto& p : s.universe()) out.push_back(s.with_point(p));
  }
  return out;
}

std::vector<Structure> rooted_structures(const Signature& sig, std::size_t extra) {
  std::vector<Structure> out;
  for (std::size_t n = 0; n <= extra; ++n) {
    std::vector<Elem> universe{"r"};
    for (const auto& x : letters(n)) universe.push_back(x);
    std::sort(universe.begin(), universe.end());
    std::vector<Structure> here;
    structures_on(sig, universe, here);
    for (auto& s : here) out.push_back(s.with_point("r"));
  }
  return out;
}

Structure graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  auto names = letters(n);
  Structure::Relations rels;
  rels["E"];
  for (auto [u, v] : edges) {
    rels["E"].push_back({names.at(u), names.at(v)});
    rels["E"].push_back({names.at(v), names.at(u)});
  }
  return Structure(Signature{{"E", 2}}, names, rels);
}

std::vector<Structure> labeled_graphs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::vector<Structure> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (mask >> i & 1) edges.push_back(pairs[i]);
    out.push_back(graph(n, edges));
  }
  return out;
}

std::vector<Structure> graph_classes(std::size_t max_vertices) {
  std::vector<Structure> out;
  for (std::size_t n = 1; n <= max_vertices; ++n) {
    std::vector<Structure> reps;
    for (auto& g : labeled_graphs(n)) {
      bool seen = std::any_of(reps.begin(), reps.end(),
                              [&](const Structure& r) { return search_isomorphism(r, g).has_value(); });
      if (!seen) reps.push_back(std::move(g));
    }
    for (auto& r : reps) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fvm
