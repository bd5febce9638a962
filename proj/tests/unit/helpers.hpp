#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "fvm/family.hpp"
#include "fvm/structure.hpp"

namespace fvm::test {

inline const Signature kE{{"E", 2}};

inline Structure edge(const Elem& a = "a", const Elem& b = "b") {
  return Structure(kE, {a, b}, {{"E", {{a, b}}}});
}
inline Structure loop(const Elem& x = "x") { return Structure(kE, {x}, {{"E", {{x, x}}}}); }
inline Structure points(std::size_t n) { return Structure(kE, letters(n)); }

inline Structure modal(const std::vector<Elem>& u, const std::vector<Tuple>& r, const std::vector<Elem>& p,
                       const Elem& root) {
  std::vector<Tuple> ps;
  for (const auto& x : p) ps.push_back({x});
  return Structure(Signature{{"R", 2}, {"P", 1}}, u, {{"R", r}, {"P", ps}}, root);
}

// Every function from the universe of a to that of b, as index vectors.
inline std::vector<std::vector<Index>> all_maps(std::size_t from, std::size_t to) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> cur(from, 0);
  if (to == 0) return from == 0 ? std::vector<std::vector<Index>>{{}} : out;
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < from && ++cur[i] == to) cur[i++] = 0;
    if (i == from) break;
  }
  return out;
}

// Hom check straight from the definition, without the library's classifier.
inline bool naive_hom(const Structure& a, const Structure& b, const std::vector<Index>& f) {
  if (a.pointed() && f[a.point_index()] != b.point_index()) return false;
  for (const auto& [name, ar] : a.signature().symbols())
    for (const auto& t : a.tuples(name)) {
      IndexTuple img;
      for (auto x : t) img.push_back(f[x]);
      if (!b.holds(name, std::span<const Index>(img))) return false;
    }
  return true;
}

inline bool naive_reflects(const Structure& a, const Structure& b, const std::vector<Index>& f) {
  for (const auto& [name, ar] : a.signature().symbols())
    for (const auto& t : all_maps(static_cast<std::size_t>(ar), a.size())) {
      IndexTuple img;
      for (auto x : t) img.push_back(f[x]);
      if (b.holds(name, std::span<const Index>(img)) && !a.holds(name, std::span<const Index>(t))) return false;
    }
  return true;
}

inline bool naive_injective(const std::vector<Index>& f) {
  return std::set<Index>(f.begin(), f.end()).size() == f.size();
}

inline bool naive_isomorphic(const Structure& a, const Structure& b) {
  if (a.size() != b.size() || !(a.signature() == b.signature())) return false;
  std::vector<Index> p(a.size());
  for (Index i = 0; i < p.size(); ++i) p[i] = i;
  do {
    if (naive_hom(a, b, p) && naive_reflects(a, b, p)) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

// Naive game oracles: plain minimax over explicit positions, no memo.
enum class Game { one_sided, two_sided_noeq, two_sided_eq };

inline bool atomic_ok(Game g, const Structure& a, const Structure& b, const IndexTuple& xs, const IndexTuple& ys) {
  const std::size_t n = xs.size();
  if (g == Game::two_sided_eq)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if ((xs[i] == xs[j]) != (ys[i] == ys[j])) return false;
  for (const auto& [r, ar] : a.signature().symbols())
    for (const auto& pick : all_maps(static_cast<std::size_t>(ar), n)) {
      IndexTuple ta, tb;
      for (auto p : pick) {
        ta.push_back(xs[p]);
        tb.push_back(ys[p]);
      }
      bool in_a = a.holds(r, std::span<const Index>(ta)), in_b = b.holds(r, std::span<const Index>(tb));
      if (in_a && !in_b) return false;
      if (g != Game::one_sided && in_b && !in_a) return false;
    }
  return true;
}

inline bool naive_game(Game g, int rounds, const Structure& a, const Structure& b, IndexTuple xs = {},
                IndexTuple ys = {}) {
  if (!atomic_ok(g, a, b, xs, ys)) return false;
  if (rounds == 0) return true;
  auto spoiler_in = [&](bool in_a) {
    const Structure& s = in_a ? a : b;
    const Structure& d = in_a ? b : a;
    for (Index x = 0; x < s.size(); ++x) {
      bool answered = false;
      for (Index y = 0; y < d.size() && !answered; ++y) {
        IndexTuple nx = xs, ny = ys;
        nx.push_back(in_a ? x : y);
        ny.push_back(in_a ? y : x);
        answered = naive_game(g, rounds - 1, a, b, nx, ny);
      }
      if (!answered) return false;
    }
    return true;
  };
  return spoiler_in(true) && (g == Game::one_sided || spoiler_in(false));
}

}  // namespace fvm::test
