#include "fvm/game_comonads.hpp"

#include <algorithm>

#include "fvm/errors.hpp"

namespace fvm {

std::vector<Elem> word_letters(const Elem& w) { return term::items(w, '['); }
Elem make_word(std::span<const Elem> xs) { return term::group('[', xs); }
Elem pebble_letter(int p, const Elem& a) { return term::group('(', {std::to_string(p), a}); }

std::pair<int, Elem> split_pebble_letter(const Elem& letter) {
  auto xs = term::items(letter, '(');
  if (xs.size() != 2) throw DomainError("not a pebble letter: " + letter);
  return {std::stoi(xs[0]), xs[1]};
}

std::vector<Elem> path_items(const Elem& p) { return term::items(p, '{'); }
Elem make_path(std::span<const Elem> xs) { return term::group('{', xs); }

namespace {

bool is_prefix(const std::vector<Elem>& u, const std::vector<Elem>& v) {
  return u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin());
}

// Coextension for word-shaped comonads: the j-th output letter is computed
// from the j-th prefix.  `relabel` rebuilds a letter from the input letter
// and the value of f (identity for E_k, keeps the pebble for P).
template <class Relabel>
Elem coextend_word(const ElemFn& f, const Elem& w, Relabel relabel) {
  auto xs = word_letters(w);
  std::vector<Elem> out;
  out.reserve(xs.size());
  for (std::size_t j = 1; j <= xs.size(); ++j) {
    Elem prefix = term::group('[', std::span<const Elem>(xs.data(), j));
    out.push_back(relabel(xs[j - 1], f(prefix)));
  }
  return make_word(out);
}

// All words of length 1..l over `alphabet`, by length then lexicographically.
std::vector<std::vector<Elem>> all_words(const std::vector<Elem>& alphabet, int l) {
  std::vector<std::vector<Elem>> out, layer{{}};
  for (int len = 1; len <= l; ++len) {
    std::vector<std::vector<Elem>> next;
    for (const auto& w : layer)
      for (const auto& x : alphabet) {
        auto v = w;
        v.push_back(x);
        next.push_back(std::move(v));
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Relations of a word comonad: a tuple holds only if its words are pairwise
// prefix-comparable, i.e. all are prefixes of the longest one.  We enumerate
// tuples by their longest word w, drawing each entry from the prefixes of w.
template <class Admissible>
Structure word_structure(const Structure& a, const std::vector<std::vector<Elem>>& words,
                         const std::function<Elem(const Elem&)>& letter_base, Admissible admissible,
                         std::optional<Elem> point) {
  std::vector<Elem> names;
  names.reserve(words.size());
  for (const auto& w : words) names.push_back(make_word(w));
  std::vector<std::pair<Elem, std::size_t>> sorted;
  for (std::size_t i = 0; i < names.size(); ++i) sorted.emplace_back(names[i], i);
  std::sort(sorted.begin(), sorted.end());
  std::vector<Index> rank(names.size());
  std::vector<Elem> universe;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    rank[sorted[r].second] = static_cast<Index>(r);
    universe.push_back(sorted[r].first);
  }
  std::map<std::vector<Elem>, std::size_t> id;
  for (std::size_t i = 0; i < words.size(); ++i) id.emplace(words[i], i);

  std::map<std::string, std::vector<IndexTuple>, std::less<>> rels;
  for (const auto& [name, ar] : a.signature().symbols()) {
    auto& out = rels[name];
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      const auto& w = words[wi];
      std::vector<std::size_t> pre(w.size());
      for (std::size_t j = 1; j <= w.size(); ++j) {
        pre[j - 1] = id.at(std::vector<Elem>(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(j)));
      }
      std::vector<std::size_t> len(static_cast<std::size_t>(ar), 1);
      while (true) {
        bool has_top = std::find(len.begin(), len.end(), w.size()) != len.end();
        if (has_top && admissible(w, len)) {
          std::vector<Elem> last;
          for (auto l : len) last.push_back(letter_base(w[l - 1]));
          if (a.holds(name, std::span<const Elem>(last))) {
            IndexTuple t;
            for (auto l : len) t.push_back(rank[pre[l - 1]]);
            out.push_back(std::move(t));
          }
        }
        std::size_t i = len.size();
        while (i-- > 0) {
          if (++len[i] <= w.size()) break;
          len[i] = 1;
        }
        if (i == SIZE_MAX) break;
      }
    }
  }
  return Structure::from_indices(a.signature(), std::move(universe), std::move(rels), std::move(point));
}

}  // namespace

// ---- E_k ---------------------------------------------------------------------

ComonadSpec ef_comonad(int k) {
  if (k < 1) throw DomainError("E_k needs k >= 1");
  ComonadSpec c;
  c.name = "E" + std::to_string(k);
  c.kind = CategoryKind::plain;
  c.validate = [](const Structure& a) {
    if (a.pointed()) throw DomainError("E_k acts on plain structures");
  };
  c.elements = [k](const Structure& a) {
    std::vector<Elem> out;
    for (const auto& w : all_words(a.universe(), k)) out.push_back(make_word(w));
    return out;
  };
  c.object_map = [k](const Structure& a) {
    auto words = all_words(a.universe(), k);
    return word_structure(a, words, [](const Elem& x) { return x; },
                          [](const std::vector<Elem>&, const std::vector<std::size_t>&) { return true; },
                          std::nullopt);
  };
  c.contains = [k](const Structure& a, const Elem& w) {
    if (!term::is_group(w, '[')) return false;
    auto xs = word_letters(w);
    if (xs.empty() || xs.size() > static_cast<std::size_t>(k)) return false;
    return std::all_of(xs.begin(), xs.end(), [&](const Elem& x) { return a.contains(x); });
  };
  c.holds = [](const Structure& a, const std::string& r, std::span<const Elem> t) {
    std::vector<std::vector<Elem>> ws;
    for (const auto& w : t) ws.push_back(word_letters(w));
    for (const auto& u : ws)
      for (const auto& v : ws)
        if (!is_prefix(u, v) && !is_prefix(v, u)) return false;
    std::vector<Elem> last;
    for (const auto& w : ws) last.push_back(w.back());
    return a.holds(r, std::span<const Elem>(last));
  };
  c.counit = [](const Elem& w) { return word_letters(w).back(); };
  c.coextend = [](const ElemFn& f, const Elem& w) {
    return coextend_word(f, w, [](const Elem&, Elem v) { return v; });
  };
  c.prefix = [](const Elem& u, const Elem& v) { return is_prefix(word_letters(u), word_letters(v)); };
  return c;
}

// ---- P_{k,l} -----------------------------------------------------------------

namespace {

// Condition 2: if s is a proper-or-equal prefix of t, the pebble of s's last
// letter is not placed again in the rest of t.
bool pebble_compatible(const std::vector<Elem>& s, const std::vector<Elem>& t) {
  const std::vector<Elem>& shorter = s.size() <= t.size() ? s : t;
  const std::vector<Elem>& longer = s.size() <= t.size() ? t : s;
  if (!is_prefix(shorter, longer)) return false;
  int p = split_pebble_letter(shorter.back()).first;
  for (std::size_t j = shorter.size(); j < longer.size(); ++j) {
    if (split_pebble_letter(longer[j]).first == p) return false;
  }
  return true;
}

}  // namespace

ComonadSpec pebble_comonad(int k, int l, CategoryKind kind) {
  if (k < 1 || l < 1) throw DomainError("P_{k,l} needs k, l >= 1");
  ComonadSpec c;
  c.name = "P" + std::to_string(k) + "," + std::to_string(l) + (kind == CategoryKind::pointed ? "*" : "");
  c.kind = kind;
  c.validate = [kind](const Structure& a) {
    if ((kind == CategoryKind::pointed) != a.pointed()) {
      throw DomainError(kind == CategoryKind::pointed ? "pointed P_{k,l} needs a pointed structure"
                                                      : "P_{k,l} acts on plain structures");
    }
  };
  auto alphabet = [k](const Structure& a) {
    std::vector<Elem> out;
    for (int p = 0; p < k; ++p)
      for (const auto& x : a.universe()) out.push_back(pebble_letter(p, x));
    return out;
  };
  c.elements = [alphabet, l](const Structure& a) {
    std::vector<Elem> out;
    for (const auto& w : all_words(alphabet(a), l)) out.push_back(make_word(w));
    return out;
  };
  c.object_map = [alphabet, l, kind](const Structure& a) {
    auto words = all_words(alphabet(a), l);
    std::optional<Elem> point;
    if (kind == CategoryKind::pointed) point = make_word(std::vector<Elem>{pebble_letter(0, *a.point())});
    auto admissible = [](const std::vector<Elem>& w, const std::vector<std::size_t>& len) {
      for (auto li : len)
        for (auto lj : len) {
          if (li >= lj) continue;
          int p = split_pebble_letter(w[li - 1]).first;
          for (std::size_t j = li; j < lj; ++j)
            if (split_pebble_letter(w[j]).first == p) return false;
        }
      return true;
    };
    return word_structure(a, words, [](const Elem& x) { return split_pebble_letter(x).second; }, admissible,
                          point);
  };
  c.contains = [k, l](const Structure& a, const Elem& w) {
    if (!term::is_group(w, '[')) return false;
    auto xs = word_letters(w);
    if (xs.empty() || xs.size() > static_cast<std::size_t>(l)) return false;
    for (const auto& x : xs) {
      if (!term::is_group(x, '(')) return false;
      auto parts = term::items(x, '(');
      if (parts.size() != 2 || !a.contains(parts[1])) return false;
      if (parts[0] != std::to_string(std::clamp(std::atoi(parts[0].c_str()), 0, k - 1))) return false;
    }
    return true;
  };
  c.holds = [](const Structure& a, const std::string& r, std::span<const Elem> t) {
    std::vector<std::vector<Elem>> ws;
    for (const auto& w : t) ws.push_back(word_letters(w));
    for (const auto& u : ws)
      for (const auto& v : ws)
        if (!pebble_compatible(u, v)) return false;
    std::vector<Elem> last;
    for (const auto& w : ws) last.push_back(split_pebble_letter(w.back()).second);
    return a.holds(r, std::span<const Elem>(last));
  };
  c.counit = [](const Elem& w) { return split_pebble_letter(word_letters(w).back()).second; };
  c.coextend = [](const ElemFn& f, const Elem& w) {
    return coextend_word(f, w, [](const Elem& letter, const Elem& v) {
      return pebble_letter(split_pebble_letter(letter).first, v);
    });
  };
  c.prefix = [](const Elem& u, const Elem& v) { return is_prefix(word_letters(u), word_letters(v)); };
  if (kind == CategoryKind::pointed) {
    c.point = [](const Structure& a) { return make_word(std::vector<Elem>{pebble_letter(0, *a.point())}); };
  }
  return c;
}

// ---- M_k ---------------------------------------------------------------------

ComonadSpec modal_comonad(int k) {
  if (k < 1) throw DomainError("M_k needs k >= 1");
  ComonadSpec c;
  c.name = "M" + std::to_string(k);
  c.kind = CategoryKind::pointed;
  c.validate = [](const Structure& a) {
    if (!a.signature().modal()) throw DomainError("M_k needs a modal signature");
    if (!a.pointed()) throw DomainError("M_k acts on pointed structures");
  };
  auto paths = [k](const Structure& a) {
    std::vector<std::vector<Elem>> out{{*a.point()}};
    std::size_t begin = 0;
    for (int step = 0; step < k; ++step) {
      std::size_t end = out.size();
      for (std::size_t i = begin; i < end; ++i) {
        Index last = a.at(out[i].back());
        for (const auto& [name, ar] : a.signature().symbols()) {
          if (ar != 2) continue;
          for (const auto& t : a.tuples(name)) {
            if (t[0] != last) continue;
            auto p = out[i];
            p.push_back(name);
            p.push_back(a.universe()[t[1]]);
            out.push_back(std::move(p));
          }
        }
      }
      begin = end;
    }
    return out;
  };
  c.elements = [paths](const Structure& a) {
    std::vector<Elem> out;
    for (const auto& p : paths(a)) out.push_back(make_path(p));
    return out;
  };
  c.object_map = [paths](const Structure& a) {
    auto ps = paths(a);
    Structure::Relations rels;
    std::vector<Elem> universe;
    for (const auto& p : ps) {
      Elem name = make_path(p);
      universe.push_back(name);
      for (const auto& [sym, ar] : a.signature().symbols()) {
        if (ar == 1 && a.holds(sym, std::span<const Elem>(&p.back(), 1))) rels[sym].push_back({name});
      }
      if (p.size() >= 3) {
        std::vector<Elem> parent(p.begin(), p.end() - 2);
        rels[p[p.size() - 2]].push_back({make_path(parent), name});
      }
    }
    return Structure(a.signature(), std::move(universe), rels, make_path(ps.front()));
  };
  c.contains = [k](const Structure& a, const Elem& w) {
    if (!term::is_group(w, '{')) return false;
    auto xs = path_items(w);
    if (xs.empty() || xs.size() % 2 == 0 || xs.size() > static_cast<std::size_t>(2 * k + 1)) return false;
    if (xs[0] != *a.point()) return false;
    for (std::size_t j = 1; j + 1 < xs.size(); j += 2) {
      if (!a.signature().contains(xs[j]) || a.signature().arity(xs[j]) != 2) return false;
      std::vector<Elem> step{xs[j - 1], xs[j + 1]};
      if (!a.holds(xs[j], std::span<const Elem>(step))) return false;
    }
    return true;
  };
  c.holds = [](const Structure& a, const std::string& r, std::span<const Elem> t) {
    if (t.size() == 1) {
      auto xs = path_items(t[0]);
      return a.holds(r, std::span<const Elem>(&xs.back(), 1));
    }
    auto s0 = path_items(t[0]);
    auto s1 = path_items(t[1]);
    return s1.size() == s0.size() + 2 && is_prefix(s0, s1) && s1[s1.size() - 2] == r;
  };
  c.counit = [](const Elem& p) { return path_items(p).back(); };
  c.coextend = [](const ElemFn& f, const Elem& p) {
    auto xs = path_items(p);
    std::vector<Elem> out;
    out.reserve(xs.size());
    for (std::size_t j = 0; j < xs.size(); j += 2) {
      if (j) out.push_back(xs[j - 1]);
      out.push_back(f(make_path(std::span<const Elem>(xs.data(), j + 1))));
    }
    return make_path(out);
  };
  c.point = [](const Structure& a) { return make_path(std::vector<Elem>{*a.point()}); };
  c.prefix = [](const Elem& u, const Elem& v) { return is_prefix(path_items(u), path_items(v)); };
  return c;
}

// ---- Cos_l -------------------------------------------------------------------

void require_graph(const Structure& g) {
  if (!(g.signature() == Signature{{"E", 2}})) throw DomainError("expected a graph over {E/2}");
  if (g.pointed()) throw DomainError("graphs are plain structures");
  for (const auto& t : g.tuples("E")) {
    if (t[0] == t[1]) throw DomainError("graph has a loop at " + g.universe()[t[0]]);
    IndexTuple back{t[1], t[0]};
    if (!g.holds("E", std::span<const Index>(back))) throw DomainError("graph edge relation is not symmetric");
  }
}

namespace {

Elem walk_point(std::span<const Elem> walk, std::size_t i) {
  return term::group('(', {term::group('[', walk), std::to_string(i)});
}

std::pair<std::vector<Elem>, std::size_t> split_walk_point(const Elem& x) {
  auto xs = term::items(x, '(');
  if (xs.size() != 2) throw DomainError("not a walk point: " + x);
  return {term::items(xs[0], '['), static_cast<std::size_t>(std::stoul(xs[1]))};
}

bool positions_adjacent(std::size_t i, std::size_t j, std::size_t len) {
  return (i + 1) % len == j || (j + 1) % len == i;
}

}  // namespace

ComonadSpec cos_comonad(int l) {
  if (l < 1) throw DomainError("Cos_l needs l >= 1");
  ComonadSpec c;
  c.name = "Cos" + std::to_string(l);
  c.kind = CategoryKind::plain;
  c.validate = require_graph;
  auto walks = [l](const Structure& g) {
    std::vector<std::vector<Elem>> out, layer;
    for (const auto& v : g.universe()) layer.push_back({v});
    for (int len = 2; len <= l; ++len) {
      std::vector<std::vector<Elem>> next;
      for (const auto& w : layer)
        for (const auto& t : g.tuples("E")) {
          if (g.universe()[t[0]] != w.back()) continue;
          auto v = w;
          v.push_back(g.universe()[t[1]]);
          next.push_back(std::move(v));
        }
      for (const auto& w : next) {
        std::vector<Elem> wrap{w.back(), w.front()};
        if (g.holds("E", std::span<const Elem>(wrap))) out.push_back(w);
      }
      layer = std::move(next);
    }
    return out;
  };
  c.elements = [walks](const Structure& g) {
    std::vector<Elem> out;
    for (const auto& w : walks(g))
      for (std::size_t i = 0; i < w.size(); ++i) out.push_back(walk_point(w, i));
    return out;
  };
  c.object_map = [walks](const Structure& g) {
    Structure::Relations rels;
    rels["E"];
    std::vector<Elem> universe;
    for (const auto& w : walks(g)) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        universe.push_back(walk_point(w, i));
        for (std::size_t j = 0; j < w.size(); ++j)
          if (i != j && positions_adjacent(i, j, w.size())) rels["E"].push_back({walk_point(w, i), walk_point(w, j)});
      }
    }
    return Structure(g.signature(), std::move(universe), rels);
  };
  c.contains = [l](const Structure& g, const Elem& x) {
    if (!term::is_group(x, '(')) return false;
    auto parts = term::items(x, '(');
    if (parts.size() != 2 || !term::is_group(parts[0], '[')) return false;
    auto w = term::items(parts[0], '[');
    if (w.size() < 2 || w.size() > static_cast<std::size_t>(l)) return false;
    if (parts[1] != std::to_string(std::atoi(parts[1].c_str())) ||
        static_cast<std::size_t>(std::atoi(parts[1].c_str())) >= w.size())
      return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::vector<Elem> e{w[i], w[(i + 1) % w.size()]};
      if (!g.holds("E", std::span<const Elem>(e))) return false;
    }
    return true;
  };
  c.holds = [](const Structure&, const std::string&, std::span<const Elem> t) {
    auto [w0, i] = split_walk_point(t[0]);
    auto [w1, j] = split_walk_point(t[1]);
    return w0 == w1 && i != j && positions_adjacent(i, j, w0.size());
  };
  c.counit = [](const Elem& x) {
    auto [w, i] = split_walk_point(x);
    return w.at(i);
  };
  c.coextend = [](const ElemFn& f, const Elem& x) {
    auto [w, i] = split_walk_point(x);
    std::vector<Elem> d;
    d.reserve(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) d.push_back(f(walk_point(w, j)));
    return walk_point(d, i);
  };
  return c;
}

}  // namespace fvm
