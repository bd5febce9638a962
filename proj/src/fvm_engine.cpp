#include "fvm/fvm_engine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fvm/errors.hpp"

namespace fvm {

// ---- witnesses -----------------------------------------------------------------

namespace {

void require_aligned(const KleisliLawSpec& law, std::size_t n, const std::vector<std::string>& names) {
  if (n != law.op.arity) throw DomainError(law.name + ": expected " + std::to_string(law.op.arity) + " witnesses");
  for (std::size_t i = 0; i < n; ++i) {
    if (names[i] != law.sources[i].name) {
      throw DomainError(law.name + ": witness " + std::to_string(i + 1) + " is for " + names[i] + ", expected " +
                        law.sources[i].name);
    }
  }
}

// H(f⃗) ∘ κ_{A⃗} : D(H(A⃗)) -> H(B⃗).
StructMap lift_witness(const KleisliLawSpec& law, const std::vector<Structure>& as, const std::vector<StructMap>& fs) {
  std::vector<Structure> bs;
  std::vector<ElemFn> fns;
  for (const auto& f : fs) {
    bs.push_back(f.target());
    fns.push_back(as_fn(f));
  }
  auto dha = std::make_shared<const Structure>(apply(law.target, law.op.apply(as)));
  auto hb = std::make_shared<const Structure>(law.op.apply(bs));
  std::vector<Elem> image;
  image.reserve(dha->size());
  try {
    for (const auto& w : dha->universe()) image.push_back(law.op.map_elem(fns, law.kappa(w)));
    return StructMap(dha, hb, std::move(image));
  } catch (const MalformedMap& e) {
    throw IntegrityError(law.name + ": composite witness leaves its target: " + e.what());
  }
}

}  // namespace

PEWitness compose_pe_witness(const KleisliLawSpec& law, std::span<const PEWitness> ws) {
  std::vector<std::string> names;
  std::vector<Structure> as;
  std::vector<StructMap> fs;
  for (const auto& w : ws) {
    names.push_back(w.comonad.name);
    as.push_back(w.source);
    fs.push_back(w.f);
  }
  require_aligned(law, ws.size(), names);
  StructMap f = lift_witness(law, as, fs);
  if (!is_hom(f)) throw IntegrityError(law.name + ": composite witness is not a homomorphism");
  return {law.target, law.op.apply(as), f};
}

CountingWitness compose_counting_witness(const KleisliLawSpec& law, std::span<const CountingWitness> ws) {
  std::vector<std::string> names;
  std::vector<Structure> as, bs;
  std::vector<StructMap> fs, gs;
  for (const auto& w : ws) {
    if (!verify_kleisli_inverse(w.comonad, w.f, w.g)) throw DomainError(law.name + ": input witness is not a Kleisli iso");
    names.push_back(w.comonad.name);
    as.push_back(w.a());
    bs.push_back(w.b());
    fs.push_back(w.f);
    gs.push_back(w.g);
  }
  require_aligned(law, ws.size(), names);
  StructMap f = lift_witness(law, as, fs);
  StructMap g = lift_witness(law, bs, gs);
  if (!verify_kleisli_inverse(law.target, f, g)) {
    throw IntegrityError(law.name + ": composite witnesses are not Kleisli inverses");
  }
  return {law.target, f, g};
}

bool verify_kleisli_inverse(const ComonadSpec& c, const StructMap& f, const StructMap& g) {
  if (!(f.source() == apply(c, g.target())) || !(g.source() == apply(c, f.target()))) {
    throw MalformedMap("verify_kleisli_inverse: endpoints do not match");
  }
  auto one_side = [&](const StructMap& p, const StructMap& q) {
    auto pf = as_fn(p);
    for (const auto& w : p.source().universe()) {
      Elem x = c.coextend(pf, w);
      if (!q.source().contains(x) || q(x) != c.counit(w)) return false;
    }
    return true;
  };
  return one_side(f, g) && one_side(g, f);
}

std::optional<PEWitness> search_pe_witness(const ComonadSpec& c, const Structure& a, const Structure& b) {
  Structure ca = apply(c, a);
  auto h = search_homomorphism(ca, b);
  if (!h) return std::nullopt;
  return PEWitness{c, a, *h};
}

std::string_view to_string(SearchVerdict v) {
  switch (v) {
    case SearchVerdict::found: return "found";
    case SearchVerdict::not_found: return "not-found";
    case SearchVerdict::indeterminate: return "indeterminate";
  }
  return "?";
}

KleisliIsoResult search_kleisli_iso(const ComonadSpec& c, const Structure& a, const Structure& b, std::size_t budget) {
  KleisliIsoResult out;
  const Structure ca = apply(c, a);
  const Structure cb = apply(c, b);
  // f* and g* are then mutually inverse homs, so C(A) ≅ C(B).
  if (ca.size() != cb.size()) return out;
  for (const auto& [name, ar] : ca.signature().symbols()) {
    if (ca.tuples(name).size() != cb.tuples(name).size()) return out;
  }
  std::vector<Index> eps_a, eps_b;
  for (const auto& w : ca.universe()) eps_a.push_back(a.at(c.counit(w)));
  for (const auto& v : cb.universe()) eps_b.push_back(b.at(c.counit(v)));

  enumerate_homomorphisms(ca, b, {}, [&](std::span<const Index> f) {
    if (++out.work > budget) {
      out.verdict = SearchVerdict::indeterminate;
      return false;
    }
    std::vector<char> hit(b.size(), 0);
    for (Index x : f) hit[x] = 1;
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return true;  // f ∘ g* = ε_B is onto
    auto ffn = [&](const Elem& x) { return b.universe()[f[ca.at(x)]]; };
    // g ∘ f* = ε_A fixes g on the image of f*.
    std::vector<std::optional<Index>> pre(cb.size());
    for (Index w = 0; w < ca.size(); ++w) {
      auto v = cb.index_of(c.coextend(ffn, ca.universe()[w]));
      if (!v) return true;
      if (pre[*v] && *pre[*v] != eps_a[w]) return true;
      pre[*v] = eps_a[w];
    }
    SearchOptions opts;
    opts.preassigned = std::move(pre);
    bool stop = false;
    enumerate_homomorphisms(cb, a, opts, [&](std::span<const Index> g) {
      if (++out.work > budget) {
        out.verdict = SearchVerdict::indeterminate;
        stop = true;
        return false;
      }
      auto gfn = [&](const Elem& x) { return a.universe()[g[cb.at(x)]]; };
      for (Index v = 0; v < cb.size(); ++v) {
        auto w = ca.index_of(c.coextend(gfn, cb.universe()[v]));
        if (!w || f[*w] != eps_b[v]) return true;
      }
      out.verdict = SearchVerdict::found;
      out.witness = CountingWitness{c, map_from_indices(ca, b, f), map_from_indices(cb, a, g)};
      stop = true;
      return false;
    });
    return !stop;
  });
  return out;
}

// ---- game oracles --------------------------------------------------------------

namespace {

using Pair = std::pair<Index, Index>;
using Position = std::vector<Pair>;  // sorted, duplicate-free

Position extend(const Position& p, Pair q) {
  Position out = p;
  auto it = std::lower_bound(out.begin(), out.end(), q);
  if (it == out.end() || *it != q) out.insert(it, q);
  return out;
}

// Every tuple of `x` over chosen elements goes to a tuple of `y` under every
// choice of partners.  `first` selects which side of the pairs is in x.
bool preserves(const Structure& x, const Structure& y, const Position& p, bool first) {
  std::vector<std::vector<Index>> partners(x.size());
  for (const auto& [u, v] : p) {
    if (first) partners[u].push_back(v);
    else partners[v].push_back(u);
  }
  for (const auto& [name, ar] : x.signature().symbols()) {
    for (const auto& t : x.tuples(name)) {
      bool covered = std::all_of(t.begin(), t.end(), [&](Index e) { return !partners[e].empty(); });
      if (!covered) continue;
      std::vector<std::size_t> pick(t.size(), 0);
      IndexTuple img(t.size());
      while (true) {
        for (std::size_t j = 0; j < t.size(); ++j) img[j] = partners[t[j]][pick[j]];
        if (!y.holds(name, std::span<const Index>(img))) return false;
        std::size_t j = t.size();
        while (j-- > 0) {
          if (++pick[j] < partners[t[j]].size()) break;
          pick[j] = 0;
        }
        if (j == SIZE_MAX) break;
      }
    }
  }
  return true;
}

bool partial_bijection(const Position& p) {
  std::set<Index> left, right;
  for (const auto& [u, v] : p) {
    left.insert(u);
    right.insert(v);
  }
  return left.size() == p.size() && right.size() == p.size();
}

class Game {
 public:
  enum class Kind { one_sided, two_sided, with_equality };
  Game(const Structure& a, const Structure& b, Kind kind) : a_(a), b_(b), kind_(kind) {
    if (!(a.signature() == b.signature())) throw SignatureMismatch("game on structures over different signatures");
  }

  bool win(const Position& p, int rounds) {
    if (rounds == 0) return true;
    auto key = std::make_pair(rounds, p);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = spoiler_in_a(p, rounds) && (kind_ == Kind::one_sided || spoiler_in_b(p, rounds));
    memo_.emplace(std::move(key), ok);
    return ok;
  }

  bool legal(const Position& p) const {
    if (kind_ == Kind::with_equality && !partial_bijection(p)) return false;
    if (!preserves(a_, b_, p, true)) return false;
    return kind_ == Kind::one_sided || preserves(b_, a_, p, false);
  }

 private:
  bool spoiler_in_a(const Position& p, int rounds) {
    for (Index x = 0; x < a_.size(); ++x) {
      bool answered = false;
      for (Index y = 0; y < b_.size() && !answered; ++y) {
        Position q = extend(p, {x, y});
        answered = legal(q) && win(q, rounds - 1);
      }
      if (!answered) return false;
    }
    return true;
  }
  bool spoiler_in_b(const Position& p, int rounds) {
    for (Index y = 0; y < b_.size(); ++y) {
      bool answered = false;
      for (Index x = 0; x < a_.size() && !answered; ++x) {
        Position q = extend(p, {x, y});
        answered = legal(q) && win(q, rounds - 1);
      }
      if (!answered) return false;
    }
    return true;
  }

  const Structure& a_;
  const Structure& b_;
  Kind kind_;
  std::map<std::pair<int, Position>, bool> memo_;
};

bool play(int k, const Structure& a, const Structure& b, Game::Kind kind) {
  if (k < 0) throw DomainError("negative number of rounds");
  if (a.pointed() || b.pointed()) throw DomainError("the games compare plain structures");
  Game g(a, b, kind);
  return g.win({}, k);
}

}  // namespace

bool decide_pe_game(int k, const Structure& a, const Structure& b) { return play(k, a, b, Game::Kind::one_sided); }

bool decide_fo_noeq_equiv(int k, const Structure& a, const Structure& b) {
  return play(k, a, b, Game::Kind::two_sided);
}

bool decide_fo_eq_equiv(int k, const Structure& a, const Structure& b) {
  return play(k, a, b, Game::Kind::with_equality);
}

bool decide_modal_sim(int k, const Structure& a, const Structure& b) {
  if (k < 0) throw DomainError("negative modal depth");
  if (!(a.signature() == b.signature())) throw SignatureMismatch("simulation across signatures");
  if (!a.signature().modal()) throw DomainError("simulation needs a modal signature");
  if (!a.pointed() || !b.pointed()) throw DomainError("simulation needs pointed structures");
  std::vector<std::string> unary, binary;
  for (const auto& [name, ar] : a.signature().symbols()) (ar == 1 ? unary : binary).push_back(name);
  auto succ = [](const Structure& s, const std::string& r, Index x) {
    std::vector<Index> out;
    for (const auto& t : s.tuples(r))
      if (t[0] == x) out.push_back(t[1]);
    return out;
  };
  std::map<std::tuple<int, Index, Index>, bool> memo;
  std::function<bool(Index, Index, int)> sim = [&](Index x, Index y, int d) -> bool {
    auto key = std::make_tuple(d, x, y);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = true;
    for (const auto& p : unary) {
      Index xi[] = {x}, yi[] = {y};
      if (a.holds(p, std::span<const Index>(xi)) && !b.holds(p, std::span<const Index>(yi))) ok = false;
    }
    for (std::size_t r = 0; ok && d > 0 && r < binary.size(); ++r) {
      auto ys = succ(b, binary[r], y);
      for (Index x2 : succ(a, binary[r], x)) {
        bool matched = std::any_of(ys.begin(), ys.end(), [&](Index y2) { return sim(x2, y2, d - 1); });
        if (!matched) {
          ok = false;
          break;
        }
      }
    }
    memo.emplace(key, ok);
    return ok;
  };
  return sim(a.point_index(), b.point_index(), k);
}

// ---- counterexamples -------------------------------------------------------------

std::optional<FvmCounterexample> find_fvm_counterexample(const OperationSpec& op, const RelationOracle& related,
                                                         std::span<const Structure> candidates) {
  const std::size_t n = op.arity;
  std::vector<std::size_t> bounds;
  for (const auto& s : candidates) bounds.push_back(s.size());
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  std::map<std::pair<std::size_t, std::size_t>, bool> rel_memo;
  auto rel = [&](std::size_t i, std::size_t j) {
    auto key = std::make_pair(i, j);
    if (auto it = rel_memo.find(key); it != rel_memo.end()) return it->second;
    return rel_memo[key] = related(candidates[i], candidates[j]);
  };

  std::size_t previous = 0;
  for (std::size_t bound : bounds) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i].size() > bound) continue;
      for (std::size_t j = 0; j < candidates.size(); ++j)
        if (candidates[j].size() <= bound && rel(i, j)) pairs.emplace_back(i, j);
    }
    if (pairs.empty()) continue;
    auto is_new = [&](const std::pair<std::size_t, std::size_t>& p) {
      return std::max(candidates[p.first].size(), candidates[p.second].size()) > previous;
    };
    std::vector<std::size_t> pick(n, 0);
    while (true) {
      bool fresh = false;
      for (std::size_t s = 0; s < n; ++s) fresh = fresh || is_new(pairs[pick[s]]);
      if (fresh) {
        std::vector<Structure> as, bs;
        for (std::size_t s = 0; s < n; ++s) {
          as.push_back(candidates[pairs[pick[s]].first]);
          bs.push_back(candidates[pairs[pick[s]].second]);
        }
        Structure ha = op.apply(as), hb = op.apply(bs);
        if (!related(ha, hb)) return FvmCounterexample{as, bs, ha, hb};
      }
      std::size_t s = n;
      while (s-- > 0) {
        if (++pick[s] < pairs.size()) break;
        pick[s] = 0;
      }
      if (s == SIZE_MAX) break;
    }
    previous = bound;
  }
  return std::nullopt;
}

}  // namespace fvm
