#include "fvm/coalgebras.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "fvm/errors.hpp"

namespace fvm {
namespace {

ElemFn alpha_fn(const Coalgebra& x) {
  return [&x](const Elem& e) { return x(e); };
}

ElemFn map_fn(const StructMap& f) {
  return [&f](const Elem& e) { return f(e); };
}

// C(f) at one element: (f∘ε)*.
Elem functor_at(const ComonadSpec& c, const ElemFn& f, const Elem& w) {
  return c.coextend([&](const Elem& z) { return f(c.counit(z)); }, w);
}

std::vector<Structure> carriers(std::span<const Coalgebra> xs) {
  std::vector<Structure> out;
  for (const auto& x : xs) out.push_back(x.carrier);
  return out;
}

std::vector<Elem> down_set(const Coalgebra& x, const ForestOrder& ord, Index v) {
  std::vector<Elem> out;
  for (Index u = 0; u < x.carrier.size(); ++u)
    if (ord.leq[u][v]) out.push_back(x.carrier.universe()[u]);
  return out;
}

StructMap inclusion(const Structure& sub, const Structure& whole) {
  return StructMap(sub, whole, sub.universe());
}

bool morphism_condition(const Coalgebra& x, const Coalgebra& y, const ElemFn& f) {
  for (Index i = 0; i < x.carrier.size(); ++i)
    if (y(f(x.carrier.universe()[i])) != functor_at(x.comonad, f, x.alpha[i])) return false;
  return true;
}

void require_arity(const KleisliLawSpec& law, std::size_t n) {
  if (n != law.op.arity)
    throw DomainError("law " + law.name + " expects " + std::to_string(law.op.arity) + " arguments");
}

}  // namespace

// ---- coalgebras ----------------------------------------------------------------

LawReport check_coalgebra(const Coalgebra& x) {
  LawReport r;
  const auto& c = x.comonad;
  const auto& a = x.carrier;
  const std::string id = structure_id(a);
  if (x.alpha.size() != a.size()) {
    r.add("alpha-hom", id, false, "alpha has " + std::to_string(x.alpha.size()) + " values");
    return r;
  }
  auto guarded = [&](const std::string& law, auto&& body) {
    try {
      auto [ok, detail] = body();
      r.add(law, id, ok, detail);
    } catch (const Error& e) {
      r.add(law, id, false, e.what());
    }
  };
  guarded("alpha-hom", [&]() -> std::pair<bool, std::string> {
    for (Index i = 0; i < a.size(); ++i)
      if (!c.contains(a, x.alpha[i])) return {false, "alpha(" + a.universe()[i] + ") outside C(A)"};
    for (const auto& [sym, ar] : a.signature().symbols()) {
      for (const auto& t : a.tuples(sym)) {
        std::vector<Elem> img;
        for (Index i : t) img.push_back(x.alpha[i]);
        if (!c.holds(a, sym, img)) return {false, "tuple of " + sym + " not preserved"};
      }
    }
    if (c.kind == CategoryKind::pointed && x.alpha[a.point_index()] != c.point(a))
      return {false, "point not preserved"};
    return {true, ""};
  });
  guarded("counit", [&]() -> std::pair<bool, std::string> {
    for (Index i = 0; i < a.size(); ++i)
      if (c.counit(x.alpha[i]) != a.universe()[i]) return {false, "at " + a.universe()[i]};
    return {true, ""};
  });
  guarded("comult", [&]() -> std::pair<bool, std::string> {
    auto al = alpha_fn(x);
    for (Index i = 0; i < a.size(); ++i)
      if (functor_at(c, al, x.alpha[i]) != delta(c, x.alpha[i])) return {false, "at " + a.universe()[i]};
    return {true, ""};
  });
  if (c.prefix) {
    guarded("forest", [&]() -> std::pair<bool, std::string> {
      return {forest_order(x).is_forest, ""};
    });
  }
  return r;
}

bool is_coalgebra(const Coalgebra& x) {
  try {
    return check_coalgebra(x).passed();
  } catch (const Error&) {
    return false;
  }
}

Coalgebra cofree(const ComonadSpec& c, const Structure& a) {
  Structure ca = apply(c, a);
  std::vector<Elem> alpha;
  for (const auto& w : ca.universe()) alpha.push_back(delta(c, w));
  return Coalgebra{c, std::move(ca), std::move(alpha)};
}

ForestOrder forest_order(const Coalgebra& x) {
  if (!x.comonad.prefix) throw DomainError("comonad " + x.comonad.name + " has no prefix order");
  const std::size_t n = x.carrier.size();
  ForestOrder ord;
  ord.leq.assign(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ord.leq[i][j] = x.comonad.prefix(x.alpha[i], x.alpha[j]);
  for (std::size_t v = 0; v < n && ord.is_forest; ++v)
    for (std::size_t i = 0; i < n && ord.is_forest; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (ord.leq[i][v] && ord.leq[j][v] && !ord.leq[i][j] && !ord.leq[j][i]) {
          ord.is_forest = false;
          break;
        }
  return ord;
}

bool is_path(const Coalgebra& x) {
  if (x.carrier.empty()) return false;
  auto ord = forest_order(x);
  if (!ord.is_forest) return false;
  for (std::size_t i = 0; i < ord.leq.size(); ++i)
    for (std::size_t j = 0; j < ord.leq.size(); ++j)
      if (!ord.leq[i][j] && !ord.leq[j][i]) return false;
  return true;
}

bool is_coalgebra_morphism(const Coalgebra& x, const Coalgebra& y, const StructMap& f) {
  if (!(f.source() == x.carrier) || !(f.target() == y.carrier)) return false;
  if (!is_hom(f)) return false;
  try {
    return morphism_condition(x, y, map_fn(f));
  } catch (const Error&) {
    return false;
  }
}

CoalgebraMorphism make_coalgebra_morphism(const Coalgebra& x, const Coalgebra& y, const StructMap& f) {
  if (!is_coalgebra_morphism(x, y, f))
    throw DomainError("not a coalgebra morphism: " + structure_id(x.carrier) + " -> " + structure_id(y.carrier));
  return CoalgebraMorphism{x, y, f};
}

CoalgebraMorphism coalgebra_identity(const Coalgebra& x) {
  return CoalgebraMorphism{x, x, StructMap::identity(x.carrier)};
}

CoalgebraMorphism compose(const CoalgebraMorphism& g, const CoalgebraMorphism& f) {
  return CoalgebraMorphism{f.source, g.target, compose(g.map, f.map)};
}

Coalgebra sub_coalgebra(const Coalgebra& x, std::span<const Elem> subset) {
  Structure s = induced(x.carrier, subset);
  std::vector<Elem> alpha;
  for (const auto& e : s.universe()) alpha.push_back(x(e));
  return Coalgebra{x.comonad, std::move(s), std::move(alpha)};
}

std::vector<PathEmbedding> canonical_path_embeddings(const Coalgebra& x) {
  auto ord = forest_order(x);
  std::vector<PathEmbedding> out;
  for (Index v = 0; v < x.carrier.size(); ++v) {
    Coalgebra p = sub_coalgebra(x, down_set(x, ord, v));
    StructMap e = inclusion(p.carrier, x.carrier);
    out.push_back(PathEmbedding{p, CoalgebraMorphism{p, x, e}});
  }
  return out;
}

bool is_pathwise_embedding(const CoalgebraMorphism& f) {
  const auto& x = f.source;
  auto ord = forest_order(x);
  for (Index v = 0; v < x.carrier.size(); ++v) {
    Structure p = induced(x.carrier, down_set(x, ord, v));
    std::vector<Elem> img;
    for (const auto& e : p.universe()) img.push_back(f.map(e));
    if (!is_embedding(StructMap(p, f.target.carrier, img))) return false;
  }
  return true;
}

namespace {

// Looks for d: ↓w -> X with f∘d = id and d(f(u)) = u on ↓v, a coalgebra
// morphism.  v < 0 stands for the empty path.
bool lift_square(const CoalgebraMorphism& f, const ForestOrder& ox, const ForestOrder& oy, long v, Index w) {
  const auto& x = f.source;
  const auto& y = f.target;
  std::vector<Index> dom;
  for (Index u = 0; u < y.carrier.size(); ++u)
    if (oy.leq[u][w]) dom.push_back(u);
  // Chains: sort by the number of elements below.
  auto depth = [&](Index u) {
    std::size_t d = 0;
    for (Index t : dom) d += oy.leq[t][u];
    return d;
  };
  std::sort(dom.begin(), dom.end(), [&](Index a, Index b) { return depth(a) < depth(b); });

  std::map<Index, Index> forced;
  if (v >= 0) {
    for (Index u = 0; u < x.carrier.size(); ++u) {
      if (!ox.leq[u][v]) continue;
      Index fu = y.carrier.at(f.map.at(u));
      auto [it, fresh] = forced.emplace(fu, u);
      if (!fresh && it->second != u) return false;
    }
  }
  std::vector<std::vector<Index>> cands(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (auto it = forced.find(dom[i]); it != forced.end()) {
      cands[i] = {it->second};
      continue;
    }
    for (Index u = 0; u < x.carrier.size(); ++u)
      if (y.carrier.at(f.map.at(u)) == dom[i]) cands[i].push_back(u);
    if (cands[i].empty()) return false;
  }

  std::unordered_map<Elem, Elem> d;
  auto dfn = [&](const Elem& e) -> Elem {
    auto it = d.find(e);
    if (it == d.end()) throw MalformedMap("diagonal undefined at " + e);
    return it->second;
  };
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == dom.size()) {
      std::vector<Elem> sub;
      for (Index u : dom) sub.push_back(y.carrier.universe()[u]);
      Structure qs = induced(y.carrier, sub);
      std::vector<Elem> img;
      for (const auto& e : qs.universe()) img.push_back(d.at(e));
      return is_hom(StructMap(qs, x.carrier, img));
    }
    const Elem& ye = y.carrier.universe()[dom[i]];
    for (Index c : cands[i]) {
      // Order: everything already placed lies below.
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = ox.leq[x.carrier.at(d[y.carrier.universe()[dom[j]]])][c];
      if (!ok) continue;
      d[ye] = x.carrier.universe()[c];
      try {
        ok = x.alpha[c] == functor_at(y.comonad, dfn, y.alpha[dom[i]]);
      } catch (const Error&) {
        ok = false;
      }
      if (ok && self(self, i + 1)) return true;
      d.erase(ye);
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace

bool is_open(const CoalgebraMorphism& f) {
  const auto& x = f.source;
  const auto& y = f.target;
  auto ox = forest_order(x);
  auto oy = forest_order(y);
  const bool with_empty = x.comonad.kind == CategoryKind::plain;
  for (long v = with_empty ? -1 : 0; v < static_cast<long>(x.carrier.size()); ++v) {
    for (Index w = 0; w < y.carrier.size(); ++w) {
      if (v >= 0 && !oy.leq[y.carrier.at(f.map.at(static_cast<Index>(v)))][w]) continue;
      if (!lift_square(f, ox, oy, v, w)) return false;
    }
  }
  return true;
}

std::vector<CoalgebraMorphism> coalgebra_morphisms(const Coalgebra& x, const Coalgebra& y, std::size_t limit) {
  std::vector<CoalgebraMorphism> out;
  if (limit == 0) return out;
  enumerate_homomorphisms(x.carrier, y.carrier, {}, [&](std::span<const Index> img) {
    StructMap f = map_from_indices(x.carrier, y.carrier, img);
    bool ok = false;
    try {
      ok = morphism_condition(x, y, map_fn(f));
    } catch (const Error&) {
    }
    if (ok) out.push_back(CoalgebraMorphism{x, y, f});
    return out.size() < limit;
  });
  return out;
}

std::vector<Coalgebra> all_coalgebras(const ComonadSpec& c, std::span<const Structure> bases) {
  std::vector<Coalgebra> out;
  for (const auto& a : bases) {
    c.validate(a);
    std::vector<std::vector<Elem>> cands(a.size());
    for (const auto& w : c.elements(a)) {
      if (!c.contains(a, w)) continue;
      cands[a.at(c.counit(w))].push_back(w);
    }
    std::vector<std::size_t> pick(a.size(), 0);
    if (std::any_of(cands.begin(), cands.end(), [](const auto& v) { return v.empty(); })) continue;
    while (true) {
      Coalgebra x{c, a, {}};
      for (std::size_t i = 0; i < a.size(); ++i) x.alpha.push_back(cands[i][pick[i]]);
      if (is_coalgebra(x)) out.push_back(std::move(x));
      std::size_t i = 0;
      for (; i < a.size(); ++i) {
        if (++pick[i] < cands[i].size()) break;
        pick[i] = 0;
      }
      if (i == a.size()) break;
    }
  }
  return out;
}

CoalgebraFactorisation factor_coalgebra_morphism(const CoalgebraMorphism& f) {
  std::vector<Elem> image(f.map.image());
  Coalgebra im = sub_coalgebra(f.target, image);
  StructMap q(f.source.carrier, im.carrier, f.map.image());
  StructMap e = inclusion(im.carrier, f.target.carrier);
  if (!is_coalgebra_morphism(f.source, im, q) || !is_coalgebra_morphism(im, f.target, e) || !is_embedding(e))
    throw IntegrityError("image of " + structure_id(f.source.carrier) + " is not a sub-coalgebra");
  return {CoalgebraMorphism{f.source, im, q}, CoalgebraMorphism{im, f.target, e}};
}

// ---- lifting ------------------------------------------------------------------

Coalgebra lift_operation(const KleisliLawSpec& law, std::span<const Coalgebra> xs) {
  require_arity(law, xs.size());
  const auto& d = law.target;
  std::vector<ElemFn> alphas;
  for (const auto& x : xs) alphas.push_back(alpha_fn(x));
  Structure ha = apply_op(law.op, carriers(xs));
  Structure dha = apply(d, ha);
  auto kappa_at = [&](const Elem& z) { return law.kappa(d.counit(z)); };
  auto h_alpha_at = [&](const Elem& z) { return law.op.map_elem(alphas, d.counit(z)); };
  std::vector<Elem> keep;
  for (const auto& w : dha.universe()) {
    if (d.coextend(kappa_at, delta(d, w)) == d.coextend(h_alpha_at, w)) keep.push_back(w);
  }
  Structure carrier = induced(dha, keep);
  std::vector<Elem> alpha;
  for (const auto& w : carrier.universe()) alpha.push_back(delta(d, w));
  Coalgebra out{d, std::move(carrier), std::move(alpha)};
  auto rep = check_coalgebra(out);
  if (!rep.passed()) {
    const auto* bad = rep.first_failure();
    throw IntegrityError("lift along " + law.name + " is not a coalgebra (" + bad->law + ": " + bad->detail + ")");
  }
  return out;
}

CoalgebraMorphism lift_morphism(const KleisliLawSpec& law, std::span<const CoalgebraMorphism> fs) {
  require_arity(law, fs.size());
  std::vector<Coalgebra> src, tgt;
  std::vector<ElemFn> maps;
  for (const auto& f : fs) {
    src.push_back(f.source);
    tgt.push_back(f.target);
    maps.push_back(map_fn(f.map));
  }
  Coalgebra x = lift_operation(law, src);
  Coalgebra y = lift_operation(law, tgt);
  const auto& d = law.target;
  std::vector<Elem> img;
  for (const auto& w : x.carrier.universe()) {
    Elem v = d.coextend([&](const Elem& z) { return law.op.map_elem(maps, d.counit(z)); }, w);
    if (!y.carrier.contains(v)) throw IntegrityError("lifted map leaves the equaliser at " + w);
    img.push_back(std::move(v));
  }
  StructMap m(x.carrier, y.carrier, std::move(img));
  if (!is_coalgebra_morphism(x, y, m)) throw IntegrityError("lifted map is not a coalgebra morphism");
  return CoalgebraMorphism{std::move(x), std::move(y), std::move(m)};
}

StructMap universal_bimorphism(const KleisliLawSpec& law, std::span<const Coalgebra> ys) {
  Coalgebra w = lift_operation(law, ys);
  Structure h = apply_op(law.op, carriers(ys));
  std::vector<Elem> img;
  for (const auto& e : w.carrier.universe()) img.push_back(law.target.counit(e));
  return StructMap(w.carrier, h, std::move(img));
}

bool check_bimorphism(const KleisliLawSpec& law, const StructMap& f, const Coalgebra& x,
                      std::span<const Coalgebra> ys) {
  require_arity(law, ys.size());
  if (!(f.source() == x.carrier)) return false;
  if (!(f.target() == apply_op(law.op, carriers(ys)))) return false;
  if (!is_hom(f)) return false;
  std::vector<ElemFn> betas;
  for (const auto& y : ys) betas.push_back(alpha_fn(y));
  auto fn = map_fn(f);
  try {
    for (Index i = 0; i < x.carrier.size(); ++i) {
      if (law.op.map_elem(betas, f.at(i)) != law.kappa(functor_at(law.target, fn, x.alpha[i]))) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

CoalgebraMorphism from_bimorphism(const KleisliLawSpec& law, const StructMap& f, const Coalgebra& x,
                                  std::span<const Coalgebra> ys) {
  if (!check_bimorphism(law, f, x, ys)) throw DomainError("not a bimorphism");
  Coalgebra w = lift_operation(law, ys);
  auto fn = map_fn(f);
  std::vector<Elem> img;
  for (Index i = 0; i < x.carrier.size(); ++i) {
    Elem v = functor_at(law.target, fn, x.alpha[i]);
    if (!w.carrier.contains(v)) throw IntegrityError("transpose leaves the equaliser at " + x.carrier.universe()[i]);
    if (law.target.counit(v) != f.at(i)) throw IntegrityError("transpose does not recover the bimorphism");
    img.push_back(std::move(v));
  }
  StructMap m(x.carrier, w.carrier, std::move(img));
  if (!is_coalgebra_morphism(x, w, m)) throw IntegrityError("transpose is not a coalgebra morphism");
  return CoalgebraMorphism{x, std::move(w), std::move(m)};
}

namespace {

// A candidate decomposition: one down-closed chain (possibly empty) per slot.
struct Decomposition {
  std::vector<Coalgebra> parts;
  StructMap f0;
};

void check_one_path(const KleisliLawSpec& law, const Coalgebra& p, const StructMap& f,
                    std::span<const Coalgebra> xs, LawReport& r) {
  const std::string id = structure_id(p.carrier);
  r.add("bimorphism", id, check_bimorphism(law, f, p, xs));

  std::vector<std::vector<std::vector<Elem>>> options(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto ord = forest_order(xs[i]);
    if (law.sources[i].kind == CategoryKind::plain) options[i].push_back({});
    for (Index v = 0; v < xs[i].carrier.size(); ++v) options[i].push_back(down_set(xs[i], ord, v));
  }

  std::vector<Decomposition> valid;
  std::vector<std::size_t> pick(xs.size(), 0);
  while (true) {
    std::vector<Coalgebra> parts;
    std::vector<StructMap> incl;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      parts.push_back(sub_coalgebra(xs[i], options[i][pick[i]]));
      incl.push_back(inclusion(parts.back().carrier, xs[i].carrier));
    }
    // f factors through H(e⃗) when every value has a preimage under it.
    Structure hp = apply_op(law.op, carriers(parts));
    std::vector<ElemFn> efns;
    for (const auto& e : incl) efns.push_back(map_fn(e));
    std::unordered_map<Elem, Elem> back;
    for (const auto& e : hp.universe()) back.emplace(law.op.map_elem(efns, e), e);
    std::vector<Elem> img;
    for (const auto& v : f.image()) {
      auto it = back.find(v);
      if (it == back.end()) break;
      img.push_back(it->second);
    }
    if (img.size() == f.image().size()) {
      StructMap f0(p.carrier, hp, std::move(img));
      if (is_hom(f0)) valid.push_back(Decomposition{std::move(parts), std::move(f0)});
    }
    std::size_t i = 0;
    for (; i < xs.size(); ++i) {
      if (++pick[i] < options[i].size()) break;
      pick[i] = 0;
    }
    if (i == xs.size()) break;
  }
  r.add("decomposes", id, !valid.empty(), std::to_string(valid.size()) + " decompositions");
  if (valid.empty()) return;

  // h_i with g_i∘h_i = e_i: g_i is injective, so h_i is forced; it must exist
  // and be a coalgebra morphism.
  auto factors_through = [&](const Decomposition& s, const Decomposition& t) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto& si = s.parts[i].carrier;
      const auto& ti = t.parts[i].carrier;
      std::vector<Elem> h;
      for (const auto& e : si.universe()) {
        if (!ti.contains(e)) return false;
        h.push_back(e);
      }
      if (!is_coalgebra_morphism(s.parts[i], t.parts[i], StructMap(si, ti, h))) return false;
    }
    return true;
  };
  const Decomposition* minimal = nullptr;
  for (const auto& s : valid) {
    if (std::all_of(valid.begin(), valid.end(), [&](const auto& t) { return factors_through(s, t); })) {
      minimal = &s;
      break;
    }
  }
  r.add("minimal", id, minimal != nullptr);
  if (minimal) r.add("minimal-bimorphism", id, check_bimorphism(law, minimal->f0, p, minimal->parts));
}

}  // namespace

LawReport check_s2prime(const KleisliLawSpec& law, std::span<const Coalgebra> xs) {
  LawReport r;
  r.header.push_back("s2prime " + law.name);
  Coalgebra w = lift_operation(law, xs);
  StructMap u = universal_bimorphism(law, xs);
  for (const auto& pe : canonical_path_embeddings(w)) {
    StructMap f = compose(u, pe.embed.map);
    check_one_path(law, pe.path, f, xs, r);
  }
  return r;
}

LawReport check_s2prime(const KleisliLawSpec& law, const Coalgebra& p, std::span<const Coalgebra> xs) {
  LawReport r;
  r.header.push_back("s2prime " + law.name + " path=" + structure_id(p.carrier));
  if (!is_path(p)) throw DomainError("not a path: " + structure_id(p.carrier));
  Coalgebra w = lift_operation(law, xs);
  StructMap u = universal_bimorphism(law, xs);
  for (const auto& e : coalgebra_morphisms(p, w)) {
    if (!is_embedding(e.map)) continue;
    check_one_path(law, p, compose(u, e.map), xs, r);
  }
  return r;
}

std::optional<LiftingIso> lifting_iso(const KleisliLawSpec& law, std::span<const Structure> bases) {
  require_arity(law, bases.size());
  const auto& d = law.target;
  std::vector<Coalgebra> cofrees;
  for (std::size_t i = 0; i < bases.size(); ++i) cofrees.push_back(cofree(law.sources[i], bases[i]));
  Coalgebra l = lift_operation(law, cofrees);
  Coalgebra t = cofree(d, apply_op(law.op, bases));
  if (l.carrier.size() != t.carrier.size()) return std::nullopt;

  std::vector<ElemFn> eps;
  for (const auto& s : law.sources) eps.push_back(s.counit);
  std::vector<Elem> phi, psi;
  bool canonical = true;
  try {
    for (const auto& w : l.carrier.universe()) {
      phi.push_back(d.coextend([&](const Elem& z) { return law.op.map_elem(eps, d.counit(z)); }, w));
      if (!t.carrier.contains(phi.back())) canonical = false;
    }
    for (const auto& v : t.carrier.universe()) {
      psi.push_back(d.coextend(law.kappa, v));
      if (!l.carrier.contains(psi.back())) canonical = false;
    }
  } catch (const Error&) {
    canonical = false;
  }
  if (canonical) {
    StructMap to(l.carrier, t.carrier, phi);
    StructMap from(t.carrier, l.carrier, psi);
    if (is_coalgebra_morphism(l, t, to) && is_coalgebra_morphism(t, l, from) &&
        compose(from, to) == StructMap::identity(l.carrier) && compose(to, from) == StructMap::identity(t.carrier))
      return LiftingIso{CoalgebraMorphism{l, t, to}, CoalgebraMorphism{t, l, from}};
  }

  // Fallback: a bijective coalgebra morphism whose inverse is one too.
  std::optional<LiftingIso> found;
  SearchOptions opts;
  opts.injective = true;
  enumerate_homomorphisms(l.carrier, t.carrier, opts, [&](std::span<const Index> img) {
    StructMap to = map_from_indices(l.carrier, t.carrier, img);
    std::vector<Index> inv(img.size());
    for (Index i = 0; i < img.size(); ++i) inv[img[i]] = i;
    StructMap from = map_from_indices(t.carrier, l.carrier, inv);
    if (is_coalgebra_morphism(l, t, to) && is_coalgebra_morphism(t, l, from)) {
      found = LiftingIso{CoalgebraMorphism{l, t, to}, CoalgebraMorphism{t, l, from}};
      return false;
    }
    return true;
  });
  return found;
}

bool is_full_span(const FullSpan& s) {
  for (const auto* leg : {&s.left, &s.right}) {
    const Structure& base = leg == &s.left ? s.a : s.b;
    if (!(leg->source.carrier == s.apex.carrier)) return false;
    if (!(leg->target.carrier == apply(leg->target.comonad, base))) return false;
    if (!is_coalgebra(leg->source) || !is_coalgebra_morphism(leg->source, leg->target, leg->map)) return false;
    if (!is_pathwise_embedding(*leg) || !is_open(*leg)) return false;
  }
  return true;
}

FullSpan compose_full_witness(const KleisliLawSpec& law, std::span<const FullSpan> spans) {
  require_arity(law, spans.size());
  std::vector<Coalgebra> apexes;
  std::vector<Structure> as, bs;
  for (const auto& s : spans) {
    if (!is_full_span(s)) throw DomainError("component is not a span of open pathwise-embeddings");
    apexes.push_back(s.apex);
    as.push_back(s.a);
    bs.push_back(s.b);
  }
  const auto& d = law.target;
  Coalgebra apex = lift_operation(law, apexes);

  // D(H(ε∘f⃗)) = (D(H(ε⃗)))∘Ĥ(f⃗), the leg followed by the lifting iso.
  auto leg = [&](bool left, const Structure& base) {
    std::vector<ElemFn> fs;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const auto& m = left ? spans[i].left : spans[i].right;
      const auto& c = law.sources[i];
      fs.push_back([&m, &c](const Elem& e) { return c.counit(m.map(e)); });
    }
    Coalgebra target = cofree(d, base);
    std::vector<Elem> img;
    for (const auto& w : apex.carrier.universe()) {
      Elem v = d.coextend([&](const Elem& z) { return law.op.map_elem(fs, d.counit(z)); }, w);
      if (!target.carrier.contains(v)) throw IntegrityError("composed leg leaves the cofree coalgebra at " + w);
      img.push_back(std::move(v));
    }
    StructMap m(apex.carrier, target.carrier, std::move(img));
    if (!is_coalgebra_morphism(apex, target, m)) throw IntegrityError("composed leg is not a coalgebra morphism");
    CoalgebraMorphism cm{apex, std::move(target), std::move(m)};
    if (!is_pathwise_embedding(cm)) throw IntegrityError("composed leg is not a pathwise embedding");
    if (!is_open(cm)) throw IntegrityError("composed leg is not open");
    return cm;
  };
  Structure ha = apply_op(law.op, as);
  Structure hb = apply_op(law.op, bs);
  CoalgebraMorphism left = leg(true, ha);
  CoalgebraMorphism right = leg(false, hb);
  return FullSpan{std::move(ha), std::move(hb), std::move(apex), std::move(left), std::move(right)};
}

LawReport check_surjective_path_image(const ComonadSpec& c, std::span<const Coalgebra> family) {
  LawReport r;
  r.header.push_back("surjective-path-image " + c.name + " family=" + std::to_string(family.size()));
  for (const auto& p : family) {
    if (!is_path(p)) continue;
    for (const auto& y : family) {
      if (y.carrier.size() > p.carrier.size()) continue;
      for (const auto& f : coalgebra_morphisms(p, y)) {
        auto idx = f.map.target_indices();
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        if (idx.size() != y.carrier.size()) continue;
        r.add("path-image", structure_id(p.carrier) + "->" + structure_id(y.carrier), is_path(y));
      }
    }
  }
  return r;
}

}  // namespace fvm
