#include "fvm/kleisli_laws.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

#include "fvm/errors.hpp"
#include "fvm/game_comonads.hpp"
#include "fvm/operations.hpp"
#include "fvm/parallel.hpp"

namespace fvm {
namespace {

std::pair<std::size_t, Elem> split_tag(const Elem& x) {
  auto xs = term::items(x, '(');
  if (xs.size() != 2) throw DomainError("not a tagged element: " + x);
  return {std::stoul(xs[0]), xs[1]};
}

bool tagged_in(ArgList args, const Elem& x, std::size_t* tag, Elem* inner) {
  if (!term::is_group(x, '(')) return false;
  auto xs = term::items(x, '(');
  if (xs.size() != 2 || xs[0].empty() || !std::all_of(xs[0].begin(), xs[0].end(), ::isdigit)) return false;
  std::size_t i = std::stoul(xs[0]);
  if (i < 1 || i > args.size() || xs[0] != std::to_string(i)) return false;
  *tag = i;
  *inner = xs[1];
  return args[i - 1]->contains(xs[1]);
}

// All entries carry the same tag i and the untagged tuple holds in A_i.
bool holds_in_component(ArgList args, const std::string& r, std::span<const Elem> t) {
  std::size_t tag0 = 0;
  std::vector<Elem> inner;
  for (const auto& x : t) {
    std::size_t tag;
    Elem in;
    if (!tagged_in(args, x, &tag, &in)) return false;
    if (tag0 && tag != tag0) return false;
    tag0 = tag;
    inner.push_back(std::move(in));
  }
  return tag0 && args[tag0 - 1]->holds(r, std::span<const Elem>(inner));
}

Elem map_tagged(std::span<const ElemFn> fs, const Elem& x) {
  auto [i, inner] = split_tag(x);
  return term::tagged(i, fs[i - 1](inner));
}

void require_arity(const OperationSpec& h, std::size_t n) {
  if (n != h.arity) {
    throw DomainError(h.name + ": expected " + std::to_string(h.arity) + " arguments, got " + std::to_string(n));
  }
}

}  // namespace

// ---- operations --------------------------------------------------------------

OperationSpec identity_op(CategoryKind kind) {
  OperationSpec h;
  h.name = "id";
  h.slots = {kind};
  h.result = kind;
  h.apply = [](std::span<const Structure> a) { return a[0]; };
  h.map_elem = [](std::span<const ElemFn> fs, const Elem& x) { return fs[0](x); };
  h.holds = [](ArgList a, const std::string& r, std::span<const Elem> t) { return a[0]->holds(r, t); };
  h.contains = [](ArgList a, const Elem& x) { return a[0]->contains(x); };
  h.point = [](ArgList a) { return *a[0]->point(); };
  return h;
}

OperationSpec reduct_op(const Signature& tau, CategoryKind kind) {
  OperationSpec h = identity_op(kind);
  h.name = "reduct";
  h.apply = [tau](std::span<const Structure> a) { return reduct(a[0], tau); };
  h.holds = [tau](ArgList a, const std::string& r, std::span<const Elem> t) {
    return tau.contains(r) && a[0]->holds(r, t);
  };
  return h;
}

OperationSpec coproduct_op(std::size_t m) {
  if (m < 1) throw DomainError("coproduct of no operands");
  OperationSpec h;
  h.name = "coproduct" + std::to_string(m);
  h.arity = m;
  h.slots.assign(m, CategoryKind::plain);
  h.apply = [m](std::span<const Structure> a) {
    if (a.size() != m) throw DomainError("coproduct: wrong number of operands");
    return disjoint_union(a);
  };
  h.map_elem = map_tagged;
  h.holds = holds_in_component;
  h.contains = [](ArgList a, const Elem& x) {
    std::size_t tag;
    Elem in;
    return tagged_in(a, x, &tag, &in);
  };
  return h;
}

OperationSpec product_op(std::size_t m, CategoryKind kind) {
  if (m < 1) throw DomainError("product of no operands");
  OperationSpec h;
  h.name = "product" + std::to_string(m);
  h.arity = m;
  h.slots.assign(m, kind);
  h.result = kind;
  h.apply = [m](std::span<const Structure> a) {
    if (a.size() != m) throw DomainError("product: wrong number of operands");
    return product(a);
  };
  h.map_elem = [](std::span<const ElemFn> fs, const Elem& x) {
    auto xs = term::items(x, '<');
    if (xs.size() != fs.size()) throw DomainError("product element of the wrong width: " + x);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = fs[i](xs[i]);
    return term::group('<', xs);
  };
  h.holds = [](ArgList a, const std::string& r, std::span<const Elem> t) {
    std::vector<std::vector<Elem>> cols(a.size());
    for (const auto& x : t) {
      if (!term::is_group(x, '<')) return false;
      auto xs = term::items(x, '<');
      if (xs.size() != a.size()) return false;
      for (std::size_t i = 0; i < xs.size(); ++i) cols[i].push_back(xs[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!a[i]->holds(r, std::span<const Elem>(cols[i]))) return false;
    return true;
  };
  h.contains = [](ArgList a, const Elem& x) {
    if (!term::is_group(x, '<')) return false;
    auto xs = term::items(x, '<');
    if (xs.size() != a.size()) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!a[i]->contains(xs[i])) return false;
    return true;
  };
  h.point = [](ArgList a) {
    std::vector<Elem> ps;
    for (const auto* s : a) ps.push_back(*s->point());
    return term::group('<', ps);
  };
  return h;
}

namespace {

// Shared shape of merge and vee: {*} ⊎ A1 ⊎ A2, pointed at *.
OperationSpec star_op(std::string name) {
  OperationSpec h;
  h.name = std::move(name);
  h.arity = 2;
  h.slots = {CategoryKind::pointed, CategoryKind::pointed};
  h.result = CategoryKind::pointed;
  h.map_elem = [](std::span<const ElemFn> fs, const Elem& x) { return x == kStar ? kStar : map_tagged(fs, x); };
  h.contains = [](ArgList a, const Elem& x) {
    std::size_t tag;
    Elem in;
    return x == kStar || tagged_in(a, x, &tag, &in);
  };
  h.point = [](ArgList) { return kStar; };
  return h;
}

}  // namespace

OperationSpec merge_op(const std::string& r) {
  OperationSpec h = star_op("merge-" + r);
  h.apply = [r](std::span<const Structure> a) {
    if (a.size() != 2) throw DomainError("merge is binary");
    return merge(a[0], a[1], r);
  };
  h.holds = [r](ArgList a, const std::string& s, std::span<const Elem> t) {
    if (std::find(t.begin(), t.end(), kStar) == t.end()) return holds_in_component(a, s, t);
    if (s != r || t.size() != 2 || t[0] != kStar || t[1] == kStar) return false;
    std::size_t tag;
    Elem in;
    return tagged_in(a, t[1], &tag, &in) && in == *a[tag - 1]->point();
  };
  return h;
}

OperationSpec vee_op() {
  OperationSpec h = star_op("vee");
  h.apply = [](std::span<const Structure> a) {
    if (a.size() != 2) throw DomainError("vee is binary");
    return vee(a[0], a[1]);
  };
  h.holds = [](ArgList a, const std::string& s, std::span<const Elem> t) {
    if (std::find(t.begin(), t.end(), kStar) == t.end()) return holds_in_component(a, s, t);
    if (t.size() != 2 || t[0] != kStar || t[1] == kStar) return false;
    std::size_t tag;
    Elem in;
    if (!tagged_in(a, t[1], &tag, &in)) return false;
    std::vector<Elem> step{*a[tag - 1]->point(), in};
    return a[tag - 1]->holds(s, std::span<const Elem>(step));
  };
  return h;
}

OperationSpec pointed_coproduct_op() {
  OperationSpec h;
  h.name = "pointed-coproduct";
  h.arity = 2;
  h.slots = {CategoryKind::pointed, CategoryKind::pointed};
  h.result = CategoryKind::pointed;
  h.apply = [](std::span<const Structure> a) {
    if (a.size() != 2) throw DomainError("pointed coproduct is binary");
    return pointed_coproduct(a[0], a[1]);
  };
  return h;
}

Structure apply_op(const OperationSpec& h, std::span<const Structure> args) {
  require_arity(h, args.size());
  return h.apply(args);
}

StructMap apply_op_map(const OperationSpec& h, std::span<const StructMap> fs) {
  require_arity(h, fs.size());
  if (!h.map_elem) throw DomainError(h.name + " has no action on maps");
  std::vector<Structure> src, tgt;
  std::vector<ElemFn> fns;
  for (const auto& f : fs) {
    src.push_back(f.source());
    tgt.push_back(f.target());
    fns.push_back(as_fn(f));
  }
  auto hs = std::make_shared<const Structure>(h.apply(src));
  auto ht = std::make_shared<const Structure>(h.apply(tgt));
  std::vector<Elem> image;
  image.reserve(hs->size());
  for (const auto& x : hs->universe()) image.push_back(h.map_elem(fns, x));
  return StructMap(hs, ht, std::move(image));
}

StructMap kappa_component(const KleisliLawSpec& law, std::span<const Structure> args) {
  require_arity(law.op, args.size());
  std::vector<Structure> cargs;
  for (std::size_t i = 0; i < args.size(); ++i) cargs.push_back(apply(law.sources[i], args[i]));
  auto dh = std::make_shared<const Structure>(apply(law.target, law.op.apply(args)));
  auto hc = std::make_shared<const Structure>(law.op.apply(cargs));
  std::vector<Elem> image;
  image.reserve(dh->size());
  for (const auto& w : dh->universe()) image.push_back(law.kappa(w));
  return StructMap(dh, hc, std::move(image));
}

// ---- κ families --------------------------------------------------------------

KleisliLawSpec identity_law(const ComonadSpec& c) {
  return {"id:" + c.name, identity_op(c.kind), {c}, c, [](const Elem& w) { return w; }};
}

KleisliLawSpec kappa_reduct(int k, const Signature& tau) { return kappa_reduct(ef_comonad(k), tau); }

// Words and paths of the reduct are words and paths of the original.
KleisliLawSpec kappa_reduct(const ComonadSpec& c, const Signature& tau) {
  if (c.name.starts_with("Cos")) throw DomainError("reduct κ is not defined for " + c.name);
  return {"kappa-reduct:" + c.name, reduct_op(tau, c.kind), {c}, c, [](const Elem& w) { return w; }};
}

namespace {

enum class WordKind { ef, pebble };

WordKind word_kind(const ComonadSpec& c) {
  if (c.kind == CategoryKind::plain && c.name.starts_with("E")) return WordKind::ef;
  if (c.kind == CategoryKind::plain && c.name.starts_with("P")) return WordKind::pebble;
  throw DomainError("coproduct κ is defined for E_k and plain P_{k,l}, not " + c.name);
}

// Letter of a word over a coproduct, split into (tag, letter over A_tag).
std::pair<std::size_t, Elem> split_coproduct_letter(WordKind kind, const Elem& letter) {
  if (kind == WordKind::ef) return split_tag(letter);
  auto [p, x] = split_pebble_letter(letter);
  auto [i, a] = split_tag(x);
  return {i, pebble_letter(p, a)};
}

}  // namespace

KleisliLawSpec kappa_coproduct(const ComonadSpec& c, std::size_t m) {
  if (m < 2) throw DomainError("coproduct κ needs at least two operands");
  WordKind kind = word_kind(c);
  // κ(w) = (i, ν(w)): i is the tag of the last letter and ν keeps the
  // letters tagged i, untagged.
  auto kappa = [kind](const Elem& w) {
    auto xs = word_letters(w);
    std::vector<std::pair<std::size_t, Elem>> split;
    for (const auto& x : xs) split.push_back(split_coproduct_letter(kind, x));
    const std::size_t i = split.back().first;
    std::vector<Elem> nu;
    for (auto& [tag, x] : split)
      if (tag == i) nu.push_back(std::move(x));
    return term::tagged(i, make_word(nu));
  };
  return {"kappa-coproduct:" + c.name + "x" + std::to_string(m), coproduct_op(m), std::vector<ComonadSpec>(m, c), c,
          kappa};
}

KleisliLawSpec with_unrestricted_coproduct(KleisliLawSpec law) {
  WordKind kind = word_kind(law.target);
  law.name += "~mutant";
  law.kappa = [kind](const Elem& w) {
    auto xs = word_letters(w);
    std::vector<Elem> all;
    std::size_t i = 0;
    for (const auto& x : xs) {
      auto [tag, y] = split_coproduct_letter(kind, x);
      i = tag;
      all.push_back(std::move(y));
    }
    return term::tagged(i, make_word(all));
  };
  return law;
}

KleisliLawSpec kappa_product(const ComonadSpec& c, std::size_t m) {
  if (m < 1) throw DomainError("product κ needs at least one operand");
  // The tupling of C(π_i) = (π_i ∘ ε)*.
  auto kappa = [c, m](const Elem& w) {
    std::vector<Elem> parts;
    for (std::size_t i = 0; i < m; ++i) {
      parts.push_back(c.coextend([&](const Elem& x) { return term::items(c.counit(x), '<').at(i); }, w));
    }
    return term::group('<', parts);
  };
  return {"kappa-product:" + c.name + "x" + std::to_string(m), product_op(m, c.kind), std::vector<ComonadSpec>(m, c),
          c, kappa};
}

KleisliLawSpec kappa_merge(int k, const std::string& r) {
  auto inner = modal_comonad(k);
  auto outer = modal_comonad(k + 1);
  // * →R (i,c0) →R1 (i,c1) ... ↦ (i, c0 →R1 c1 ...); the empty path ↦ *.
  auto kappa = [](const Elem& p) -> Elem {
    auto xs = path_items(p);
    if (xs.size() == 1) return kStar;
    const std::size_t i = split_tag(xs[2]).first;
    std::vector<Elem> out;
    for (std::size_t j = 2; j < xs.size(); ++j) out.push_back(j % 2 == 0 ? split_tag(xs[j]).second : xs[j]);
    return term::tagged(i, make_path(out));
  };
  return {"kappa-merge-" + r + ":" + inner.name, merge_op(r), {inner, inner}, outer, kappa};
}

KleisliLawSpec morph_modal_to_pebble2(int k, int l) {
  if (l < k + 1) {
    throw DomainError("M_k => P_2 needs words of length k+1; truncation " + std::to_string(l) + " is too small");
  }
  auto m = modal_comonad(k);
  auto p = pebble_comonad(2, l, CategoryKind::pointed);
  // Elements labelled by the parity of their position.
  auto kappa = [](const Elem& path) {
    auto xs = path_items(path);
    std::vector<Elem> word;
    for (std::size_t j = 0; j < xs.size(); j += 2) word.push_back(pebble_letter(static_cast<int>((j / 2) % 2), xs[j]));
    return make_word(word);
  };
  return {m.name + "=>" + p.name, identity_op(CategoryKind::pointed), {p}, m, kappa};
}

KleisliLawSpec morph_ef_to_pebble(int k, int l) {
  if (l < k) throw DomainError("E_k => P_k needs words of length k; truncation " + std::to_string(l) + " is too small");
  auto e = ef_comonad(k);
  auto p = pebble_comonad(k, l);
  auto kappa = [](const Elem& w) {
    auto xs = word_letters(w);
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = pebble_letter(static_cast<int>(j), xs[j]);
    return make_word(xs);
  };
  return {e.name + "=>" + p.name, identity_op(CategoryKind::plain), {p}, e, kappa};
}

KleisliLawSpec morph_cos_to_pebble3(int l, int l2) {
  if (l2 < l) {
    throw DomainError("Cos_l => P_3 needs words of length l; truncation " + std::to_string(l2) + " is too small");
  }
  auto c = cos_comonad(l);
  auto p = pebble_comonad(3, l2);
  // (c, v_i) ↦ [(2,v0),(1,v1),(0,v2),(1,v3),...,(i mod 2, v_i)]
  auto kappa = [](const Elem& x) {
    auto parts = term::items(x, '(');
    if (parts.size() != 2) throw DomainError("not a walk point: " + x);
    auto walk = term::items(parts[0], '[');
    const std::size_t i = std::stoul(parts[1]);
    std::vector<Elem> word{pebble_letter(2, walk.at(0))};
    for (std::size_t j = 1; j <= i; ++j) word.push_back(pebble_letter(static_cast<int>(j % 2), walk.at(j)));
    return make_word(word);
  };
  return {c.name + "=>" + p.name, identity_op(CategoryKind::plain), {p}, c, kappa};
}

// ---- checking ----------------------------------------------------------------

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(std::string d) {
    if (pass) detail = std::move(d);
    pass = false;
  }
};

std::string show(std::span<const Elem> t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + t[i];
  return out + ")";
}

// Evaluates `body`, turning exceptions (κ landing outside the expected
// shapes, lookups of non-elements) into a failure of `v`.
template <class F>
void guarded(Verdict& v, const std::string& where, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    v.fail(where + ": " + e.what());
  }
}

struct TupleResult {
  std::vector<LawLine> lines;
  bool sampled = false;
};

}  // namespace

LawReport check_kleisli_law(const KleisliLawSpec& law, std::span<const Structure> family,
                            const QuantifierPolicy& policy) {
  const OperationSpec& op = law.op;
  const ComonadSpec& d = law.target;
  const std::size_t n = op.arity;
  const std::size_t count = family.size();
  if (law.sources.size() != n) throw DomainError(law.name + ": one source comonad per operand is required");

  LawReport report;
  std::size_t tuples = count ? 1 : 0;
  for (std::size_t s = 0; s < n; ++s) tuples *= count;

  // C_s(A_j) for every slot and family member.
  std::vector<std::vector<std::shared_ptr<const Structure>>> cs(n, std::vector<std::shared_ptr<const Structure>>(count));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t j = 0; j < count; ++j) cs[s][j] = std::make_shared<const Structure>(apply(law.sources[s], family[j]));

  // Homs between family members, for naturality.
  std::vector<std::vector<HomSample>> homs(count, std::vector<HomSample>(count));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) homs[i][j] = sample_homomorphisms(family[i], family[j], policy, i * count + j);

  // Sampled Kleisli morphisms C_s(A_i) -> A_j, computed on demand.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::optional<std::vector<Index>>> kleisli_cache;
  std::mutex kleisli_mu;
  auto kleisli_sample = [&](std::size_t s, std::size_t i, std::size_t j) {
    auto key = std::make_tuple(s, i, j);
    {
      std::lock_guard lock(kleisli_mu);
      if (auto it = kleisli_cache.find(key); it != kleisli_cache.end()) return it->second;
    }
    auto h = first_homomorphism(*cs[s][i], family[j], policy.seed + (s * count + i) * count + j);
    std::lock_guard lock(kleisli_mu);
    return kleisli_cache.emplace(key, std::move(h)).first->second;
  };

  const ElemFn identity = [](const Elem& x) { return x; };
  std::vector<ElemFn> eps_fs, delta_fs;
  for (const auto& c : law.sources) {
    eps_fs.push_back([c](const Elem& x) { return c.counit(x); });
    delta_fs.push_back([c](const Elem& x) { return delta(c, x); });
  }

  std::vector<TupleResult> results(tuples);
  parallel_for(tuples, [&](std::size_t code) {
    TupleResult& out = results[code];
    std::vector<std::size_t> idx(n);
    for (std::size_t s = n, c = code; s-- > 0; c /= count) idx[s] = c % count;
    std::vector<Structure> args;
    std::vector<const Structure*> cargs;
    std::string subject;
    for (std::size_t s = 0; s < n; ++s) {
      args.push_back(family[idx[s]]);
      cargs.push_back(cs[s][idx[s]].get());
      subject += (s ? "+" : "") + structure_id(family[idx[s]]);
    }
    const Structure dh = apply(d, op.apply(args));
    const auto& ws = dh.universe();

    Verdict hom, k1, k2, nat, coext;
    std::vector<Elem> kap(ws.size());
    for (std::size_t w = 0; w < ws.size(); ++w) {
      guarded(hom, "w=" + ws[w], [&] {
        kap[w] = law.kappa(ws[w]);
        if (!op.contains(cargs, kap[w])) hom.fail("kappa(" + ws[w] + ")=" + kap[w] + " is not an element");
      });
    }
    // κ on elements of D(H(A⃗)), which the equations below revisit as prefixes.
    std::unordered_map<Elem, Elem> memo;
    for (std::size_t w = 0; w < ws.size(); ++w)
      if (!kap[w].empty()) memo.emplace(ws[w], kap[w]);
    auto kappa_a = [&](const Elem& x) {
      auto it = memo.find(x);
      return it != memo.end() ? it->second : law.kappa(x);
    };
    if (hom.pass) {
      for (const auto& [name, ar] : dh.signature().symbols()) {
        for (const auto& t : dh.tuples(name)) {
          std::vector<Elem> img;
          for (Index w : t) img.push_back(kap[w]);
          if (!op.holds(cargs, name, img)) {
            hom.fail(name + show(img) + " fails");
            break;
          }
        }
      }
      if (d.kind == CategoryKind::pointed && !ws.empty() && kap[dh.point_index()] != op.point(cargs)) {
        hom.fail("point not preserved");
      }
    }

    // (K1) H(∏ε)∘κ = ε_H and (K2) H(∏δ)∘κ = κ∘D(κ)∘δ_H.
    for (std::size_t w = 0; w < ws.size(); ++w) {
      guarded(k1, "w=" + ws[w], [&] {
        Elem lhs = op.map_elem(eps_fs, kappa_a(ws[w]));
        Elem rhs = d.counit(ws[w]);
        if (lhs != rhs) k1.fail("w=" + ws[w] + " H(eps)kappa=" + lhs + " eps=" + rhs);
      });
      guarded(k2, "w=" + ws[w], [&] {
        Elem lhs = op.map_elem(delta_fs, kappa_a(ws[w]));
        Elem dk = d.coextend([&](const Elem& x) { return kappa_a(d.counit(x)); }, delta(d, ws[w]));
        Elem rhs = law.kappa(dk);
        if (lhs != rhs) k2.fail("w=" + ws[w] + " H(delta)kappa=" + lhs + " kappa.D(kappa).delta=" + rhs);
      });
    }

    // Hom choices per slot; a combination fixes B⃗ and h⃗.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> options(n);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t j = 0; j < count; ++j) {
        const auto& hs = homs[idx[s]][j];
        if (!hs.exhaustive) out.sampled = true;
        for (std::size_t h = 0; h < hs.homs.size(); ++h) options[s].emplace_back(j, h);
      }
    }
    std::size_t combos = 1;
    for (const auto& o : options) combos *= o.size();
    const std::size_t per_combo = std::max<std::size_t>(3 * ws.size(), 1);
    const std::size_t picks = std::min(combos, std::max<std::size_t>(policy.naturality_budget / per_combo, 2));
    if (picks < combos) out.sampled = true;

    auto hom_fn = [&](std::size_t s, std::pair<std::size_t, std::size_t> o) {
      const Structure* a = &family[idx[s]];
      const Structure* b = &family[o.first];
      const std::vector<Index>* h = &homs[idx[s]][o.first].homs[o.second];
      return ElemFn([a, b, h](const Elem& x) { return b->universe()[(*h)[a->at(x)]]; });
    };

    // H(f1*,...,fn*)∘κ = κ∘(H(f⃗)∘κ)* for f_s: C_s(A_s) -> B_s.
    auto check_coext = [&](const std::vector<ElemFn>& f, const std::string& label) {
      std::vector<ElemFn> fstar;
      for (std::size_t s = 0; s < n; ++s) {
        const ComonadSpec& c = law.sources[s];
        fstar.push_back([&c, fs = f[s]](const Elem& x) { return c.coextend(fs, x); });
      }
      for (std::size_t w = 0; w < ws.size() && coext.pass; ++w) {
        guarded(coext, label + " w=" + ws[w], [&] {
          Elem lhs = op.map_elem(fstar, kappa_a(ws[w]));
          Elem inner = d.coextend([&](const Elem& x) { return op.map_elem(f, kappa_a(x)); }, ws[w]);
          Elem rhs = law.kappa(inner);
          if (lhs != rhs) coext.fail(label + " w=" + ws[w] + " H(f*)kappa=" + lhs + " kappa(H(f)kappa)*=" + rhs);
        });
      }
    };
    check_coext(std::vector<ElemFn>(n, identity), "f=id");
    check_coext(eps_fs, "f=eps");

    for (std::size_t t = 0; t < picks; ++t) {
      std::size_t pick = picks == combos ? t : (t * combos + (policy.seed + code) % (combos / picks)) / picks;
      std::vector<std::pair<std::size_t, std::size_t>> chosen(n);
      for (std::size_t s = n; s-- > 0; pick /= options[s].size()) chosen[s] = options[s][pick % options[s].size()];
      std::vector<ElemFn> hf, ch, heps;
      std::string label = "B=";
      for (std::size_t s = 0; s < n; ++s) {
        label += (s ? "+" : "") + structure_id(family[chosen[s].first]);
        hf.push_back(hom_fn(s, chosen[s]));
        const ComonadSpec& c = law.sources[s];
        ch.push_back([&c, h = hf.back()](const Elem& x) { return c.coextend([&](const Elem& y) { return h(c.counit(y)); }, x); });
        heps.push_back([&c, h = hf.back()](const Elem& x) { return h(c.counit(x)); });
      }
      // Naturality: H(C h⃗)∘κ_A = κ_B∘D(H h⃗).
      for (std::size_t w = 0; w < ws.size() && nat.pass; ++w) {
        guarded(nat, label + " w=" + ws[w], [&] {
          Elem lhs = op.map_elem(ch, kappa_a(ws[w]));
          Elem dh_w = d.coextend([&](const Elem& x) { return op.map_elem(hf, d.counit(x)); }, ws[w]);
          Elem rhs = law.kappa(dh_w);
          if (lhs != rhs) nat.fail(label + " w=" + ws[w] + " H(Ch)kappa=" + lhs + " kappa.D(Hh)=" + rhs);
        });
      }
      if (coext.pass) check_coext(heps, "f=h.eps " + label);
      // A Kleisli morphism C_s(A_s) -> B_s found by randomised search.
      if (coext.pass) {
        std::vector<ElemFn> kf;
        for (std::size_t s = 0; s < n; ++s) {
          auto k = kleisli_sample(s, idx[s], chosen[s].first);
          if (!k) break;
          const Structure* ca = cs[s][idx[s]].get();
          const Structure* b = &family[chosen[s].first];
          kf.push_back([ca, b, k = *k](const Elem& x) { return b->universe()[k[ca->at(x)]]; });
        }
        if (kf.size() == n) check_coext(kf, "f=kleisli " + label);
      }
    }

    const bool law_form = hom.pass && k1.pass && k2.pass && nat.pass;
    const bool coext_form = hom.pass && k1.pass && coext.pass;
    const std::string pre = law.name + ":";
    out.lines.push_back({pre + "component-hom", subject, hom.pass, hom.detail});
    out.lines.push_back({pre + "K1", subject, k1.pass, k1.detail});
    out.lines.push_back({pre + "K2", subject, k2.pass, k2.detail});
    out.lines.push_back({pre + "naturality", subject, nat.pass, nat.detail});
    out.lines.push_back({pre + "coext-eq", subject, coext.pass, coext.detail});
    out.lines.push_back({pre + "agree", subject, law_form == coext_form,
                         std::string("laws=") + (law_form ? "pass" : "fail") + " coext=" + (coext_form ? "pass" : "fail")});
  });

  bool sampled = false;
  for (auto& r : results) {
    sampled = sampled || r.sampled;
    for (auto& l : r.lines) report.lines.push_back(std::move(l));
  }
  report.sampled = sampled;
  report.header.push_back("kleisli-law " + law.name + " family=" + std::to_string(count) +
                          " tuples=" + std::to_string(tuples) + " mode=" + (sampled ? "sampled" : "exhaustive") +
                          " seed=" + std::to_string(policy.seed) + " budget=" + std::to_string(policy.naturality_budget));
  return report;
}

LawReport check_comonad_morphism(const KleisliLawSpec& law, std::span<const Structure> family,
                                 const QuantifierPolicy& policy) {
  if (law.op.arity != 1 || law.op.name != "id") {
    throw DomainError(law.name + " is not a comonad morphism: the operation must be the identity");
  }
  return check_kleisli_law(law, family, policy);
}

}  // namespace fvm
