#include "fvm/comonad.hpp"

#include <cmath>
#include <set>

#include "fvm/errors.hpp"

namespace fvm {

Structure apply(const ComonadSpec& c, const Structure& a) {
  if (c.validate) c.validate(a);
  return c.object_map(a);
}

Elem delta(const ComonadSpec& c, const Elem& w) {
  return c.coextend([](const Elem& x) { return x; }, w);
}

StructMap counit_map(const ComonadSpec& c, const Structure& a, std::shared_ptr<const Structure> ca) {
  std::vector<Elem> image;
  image.reserve(ca->size());
  for (const auto& w : ca->universe()) image.push_back(c.counit(w));
  return StructMap(std::move(ca), std::make_shared<const Structure>(a), std::move(image));
}

StructMap counit_map(const ComonadSpec& c, const Structure& a) {
  return counit_map(c, a, std::make_shared<const Structure>(apply(c, a)));
}

ElemFn as_fn(const StructMap& f) {
  return [f](const Elem& x) { return f(x); };
}

StructMap coextend_map(const ComonadSpec& c, const StructMap& f, std::shared_ptr<const Structure> cb) {
  auto fn = as_fn(f);
  std::vector<Elem> image;
  image.reserve(f.source().size());
  for (const auto& w : f.source().universe()) image.push_back(c.coextend(fn, w));
  return StructMap(f.source_ptr(), std::move(cb), std::move(image));
}

StructMap coextend_map(const ComonadSpec& c, const StructMap& f) {
  return coextend_map(c, f, std::make_shared<const Structure>(apply(c, f.target())));
}

StructMap functor_map(const ComonadSpec& c, const StructMap& f) {
  if (!is_hom(f)) throw DomainError("functor_map: argument is not a homomorphism");
  auto ca = std::make_shared<const Structure>(apply(c, f.source()));
  auto cb = std::make_shared<const Structure>(apply(c, f.target()));
  std::vector<Elem> image;
  image.reserve(ca->size());
  auto fe = [&](const Elem& w) { return f(c.counit(w)); };
  for (const auto& w : ca->universe()) image.push_back(c.coextend(fe, w));
  return StructMap(ca, cb, std::move(image));
}

StructMap comultiplication(const ComonadSpec& c, const Structure& a) {
  auto ca = std::make_shared<const Structure>(apply(c, a));
  auto cca = std::make_shared<const Structure>(apply(c, *ca));
  std::vector<Elem> image;
  for (const auto& w : ca->universe()) image.push_back(delta(c, w));
  return StructMap(ca, cca, std::move(image));
}

KleisliMorphism make_kleisli(const ComonadSpec& c, const Structure& source, const StructMap& map) {
  if (!(map.source() == apply(c, source))) throw MalformedMap("Kleisli morphism: domain is not C(source)");
  if (!is_hom(map)) throw DomainError("Kleisli morphism: map is not a homomorphism");
  return {c, source, map};
}

KleisliMorphism kleisli_identity(const ComonadSpec& c, const Structure& a) {
  return {c, a, counit_map(c, a)};
}

KleisliMorphism kleisli_compose(const KleisliMorphism& g, const KleisliMorphism& f) {
  if (f.comonad.name != g.comonad.name) throw DomainError("kleisli_compose: different comonads");
  if (!(f.target() == g.source)) throw MalformedMap("kleisli_compose: endpoints do not match");
  auto fstar = coextend_map(f.comonad, f.map, g.map.source_ptr());
  return {f.comonad, f.source, compose(g.map, fstar)};
}

HomSample sample_homomorphisms(const Structure& a, const Structure& b, const QuantifierPolicy& policy,
                               std::uint64_t salt) {
  HomSample out;
  double maps = std::pow(static_cast<double>(b.size()), static_cast<double>(a.size()));
  if (maps <= policy.exhaustive_limit) {
    auto all = all_homomorphisms(a, b);
    out.total = all.size();
    if (all.size() <= policy.max_homs_per_pair) {
      out.homs = std::move(all);
      return out;
    }
    out.exhaustive = false;
    const std::size_t cap = std::max<std::size_t>(policy.max_homs_per_pair, 1);
    for (std::size_t t = 0; t < cap; ++t) out.homs.push_back(std::move(all[t * all.size() / cap]));
    return out;
  }
  auto first = first_homomorphism(a, b);
  if (!first) return out;  // the complete search proved there is none
  out.exhaustive = false;
  std::set<std::vector<Index>> seen{*first};
  out.homs.push_back(*first);
  for (std::size_t s = 0; s < policy.samples; ++s) {
    auto h = first_homomorphism(a, b, policy.seed + salt * 7919 + s);
    if (h && seen.insert(*h).second) out.homs.push_back(*h);
  }
  out.total = out.homs.size();
  return out;
}

namespace {

std::string show_tuple(std::span<const Elem> t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + t[i];
  return out + ")";
}

// Records the first failure of one law on one structure.
struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(std::string d) {
    if (pass) detail = std::move(d);
    pass = false;
  }
};

}  // namespace

LawReport check_comonad_laws(const ComonadSpec& c, std::span<const Structure> family,
                             const QuantifierPolicy& policy) {
  LawReport report;
  const std::size_t n = family.size();
  std::vector<std::shared_ptr<const Structure>> cs(n);
  for (std::size_t i = 0; i < n; ++i) cs[i] = std::make_shared<const Structure>(apply(c, family[i]));

  std::vector<std::vector<HomSample>> homs(n, std::vector<HomSample>(n));
  bool sampled = false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      homs[i][j] = sample_homomorphisms(*cs[i], family[j], policy, i * n + j);
      sampled = sampled || !homs[i][j].exhaustive;
    }

  auto fn_of = [&](std::size_t i, std::size_t j, const std::vector<Index>& h) {
    const Structure* dom = cs[i].get();
    const Structure* cod = &family[j];
    return ElemFn([dom, cod, &h](const Elem& x) { return cod->universe()[h[dom->at(x)]]; });
  };
  const ElemFn identity = [](const Elem& x) { return x; };

  for (std::size_t i = 0; i < n; ++i) {
    const Structure& a = family[i];
    const Structure& ca = *cs[i];
    const std::string subject = structure_id(a);

    Verdict counit_hom, law1, law2, law3, coext_hom, d_counit, d_fcounit, d_assoc, d_hom;

    auto eps = counit_map(c, a, cs[i]);
    if (!is_hom(eps)) counit_hom.fail("counit is not a homomorphism");

    for (const auto& w : ca.universe()) {
      auto r = c.coextend([&](const Elem& x) { return c.counit(x); }, w);
      if (r != w) law1.fail("w=" + w + " got " + r);

      Elem d = delta(c, w);
      if (c.counit(d) != w) d_counit.fail("w=" + w + " eps(delta)=" + c.counit(d));
      auto back = c.coextend([&](const Elem& x) { return c.counit(c.counit(x)); }, d);
      if (back != w) d_fcounit.fail("w=" + w + " C(eps)(delta)=" + back);
      auto dd = c.coextend(identity, d);
      auto cd = c.coextend([&](const Elem& x) { return delta(c, c.counit(x)); }, d);
      if (dd != cd) d_assoc.fail("w=" + w + " delta.delta=" + dd + " C(delta).delta=" + cd);
      if (!c.contains(ca, d)) d_hom.fail("delta(" + w + ") not in C(C(A))");
    }
    for (const auto& [name, ar] : ca.signature().symbols()) {
      for (const auto& t : ca.tuples_by_name(name)) {
        std::vector<Elem> img;
        for (const auto& w : t) img.push_back(delta(c, w));
        if (!c.holds(ca, name, img)) d_hom.fail(name + show_tuple(t) + " not preserved by delta");
      }
    }
    if (c.kind == CategoryKind::pointed && !ca.universe().empty()) {
      if (delta(c, *ca.point()) != c.point(ca)) d_hom.fail("delta does not preserve the point");
    }

    // ε ∘ f* = f and f* is a hom, for every sampled f: C(A) -> B.
    std::vector<std::vector<std::vector<Elem>>> fstars(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Structure& cb = *cs[j];
      for (const auto& h : homs[i][j].homs) {
        auto f = fn_of(i, j, h);
        std::vector<Elem> fs;
        fs.reserve(ca.size());
        for (Index w = 0; w < ca.size(); ++w) {
          fs.push_back(c.coextend(f, ca.universe()[w]));
          const Elem& want = family[j].universe()[h[w]];
          if (c.counit(fs.back()) != want) {
            law2.fail("B=" + structure_id(family[j]) + " w=" + ca.universe()[w] + " eps(f*)=" +
                      c.counit(fs.back()) + " f=" + want);
          }
          if (!cb.contains(fs.back())) coext_hom.fail("f*(" + ca.universe()[w] + ")=" + fs.back() + " not in C(B)");
        }
        for (const auto& [name, ar] : ca.signature().symbols()) {
          for (const auto& t : ca.tuples(name)) {
            std::vector<Elem> img;
            for (Index w : t) img.push_back(fs[w]);
            if (!cb.holds(name, std::span<const Elem>(img))) coext_hom.fail(name + show_tuple(img) + " not in C(B)");
          }
        }
        fstars[j].push_back(std::move(fs));
      }
    }

    // (g ∘ f*)* = g* ∘ f*, over (B, f, D, g) combinations.  Combinations are
    // numbered B-major; when there are more than the budget allows, an evenly
    // spaced subset of the numbers is decoded and checked.
    std::vector<std::size_t> per_f(n, 0);  // number of (D, g) per f: C(A) -> B
    std::size_t combos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t d = 0; d < n; ++d) per_f[j] += homs[j][d].homs.size();
      combos += homs[i][j].homs.size() * per_f[j];
    }
    const std::size_t unit = std::max<std::size_t>(ca.size(), 1);
    const std::size_t wanted = std::max<std::size_t>(policy.work_budget / unit, 1);
    const std::size_t picks = std::min(combos, wanted);
    if (picks < combos) sampled = true;
    for (std::size_t t = 0; t < picks && law3.pass; ++t) {
      std::size_t code = picks == combos ? t : (t * combos + (policy.seed + i) % (combos / picks)) / picks;
      std::size_t j = 0;
      while (code >= homs[i][j].homs.size() * per_f[j]) {
        code -= homs[i][j].homs.size() * per_f[j];
        ++j;
      }
      const std::size_t fi = code / per_f[j];
      std::size_t rest = code % per_f[j];
      std::size_t d = 0;
      while (rest >= homs[j][d].homs.size()) rest -= homs[j][d++].homs.size();
      const auto& g = homs[j][d].homs[rest];
      const Structure& cb = *cs[j];
      const auto& fs = fstars[j][fi];
      auto gfn = fn_of(j, d, g);
      auto h = [&](const Elem& x) { return family[d].universe()[g[cb.at(fs[ca.at(x)])]]; };
      for (Index w = 0; w < ca.size(); ++w) {
        auto lhs = c.coextend(h, ca.universe()[w]);
        auto rhs = c.coextend(gfn, fs[w]);
        if (lhs != rhs) {
          law3.fail("B=" + structure_id(family[j]) + " D=" + structure_id(family[d]) + " w=" +
                    ca.universe()[w] + " (g.f*)*=" + lhs + " g*.f*=" + rhs);
          break;
        }
      }
    }

    const std::string pre = c.name + ":";
    report.add(pre + "counit-hom", subject, counit_hom.pass, counit_hom.detail);
    report.add(pre + "coext-of-counit", subject, law1.pass, law1.detail);
    report.add(pre + "counit-after-coext", subject, law2.pass, law2.detail);
    report.add(pre + "coext-hom", subject, coext_hom.pass, coext_hom.detail);
    report.add(pre + "coext-assoc", subject, law3.pass, law3.detail);
    report.add(pre + "delta-counit", subject, d_counit.pass, d_counit.detail);
    report.add(pre + "delta-fcounit", subject, d_fcounit.pass, d_fcounit.detail);
    report.add(pre + "delta-coassoc", subject, d_assoc.pass, d_assoc.detail);
    report.add(pre + "delta-hom", subject, d_hom.pass, d_hom.detail);
  }

  // Embeddings between family members stay embeddings under C.
  for (std::size_t i = 0; i < n; ++i) {
    Verdict emb;
    for (std::size_t j = 0; j < n && emb.pass; ++j) {
      for (const auto& h : all_homomorphisms(family[i], family[j])) {
        auto e = map_from_indices(family[i], family[j], h);
        if (!is_embedding(e)) continue;
        std::vector<Elem> image;
        for (const auto& w : cs[i]->universe()) {
          image.push_back(c.coextend([&](const Elem& x) { return e(c.counit(x)); }, w));
        }
        StructMap ce(cs[i], cs[j], std::move(image));
        if (!is_embedding(ce)) {
          emb.fail("into " + structure_id(family[j]) + ": C(e) is " + std::string(to_string(classify_map(ce))));
          break;
        }
      }
    }
    report.add(c.name + ":embedding-preservation", structure_id(family[i]), emb.pass, emb.detail);
  }

  report.sampled = sampled;
  report.header.push_back("comonad " + c.name + " family=" + std::to_string(n) +
                          " mode=" + (sampled ? "sampled" : "exhaustive") + " seed=" + std::to_string(policy.seed) +
                          " budget=" + std::to_string(policy.work_budget));
  return report;
}

ComonadSpec with_truncated_coextension(ComonadSpec c) {
  auto inner = c.coextend;
  c.name += "~mutant";
  c.coextend = [inner](const ElemFn& f, const Elem& w) {
    Elem r = inner(f, w);
    if (!term::is_group(r, '[')) return r;
    auto xs = term::items(r, '[');
    if (xs.size() < 2) return r;
    xs.pop_back();
    return term::group('[', xs);
  };
  return c;
}

}  // namespace fvm
