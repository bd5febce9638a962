#include "helpers.hpp"

#include "fvm/coalgebras.hpp"
#include "fvm/errors.hpp"
#include "fvm/game_comonads.hpp"
#include "fvm/suite.hpp"

using namespace fvm;
using namespace fvm::test;

namespace {

const ComonadSpec& e1() {
  static const ComonadSpec c = ef_comonad(1);
  return c;
}
const ComonadSpec& e2() {
  static const ComonadSpec c = ef_comonad(2);
  return c;
}

Coalgebra singleton(const Elem& p) { return {e1(), Structure(kE, {p}), {"[" + p + "]"}}; }

// Two-element E_2 chain a ⊑ b on the given carrier.
Coalgebra chain(const Structure& ab) { return {e2(), ab, {"[a]", "[a,b]"}}; }

}  // namespace

TEST_CASE("coalgebra axioms") {
  for (const auto& a : all_structures(kE, 2)) {
    CHECK(check_coalgebra(cofree(e2(), a)).passed());
    CHECK(check_coalgebra(cofree(pebble_comonad(2, 2), a)).passed());
  }
  auto x = cofree(e2(), edge());
  x.alpha[0] = x.alpha[1];
  auto r = check_coalgebra(x);
  CHECK_FALSE(r.passed());
  bool counit = false;
  for (const auto& l : r.lines) counit |= l.law == "counit" && !l.pass;
  CHECK(counit);
  CHECK(check_coalgebra(Coalgebra{e2(), Structure(kE, {}), {}}).passed());
  CHECK(is_coalgebra(chain(points(2))));
  CHECK_FALSE(is_coalgebra(Coalgebra{e2(), points(2), {"[a]", "[b,a]"}}));
}

TEST_CASE("cofree coalgebras") {
  auto x = cofree(e1(), Structure(kE, {"p"}));
  CHECK(x.carrier.universe() == std::vector<Elem>{"[p]"});
  CHECK(x("[p]") == "[[p]]");
  CHECK(x.carrier == apply(e1(), Structure(kE, {"p"})));
}

TEST_CASE("forest order and paths") {
  CHECK(is_path(singleton("p")));
  auto c2 = cofree(e2(), points(2));
  CHECK(c2.carrier.size() == 6);
  auto ord = forest_order(c2);
  CHECK(ord.is_forest);
  CHECK_FALSE(is_path(c2));
  std::vector<Elem> down{"[a]", "[a,b]"};
  CHECK(is_path(sub_coalgebra(c2, down)));
  CHECK(is_path(chain(points(2))));
  CHECK_FALSE(is_path(Coalgebra{e1(), points(2), {"[a]", "[b]"}}));
  CHECK_THROWS_AS(forest_order(Coalgebra{cos_comonad(2), Structure(kE, {}), {}}), DomainError);
}

TEST_CASE("canonical path embeddings") {
  CHECK(canonical_path_embeddings(cofree(e1(), edge())).size() == 2);
  CHECK(canonical_path_embeddings(singleton("p")).size() == 1);
  CHECK(canonical_path_embeddings(Coalgebra{e1(), Structure(kE, {}), {}}).empty());
  for (const auto& pe : canonical_path_embeddings(cofree(e2(), edge()))) {
    CHECK(is_path(pe.path));
    CHECK(is_embedding(pe.embed.map));
    CHECK(is_coalgebra_morphism(pe.embed.source, pe.embed.target, pe.embed.map));
  }
}

TEST_CASE("pathwise embeddings and openness") {
  auto x = cofree(e2(), edge());
  CHECK(is_pathwise_embedding(coalgebra_identity(x)));
  CHECK(is_open(coalgebra_identity(x)));

  auto iso = *search_isomorphism(edge("a", "b"), edge("c", "d"));
  auto ciso = make_coalgebra_morphism(cofree(e2(), edge("a", "b")), cofree(e2(), edge("c", "d")), functor_map(e2(), iso));
  CHECK(is_open(ciso));
  CHECK(is_pathwise_embedding(ciso));

  // A coalgebra embedding.
  auto sub = canonical_path_embeddings(x).back().embed;
  CHECK(is_pathwise_embedding(sub));

  // The identity carrier map from a relation-free chain onto a chain with
  // an edge is a morphism but does not reflect E.
  auto plain = chain(points(2)), with_edge = chain(edge());
  auto f = make_coalgebra_morphism(plain, with_edge, StructMap(points(2), edge(), {"a", "b"}));
  CHECK_FALSE(is_pathwise_embedding(f));

  // A one-element chain into a two-element one: the longer branch of the
  // target has nothing to lift to.
  Coalgebra one{e2(), Structure(kE, {"a"}), {"[a]"}};
  auto incl = make_coalgebra_morphism(one, plain, StructMap(one.carrier, points(2), {"a"}));
  CHECK(is_pathwise_embedding(incl));
  CHECK_FALSE(is_open(incl));
  CHECK_THROWS_AS(make_coalgebra_morphism(plain, one, StructMap(points(2), one.carrier, {"a", "a"})), DomainError);
}

TEST_CASE("factorisation and embeddings in a coalgebra family") {
  auto fam = all_coalgebras(e1(), all_structures(kE, 2));
  REQUIRE(fam.size() > 5);
  std::size_t morphisms = 0;
  for (const auto& x : fam)
    for (const auto& y : fam)
      for (const auto& f : coalgebra_morphisms(x, y)) {
        ++morphisms;
        auto [q, e] = factor_coalgebra_morphism(f);
        CHECK(compose(e, q).map == f.map);
        auto qc = classify_map(q.map), ec = classify_map(e.map);
        CHECK((qc == MapClass::surjective_hom || qc == MapClass::iso));
        CHECK((ec == MapClass::embedding || ec == MapClass::iso));
        CHECK(is_coalgebra_morphism(q.source, q.target, q.map));
        CHECK(is_coalgebra_morphism(e.source, e.target, e.map));
        for (const auto& z : fam)
          for (const auto& g : coalgebra_morphisms(y, z)) {
            bool fe = is_embedding(f.map), ge = is_embedding(g.map), gfe = is_embedding(compose(g, f).map);
            if (fe && ge) CHECK(gfe);
            if (gfe) CHECK(fe);
          }
        if (!is_embedding(f.map)) continue;
        // Left-cancellable.
        for (const auto& w : fam) {
          auto gs = coalgebra_morphisms(w, x);
          for (std::size_t i = 0; i < gs.size(); ++i)
            for (std::size_t j = 0; j < gs.size(); ++j)
              if (compose(f, gs[i]).map == compose(f, gs[j]).map) CHECK(gs[i].map == gs[j].map);
        }
      }
  CHECK(morphisms > fam.size());
}

TEST_CASE("lifting along a Kleisli law") {
  auto cop1 = kappa_coproduct(e1(), 2);
  std::vector<Coalgebra> two{singleton("p"), singleton("q")};
  auto lifted = lift_operation(cop1, two);
  CHECK(lifted.carrier.universe() == std::vector<Elem>{"[(1,p)]", "[(2,q)]"});
  CHECK(check_coalgebra(lifted).passed());

  // Cofree inputs lift to the cofree coalgebra on H of the bases.
  for (const auto& law : {cop1, kappa_product(e2(), 2), kappa_coproduct(e2(), 2)}) {
    std::vector<Structure> bases{edge(), loop()};
    std::vector<Coalgebra> cf{cofree(law.sources[0], bases[0]), cofree(law.sources[1], bases[1])};
    auto l = lift_operation(law, cf);
    auto target = cofree(law.target, apply_op(law.op, bases));
    CHECK(l.carrier.size() == target.carrier.size());
    auto iso = lifting_iso(law, bases);
    REQUIRE(iso);
    CHECK(classify_map(iso->to_cofree.map) == MapClass::iso);
    CHECK(compose(iso->from_cofree, iso->to_cofree).map == coalgebra_identity(iso->to_cofree.source).map);
  }

  // The reduct of a path is a path.
  Signature sig{{"E", 2}, {"P", 1}};
  Structure ab(sig, {"a", "b"}, {{"E", {{"a", "b"}}}, {"P", {{"b"}}}});
  Coalgebra p{e2(), ab, {"[a]", "[a,b]"}};
  REQUIRE(is_path(p));
  auto red = lift_operation(kappa_reduct(e2(), Signature{{"P", 1}}), std::vector<Coalgebra>{p});
  CHECK(is_path(red));
  CHECK(red.carrier.size() == 2);
}

TEST_CASE("bimorphisms") {
  auto law = kappa_coproduct(e1(), 2);
  std::vector<Coalgebra> ys{cofree(e1(), edge()), singleton("p")};
  auto l = lift_operation(law, ys);
  auto u = universal_bimorphism(law, ys);
  CHECK(check_bimorphism(law, u, l, ys));

  auto fo = from_bimorphism(law, u, l, ys);
  CHECK(fo.map == coalgebra_identity(l).map);

  // Precomposing with a coalgebra morphism keeps a bimorphism, and the
  // round trip through the lift gives it back.
  auto pe = canonical_path_embeddings(l).front();
  auto f = compose(u, pe.embed.map);
  CHECK(check_bimorphism(law, f, pe.path, ys));
  auto fo2 = from_bimorphism(law, f, pe.path, ys);
  CHECK(compose(u, fo2.map) == f);
  CHECK(fo2.map == pe.embed.map);

  // Postcomposing with H of a coalgebra morphism: (H(g)∘f)^o = Ĥ(g)∘f^o.
  auto g = coalgebra_identity(ys[0]);
  auto h_id = coalgebra_identity(ys[1]);
  auto lg = lift_morphism(law, std::vector<CoalgebraMorphism>{g, h_id});
  CHECK(compose(lg, fo2).map == from_bimorphism(law, compose(apply_op_map(law.op, std::vector<StructMap>{g.map, h_id.map}), f), pe.path, ys).map);

  // With one-letter words every hom is a bimorphism, so go to E_2 and swap
  // [a] with [a,a] inside H(carriers).
  auto law2 = kappa_coproduct(e2(), 2);
  std::vector<Coalgebra> zs{cofree(e2(), points(1)), Coalgebra{e2(), Structure(kE, {"p"}), {"[p]"}}};
  auto l2 = lift_operation(law2, zs);
  auto u2 = universal_bimorphism(law2, zs);
  CHECK(check_bimorphism(law2, u2, l2, zs));
  std::vector<Elem> img = u2.image();
  for (auto& e : img) e = e == "(1,[a])" ? "(1,[a,a])" : e == "(1,[a,a])" ? "(1,[a])" : e;
  REQUIRE(img != u2.image());
  CHECK_FALSE(check_bimorphism(law2, StructMap(l2.carrier, u2.target(), img), l2, zs));
}

TEST_CASE("minimal decompositions") {
  auto fam = all_coalgebras(e2(), std::vector<Structure>{points(1), edge(), loop()});
  std::size_t lines = 0;
  for (const auto& law : {kappa_coproduct(e2(), 2), kappa_product(e2(), 2)})
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = 0; j < fam.size(); ++j) {
        auto r = check_s2prime(law, std::vector<Coalgebra>{fam[i], fam[j]});
        CHECK_MESSAGE(r.passed(), law.name, " ", structure_id(fam[i].carrier));
        lines += r.lines.size();
      }
  MESSAGE("coalgebras=", fam.size(), " s2prime lines=", lines);
  CHECK(lines > 100);
  for (const auto& x : fam)
    CHECK(check_s2prime(kappa_reduct(e2(), Signature{}), std::vector<Coalgebra>{x}).passed());

  // Against a path given directly.
  std::vector<Coalgebra> xs{cofree(e2(), edge()), cofree(e2(), loop())};
  Coalgebra p{e2(), points(2), {"[a]", "[a,b]"}};
  CHECK(check_s2prime(kappa_coproduct(e2(), 2), p, xs).passed());
}

TEST_CASE("composing full-logic spans") {
  auto cop = kappa_coproduct(e1(), 2);
  auto span_of = [](const ComonadSpec& c, const StructMap& iso) {
    auto apex = cofree(c, iso.source());
    return FullSpan{iso.source(), iso.target(), apex, coalgebra_identity(apex),
                    make_coalgebra_morphism(apex, cofree(c, iso.target()), functor_map(c, iso))};
  };
  std::vector<FullSpan> ids{span_of(e1(), StructMap::identity(edge())), span_of(e1(), StructMap::identity(loop()))};
  auto s = compose_full_witness(cop, ids);
  CHECK(is_full_span(s));
  CHECK(classify_map(s.left.map) == MapClass::iso);
  CHECK(classify_map(s.right.map) == MapClass::iso);

  auto i1 = *search_isomorphism(edge("a", "b"), edge("c", "d"));
  auto i2 = *search_isomorphism(points(2), Structure(kE, {"x", "y"}));
  for (const auto& c : {e1(), e2()})
    for (const auto& law : {kappa_coproduct(c, 2), kappa_product(c, 2)}) {
      std::vector<FullSpan> spans{span_of(c, i1), span_of(c, i2)};
      auto w = compose_full_witness(law, spans);
      CHECK(is_full_span(w));
      CHECK(w.a == apply_op(law.op, std::vector<Structure>{i1.source(), i2.source()}));
      CHECK(w.b == apply_op(law.op, std::vector<Structure>{i1.target(), i2.target()}));
    }
  FullSpan bad = ids[0];
  bad.b = loop();
  CHECK_FALSE(is_full_span(bad));
}

TEST_CASE("surjective images of paths") {
  auto f2 = all_coalgebras(e2(), all_structures(kE, 2));
  CHECK(check_surjective_path_image(e2(), f2).passed());
  auto m2 = modal_comonad(2);
  CHECK(check_surjective_path_image(m2, all_coalgebras(m2, all_pointed_structures(Signature{{"R", 2}}, 2))).passed());
  std::vector<Coalgebra> one{singleton("p")};
  CHECK(check_surjective_path_image(e1(), one).passed());
}

TEST_CASE("full checks on a small law") {
  auto r = full_check(kappa_coproduct(e1(), 2), all_structures(kE, 2));
  CHECK(r.passed());
  CHECK(r.lines.size() > 100);
}
