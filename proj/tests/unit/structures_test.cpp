#include "helpers.hpp"

#include "fvm/errors.hpp"
#include "fvm/operations.hpp"

using namespace fvm;
using namespace fvm::test;

TEST_CASE("structures are canonical") {
  Structure a(kE, {"b", "a"}, {{"E", {{"b", "a"}, {"b", "a"}}}});
  Structure b(kE, {"a", "b"}, {{"E", {{"b", "a"}}}});
  CHECK(a == b);
  CHECK(a.universe() == std::vector<Elem>{"a", "b"});
  CHECK(a.tuple_count() == 1);
  CHECK_THROWS_AS(Structure(kE, {"a"}, {{"E", {{"a", "z"}}}}), Error);
  CHECK_THROWS_AS(Structure(kE, {"a"}, {{"E", {{"a"}}}}), Error);
  CHECK_THROWS_AS(Structure(kE, {"a"}, {}, Elem("z")), Error);
  CHECK_NOTHROW(Structure(kE, {}));
}

TEST_CASE("classify_map examples") {
  CHECK(classify_map(StructMap::identity(edge())) == MapClass::iso);
  CHECK(classify_map(StructMap(edge(), loop(), {"x", "x"})) == MapClass::surjective_hom);
  CHECK(classify_map(StructMap(loop(), edge(), {"a"})) == MapClass::not_hom);
  CHECK_THROWS_AS(StructMap(edge(), loop(), {"x"}), MalformedMap);
  CHECK_THROWS_AS(StructMap(edge(), loop(), {"x", "y"}), MalformedMap);
}

TEST_CASE("classify_map agrees with the definition on all maps between small structures") {
  auto fam = all_structures(kE, 2);
  std::size_t checked = 0;
  for (const auto& a : fam)
    for (const auto& b : fam)
      for (const auto& img : all_maps(a.size(), b.size())) {
        auto c = classify_map(map_from_indices(a, b, img));
        bool hom = naive_hom(a, b, img);
        bool inj = naive_injective(img);
        bool surj = std::set<Index>(img.begin(), img.end()).size() == b.size();
        bool emb = hom && inj && naive_reflects(a, b, img);
        MapClass expect = !hom          ? MapClass::not_hom
                          : emb && surj ? MapClass::iso
                          : emb         ? MapClass::embedding
                          : surj        ? MapClass::surjective_hom
                                        : MapClass::hom;
        CHECK_MESSAGE(c == expect, structure_id(a), " -> ", structure_id(b));
        ++checked;
      }
  CHECK(checked > 1000);
}

TEST_CASE("reduct") {
  Signature sig{{"E", 2}, {"P", 1}};
  Structure a(sig, {"a", "b"}, {{"E", {{"a", "b"}}}, {"P", {{"a"}}}});
  CHECK(reduct(a, sig) == a);
  auto bare = reduct(a, Signature{});
  CHECK(bare.signature().empty());
  CHECK(bare.size() == 2);
  auto p = reduct(a, Signature{{"P", 1}});
  CHECK(p == Structure(Signature{{"P", 1}}, {"a", "b"}, {{"P", {{"a"}}}}));
  CHECK_THROWS_AS(reduct(a, Signature{{"Q", 1}}), SignatureMismatch);
  CHECK_THROWS_AS(reduct(a, Signature{{"P", 2}}), SignatureMismatch);
}

TEST_CASE("disjoint union") {
  auto u = disjoint_union(edge(), loop());
  CHECK(u.size() == 3);
  CHECK(u.tuples_by_name("E") == std::vector<Tuple>{{"(1,a)", "(1,b)"}, {"(2,x)", "(2,x)"}});
  Structure empty(kE, {});
  CHECK(search_isomorphism(disjoint_union(edge(), empty), edge()).has_value());
  CHECK_THROWS_AS(disjoint_union(edge(), Structure(Signature{{"F", 2}}, {"a"})), SignatureMismatch);
}

TEST_CASE("coproduct injections are homs and cocones factor uniquely") {
  auto fam = all_structures(kE, 2);
  for (const auto& a : fam)
    for (const auto& b : fam) {
      auto u = disjoint_union(a, b);
      REQUIRE(u.size() == a.size() + b.size());
      for (const auto& c : fam) {
        // Each pair of homs a->c, b->c has exactly one mediating map u->c.
        for (const auto& f : all_homomorphisms(a, c))
          for (const auto& g : all_homomorphisms(b, c)) {
            int mediators = 0;
            for (const auto& m : all_maps(u.size(), c.size())) {
              bool ok = true;
              for (Index i = 0; i < a.size() && ok; ++i) ok = m[u.at(term::tagged(1, a.universe()[i]))] == f[i];
              for (Index i = 0; i < b.size() && ok; ++i) ok = m[u.at(term::tagged(2, b.universe()[i]))] == g[i];
              if (ok && naive_hom(u, c, m)) ++mediators;
            }
            CHECK(mediators == 1);
          }
      }
    }
}

TEST_CASE("product projections are homs and cones factor uniquely") {
  auto fam = all_structures(kE, 2);
  for (const auto& a : fam)
    for (const auto& b : fam) {
      auto p = product(a, b);
      REQUIRE(p.size() == a.size() * b.size());
      std::vector<Index> pa(p.size()), pb(p.size());
      for (Index i = 0; i < p.size(); ++i) {
        auto xs = term::items(p.universe()[i], '<');
        pa[i] = a.at(xs[0]);
        pb[i] = b.at(xs[1]);
      }
      CHECK(naive_hom(p, a, pa));
      CHECK(naive_hom(p, b, pb));
      for (const auto& c : fam)
        for (const auto& f : all_homomorphisms(c, a))
          for (const auto& g : all_homomorphisms(c, b)) {
            int mediators = 0;
            for (const auto& m : all_maps(c.size(), p.size())) {
              bool ok = naive_hom(c, p, m);
              for (Index i = 0; i < c.size() && ok; ++i) ok = pa[m[i]] == f[i] && pb[m[i]] == g[i];
              mediators += ok;
            }
            CHECK(mediators == 1);
          }
    }
}

TEST_CASE("product examples") {
  auto p = product(edge("a", "b"), edge("c", "d"));
  CHECK(p.size() == 4);
  CHECK(p.tuples_by_name("E") == std::vector<Tuple>{{"<a,c>", "<b,d>"}});
  Structure unit(kE, {"u"}, {{"E", {{"u", "u"}}}});
  CHECK(search_isomorphism(product(edge(), unit), edge()).has_value());
  CHECK_THROWS_AS(product(std::span<const Structure>{}), Error);
  auto pp = product(edge().with_point("a"), loop().with_point("x"));
  CHECK(pp.point() == Elem("<a,x>"));
}

TEST_CASE("pointed coproduct") {
  auto a = modal({"a", "x"}, {{"a", "x"}}, {}, "a");
  auto b = modal({"b", "y"}, {{"b", "y"}}, {}, "b");
  auto c = pointed_coproduct(a, b);
  CHECK(c.size() == 3);
  CHECK(c.point() == kStar);
  CHECK(c.tuples_by_name("R") == std::vector<Tuple>{{kStar, "(1,x)"}, {kStar, "(2,y)"}});
  auto dot = modal({"o"}, {}, {}, "o");
  CHECK(search_isomorphism(pointed_coproduct(a, dot), a).has_value());
}

TEST_CASE("merge and vee") {
  auto p = modal({"p"}, {}, {}, "p");
  auto q = modal({"q"}, {}, {}, "q");
  auto m = merge(p, q, "R");
  CHECK(m.size() == 3);
  CHECK(m.point() == kStar);
  CHECK(m.tuples_by_name("R") == std::vector<Tuple>{{kStar, "(1,p)"}, {kStar, "(2,q)"}});
  CHECK(vee(p, q).tuple_count() == 0);

  auto a = modal({"a", "x"}, {{"a", "x"}}, {"x"}, "a");
  auto v = vee(a, p);
  CHECK(v.holds("R", std::vector<Elem>{kStar, "(1,x)"}));
  for (const auto& t : v.tuples_by_name("R"))
    if (t[0] != kStar) CHECK(t == Tuple{"(1,a)", "(1,x)"});
  auto ma = merge(a, a, "R");
  CHECK(ma.size() == 5);
  for (const auto& t : ma.tuples_by_name("R")) CHECK_FALSE((t[0][1] == '1' && t[1][1] == '2'));
  CHECK_THROWS_AS(merge(edge().with_point("a"), p, "R"), Error);
}

TEST_CASE("homomorphism search is sound and complete against brute force") {
  auto fam = all_structures(kE, 2);
  auto fam3 = all_structures(kE, 3, 3);
  for (std::size_t i = 0; i < fam3.size(); i += 37) fam.push_back(fam3[i]);
  for (const auto& a : fam)
    for (const auto& b : fam) {
      bool brute = false;
      for (const auto& m : all_maps(a.size(), b.size()))
        if ((brute = naive_hom(a, b, m))) break;
      auto h = search_homomorphism(a, b);
      CHECK(h.has_value() == brute);
      if (h) CHECK(at_least_hom(classify_map(*h)));
      auto iso = search_isomorphism(a, b);
      CHECK(iso.has_value() == naive_isomorphic(a, b));
      if (iso) CHECK(classify_map(*iso) == MapClass::iso);
    }
  CHECK(search_homomorphism(edge(), loop()).has_value());
  CHECK_FALSE(search_homomorphism(loop(), edge()).has_value());
  CHECK(search_isomorphism(edge("a", "b"), edge("c", "d")).has_value());
  CHECK_FALSE(search_isomorphism(edge(), loop()).has_value());
}

TEST_CASE("factor_morphism") {
  auto fam = all_structures(kE, 2);
  for (std::size_t i = 0; i < 40; ++i) fam.push_back(all_structures(kE, 3, 3)[i * 11]);
  for (const auto& a : fam)
    for (const auto& b : fam)
      for (const auto& h : all_homomorphisms(a, b)) {
        auto f = map_from_indices(a, b, h);
        auto [q, e] = factor_morphism(f);
        CHECK(compose(e, q) == f);
        auto qc = classify_map(q), ec = classify_map(e);
        CHECK((qc == MapClass::surjective_hom || qc == MapClass::iso));
        CHECK((ec == MapClass::embedding || ec == MapClass::iso));
        if (classify_map(f) == MapClass::embedding) CHECK(qc == MapClass::iso);
        if (classify_map(f) == MapClass::surjective_hom) CHECK(ec == MapClass::iso);
      }
  auto [q, e] = factor_morphism(StructMap(edge(), loop(), {"x", "x"}));
  CHECK(q.target() == loop());
  CHECK_THROWS(factor_morphism(StructMap(loop(), edge(), {"a"})));
}

TEST_CASE("gaifman closure") {
  using P = std::set<std::pair<Elem, Elem>>;
  CHECK(gaifman_closure(points(2)) == P{{"a", "a"}, {"b", "b"}});
  CHECK(gaifman_closure(edge()) == P{{"a", "a"}, {"a", "b"}, {"b", "a"}, {"b", "b"}});
  auto two = Structure(kE, {"a", "b", "c", "d"}, {{"E", {{"a", "b"}, {"c", "d"}}}});
  for (const auto& [x, y] : gaifman_closure(two)) CHECK(((x < "c") == (y < "c")));
}

TEST_CASE("enumeration counts") {
  CHECK(all_structures(kE, 2).size() == 18);
  CHECK(all_pointed_structures(kE, 2).size() == 34);
  CHECK(graph_classes(4).size() == 1 + 2 + 4 + 11);
  CHECK(labeled_graphs(3).size() == 8);
}
