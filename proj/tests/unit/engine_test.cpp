#include "helpers.hpp"

#include "fvm/errors.hpp"
#include "fvm/fvm_engine.hpp"
#include "fvm/game_comonads.hpp"

using namespace fvm;
using namespace fvm::test;

namespace {

bool naive_sim(int k, const Structure& a, Index x, const Structure& b, Index y) {
  for (const auto& [r, ar] : a.signature().symbols()) {
    if (ar != 1) continue;
    Index t[1] = {x}, u[1] = {y};
    if (a.holds(r, std::span<const Index>(t)) && !b.holds(r, std::span<const Index>(u))) return false;
  }
  if (k == 0) return true;
  for (const auto& [r, ar] : a.signature().symbols()) {
    if (ar != 2) continue;
    for (const auto& e : a.tuples(r)) {
      if (e[0] != x) continue;
      bool ok = false;
      for (const auto& f : b.tuples(r))
        if (f[0] == y && (ok = naive_sim(k - 1, a, e[1], b, f[1]))) break;
      if (!ok) return false;
    }
  }
  return true;
}

std::vector<Structure> pointed_modal_family() {
  return all_pointed_structures(Signature{{"R", 2}, {"P", 1}}, 2);
}

CountingWitness epsilon_pair(const ComonadSpec& c, const Structure& a) {
  return {c, counit_map(c, a), counit_map(c, a)};
}

// Kleisli iso induced by a structure iso: f = iso ∘ ε, g = iso⁻¹ ∘ ε.
CountingWitness from_iso(const ComonadSpec& c, const StructMap& iso) {
  std::map<Elem, Elem> inv;
  for (Index i = 0; i < iso.source().size(); ++i) inv[iso.at(i)] = iso.source().universe()[i];
  auto back = StructMap::from_pairs(iso.target(), iso.source(), inv);
  return {c, compose(iso, counit_map(c, iso.source())), compose(back, counit_map(c, iso.target()))};
}

}  // namespace

TEST_CASE("game oracles agree with naive minimax") {
  auto fam = all_structures(kE, 2);
  for (int k = 1; k <= 2; ++k)
    for (const auto& a : fam)
      for (const auto& b : fam) {
        CHECK(decide_pe_game(k, a, b) == naive_game(Game::one_sided, k, a, b));
        CHECK(decide_fo_noeq_equiv(k, a, b) == naive_game(Game::two_sided_noeq, k, a, b));
        CHECK(decide_fo_eq_equiv(k, a, b) == naive_game(Game::two_sided_eq, k, a, b));
      }
  auto pf = pointed_modal_family();
  for (int k = 1; k <= 2; ++k)
    for (const auto& a : pf)
      for (const auto& b : pf) CHECK(decide_modal_sim(k, a, b) == naive_sim(k, a, a.point_index(), b, b.point_index()));
}

TEST_CASE("game oracle examples") {
  for (int k = 1; k <= 3; ++k) {
    CHECK(decide_pe_game(k, edge(), edge()));
    CHECK(decide_pe_game(k, edge(), loop()));
    CHECK(decide_fo_noeq_equiv(k, points(1), points(2)));
  }
  CHECK_FALSE(decide_pe_game(1, loop(), edge()));
  CHECK_FALSE(decide_fo_noeq_equiv(2, edge(), loop()));
  CHECK_FALSE(decide_fo_eq_equiv(2, points(1), points(2)));
  auto a = modal({"a", "b"}, {{"a", "b"}}, {"b"}, "a");
  CHECK(decide_modal_sim(2, a, a));
  auto lone = modal({"o"}, {}, {}, "o");
  CHECK(decide_modal_sim(2, lone, a));
  CHECK_FALSE(decide_modal_sim(2, modal({"o"}, {}, {"o"}, "o"), a));
}

TEST_CASE("witness search agrees with the games") {
  auto fam = all_structures(kE, 2);
  std::size_t pairs = 0;
  for (int k = 1; k <= 2; ++k)
    for (const auto& a : fam)
      for (const auto& b : fam) {
        auto w = search_pe_witness(ef_comonad(k), a, b);
        CHECK(w.has_value() == decide_pe_game(k, a, b));
        if (w) CHECK(is_hom(w->f));
        ++pairs;
      }
  CHECK(pairs == 648);
  auto pf = all_pointed_structures(kE, 2);
  for (int k = 1; k <= 2; ++k)
    for (const auto& a : pf)
      for (const auto& b : pf) CHECK(search_pe_witness(modal_comonad(k), a, b).has_value() == decide_modal_sim(k, a, b));
}

TEST_CASE("witness search examples") {
  auto e1 = ef_comonad(1), e2 = ef_comonad(2);
  auto self = search_pe_witness(e2, edge(), edge());
  REQUIRE(self);
  CHECK(search_pe_witness(e2, edge(), loop()));
  CHECK_FALSE(search_pe_witness(e1, loop(), edge()));
}

TEST_CASE("Kleisli inverses") {
  auto e1 = ef_comonad(1), e2 = ef_comonad(2);
  auto eps = epsilon_pair(e2, edge());
  CHECK(verify_kleisli_inverse(e2, eps.f, eps.g));
  auto iso = *search_isomorphism(edge("a", "b"), edge("c", "d"));
  auto w = from_iso(e2, iso);
  CHECK(verify_kleisli_inverse(e2, w.f, w.g));
  Structure one(kE, {"x"});
  auto f = StructMap(apply(e1, points(2)), one, {"x", "x"});
  auto g = StructMap(apply(e1, one), points(2), {"a"});
  CHECK_FALSE(verify_kleisli_inverse(e1, f, g));
  CHECK_THROWS(verify_kleisli_inverse(e1, f, f));
}

TEST_CASE("Kleisli iso search") {
  auto e1 = ef_comonad(1);
  auto same = search_kleisli_iso(e1, edge(), edge());
  CHECK(same.verdict == SearchVerdict::found);
  CHECK(search_kleisli_iso(e1, points(2), points(1)).verdict == SearchVerdict::not_found);
  auto rel = search_kleisli_iso(e1, edge("a", "b"), edge("c", "d"));
  REQUIRE(rel.witness);
  CHECK(verify_kleisli_inverse(e1, rel.witness->f, rel.witness->g));
  CHECK(search_kleisli_iso(ef_comonad(2), edge(), edge(), 1).verdict == SearchVerdict::indeterminate);

  auto fam = all_structures(kE, 2);
  for (const auto& a : fam)
    for (const auto& b : fam) {
      auto ab = search_kleisli_iso(e1, a, b), ba = search_kleisli_iso(e1, b, a);
      CHECK(ab.verdict == ba.verdict);
      if (ab.witness) CHECK(verify_kleisli_inverse(e1, ab.witness->f, ab.witness->g));
    }
}

TEST_CASE("composing positive existential witnesses") {
  auto e2 = ef_comonad(2);
  Signature sig{{"E", 2}, {"P", 1}};
  Structure a(sig, {"a", "b"}, {{"E", {{"a", "b"}}}, {"P", {{"a"}}}});
  Structure b(sig, {"x"}, {{"E", {{"x", "x"}}}, {"P", {{"x"}}}});
  auto w = search_pe_witness(e2, a, b);
  REQUIRE(w);
  auto law = kappa_reduct(2, Signature{{"P", 1}});
  auto c = compose_pe_witness(law, std::vector<PEWitness>{*w});
  CHECK(is_hom(c.f));
  CHECK(c.source == reduct(a, Signature{{"P", 1}}));
  CHECK(c.target() == reduct(b, Signature{{"P", 1}}));

  auto cop = kappa_coproduct(e2, 2);
  std::vector<PEWitness> ids{{e2, edge(), counit_map(e2, edge())}, {e2, loop(), counit_map(e2, loop())}};
  auto id = compose_pe_witness(cop, ids);
  CHECK(id.target() == disjoint_union(edge(), loop()));
  CHECK(is_hom(id.f));

  auto fam = all_structures(kE, 2);
  std::size_t n = 0;
  for (const auto& a1 : fam)
    for (const auto& b1 : fam) {
      auto w1 = search_pe_witness(e2, a1, b1);
      if (!w1) continue;
      auto w2 = search_pe_witness(e2, b1, a1);
      if (!w2) continue;
      for (const auto& law : {cop, kappa_product(e2, 2)}) {
        auto comp = compose_pe_witness(law, std::vector<PEWitness>{*w1, *w2});
        CHECK(at_least_hom(classify_map(comp.f)));
        ++n;
      }
    }
  CHECK(n > 0);
  CHECK_THROWS_AS(compose_pe_witness(cop, std::vector<PEWitness>{*w}), Error);
}

TEST_CASE("composing counting witnesses") {
  auto e1 = ef_comonad(1), e2 = ef_comonad(2);
  auto iso1 = *search_isomorphism(edge("a", "b"), edge("c", "d"));
  auto iso2 = *search_isomorphism(loop("x"), loop("y"));
  for (const auto& c : {e1, e2})
    for (const auto& law : {kappa_coproduct(c, 2), kappa_product(c, 2)}) {
      auto w = compose_counting_witness(law, std::vector<CountingWitness>{from_iso(c, iso1), from_iso(c, iso2)});
      CHECK(verify_kleisli_inverse(c, w.f, w.g));
    }
  auto w = compose_counting_witness(kappa_coproduct(e1, 2),
                                    std::vector<CountingWitness>{epsilon_pair(e1, edge()), epsilon_pair(e1, loop())});
  CHECK(w.f == counit_map(e1, disjoint_union(edge(), loop())));

  Structure one(kE, {"x"});
  CountingWitness bogus{e1, StructMap(apply(e1, points(2)), one, {"x", "x"}), StructMap(apply(e1, one), points(2), {"a"})};
  CHECK_THROWS_AS(compose_counting_witness(kappa_product(e1, 2), std::vector<CountingWitness>{bogus, bogus}), Error);
}

TEST_CASE("counterexample search") {
  auto m2 = [](const Structure& a, const Structure& b) { return decide_modal_sim(2, a, b); };
  auto ce = find_fvm_counterexample(pointed_coproduct_op(), m2, rooted_structures(Signature{{"R", 2}, {"P", 1}}, 2));
  REQUIRE(ce);
  for (std::size_t i = 0; i < 2; ++i) CHECK(decide_modal_sim(2, ce->a[i], ce->b[i]));
  CHECK(ce->ha == pointed_coproduct(ce->a[0], ce->a[1]));
  CHECK(ce->hb == pointed_coproduct(ce->b[0], ce->b[1]));
  CHECK_FALSE(decide_modal_sim(2, ce->ha, ce->hb));
  CHECK(naive_sim(2, ce->a[0], ce->a[0].point_index(), ce->b[0], ce->b[0].point_index()));
  CHECK_FALSE(naive_sim(2, ce->ha, ce->ha.point_index(), ce->hb, ce->hb.point_index()));

  auto fam = all_structures(kE, 2);
  auto pe2 = [](const Structure& a, const Structure& b) { return decide_pe_game(2, a, b); };
  CHECK_FALSE(find_fvm_counterexample(coproduct_op(2), pe2, fam));
  auto counting = [](const Structure& a, const Structure& b) {
    auto r = search_kleisli_iso(ef_comonad(1), a, b);
    REQUIRE(r.verdict != SearchVerdict::indeterminate);
    return r.verdict == SearchVerdict::found;
  };
  CHECK_FALSE(find_fvm_counterexample(product_op(2, CategoryKind::plain), counting, fam));
}

TEST_CASE("equality-free equivalence is preserved by disjoint union") {
  auto fam = all_structures(kE, 2);
  std::vector<std::pair<std::size_t, std::size_t>> eq;
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = 0; j < fam.size(); ++j)
      if (decide_fo_noeq_equiv(2, fam[i], fam[j])) eq.emplace_back(i, j);
  std::size_t checked = 0;
  for (const auto& [a1, b1] : eq)
    for (const auto& [a2, b2] : eq) {
      CHECK(decide_fo_noeq_equiv(2, disjoint_union(fam[a1], fam[a2]), disjoint_union(fam[b1], fam[b2])));
      ++checked;
    }
  CHECK(checked == eq.size() * eq.size());
}
