#include "helpers.hpp"

#include <filesystem>

#include "fvm/errors.hpp"
#include "fvm/game_comonads.hpp"
#include "fvm/io.hpp"

using namespace fvm;
using namespace fvm::test;

namespace {

const std::string kFixtures = FVM_FIXTURES;

std::string parse_error(const std::string& text) {
  try {
    parse_structure(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("print then parse is the identity") {
  std::vector<Structure> fam = all_structures(Signature{{"E", 2}, {"P", 1}}, 2);
  for (const auto& a : all_pointed_structures(kE, 2)) fam.push_back(a);
  fam.push_back(apply(ef_comonad(2), edge()));
  fam.push_back(apply(pebble_comonad(2, 2), loop()));
  fam.push_back(disjoint_union(edge(), loop()));
  fam.push_back(Structure(kE, {}));
  fam.push_back(Structure(kE, {"quote\"d", "back\\slash", "ünï"}, {{"E", {{"quote\"d", "ünï"}}}}));
  for (const auto& a : fam) {
    auto text = print_structure(a);
    CHECK(parse_structure(text) == a);
    CHECK(print_structure(parse_structure(text)) == text);
  }
}

TEST_CASE("parsing canonicalises and keeps the point optional") {
  auto a = parse_structure(R"({"signature": {"E": 2}, "universe": ["b","a"], "relations": {"E": [["b","a"],["b","a"]]}})");
  CHECK(a == Structure(kE, {"a", "b"}, {{"E", {{"b", "a"}}}}));
  CHECK_FALSE(a.pointed());
  auto p = read_structure_file(kFixtures + "/pointed.json");
  CHECK(p.pointed());
  CHECK(p.point() == Elem("a"));
  auto missing = parse_structure(R"({"signature": {"E": 2, "P": 1}, "universe": ["a"], "relations": {}})");
  CHECK(missing.tuple_count() == 0);
  CHECK(print_structure(edge()) ==
        R"({"signature":{"E":2},"universe":["a","b"],"relations":{"E":[["a","b"]]}})");
}

TEST_CASE("malformed documents are rejected with a position") {
  struct Case {
    const char* file;
    const char* fragment;
  };
  for (const auto& [file, fragment] : {
           Case{"arity_mismatch", "at /relations/E/0: tuple of length 1, arity 2"},
           Case{"point_outside", "at /point"},
           Case{"unknown_key", "unknown key \"colour\""},
           Case{"truncated", "syntax error at 2:1"},
           Case{"missing_universe", "missing key \"universe\""},
           Case{"zero_arity", "at /signature/E: arity must be a positive integer"},
           Case{"duplicate_element", "at /universe/1: duplicate element"},
           Case{"unknown_symbol", "at /relations/F: symbol not in the signature"},
           Case{"element_outside", "at /relations/E/0/1"},
           Case{"non_string_element", "at /universe/0: expected a string"},
       }) {
    const std::string path = kFixtures + "/malformed/" + file + ".json";
    std::string msg;
    try {
      read_structure_file(path);
    } catch (const ParseError& e) {
      msg = e.what();
    }
    CHECK_MESSAGE(msg.find(fragment) != std::string::npos, file, ": ", msg);
  }
  CHECK(parse_error("[1, 2]").find("expected an object") != std::string::npos);
  CHECK(parse_error("{\"signature\": {\"E\": 2},\n \"universe\": [\"a\",]}").find("syntax error at 2:") !=
        std::string::npos);
  CHECK_THROWS_AS(read_structure_file(kFixtures + "/nope.json"), DomainError);
}

TEST_CASE("comonads and laws by name") {
  CHECK(comonad_by_name("E2").name == "E2");
  CHECK(comonad_by_name("P2,3").kind == CategoryKind::plain);
  CHECK(comonad_by_name("P2,3*").kind == CategoryKind::pointed);
  CHECK(comonad_by_name("M2").kind == CategoryKind::pointed);
  CHECK(comonad_by_name("Cos3").name == "Cos3");
  CHECK_THROWS_AS(comonad_by_name("Q2"), DomainError);
  CHECK_THROWS_AS(comonad_by_name("P2"), DomainError);

  for (const std::string name : {"kappa-coproduct:E2x2", "kappa-product:M2x2", "kappa-merge-E:M1", "M2=>P2,3*",
                                 "E2=>P2,3", "Cos3=>P3,3", "id:E2", "kappa-coproduct:P2,3x3"})
    CHECK(law_by_name(name).name == name);
  CHECK(law_by_name("kappa-reduct:E2:P/1").op.name == "reduct");
  CHECK(law_by_name("kappa-coproduct:E2x2~mutant").name == "kappa-coproduct:E2x2~mutant");
  CHECK_THROWS_AS(law_by_name("kappa-product:E2x2~mutant"), DomainError);
  CHECK_THROWS_AS(law_by_name("kappa-bogus:E2"), DomainError);
  CHECK_THROWS_AS(law_by_name("E2=>P3,3"), DomainError);
}

TEST_CASE("witness documents round-trip") {
  auto e2 = ef_comonad(2);
  auto w = search_pe_witness(e2, edge(), loop());
  REQUIRE(w);
  auto text = print_witness(*w);
  CHECK(witness_type(text) == "pe");
  auto back = parse_pe_witness(text);
  CHECK(back.f == w->f);
  CHECK(back.source == w->source);
  CHECK(print_witness(back) == text);

  auto k = search_kleisli_iso(ef_comonad(1), edge("a", "b"), edge("c", "d"));
  REQUIRE(k.witness);
  auto ktext = print_witness(*k.witness);
  CHECK(witness_type(ktext) == "counting");
  auto kb = parse_counting_witness(ktext);
  CHECK(kb.f == k.witness->f);
  CHECK(kb.g == k.witness->g);
  CHECK_THROWS_AS(parse_pe_witness(ktext), ParseError);

  auto broken = text;
  broken.replace(broken.rfind("\"x\""), 3, "\"q\"");
  CHECK_THROWS_AS(parse_pe_witness(broken), ParseError);
}
