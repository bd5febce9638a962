// fvm: command-line front end.
//
// Exit codes: 0 pass / related / found, 1 fail / not related / none found,
// 2 usage or input error, 3 indeterminate (search budget exhausted).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fvm/coalgebras.hpp"
#include "fvm/errors.hpp"
#include "fvm/family.hpp"
#include "fvm/fvm_engine.hpp"
#include "fvm/game_comonads.hpp"
#include "fvm/io.hpp"
#include "fvm/spectra.hpp"
#include "fvm/suite.hpp"
#include "fvm/translations.hpp"

using namespace fvm;

namespace {

constexpr int kUsage = 2;
constexpr int kIndeterminate = 3;

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

ComonadSpec comonad_from(const std::string& name, int k, int len, bool pointed) {
  if (std::any_of(name.begin(), name.end(), ::isdigit)) return comonad_by_name(name);
  if (name == "E") return ef_comonad(k);
  if (name == "P") return pebble_comonad(k, len, pointed ? CategoryKind::pointed : CategoryKind::plain);
  if (name == "M") return modal_comonad(k);
  if (name == "Cos") return cos_comonad(len);
  throw DomainError("unknown comonad: " + name);
}

std::vector<Structure> family_for(const ComonadSpec& c, const Signature& sig, std::size_t size,
                                  std::size_t graphs) {
  if (c.name.starts_with("Cos")) {
    std::vector<Structure> out;
    for (std::size_t n = 1; n <= graphs; ++n)
      for (auto& g : labeled_graphs(n)) out.push_back(std::move(g));
    return out;
  }
  return c.kind == CategoryKind::pointed ? all_pointed_structures(sig, size) : all_structures(sig, size);
}

// Short law names resolved with --k/--len/--comonad.
KleisliLawSpec law_from(const std::string& name, const std::string& comonad, int k, int len) {
  if (name.find(':') != std::string::npos || name.find("=>") != std::string::npos) return law_by_name(name);
  auto c = [&] { return comonad_from(comonad, k, len, false); };
  if (name == "reduct") return kappa_reduct(c(), Signature{{"E", 2}});
  if (name == "coproduct") return kappa_coproduct(c(), 2);
  if (name == "product") return kappa_product(c(), 2);
  if (name == "merge") return kappa_merge(k, "E");
  if (name == "modal-to-pebble") return morph_modal_to_pebble2(k, len);
  if (name == "ef-to-pebble") return morph_ef_to_pebble(k, len);
  if (name == "cos-to-pebble") return morph_cos_to_pebble3(len, len);
  throw DomainError("unknown law: " + name);
}

bool is_morphism(const KleisliLawSpec& law) { return law.name.find("=>") != std::string::npos; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Game comonads, Kleisli laws and composition-theorem witnesses over finite structures"};
  app.require_subcommand(1);

  // comonad build
  auto* comonad = app.add_subcommand("comonad", "Comonad object maps");
  comonad->require_subcommand(1);
  auto* build = comonad->add_subcommand("build", "Print C(A) as a structure document");
  std::string build_name, build_file;
  int build_k = 2, build_len = 3;
  bool build_pointed = false;
  build->add_option("name", build_name, "E, P, M, Cos, or a full name such as E2, P2,3*")->required();
  build->add_option("structure", build_file, "structure file")->required()->check(CLI::ExistingFile);
  build->add_option("--k", build_k, "rounds / pebbles / depth");
  build->add_option("--len", build_len, "truncation length for P and Cos");
  build->add_flag("--pointed", build_pointed, "pointed P");

  // check-law
  auto* check = app.add_subcommand("check-law", "Check comonad laws or a Kleisli law on all small structures");
  std::string check_name, check_comonad = "E";
  std::size_t check_size = 2, check_graphs = 4;
  int check_k = 2, check_len = 3;
  std::uint64_t check_seed = QuantifierPolicy{}.seed;
  bool check_mutate = false;
  check->add_option("law", check_name,
                    "comonad-laws, reduct, coproduct, product, merge, modal-to-pebble, ef-to-pebble, "
                    "cos-to-pebble, or a full law name")
      ->required();
  check->add_option("--size", check_size, "structures of size <= N")->check(CLI::PositiveNumber);
  check->add_option("--k", check_k)->check(CLI::PositiveNumber);
  check->add_option("--len", check_len)->check(CLI::PositiveNumber);
  check->add_option("--comonad", check_comonad, "E, P, M, Cos or a full name");
  check->add_option("--graphs", check_graphs, "graphs with <= N vertices for Cos")->check(CLI::PositiveNumber);
  check->add_option("--seed", check_seed);
  check->add_flag("--mutate", check_mutate, "use the checker mutant");

  // equiv
  auto* equiv = app.add_subcommand("equiv", "Decide a relation between two structures");
  std::string frag, equiv_a, equiv_b, witness_out;
  int equiv_k = 2;
  std::optional<int> equiv_len;
  std::size_t equiv_budget = 200000;
  equiv->add_option("--fragment", frag)->required()->check(CLI::IsMember({"pe", "counting", "full-oracle", "modal"}));
  equiv->add_option("--k", equiv_k)->check(CLI::PositiveNumber);
  equiv->add_option("--len", equiv_len, "use P_{k,len} instead of E_k");
  equiv->add_option("--budget", equiv_budget, "hom budget for the counting search");
  equiv->add_option("--witness-out", witness_out, "write the witness here");
  equiv->add_option("a", equiv_a)->required()->check(CLI::ExistingFile);
  equiv->add_option("b", equiv_b)->required()->check(CLI::ExistingFile);

  // compose
  auto* compose_cmd = app.add_subcommand("compose", "Compose witnesses along a Kleisli law");
  std::string compose_law, compose_out;
  std::vector<std::string> compose_ws;
  compose_cmd->add_option("--law", compose_law)->required();
  compose_cmd->add_option("--witness", compose_ws)->required()->check(CLI::ExistingFile);
  compose_cmd->add_option("--out", compose_out, "write the composite witness here (default stdout)");

  // full-check
  auto* full = app.add_subcommand("full-check", "Coalgebra-level checks for a Kleisli law");
  std::string full_law;
  std::size_t full_size = 2;
  bool full_verbose = false;
  full->add_option("--law", full_law, "full law name, e.g. kappa-product:E2x2")->required();
  full->add_option("--size", full_size)->check(CLI::PositiveNumber);
  full->add_flag("--verbose", full_verbose, "one line per check");

  // translate
  auto* translate = app.add_subcommand("translate", "Apply a translation to a structure");
  std::string tr_name, tr_file;
  translate->add_option("--tr", tr_name, "eq, con, global, weak:S[+star|+drop][+unary]")->required();
  translate->add_option("structure", tr_file)->required()->check(CLI::ExistingFile);

  // spectra
  auto* spectra = app.add_subcommand("spectra", "Characteristic polynomials and cospectrality");
  std::string sp_a, sp_b;
  spectra->add_option("a", sp_a)->required()->check(CLI::ExistingFile);
  spectra->add_option("b", sp_b)->required()->check(CLI::ExistingFile);

  // counterexample
  auto* cex = app.add_subcommand("counterexample", "Search for related inputs with unrelated images");
  std::string cex_op = "pointed-coproduct", cex_rel = "M2";
  std::size_t cex_size = 2;
  cex->add_option("--op", cex_op)->check(CLI::IsMember({"pointed-coproduct", "coproduct", "product"}));
  cex->add_option("--relation", cex_rel, "Mk (modal simulation) or Ek (positive existential game)");
  cex->add_option("--size", cex_size, "non-root elements (pointed) or universe size")->check(CLI::PositiveNumber);

  // suite
  auto* suite = app.add_subcommand("suite", "Run verification suites");
  SuiteConfig cfg;
  std::vector<std::string> suites;
  std::string suite_out, summary_json;
  suite->add_option("--suite", suites, "suite name (repeatable); 'none' selects nothing")
      ->check(CLI::IsMember([] {
        auto v = suite_names();
        v.push_back("none");
        return v;
      }()));
  suite->add_flag("--mutate", cfg.mutate);
  suite->add_option("--size", cfg.size)->check(CLI::PositiveNumber);
  suite->add_option("--k", cfg.k)->check(CLI::PositiveNumber);
  suite->add_option("--len", cfg.len)->check(CLI::Range(2, 16));
  suite->add_option("--graphs", cfg.graph_vertices)->check(CLI::PositiveNumber);
  suite->add_option("--seed", cfg.seed);
  suite->add_option("--out", suite_out, "report file (default stdout)");
  suite->add_option("--summary-json", summary_json, "also write a JSON summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; every other parse problem is a usage error.
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (build->parsed()) {
      auto c = comonad_from(build_name, build_k, build_len, build_pointed);
      std::cout << print_structure(apply(c, read_structure_file(build_file))) << "\n";
      return 0;
    }

    if (check->parsed()) {
      QuantifierPolicy pol;
      pol.seed = check_seed;
      LawReport r;
      if (check_name == "comonad-laws") {
        auto c = comonad_from(check_comonad, check_k, check_len, false);
        if (check_mutate) c = with_truncated_coextension(c);
        r = check_comonad_laws(c, family_for(c, Signature{{"E", 2}}, check_size, check_graphs), pol);
      } else {
        auto law = law_from(check_name, check_comonad, check_k, check_len);
        if (check_mutate) law = with_unrestricted_coproduct(law);
        Signature sig = law.op.name == "reduct" ? Signature{{"E", 2}, {"P", 1}} : Signature{{"E", 2}};
        auto fam = family_for(law.sources.at(0), sig, check_size, check_graphs);
        if (law.name.starts_with("kappa-product:Cos")) fam = graph_classes(check_graphs);
        r = is_morphism(law) ? check_comonad_morphism(law, fam, pol) : check_kleisli_law(law, fam, pol);
      }
      std::cout << r.text();
      return r.passed() ? 0 : 1;
    }

    if (equiv->parsed()) {
      Structure a = read_structure_file(equiv_a), b = read_structure_file(equiv_b);
      auto word = [&] { return equiv_len ? pebble_comonad(equiv_k, *equiv_len) : ef_comonad(equiv_k); };
      if (frag == "pe" || frag == "modal") {
        auto c = frag == "pe" ? word() : modal_comonad(equiv_k);
        auto w = search_pe_witness(c, a, b);
        std::cout << "VERDICT " << frag << " " << c.name << " " << (w ? "yes" : "no") << "\n";
        if (frag == "pe" && !equiv_len) std::cout << "GAME " << (decide_pe_game(equiv_k, a, b) ? "yes" : "no") << "\n";
        if (frag == "modal") std::cout << "SIMULATION " << (decide_modal_sim(equiv_k, a, b) ? "yes" : "no") << "\n";
        if (w && !witness_out.empty()) write_out(witness_out, print_witness(*w) + "\n");
        return w ? 0 : 1;
      }
      if (frag == "counting") {
        auto c = word();
        auto res = search_kleisli_iso(c, a, b, equiv_budget);
        std::cout << "VERDICT counting " << c.name << " " << to_string(res.verdict) << " work=" << res.work << "\n";
        if (res.witness && !witness_out.empty()) write_out(witness_out, print_witness(*res.witness) + "\n");
        if (res.verdict == SearchVerdict::indeterminate) return kIndeterminate;
        return res.verdict == SearchVerdict::found ? 0 : 1;
      }
      bool with_eq = decide_fo_eq_equiv(equiv_k, a, b);
      std::cout << "VERDICT full-oracle k=" << equiv_k << " " << (with_eq ? "yes" : "no") << "\n";
      std::cout << "WITHOUT-EQUALITY " << (decide_fo_noeq_equiv(equiv_k, a, b) ? "yes" : "no") << "\n";
      return with_eq ? 0 : 1;
    }

    if (compose_cmd->parsed()) {
      auto law = law_by_name(compose_law);
      std::vector<std::string> texts;
      for (const auto& f : compose_ws) texts.push_back(read_file(f));
      const std::string type = witness_type(texts.at(0));
      if (type == "pe") {
        std::vector<PEWitness> ws;
        for (const auto& t : texts) ws.push_back(parse_pe_witness(t));
        auto c = compose_pe_witness(law, ws);
        std::cerr << "LAW compose-pe " << law.name << " PASS hom=" << (is_hom(c.f) ? "yes" : "no") << "\n";
        write_out(compose_out, print_witness(c) + "\n");
        return 0;
      }
      if (type == "counting") {
        std::vector<CountingWitness> ws;
        for (const auto& t : texts) ws.push_back(parse_counting_witness(t));
        auto c = compose_counting_witness(law, ws);
        bool ok = verify_kleisli_inverse(c.comonad, c.f, c.g);
        std::cerr << "LAW compose-counting " << law.name << (ok ? " PASS" : " FAIL") << "\n";
        write_out(compose_out, print_witness(c) + "\n");
        return ok ? 0 : 1;
      }
      throw ParseError("unknown witness type: " + type);
    }

    if (full->parsed()) {
      auto law = law_by_name(full_law);
      const auto& c = law.sources.at(0);
      Signature sig = law.op.name == "reduct" ? Signature{{"E", 2}, {"P", 1}} : Signature{{"E", 2}};
      auto bases = c.kind == CategoryKind::pointed ? all_pointed_structures(sig, full_size) : all_structures(sig, full_size);
      auto r = full_check(law, bases);
      std::cout << "# full-check " << law.name << " size=" << full_size << "\n";
      std::cout << (full_verbose ? r.text() : summarize(r, law.name).text());
      return r.passed() ? 0 : 1;
    }

    if (translate->parsed()) {
      std::cout << print_structure(make_translation(tr_name).apply(read_structure_file(tr_file))) << "\n";
      return 0;
    }

    if (spectra->parsed()) {
      Structure a = read_structure_file(sp_a), b = read_structure_file(sp_b);
      auto show = [](const Structure& g) {
        std::string s;
        for (auto c : char_poly(adjacency_matrix(g))) s += (s.empty() ? "" : " ") + std::to_string(c);
        return s;
      };
      const std::string pa = show(a), pb = show(b);
      std::cout << "CHARPOLY A " << pa << "\nCHARPOLY B " << pb << "\n";
      bool co = cospectral(a, b);
      std::cout << "COSPECTRAL " << (co ? "yes" : "no") << "\n";
      std::cout << "ISOMORPHIC " << (a.size() == b.size() && search_isomorphism(a, b) ? "yes" : "no") << "\n";
      return co ? 0 : 1;
    }

    if (cex->parsed()) {
      if (cex_rel.size() < 2 || (cex_rel[0] != 'M' && cex_rel[0] != 'E'))
        throw DomainError("relation must be Mk or Ek: " + cex_rel);
      const int k = std::stoi(cex_rel.substr(1));
      const bool modal = cex_rel[0] == 'M';
      RelationOracle rel;
      if (modal) rel = [k](const Structure& a, const Structure& b) { return decide_modal_sim(k, a, b); };
      else rel = [k](const Structure& a, const Structure& b) { return decide_pe_game(k, a, b); };
      OperationSpec op = cex_op == "pointed-coproduct" ? pointed_coproduct_op()
                         : cex_op == "coproduct"        ? coproduct_op(2)
                                                        : product_op(2, modal ? CategoryKind::pointed : CategoryKind::plain);
      std::vector<Structure> cands;
      if (op.slots.at(0) == CategoryKind::pointed) cands = rooted_structures(Signature{{"R", 2}, {"P", 1}}, cex_size);
      else cands = all_structures(Signature{{"E", 2}}, cex_size);
      auto ce = find_fvm_counterexample(op, rel, cands);
      if (!ce) {
        std::cout << "NONE within bound (" << cands.size() << " candidates)\n";
        return 1;
      }
      for (std::size_t i = 0; i < ce->a.size(); ++i)
        std::cout << "ARG " << i + 1 << " " << print_structure(ce->a[i]) << " => " << print_structure(ce->b[i]) << "\n";
      std::cout << "IMAGE " << print_structure(ce->ha) << " =/=> " << print_structure(ce->hb) << "\n";
      return 0;
    }

    if (suite->parsed()) {
      if (!suites.empty()) {
        cfg.suites.clear();
        for (const auto& s : suites)
          if (s != "none") cfg.suites.push_back(s);
      }
      auto res = run_suite(cfg);
      write_out(suite_out, res.report);
      if (!summary_json.empty()) {
        nlohmann::ordered_json j;
        j["exit_code"] = res.exit_code;
        j["seed"] = cfg.seed;
        j["suites"] = cfg.suites;
        write_out(summary_json, j.dump() + "\n");
      }
      return res.exit_code;
    }
  } catch (const Error& e) {
    std::cerr << "fvm: " << e.what() << "\n";
    return kUsage;
  }
  return 0;
}
