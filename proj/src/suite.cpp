#include "fvm/suite.hpp"

#include <algorithm>
#include <map>

#include "fvm/coalgebras.hpp"
#include "fvm/errors.hpp"
#include "fvm/family.hpp"
#include "fvm/fvm_engine.hpp"
#include "fvm/game_comonads.hpp"
#include "fvm/spectra.hpp"
#include "fvm/translations.hpp"

namespace fvm {

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"laws",     "kleisli-laws", "fvm-pe",  "fvm-counting",
                                              "fvm-full", "translations", "spectra", "counterexample"};
  return names;
}

void validate(const SuiteConfig& cfg) {
  if (cfg.size < 1 || cfg.k < 1 || cfg.len < 2 || cfg.graph_vertices < 1)
    throw DomainError("suite bounds must be positive (len at least 2)");
  for (const auto& s : cfg.suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw DomainError("unknown suite: " + s);
}

LawReport summarize(const LawReport& r, const std::string& prefix) {
  struct Acc {
    std::size_t count = 0, failed = 0;
    std::string first;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> acc;
  for (const auto& l : r.lines) {
    auto [it, fresh] = acc.try_emplace(l.law);
    if (fresh) order.push_back(l.law);
    ++it->second.count;
    if (!l.pass && it->second.failed++ == 0) it->second.first = l.subject + (l.detail.empty() ? "" : " " + l.detail);
  }
  LawReport out;
  out.header = r.header;
  out.sampled = r.sampled;
  for (const auto& law : order) {
    const auto& a = acc[law];
    std::string detail = "checked=" + std::to_string(a.count);
    if (a.failed) detail += " failed=" + std::to_string(a.failed) + " first=" + a.first;
    out.add(law, prefix, a.failed == 0, detail);
  }
  return out;
}

namespace {

QuantifierPolicy policy_of(const SuiteConfig& cfg) {
  QuantifierPolicy p;
  p.seed = cfg.seed;
  return p;
}

std::vector<Structure> plain_family(const SuiteConfig& cfg) { return all_structures(cfg.signature, cfg.size); }
std::vector<Structure> pointed_family(const SuiteConfig& cfg) {
  return all_pointed_structures(cfg.signature, cfg.size);
}
std::vector<Structure> labeled_graph_family(const SuiteConfig& cfg) {
  std::vector<Structure> out;
  for (std::size_t n = 1; n <= cfg.graph_vertices; ++n)
    for (auto& g : labeled_graphs(n)) out.push_back(std::move(g));
  return out;
}
Signature with_unary(const Signature& s) { return s.contains("P") ? s : s.with("P", 1); }
std::string first_binary(const Signature& s) {
  for (const auto& [name, ar] : s.symbols())
    if (ar == 2) return name;
  throw DomainError("signature has no binary symbol");
}

LawReport suite_laws(const SuiteConfig& cfg) {
  LawReport r;
  auto pol = policy_of(cfg);
  auto plain = plain_family(cfg);
  auto pointed = pointed_family(cfg);
  for (int k = 1; k <= cfg.k; ++k) {
    auto e = ef_comonad(k);
    if (cfg.mutate) e = with_truncated_coextension(e);
    r.append(summarize(check_comonad_laws(e, plain, pol), e.name));
    for (int l = 2; l <= cfg.len; ++l) {
      auto p = pebble_comonad(k, l);
      r.append(summarize(check_comonad_laws(p, plain, pol), p.name));
    }
    if (cfg.signature.modal()) {
      auto m = modal_comonad(k);
      r.append(summarize(check_comonad_laws(m, pointed, pol), m.name));
    }
  }
  auto graphs = labeled_graph_family(cfg);
  for (int l = 2; l <= cfg.len; ++l) {
    auto c = cos_comonad(l);
    r.append(summarize(check_comonad_laws(c, graphs, pol), c.name));
  }
  return r;
}

LawReport suite_kleisli_laws(const SuiteConfig& cfg) {
  LawReport r;
  auto pol = policy_of(cfg);
  auto plain = plain_family(cfg);
  auto pointed = pointed_family(cfg);
  const int k = cfg.k, l = cfg.len;
  auto run = [&](const KleisliLawSpec& law, const std::vector<Structure>& fam) {
    r.append(summarize(check_kleisli_law(law, fam, pol), law.name));
  };
  auto morph = [&](const KleisliLawSpec& law, const std::vector<Structure>& fam) {
    r.append(summarize(check_comonad_morphism(law, fam, pol), law.name));
  };
  run(kappa_reduct(k, cfg.signature), all_structures(with_unary(cfg.signature), cfg.size));
  auto cop = kappa_coproduct(ef_comonad(k), 2);
  run(cfg.mutate ? with_unrestricted_coproduct(cop) : cop, plain);
  run(kappa_coproduct(pebble_comonad(k, l), 2), plain);
  run(kappa_product(ef_comonad(k), 2), plain);
  run(kappa_product(pebble_comonad(k, l), 2), plain);
  if (cfg.signature.modal()) {
    run(kappa_product(modal_comonad(k), 2), pointed);
    run(kappa_merge(k, first_binary(cfg.signature)), pointed);
    if (l >= k + 1) morph(morph_modal_to_pebble2(k, l), pointed);
  }
  run(kappa_product(cos_comonad(l), 2), graph_classes(cfg.graph_vertices));
  if (l >= k) morph(morph_ef_to_pebble(k, l), plain);
  morph(morph_cos_to_pebble3(l, l), labeled_graph_family(cfg));
  return r;
}

LawReport suite_fvm_pe(const SuiteConfig& cfg) {
  LawReport r;
  r.header.push_back("oracle agreement: witness search vs game");
  auto plain = plain_family(cfg);
  auto pointed = pointed_family(cfg);
  for (int k = 1; k <= cfg.k; ++k) {
    auto e = ef_comonad(k);
    LawReport part;
    for (const auto& a : plain)
      for (const auto& b : plain) {
        bool w = search_pe_witness(e, a, b).has_value();
        bool g = decide_pe_game(k, a, b);
        part.add("pe-witness-vs-game", structure_id(a) + "=>" + structure_id(b), w == g,
                 std::string("witness=") + (w ? "yes" : "no"));
      }
    r.append(summarize(part, e.name));
    if (!cfg.signature.modal()) continue;
    auto m = modal_comonad(k);
    LawReport mpart;
    for (const auto& a : pointed)
      for (const auto& b : pointed) {
        bool w = search_pe_witness(m, a, b).has_value();
        bool g = decide_modal_sim(k, a, b);
        mpart.add("modal-witness-vs-simulation", structure_id(a) + "=>" + structure_id(b), w == g);
      }
    r.append(summarize(mpart, m.name));
  }
  return r;
}

LawReport suite_fvm_counting(const SuiteConfig& cfg) {
  LawReport r;
  auto fam = plain_family(cfg);
  auto e1 = ef_comonad(1);
  r.header.push_back("counting pipeline over " + e1.name);
  LawReport search;
  std::vector<CountingWitness> ws;
  for (const auto& a : fam)
    for (const auto& b : fam) {
      auto ab = search_kleisli_iso(e1, a, b);
      auto ba = search_kleisli_iso(e1, b, a);
      const std::string subject = structure_id(a) + "~" + structure_id(b);
      search.add("kleisli-iso-determinate", subject, ab.verdict != SearchVerdict::indeterminate);
      search.add("kleisli-iso-symmetric", subject,
                 (ab.verdict == SearchVerdict::found) == (ba.verdict == SearchVerdict::found));
      if (ab.witness) ws.push_back(*ab.witness);
    }
  r.append(summarize(search, e1.name));
  for (const auto& law : {kappa_coproduct(e1, 2), kappa_product(e1, 2)}) {
    LawReport part;
    for (const auto& w1 : ws)
      for (const auto& w2 : ws) {
        CountingWitness in[] = {w1, w2};
        const std::string subject = structure_id(w1.a()) + "&" + structure_id(w2.a());
        try {
          auto c = compose_counting_witness(law, in);
          part.add("compose-counting", subject, verify_kleisli_inverse(law.target, c.f, c.g));
        } catch (const Error& e) {
          part.add("compose-counting", subject, false, e.what());
        }
      }
    r.append(summarize(part, law.name));
  }
  return r;
}

// Every tuple drawn from `items`, in mixed-radix order.
template <class T, class F>
void each_tuple(const std::vector<T>& items, std::size_t n, F&& f) {
  if (items.empty()) return;
  std::vector<std::size_t> ix(n, 0);
  while (true) {
    std::vector<T> pick;
    for (auto i : ix) pick.push_back(items[i]);
    f(pick);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++ix[i] < items.size()) break;
      ix[i] = 0;
    }
    if (i == n) break;
  }
}

std::string ids(const std::vector<Coalgebra>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : "&") + structure_id(x.carrier);
  return s;
}

LawReport full_for_law(const KleisliLawSpec& law, const std::vector<Structure>& bases) {
  LawReport part;
  const auto& c = law.sources.at(0);
  auto fam = all_coalgebras(c, bases);
  std::vector<CoalgebraMorphism> embs, opens;
  for (const auto& x : fam)
    for (const auto& y : fam)
      for (auto& f : coalgebra_morphisms(x, y)) {
        if (is_embedding(f.map)) embs.push_back(f);
        if (is_open(f) && is_pathwise_embedding(f)) opens.push_back(f);
      }
  const std::size_t n = law.op.arity;
  auto guarded = [&](const std::string& name, const std::string& subject, auto&& body) {
    try {
      part.add(name, subject, body());
    } catch (const Error& e) {
      part.add(name, subject, false, e.what());
    }
  };
  each_tuple(embs, n, [&](const std::vector<CoalgebraMorphism>& fs) {
    std::string subject;
    for (const auto& f : fs) subject += (subject.empty() ? "" : "&") + structure_id(f.source.carrier) + "->" + structure_id(f.target.carrier);
    guarded("lift-preserves-embeddings", subject, [&] { return is_embedding(lift_morphism(law, fs).map); });
  });
  each_tuple(fam, n, [&](const std::vector<Coalgebra>& xs) {
    guarded("s2prime", ids(xs), [&] { return check_s2prime(law, xs).passed(); });
  });
  each_tuple(bases, n, [&](const std::vector<Structure>& bs) {
    std::string subject;
    for (const auto& b : bs) subject += (subject.empty() ? "" : "&") + structure_id(b);
    guarded("lifting-iso", subject, [&] { return lifting_iso(law, bs).has_value(); });
  });
  each_tuple(opens, n, [&](const std::vector<CoalgebraMorphism>& fs) {
    std::string subject;
    for (const auto& f : fs) subject += (subject.empty() ? "" : "&") + structure_id(f.source.carrier) + "->" + structure_id(f.target.carrier);
    guarded("lift-preserves-open-pathwise", subject, [&] {
      auto h = lift_morphism(law, fs);
      return is_open(h) && is_pathwise_embedding(h);
    });
  });
  part.append(check_surjective_path_image(c, fam));
  return part;
}

LawReport suite_fvm_full(const SuiteConfig& cfg) {
  LawReport r;
  std::vector<ComonadSpec> cs;
  for (int k = 1; k <= cfg.k; ++k) cs.push_back(ef_comonad(k));
  if (cfg.signature.modal()) cs.push_back(modal_comonad(cfg.k));
  const Signature wide = with_unary(cfg.signature);
  for (const auto& c : cs) {
    const bool pointed = c.kind == CategoryKind::pointed;
    auto fam = [&](const Signature& s) { return pointed ? all_pointed_structures(s, cfg.size) : all_structures(s, cfg.size); };
    std::vector<std::pair<KleisliLawSpec, Signature>> laws;
    if (!pointed) laws.push_back({kappa_coproduct(c, 2), cfg.signature});
    laws.push_back({kappa_product(c, 2), cfg.signature});
    laws.push_back({kappa_reduct(c, cfg.signature), wide});
    for (const auto& [law, sig] : laws) r.append(summarize(full_for_law(law, fam(sig)), law.name));
  }
  // Logical level: ⊎ preserves equality-free 2-round equivalence.
  auto plain = plain_family(cfg);
  std::vector<std::pair<std::size_t, std::size_t>> eq;
  for (std::size_t i = 0; i < plain.size(); ++i)
    for (std::size_t j = 0; j < plain.size(); ++j)
      if (decide_fo_noeq_equiv(2, plain[i], plain[j])) eq.emplace_back(i, j);
  LawReport fo;
  for (auto [a1, b1] : eq)
    for (auto [a2, b2] : eq) {
      bool ok = decide_fo_noeq_equiv(2, disjoint_union(plain[a1], plain[a2]), disjoint_union(plain[b1], plain[b2]));
      fo.add("fo2-coproduct", structure_id(plain[a1]) + "&" + structure_id(plain[a2]) + "~" +
                                  structure_id(plain[b1]) + "&" + structure_id(plain[b2]), ok);
    }
  r.append(summarize(fo, "coproduct"));
  return r;
}

LawReport suite_translations(const SuiteConfig& cfg) {
  LawReport r;
  auto plain = plain_family(cfg);
  auto fo2 = [](const Structure& a, const Structure& b) { return decide_fo_noeq_equiv(2, a, b); };
  auto fo2eq = [](const Structure& a, const Structure& b) { return decide_fo_eq_equiv(2, a, b); };
  auto sim = [k = cfg.k](const Structure& a, const Structure& b) { return decide_modal_sim(k, a, b); };
  auto square = [&](const std::string& tr, const OperationSpec& h, const OperationSpec& h2,
                    const std::vector<Structure>& fam, const RelationOracle& rel, const RelationOracle& ref) {
    std::vector<Translation> trs(h.arity + 1, make_translation(tr));
    r.append(summarize(check_translation_square(trs, h, h2, fam, rel, ref), tr + ":" + h.name));
  };
  square("eq", coproduct_op(2), coproduct_op(2), plain, fo2, fo2eq);
  square("con", coproduct_op(2), coproduct_op(2), plain, fo2, {});
  if (cfg.signature.modal()) {
    auto pointed = pointed_family(cfg);
    square("global", product_op(2, CategoryKind::pointed), product_op(2, CategoryKind::pointed), pointed, sim, {});
  }
  // Silent steps are dropped: the variant under which merge_S matches ∨.
  auto rooted = rooted_structures(Signature{{"S", 2}, {"R", 2}}, cfg.size - 1);
  square("weak:S+drop", merge_op("S"), vee_op(), rooted, {}, {});
  return r;
}

LawReport suite_spectra(const SuiteConfig& cfg) {
  LawReport r;
  auto poly = [](const Structure& g) {
    std::string s;
    for (auto c : char_poly(adjacency_matrix(g))) s += (s.empty() ? "" : ",") + std::to_string(c);
    return s;
  };
  auto k2 = graph(2, {{0, 1}});
  auto tri = graph(3, {{0, 1}, {1, 2}, {0, 2}});
  auto star = graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto c4k1 = graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  r.add("char-poly", structure_id(k2), poly(k2) == "1,0,-1", poly(k2));
  r.add("char-poly", structure_id(tri), poly(tri) == "1,0,-3,-2", poly(tri));
  r.add("cospectral", structure_id(star) + "~" + structure_id(c4k1), cospectral(star, c4k1), poly(star));
  r.add("not-isomorphic", structure_id(star) + "~" + structure_id(c4k1), !search_isomorphism(star, c4k1));
  LawReport inv;
  auto graphs = labeled_graph_family(cfg);
  for (const auto& g : graphs)
    for (const auto& h : graphs)
      if (g.size() == h.size() && search_isomorphism(g, h))
        inv.add("isomorphic-implies-cospectral", structure_id(g) + "~" + structure_id(h), cospectral(g, h));
  r.append(summarize(inv, "graphs"));
  auto law = morph_cos_to_pebble3(cfg.len, cfg.len);
  r.append(summarize(check_comonad_morphism(law, graphs, policy_of(cfg)), law.name));
  return r;
}

LawReport suite_counterexample(const SuiteConfig& cfg) {
  LawReport r;
  const int k = cfg.k;
  auto rooted = rooted_structures(Signature{{"R", 2}, {"P", 1}}, cfg.size);
  auto sim = [k](const Structure& a, const Structure& b) { return decide_modal_sim(k, a, b); };
  auto ce = find_fvm_counterexample(pointed_coproduct_op(), sim, rooted);
  const std::string subject = "pointed-coproduct/M" + std::to_string(k);
  if (!ce) {
    r.add("counterexample-found", subject, false, "none within bound");
    return r;
  }
  const auto m = modal_comonad(k);
  bool premises = true;
  for (std::size_t i = 0; i < ce->a.size(); ++i)
    premises = premises && sim(ce->a[i], ce->b[i]) && search_pe_witness(m, ce->a[i], ce->b[i]).has_value();
  r.add("counterexample-found", subject, true, structure_id(ce->ha) + "=/=>" + structure_id(ce->hb));
  r.add("counterexample-premises", subject, premises);
  r.add("counterexample-conclusion-fails", subject,
        !sim(ce->ha, ce->hb) && !search_pe_witness(m, ce->ha, ce->hb).has_value());
  return r;
}

}  // namespace

LawReport full_check(const KleisliLawSpec& law, std::span<const Structure> bases) {
  return full_for_law(law, std::vector<Structure>(bases.begin(), bases.end()));
}

LawReport run_one_suite(const std::string& name, const SuiteConfig& cfg) {
  LawReport r;
  if (name == "laws") r = suite_laws(cfg);
  else if (name == "kleisli-laws") r = suite_kleisli_laws(cfg);
  else if (name == "fvm-pe") r = suite_fvm_pe(cfg);
  else if (name == "fvm-counting") r = suite_fvm_counting(cfg);
  else if (name == "fvm-full") r = suite_fvm_full(cfg);
  else if (name == "translations") r = suite_translations(cfg);
  else if (name == "spectra") r = suite_spectra(cfg);
  else if (name == "counterexample") r = suite_counterexample(cfg);
  else throw DomainError("unknown suite: " + name);
  r.header.insert(r.header.begin(), "suite " + name);
  return r;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
  validate(cfg);
  SuiteResult out;
  if (cfg.suites.empty()) return out;
  std::string sig;
  for (const auto& [name, ar] : cfg.signature.symbols()) sig += (sig.empty() ? "" : ",") + name + "/" + std::to_string(ar);
  out.report = "# fvm suite seed=" + std::to_string(cfg.seed) + " signature=" + sig + " size=" +
               std::to_string(cfg.size) + " k=" + std::to_string(cfg.k) + " len=" + std::to_string(cfg.len) +
               " graphs=" + std::to_string(cfg.graph_vertices) + (cfg.mutate ? " mutate" : "") + "\n";
  bool ok = true;
  for (const auto& name : cfg.suites) {
    LawReport r = run_one_suite(name, cfg);
    ok = ok && r.passed();
    out.report += r.text();
    out.report += "# " + name + (r.passed() ? " PASS" : " FAIL") + " lines=" + std::to_string(r.lines.size()) +
                  " failures=" + std::to_string(r.failures()) + "\n";
  }
  out.exit_code = ok ? 0 : 1;
  return out;
}

}  // namespace fvm
