#include "fvm/translations.hpp"

#include "fvm/errors.hpp"
#include "fvm/parallel.hpp"

namespace fvm {
namespace {

void require_fresh(const Structure& a, const std::string& sym) {
  if (a.signature().contains(sym)) throw DomainError("translation: symbol " + sym + " already in the signature");
}

Structure extend(const Structure& a, const std::vector<std::pair<std::string, std::vector<Tuple>>>& extra) {
  Signature sig = a.signature();
  Structure::Relations rels;
  for (const auto& [name, ar] : a.signature().symbols()) rels[name] = a.tuples_by_name(name);
  for (const auto& [name, ts] : extra) {
    sig = sig.with(name, 2);
    rels[name] = ts;
  }
  return Structure(sig, a.universe(), rels, a.point());
}

std::vector<Tuple> diagonal(const Structure& a) {
  std::vector<Tuple> out;
  for (const auto& x : a.universe()) out.push_back({x, x});
  return out;
}

}  // namespace

Structure tr_equality(const Structure& a) {
  require_fresh(a, "I");
  return extend(a, {{"I", diagonal(a)}});
}

Structure tr_connectivity(const Structure& a) {
  require_fresh(a, "I");
  require_fresh(a, "Con");
  std::vector<Tuple> con;
  for (const auto& [x, y] : gaifman_closure(a)) con.push_back({x, y});
  return extend(a, {{"I", diagonal(a)}, {"Con", con}});
}

Structure tr_global(const Structure& a) {
  require_fresh(a, "G");
  std::vector<Tuple> all;
  for (const auto& x : a.universe())
    for (const auto& y : a.universe()) all.push_back({x, y});
  return extend(a, {{"G", all}});
}

Structure tr_weak(const Structure& a, const std::string& s, const WeakOptions& opts) {
  if (!a.signature().modal()) throw DomainError("tr_weak: signature is not modal");
  if (!a.signature().contains(s) || a.signature().arity(s) != 2) throw DomainError("tr_weak: " + s + " is not binary");
  const std::size_t n = a.size();
  // reach[x][y]: y is reachable from x by silent steps (reflexive).
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t x = 0; x < n; ++x) reach[x][x] = 1;
  for (const auto& t : a.tuples(s)) reach[t[0]][t[1]] = 1;
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t x = 0; x < n; ++x)
      if (reach[x][m])
        for (std::size_t y = 0; y < n; ++y)
          if (reach[m][y]) reach[x][y] = 1;

  const auto& u = a.universe();
  Structure::Relations rels;
  for (const auto& [name, ar] : a.signature().symbols()) {
    auto& out = rels[name];
    if (ar == 1) {
      for (std::size_t x = 0; x < n; ++x) {
        bool hit = false;
        for (std::size_t y = 0; y < n && !hit; ++y) {
          if (!(opts.close_unary ? reach[x][y] : x == y)) continue;
          Index yi = static_cast<Index>(y);
          hit = a.holds(name, std::span<const Index>(&yi, 1));
        }
        if (hit) out.push_back({u[x]});
      }
      continue;
    }
    std::vector<std::vector<char>> step(n, std::vector<char>(n, 0));
    if (name == s) {
      switch (opts.step) {
        case WeakStep::drop:
          break;
        case WeakStep::star:
          step = reach;
          break;
        case WeakStep::plus:
          for (const auto& t : a.tuples(s))
            for (std::size_t x = 0; x < n; ++x)
              if (reach[x][t[0]]) step[x][t[1]] = 1;
          break;
      }
    } else {
      for (const auto& t : a.tuples(name))
        for (std::size_t x = 0; x < n; ++x)
          if (reach[x][t[0]])
            for (std::size_t y = 0; y < n; ++y)
              if (reach[t[1]][y]) step[x][y] = 1;
    }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (step[x][y]) out.push_back({u[x], u[y]});
  }
  return Structure(a.signature(), u, rels, a.point());
}

Translation make_translation(std::string_view spec) {
  std::string name(spec);
  if (spec == "eq") return {name, tr_equality};
  if (spec == "con") return {name, tr_connectivity};
  if (spec == "global") return {name, tr_global};
  if (spec.starts_with("weak:")) {
    std::string_view rest = spec.substr(5);
    WeakOptions opts;
    auto plus = rest.find('+');
    std::string s(rest.substr(0, plus));
    while (plus != std::string_view::npos) {
      auto next = rest.find('+', plus + 1);
      auto flag = rest.substr(plus + 1, next == std::string_view::npos ? std::string_view::npos : next - plus - 1);
      if (flag == "star") opts.step = WeakStep::star;
      else if (flag == "drop") opts.step = WeakStep::drop;
      else if (flag == "plus") opts.step = WeakStep::plus;
      else if (flag == "unary") opts.close_unary = true;
      else throw DomainError("unknown tr_weak flag: " + std::string(flag));
      plus = next;
    }
    if (s.empty()) throw DomainError("tr_weak needs a symbol: weak:S");
    return {name, [s, opts](const Structure& a) { return tr_weak(a, s, opts); }};
  }
  throw DomainError("unknown translation: " + name);
}

LawReport check_translation_square(std::span<const Translation> trs, const OperationSpec& h, const OperationSpec& h2,
                                   std::span<const Structure> family, const RelationOracle& related,
                                   const RelationOracle& reference) {
  const std::size_t n = h.arity;
  if (trs.size() != n + 1) throw DomainError("translation square needs " + std::to_string(n + 1) + " translations");
  if (h2.arity != n) throw DomainError("translation square: operations of different arity");
  LawReport r;
  std::string names;
  for (const auto& t : trs) names += (names.empty() ? "" : ",") + t.name;
  r.header.push_back("translation-square " + h.name + " vs " + h2.name + " tr=" + names +
                     " family=" + std::to_string(family.size()));

  const std::size_t m = family.size();
  std::vector<std::vector<Structure>> trans(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& a : family) trans[i].push_back(trs[i].apply(a));

  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= m;
  auto digits = [&](std::size_t t) {
    std::vector<std::size_t> ix(n);
    for (std::size_t i = 0; i < n; ++i, t /= m) ix[i] = t % m;
    return ix;
  };

  struct Row {
    LawLine line;
    Structure ha, lhs, rhs;
    bool ok = false;
  };
  std::vector<Row> rows(m == 0 ? 0 : count);
  parallel_for(rows.size(), [&](std::size_t t) {
    auto ix = digits(t);
    std::vector<Structure> args, targs;
    std::string subject;
    for (std::size_t i = 0; i < n; ++i) {
      args.push_back(family[ix[i]]);
      targs.push_back(trans[i][ix[i]]);
      subject += (i ? "&" : "") + structure_id(family[ix[i]]);
    }
    Row& row = rows[t];
    row.line = {"square", subject, false, {}};
    try {
      row.ha = apply_op(h, args);
      row.lhs = apply_op(h2, targs);
      row.rhs = trs[n].apply(row.ha);
      if (!(row.lhs.signature() == row.rhs.signature())) {
        row.line.detail = "signatures differ";
      } else if (row.lhs.size() != row.rhs.size()) {
        row.line.detail = "sizes " + std::to_string(row.lhs.size()) + " vs " + std::to_string(row.rhs.size());
      } else if (!search_isomorphism(row.lhs, row.rhs)) {
        row.line.detail = "no isomorphism";
      } else {
        row.line.pass = row.ok = true;
      }
    } catch (const Error& e) {
      row.line.detail = e.what();
    }
  });
  for (const auto& row : rows) r.lines.push_back(row.line);
  if (!related) return r;

  // Componentwise premises, slot by slot.
  std::vector<std::vector<char>> rel(n, std::vector<char>(m * m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) rel[i][a * m + b] = related(trans[i][a], trans[i][b]);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    auto is = digits(s);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      auto it = digits(t);
      bool all = true;
      for (std::size_t i = 0; i < n && all; ++i) all = rel[i][is[i] * m + it[i]];
      if (all && rows[s].ok && rows[t].ok) pairs.emplace_back(s, t);
    }
  }
  std::vector<std::vector<LawLine>> out(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto& a = rows[pairs[p].first];
    const auto& b = rows[pairs[p].second];
    const std::string subject = a.line.subject + "~" + b.line.subject;
    bool image = related(a.lhs, b.lhs);
    bool transported = related(a.rhs, b.rhs);
    out[p].push_back({"fvm-image", subject, image, {}});
    out[p].push_back({"fvm-transport", subject, transported, {}});
    if (reference) {
      bool direct = reference(a.ha, b.ha);
      out[p].push_back({"fvm-reference", subject, direct == transported,
                        direct == transported ? "" : std::string("reference says ") + (direct ? "true" : "false")});
    }
  });
  for (auto& ls : out)
    for (auto& l : ls) r.lines.push_back(std::move(l));
  return r;
}

}  // namespace fvm
