#include "fvm/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fvm/errors.hpp"
#include "fvm/game_comonads.hpp"

namespace fvm {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
    throw ParseError("syntax error at " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + msg);
  }
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  if (!j.is_object()) fail(where, "expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) fail(where, std::string("missing key \"") + k + "\"");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& [k, v] : j.items())
    if (!allowed.contains(k)) fail(where, "unknown key \"" + k + "\"");
}

std::string str_at(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Structure structure_from(const json& j, const std::string& base) {
  require_keys(j, base, {"signature", "universe", "relations"}, {"point"});
  std::map<std::string, int, std::less<>> sig;
  const auto& js = j["signature"];
  if (!js.is_object()) fail(base + "/signature", "expected an object");
  for (const auto& [name, ar] : js.items()) {
    const std::string where = base + "/signature/" + name;
    if (name.empty()) fail(where, "empty symbol name");
    if (!ar.is_number_integer() || ar.get<long long>() < 1) fail(where, "arity must be a positive integer");
    sig[name] = ar.get<int>();
  }
  const auto& ju = j["universe"];
  if (!ju.is_array()) fail(base + "/universe", "expected an array");
  std::vector<Elem> universe;
  std::set<Elem> seen;
  for (std::size_t i = 0; i < ju.size(); ++i) {
    const std::string where = base + "/universe/" + std::to_string(i);
    Elem x = str_at(ju[i], where);
    if (!seen.insert(x).second) fail(where, "duplicate element \"" + x + "\"");
    universe.push_back(std::move(x));
  }
  const auto& jr = j["relations"];
  if (!jr.is_object()) fail(base + "/relations", "expected an object");
  Structure::Relations rels;
  for (const auto& [name, ts] : jr.items()) {
    const std::string where = base + "/relations/" + name;
    auto it = sig.find(name);
    if (it == sig.end()) fail(where, "symbol not in the signature");
    if (!ts.is_array()) fail(where, "expected an array of tuples");
    auto& out = rels[name];
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string tw = where + "/" + std::to_string(i);
      if (!ts[i].is_array()) fail(tw, "expected a tuple");
      if (ts[i].size() != static_cast<std::size_t>(it->second))
        fail(tw, "tuple of length " + std::to_string(ts[i].size()) + ", arity " + std::to_string(it->second));
      Tuple t;
      for (std::size_t q = 0; q < ts[i].size(); ++q) {
        Elem x = str_at(ts[i][q], tw + "/" + std::to_string(q));
        if (!seen.contains(x)) fail(tw + "/" + std::to_string(q), "\"" + x + "\" not in the universe");
        t.push_back(std::move(x));
      }
      out.push_back(std::move(t));
    }
  }
  std::optional<Elem> point;
  if (j.contains("point")) {
    point = str_at(j["point"], base + "/point");
    if (!seen.contains(*point)) fail(base + "/point", "\"" + *point + "\" not in the universe");
  }
  try {
    return Structure(Signature(std::move(sig)), std::move(universe), rels, point);
  } catch (const Error& e) {
    fail(base, e.what());
  }
}

ojson structure_to(const Structure& a) {
  ojson j = ojson::object();
  ojson sig = ojson::object();
  for (const auto& [name, ar] : a.signature().symbols()) sig[name] = ar;
  j["signature"] = sig;
  j["universe"] = a.universe();
  ojson rels = ojson::object();
  for (const auto& [name, ar] : a.signature().symbols()) rels[name] = a.tuples_by_name(name);
  j["relations"] = rels;
  if (a.pointed()) j["point"] = *a.point();
  return j;
}

ojson map_to(const StructMap& f) {
  ojson j = ojson::object();
  for (Index i = 0; i < f.source().size(); ++i) j[f.source().universe()[i]] = f.at(i);
  return j;
}

StructMap map_from(const json& j, const std::string& where, const Structure& source, const Structure& target) {
  if (!j.is_object()) fail(where, "expected an object");
  std::map<Elem, Elem> assignment;
  for (const auto& [k, v] : j.items()) {
    if (!source.contains(k)) fail(where + "/" + k, "not an element of the source");
    std::string y = str_at(v, where + "/" + k);
    if (!target.contains(y)) fail(where + "/" + k, "\"" + y + "\" not an element of the target");
    assignment[k] = y;
  }
  try {
    return StructMap::from_pairs(source, target, assignment);
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

int to_int(std::string_view s, std::string_view whole) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
    throw DomainError("malformed name: " + std::string(whole));
  return std::stoi(std::string(s));
}

}  // namespace

Structure parse_structure(std::string_view text) { return structure_from(parse_json(text), ""); }

std::string print_structure(const Structure& a) { return structure_to(a).dump(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Structure read_structure_file(const std::string& path) {
  try {
    return parse_structure(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

ComonadSpec comonad_by_name(std::string_view name) {
  if (name.starts_with("Cos")) return cos_comonad(to_int(name.substr(3), name));
  if (name.starts_with("E")) return ef_comonad(to_int(name.substr(1), name));
  if (name.starts_with("M")) return modal_comonad(to_int(name.substr(1), name));
  if (name.starts_with("P")) {
    std::string_view rest = name.substr(1);
    auto kind = CategoryKind::plain;
    if (rest.ends_with("*")) {
      kind = CategoryKind::pointed;
      rest.remove_suffix(1);
    }
    auto comma = rest.find(',');
    if (comma == std::string_view::npos) throw DomainError("pebble comonad needs k,l: " + std::string(name));
    return pebble_comonad(to_int(rest.substr(0, comma), name), to_int(rest.substr(comma + 1), name), kind);
  }
  throw DomainError("unknown comonad: " + std::string(name));
}

KleisliLawSpec law_by_name(std::string_view name) {
  const std::string whole(name);
  bool mutant = false;
  if (name.ends_with("~mutant")) {
    mutant = true;
    name.remove_suffix(7);
  }
  auto split_m = [&](std::string_view s) {
    auto x = s.rfind('x');
    if (x == std::string_view::npos) throw DomainError("law needs an operand count: " + whole);
    return std::pair{comonad_by_name(s.substr(0, x)), static_cast<std::size_t>(to_int(s.substr(x + 1), whole))};
  };
  KleisliLawSpec law;
  if (name.starts_with("id:")) {
    law = identity_law(comonad_by_name(name.substr(3)));
  } else if (name.starts_with("kappa-reduct:")) {
    std::string_view rest = name.substr(13);
    Signature tau{{"E", 2}};
    if (auto colon = rest.find(':'); colon != std::string_view::npos) {
      std::map<std::string, int, std::less<>> syms;
      std::string_view list = rest.substr(colon + 1);
      while (!list.empty()) {
        auto comma = list.find(',');
        std::string_view item = list.substr(0, comma);
        auto slash = item.find('/');
        if (slash == std::string_view::npos) throw DomainError("reduct symbols are written R/n: " + whole);
        syms[std::string(item.substr(0, slash))] = to_int(item.substr(slash + 1), whole);
        list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
      }
      tau = Signature(std::move(syms));
      rest = rest.substr(0, colon);
    }
    law = kappa_reduct(comonad_by_name(rest), tau);
  } else if (name.starts_with("kappa-coproduct:")) {
    auto [c, m] = split_m(name.substr(16));
    law = kappa_coproduct(c, m);
  } else if (name.starts_with("kappa-product:")) {
    auto [c, m] = split_m(name.substr(14));
    law = kappa_product(c, m);
  } else if (name.starts_with("kappa-merge-")) {
    std::string_view rest = name.substr(12);
    auto colon = rest.find(":M");
    if (colon == std::string_view::npos) throw DomainError("merge law is kappa-merge-R:Mk: " + whole);
    law = kappa_merge(to_int(rest.substr(colon + 2), whole), std::string(rest.substr(0, colon)));
  } else if (auto arrow = name.find("=>"); arrow != std::string_view::npos) {
    std::string_view from = name.substr(0, arrow), to = name.substr(arrow + 2);
    comonad_by_name(to);  // validates the target name
    auto tail = [&](std::string_view p) {
      auto comma = p.find(',');
      if (comma == std::string_view::npos) throw DomainError("bad target: " + whole);
      auto l = p.substr(comma + 1);
      if (l.ends_with("*")) l.remove_suffix(1);
      return std::pair{to_int(p.substr(1, comma - 1), whole), to_int(l, whole)};
    };
    auto [pk, pl] = tail(to);
    if (from.starts_with("Cos")) {
      if (pk != 3) throw DomainError("Cos maps into P3: " + whole);
      law = morph_cos_to_pebble3(to_int(from.substr(3), whole), pl);
    } else if (from.starts_with("E")) {
      int k = to_int(from.substr(1), whole);
      if (pk != k) throw DomainError("E_k maps into P_k: " + whole);
      law = morph_ef_to_pebble(k, pl);
    } else if (from.starts_with("M")) {
      if (pk != 2 || !to.ends_with("*")) throw DomainError("M_k maps into pointed P2: " + whole);
      law = morph_modal_to_pebble2(to_int(from.substr(1), whole), pl);
    } else {
      throw DomainError("unknown comonad morphism: " + whole);
    }
  } else {
    throw DomainError("unknown law: " + whole);
  }
  if (mutant) {
    if (!law.name.starts_with("kappa-coproduct:")) throw DomainError("only coproduct laws have a mutant: " + whole);
    law = with_unrestricted_coproduct(law);
  }
  return law;
}

std::string print_witness(const PEWitness& w) {
  ojson j = ojson::object();
  j["type"] = "pe";
  j["comonad"] = w.comonad.name;
  j["a"] = structure_to(w.source);
  j["b"] = structure_to(w.target());
  j["f"] = map_to(w.f);
  return j.dump();
}

std::string print_witness(const CountingWitness& w) {
  ojson j = ojson::object();
  j["type"] = "counting";
  j["comonad"] = w.comonad.name;
  j["a"] = structure_to(w.a());
  j["b"] = structure_to(w.b());
  j["f"] = map_to(w.f);
  j["g"] = map_to(w.g);
  return j.dump();
}

std::string witness_type(std::string_view text) {
  json j = parse_json(text);
  if (!j.is_object() || !j.contains("type")) fail("", "missing key \"type\"");
  return str_at(j["type"], "/type");
}

PEWitness parse_pe_witness(std::string_view text) {
  json j = parse_json(text);
  require_keys(j, "", {"type", "comonad", "a", "b", "f"}, {});
  if (str_at(j["type"], "/type") != "pe") fail("/type", "expected \"pe\"");
  ComonadSpec c = comonad_by_name(str_at(j["comonad"], "/comonad"));
  Structure a = structure_from(j["a"], "/a");
  Structure b = structure_from(j["b"], "/b");
  Structure ca = apply(c, a);
  return PEWitness{c, a, map_from(j["f"], "/f", ca, b)};
}

CountingWitness parse_counting_witness(std::string_view text) {
  json j = parse_json(text);
  require_keys(j, "", {"type", "comonad", "a", "b", "f", "g"}, {});
  if (str_at(j["type"], "/type") != "counting") fail("/type", "expected \"counting\"");
  ComonadSpec c = comonad_by_name(str_at(j["comonad"], "/comonad"));
  Structure a = structure_from(j["a"], "/a");
  Structure b = structure_from(j["b"], "/b");
  Structure ca = apply(c, a), cb = apply(c, b);
  return CountingWitness{c, map_from(j["f"], "/f", ca, b), map_from(j["g"], "/g", cb, a)};
}

}  // namespace fvm
