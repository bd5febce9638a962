#include "fvm/operations.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "fvm/errors.hpp"

namespace fvm {
namespace {

void require_same_signature(std::span<const Structure> family, const char* what) {
  for (const auto& s : family) {
    if (!(s.signature() == family.front().signature())) {
      throw SignatureMismatch(std::string(what) + ": operands have different signatures");
    }
  }
}

// Assembles a structure from named tuples; cheaper than going through the
// public constructor when the universe is built incrementally.
Structure assemble(const Signature& sig, std::vector<Elem> universe, const Structure::Relations& rels,
                   std::optional<Elem> point) {
  return Structure(sig, std::move(universe), rels, std::move(point));
}

}  // namespace

Structure reduct(const Structure& a, const Signature& tau) {
  if (!tau.subset_of(a.signature())) throw SignatureMismatch("reduct: target signature is not a subset");
  std::map<std::string, std::vector<IndexTuple>, std::less<>> rels;
  for (const auto& [name, ar] : tau.symbols()) rels[name] = a.tuples(name);
  return Structure::from_indices(tau, a.universe(), std::move(rels), a.point());
}

Structure disjoint_union(std::span<const Structure> family) {
  if (family.empty()) return Structure();
  require_same_signature(family, "disjoint_union");
  std::vector<Elem> universe;
  Structure::Relations rels;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& s = family[i];
    if (s.pointed()) throw DomainError("disjoint_union takes plain structures");
    for (const auto& x : s.universe()) universe.push_back(term::tagged(i + 1, x));
    for (const auto& [name, ar] : s.signature().symbols()) {
      for (const auto& t : s.tuples(name)) {
        Tuple u;
        for (Index j : t) u.push_back(term::tagged(i + 1, s.universe()[j]));
        rels[name].push_back(std::move(u));
      }
    }
  }
  return assemble(family.front().signature(), std::move(universe), rels, std::nullopt);
}

Structure disjoint_union(const Structure& a, const Structure& b) {
  const Structure fam[] = {a, b};
  return disjoint_union(fam);
}

Structure pointed_coproduct(const Structure& a, const Structure& b) {
  const Structure fam[] = {a, b};
  require_same_signature(fam, "pointed_coproduct");
  if (!a.pointed() || !b.pointed()) throw DomainError("pointed_coproduct needs pointed operands");
  std::vector<Elem> universe{kStar};
  Structure::Relations rels;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& s = fam[i];
    auto name_of = [&](Index j) {
      return j == s.point_index() ? kStar : term::tagged(i + 1, s.universe()[j]);
    };
    for (Index j = 0; j < s.size(); ++j) {
      if (j != s.point_index()) universe.push_back(name_of(j));
    }
    for (const auto& [name, ar] : s.signature().symbols()) {
      for (const auto& t : s.tuples(name)) {
        Tuple u;
        for (Index j : t) u.push_back(name_of(j));
        rels[name].push_back(std::move(u));
      }
    }
  }
  return assemble(a.signature(), std::move(universe), rels, kStar);
}

Structure product(std::span<const Structure> family) {
  if (family.empty()) throw DomainError("product of an empty family");
  require_same_signature(family, "product");
  const std::size_t n = family.size();
  bool pointed = family.front().pointed();
  for (const auto& s : family) {
    if (s.pointed() != pointed) throw DomainError("product: mixed pointed and plain operands");
  }
  // Elements in mixed-radix order, then sorted by name.
  std::size_t total = 1;
  for (const auto& s : family) total *= s.size();
  std::vector<std::pair<Elem, std::size_t>> named;
  named.reserve(total);
  std::vector<std::size_t> digits(n, 0);
  std::vector<std::string> parts(n);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = n; i-- > 0;) {
      digits[i] = c % family[i].size();
      c /= family[i].size();
      parts[i] = family[i].universe()[digits[i]];
    }
    named.emplace_back(term::group('<', parts), code);
  }
  std::sort(named.begin(), named.end());
  std::vector<Index> rank(total);
  std::vector<Elem> universe;
  universe.reserve(total);
  for (std::size_t r = 0; r < named.size(); ++r) {
    rank[named[r].second] = static_cast<Index>(r);
    universe.push_back(named[r].first);
  }
  auto code_of = [&](std::span<const Index> ds) {
    std::size_t code = 0;
    for (std::size_t i = 0; i < n; ++i) code = code * family[i].size() + ds[i];
    return code;
  };
  std::map<std::string, std::vector<IndexTuple>, std::less<>> rels;
  for (const auto& [name, ar] : family.front().signature().symbols()) {
    auto& out = rels[name];
    // Cartesian product of the factors' tuple lists.
    std::vector<std::size_t> pick(n, 0);
    bool any_empty = std::any_of(family.begin(), family.end(),
                                 [&](const Structure& s) { return s.tuples(name).empty(); });
    if (any_empty) continue;
    std::vector<Index> ds(n);
    while (true) {
      IndexTuple t(static_cast<std::size_t>(ar));
      for (int pos = 0; pos < ar; ++pos) {
        for (std::size_t i = 0; i < n; ++i) ds[i] = family[i].tuples(name)[pick[i]][pos];
        t[pos] = rank[code_of(ds)];
      }
      out.push_back(std::move(t));
      std::size_t i = n;
      while (i-- > 0) {
        if (++pick[i] < family[i].tuples(name).size()) break;
        pick[i] = 0;
      }
      if (i == SIZE_MAX) break;
    }
  }
  std::optional<Elem> point;
  if (pointed) {
    std::vector<Index> ds;
    for (const auto& s : family) ds.push_back(s.point_index());
    point = universe[rank[code_of(ds)]];
  }
  return Structure::from_indices(family.front().signature(), std::move(universe), std::move(rels), point);
}

Structure product(const Structure& a, const Structure& b) {
  const Structure fam[] = {a, b};
  return product(fam);
}

namespace {

// {*} ⊎ A ⊎ B with the operands' own relations; the caller adds ⋆'s edges.
std::pair<std::vector<Elem>, Structure::Relations> star_base(const Structure& a, const Structure& b) {
  std::vector<Elem> universe{kStar};
  Structure::Relations rels;
  const Structure* fam[] = {&a, &b};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& s = *fam[i];
    for (const auto& x : s.universe()) universe.push_back(term::tagged(i + 1, x));
    for (const auto& [name, ar] : s.signature().symbols()) {
      for (const auto& t : s.tuples(name)) {
        Tuple u;
        for (Index j : t) u.push_back(term::tagged(i + 1, s.universe()[j]));
        rels[name].push_back(std::move(u));
      }
    }
  }
  return {std::move(universe), std::move(rels)};
}

void require_modal_pair(const Structure& a, const Structure& b, const char* what) {
  if (!(a.signature() == b.signature())) throw SignatureMismatch(std::string(what) + ": signatures differ");
  if (!a.signature().modal()) throw DomainError(std::string(what) + ": signature is not modal");
  if (!a.pointed() || !b.pointed()) throw DomainError(std::string(what) + ": operands must be pointed");
}

}  // namespace

Structure merge(const Structure& a, const Structure& b, const std::string& r) {
  require_modal_pair(a, b, "merge");
  if (!a.signature().contains(r) || a.signature().arity(r) != 2) {
    throw DomainError("merge: symbol " + r + " is not binary in the signature");
  }
  auto [universe, rels] = star_base(a, b);
  rels[r].push_back({kStar, term::tagged(1, *a.point())});
  rels[r].push_back({kStar, term::tagged(2, *b.point())});
  return assemble(a.signature(), std::move(universe), rels, kStar);
}

Structure vee(const Structure& a, const Structure& b) {
  require_modal_pair(a, b, "vee");
  auto [universe, rels] = star_base(a, b);
  const Structure* fam[] = {&a, &b};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& s = *fam[i];
    Index p = s.point_index();
    for (const auto& [name, ar] : s.signature().symbols()) {
      if (ar != 2) continue;
      for (const auto& t : s.tuples(name)) {
        if (t[0] == p) rels[name].push_back({kStar, term::tagged(i + 1, s.universe()[t[1]])});
      }
    }
  }
  return assemble(a.signature(), std::move(universe), rels, kStar);
}

Factorisation factor_morphism(const StructMap& f) {
  if (!is_hom(f)) throw DomainError("factor_morphism: map is not a homomorphism");
  std::vector<Elem> img = f.image();
  auto image = std::make_shared<const Structure>(induced(f.target(), img));
  StructMap q(f.source_ptr(), image, f.image());
  StructMap e(image, f.target_ptr(), image->universe());
  return {std::move(q), std::move(e)};
}

std::set<std::pair<Elem, Elem>> gaifman_closure(const Structure& a) {
  std::vector<Index> parent(a.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Index(Index)> find = [&](Index x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& [name, ar] : a.signature().symbols()) {
    for (const auto& t : a.tuples(name)) {
      for (Index j : t) parent[find(j)] = find(t[0]);
    }
  }
  std::set<std::pair<Elem, Elem>> out;
  for (Index x = 0; x < a.size(); ++x) {
    for (Index y = 0; y < a.size(); ++y) {
      if (find(x) == find(y)) out.emplace(a.universe()[x], a.universe()[y]);
    }
  }
  return out;
}

// ---- search ----------------------------------------------------------------

namespace {

struct Constraint {
  const std::string* symbol;
  const IndexTuple* tuple;
};

// Backtracking over the variables in `vars` (a union of Gaifman components
// of the source).  Values of other variables are never read.
class HomSearch {
 public:
  HomSearch(const Structure& a, const Structure& b, const SearchOptions& opts,
            const std::vector<std::optional<Index>>& fixed, std::vector<Index> vars, std::uint64_t seed_salt)
      : a_(a), b_(b), opts_(opts), fixed_(fixed), assign_(a.size()), used_(b.size(), 0) {
    if (opts.seed) {
      std::uint64_t z = *opts.seed ^ (seed_salt * 0x9e3779b97f4a7c15ULL);
      rng_.seed(static_cast<std::uint32_t>((z ^ (z >> 32)) % 2147483646u) + 1);
    }
    order_variables(std::move(vars));
  }

  // Partial maps (only `vars` meaningful) in search order.
  void run(std::size_t max_results, const std::function<bool(std::span<const std::optional<Index>>)>& visit) {
    visit_ = &visit;
    max_ = max_results;
    descend(0);
  }

 private:
  void order_variables(std::vector<Index> vars) {
    const std::size_t n = a_.size();
    std::vector<char> member(n, 0);
    for (Index v : vars) member[v] = 1;
    std::vector<std::vector<const IndexTuple*>> touching(n);
    for (const auto& [name, ar] : a_.signature().symbols()) {
      for (const auto& t : a_.tuples(name)) {
        if (!member[t[0]]) continue;
        for (Index v : t) {
          if (touching[v].empty() || touching[v].back() != &t) touching[v].push_back(&t);
        }
      }
    }
    std::vector<char> placed(n, 0);
    std::vector<int> links(n, 0);
    auto place = [&](Index v) {
      placed[v] = 1;
      order_.push_back(v);
      for (const auto* t : touching[v]) for (Index u : *t) ++links[u];
    };
    for (Index v : vars) if (fixed_[v]) place(v);
    while (order_.size() < vars.size()) {
      Index best = 0;
      bool found = false;
      for (Index v : vars) {
        if (placed[v]) continue;
        if (!found || links[v] > links[best] ||
            (links[v] == links[best] && touching[v].size() > touching[best].size())) {
          best = v;
          found = true;
        }
      }
      place(best);
    }
    std::vector<Index> pos(n, 0);
    for (Index i = 0; i < order_.size(); ++i) pos[order_[i]] = i;
    checks_.resize(order_.size());
    for (const auto& [name, ar] : a_.signature().symbols()) {
      for (const auto& t : a_.tuples(name)) {
        if (!member[t[0]]) continue;
        Index last = 0;
        for (Index v : t) last = std::max(last, pos[v]);
        checks_[last].push_back({&name, &t});
      }
    }
  }

  bool consistent(std::size_t depth) {
    for (const auto& c : checks_[depth]) {
      scratch_.clear();
      for (Index v : *c.tuple) scratch_.push_back(*assign_[v]);
      if (!b_.holds(*c.symbol, std::span<const Index>(scratch_))) return false;
    }
    return true;
  }

  void descend(std::size_t depth) {
    if (stop_) return;
    if (depth == order_.size()) {
      if (!(*visit_)(assign_) || ++count_ >= max_) stop_ = true;
      return;
    }
    Index var = order_[depth];
    std::vector<Index> values;
    if (fixed_[var]) {
      values.push_back(*fixed_[var]);
    } else {
      values.resize(b_.size());
      std::iota(values.begin(), values.end(), 0);
      if (opts_.seed) std::shuffle(values.begin(), values.end(), rng_);
    }
    for (Index val : values) {
      if (opts_.injective && used_[val]) continue;
      assign_[var] = val;
      used_[val] = 1;
      bool ok = consistent(depth) && (!opts_.accept || opts_.accept(var, assign_));
      if (ok) descend(depth + 1);
      used_[val] = 0;
      assign_[var].reset();
      if (stop_) return;
    }
  }

  const Structure& a_;
  const Structure& b_;
  const SearchOptions& opts_;
  const std::vector<std::optional<Index>>& fixed_;
  std::vector<Index> order_;
  std::vector<std::vector<Constraint>> checks_;
  std::vector<std::optional<Index>> assign_;
  std::vector<char> used_;
  IndexTuple scratch_;
  // Cheap to seed; one search may create many of these.
  std::minstd_rand rng_;
  const std::function<bool(std::span<const std::optional<Index>>)>* visit_ = nullptr;
  std::size_t max_ = SIZE_MAX;
  std::size_t count_ = 0;
  bool stop_ = false;
};

std::vector<std::vector<Index>> gaifman_components(const Structure& a) {
  std::vector<Index> parent(a.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Index(Index)> find = [&](Index x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& [name, ar] : a.signature().symbols()) {
    for (const auto& t : a.tuples(name)) {
      for (Index j : t) parent[find(j)] = find(t[0]);
    }
  }
  std::map<Index, std::vector<Index>> groups;
  for (Index x = 0; x < a.size(); ++x) groups[find(x)].push_back(x);
  std::vector<std::vector<Index>> out;
  for (auto& [_, g] : groups) out.push_back(std::move(g));
  return out;
}

}  // namespace

std::size_t enumerate_homomorphisms(const Structure& a, const Structure& b, const SearchOptions& opts,
                                    const std::function<bool(std::span<const Index>)>& visit) {
  if (!(a.signature() == b.signature())) throw SignatureMismatch("hom search: signatures differ");
  std::vector<std::optional<Index>> fixed(a.size());
  if (a.pointed() && b.pointed()) fixed[a.point_index()] = b.point_index();
  for (std::size_t i = 0; i < opts.preassigned.size() && i < a.size(); ++i) {
    if (!opts.preassigned[i]) continue;
    if (fixed[i] && *fixed[i] != *opts.preassigned[i]) return 0;
    fixed[i] = opts.preassigned[i];
  }
  if (a.size() == 0) {
    visit(std::span<const Index>());
    return 1;
  }
  if (b.size() == 0) return 0;

  std::vector<Index> full(a.size());
  std::size_t count = 0;

  // Injectivity and global acceptance tests couple the components, so those
  // searches run monolithically.
  if (opts.injective || opts.accept) {
    std::vector<Index> all(a.size());
    std::iota(all.begin(), all.end(), 0);
    HomSearch s(a, b, opts, fixed, all, 0);
    s.run(opts.max_results, [&](std::span<const std::optional<Index>> m) {
      for (Index i = 0; i < a.size(); ++i) full[i] = *m[i];
      ++count;
      return visit(full);
    });
    return count;
  }

  // Homs out of a disjoint union are tuples of homs out of the components.
  auto comps = gaifman_components(a);
  std::vector<std::vector<std::vector<Index>>> lists(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    HomSearch s(a, b, opts, fixed, comps[c], c + 1);
    s.run(opts.max_results, [&](std::span<const std::optional<Index>> m) {
      std::vector<Index> vals;
      vals.reserve(comps[c].size());
      for (Index v : comps[c]) vals.push_back(*m[v]);
      lists[c].push_back(std::move(vals));
      return true;
    });
    if (lists[c].empty()) return 0;
  }
  std::vector<std::size_t> pick(comps.size(), 0);
  while (count < opts.max_results) {
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto& vals = lists[c][pick[c]];
      for (std::size_t j = 0; j < comps[c].size(); ++j) full[comps[c][j]] = vals[j];
    }
    ++count;
    if (!visit(full)) break;
    std::size_t c = comps.size();
    while (c-- > 0) {
      if (++pick[c] < lists[c].size()) break;
      pick[c] = 0;
    }
    if (c == SIZE_MAX) break;
  }
  return count;
}

StructMap map_from_indices(const Structure& a, const Structure& b, std::span<const Index> img) {
  std::vector<Elem> image;
  image.reserve(img.size());
  for (Index j : img) image.push_back(b.universe()[j]);
  return StructMap(a, b, std::move(image));
}

std::optional<std::vector<Index>> first_homomorphism(const Structure& a, const Structure& b,
                                                     std::optional<std::uint64_t> seed) {
  SearchOptions opts;
  opts.seed = seed;
  opts.max_results = 1;
  std::optional<std::vector<Index>> found;
  enumerate_homomorphisms(a, b, opts, [&](std::span<const Index> img) {
    found.emplace(img.begin(), img.end());
    return false;
  });
  return found;
}

std::optional<StructMap> search_homomorphism(const Structure& a, const Structure& b) {
  auto found = first_homomorphism(a, b);
  if (!found) return std::nullopt;
  return map_from_indices(a, b, *found);
}

std::optional<StructMap> search_isomorphism(const Structure& a, const Structure& b) {
  if (!(a.signature() == b.signature()) || a.size() != b.size() || a.pointed() != b.pointed()) {
    return std::nullopt;
  }
  for (const auto& [name, ar] : a.signature().symbols()) {
    if (a.tuples(name).size() != b.tuples(name).size()) return std::nullopt;
  }
  // An injective hom between equal-size structures with equal tuple counts
  // maps tuples bijectively, hence reflects them.
  SearchOptions opts;
  opts.injective = true;
  opts.max_results = 1;
  std::optional<std::vector<Index>> found;
  enumerate_homomorphisms(a, b, opts, [&](std::span<const Index> img) {
    found.emplace(img.begin(), img.end());
    return false;
  });
  if (!found) return std::nullopt;
  return map_from_indices(a, b, *found);
}

std::vector<std::vector<Index>> all_homomorphisms(const Structure& a, const Structure& b, std::size_t limit) {
  std::vector<std::vector<Index>> out;
  if (limit == 0) return out;
  SearchOptions opts;
  opts.max_results = limit;
  enumerate_homomorphisms(a, b, opts, [&](std::span<const Index> img) {
    out.emplace_back(img.begin(), img.end());
    return true;
  });
  return out;
}

}  // namespace fvm
