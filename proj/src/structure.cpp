#include "fvm/structure.hpp"

#include <algorithm>
#include <set>

#include "fvm/errors.hpp"

namespace fvm {

// ---- Signature -------------------------------------------------------------

Signature::Signature(std::initializer_list<std::pair<const std::string, int>> symbols)
    : Signature(std::map<std::string, int, std::less<>>(symbols)) {}

Signature::Signature(std::map<std::string, int, std::less<>> symbols) : symbols_(std::move(symbols)) {
  for (const auto& [name, ar] : symbols_) {
    if (name.empty()) throw DomainError("empty relation symbol name");
    if (ar < 1) throw DomainError("symbol " + name + " has non-positive arity");
  }
}

int Signature::arity(std::string_view name) const {
  auto it = symbols_.find(name);
  if (it == symbols_.end()) throw SignatureMismatch("unknown symbol " + std::string(name));
  return it->second;
}

bool Signature::modal() const {
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [](const auto& s) { return s.second == 1 || s.second == 2; });
}

bool Signature::subset_of(const Signature& other) const {
  for (const auto& [name, ar] : symbols_) {
    auto it = other.symbols_.find(name);
    if (it == other.symbols_.end() || it->second != ar) return false;
  }
  return true;
}

Signature Signature::with(const std::string& name, int ar) const {
  if (contains(name)) throw SignatureMismatch("symbol " + name + " already present");
  auto s = symbols_;
  s.emplace(name, ar);
  return Signature(std::move(s));
}

// ---- Structure -------------------------------------------------------------

Structure::Structure(Signature sig, std::vector<Elem> universe, const Relations& relations,
                     std::optional<Elem> point)
    : sig_(std::move(sig)), universe_(std::move(universe)), point_(std::move(point)) {
  std::sort(universe_.begin(), universe_.end());
  if (std::adjacent_find(universe_.begin(), universe_.end()) != universe_.end()) {
    throw DomainError("duplicate element in universe");
  }
  for (const auto& x : universe_) {
    if (x.empty()) throw DomainError("empty element identifier");
  }
  for (const auto& [name, ar] : sig_.symbols()) rels_[name];
  for (const auto& [name, ts] : relations) {
    if (!sig_.contains(name)) throw SignatureMismatch("relation " + name + " not in signature");
    const auto ar = static_cast<std::size_t>(sig_.arity(name));
    auto& out = rels_[name];
    out.reserve(ts.size());
    for (const auto& t : ts) {
      if (t.size() != ar) {
        throw DomainError("tuple of length " + std::to_string(t.size()) + " for symbol " + name +
                          " of arity " + std::to_string(ar));
      }
      IndexTuple it;
      it.reserve(ar);
      for (const auto& x : t) {
        auto i = index_of(x);
        if (!i) throw DomainError("tuple entry '" + x + "' of " + name + " not in universe");
        it.push_back(*i);
      }
      out.push_back(std::move(it));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  validate_point();
}

Structure Structure::from_indices(Signature sig, std::vector<Elem> sorted_universe,
                                  std::map<std::string, std::vector<IndexTuple>, std::less<>> rels,
                                  std::optional<Elem> point) {
  Structure s;
  s.sig_ = std::move(sig);
  s.universe_ = std::move(sorted_universe);
  if (!std::is_sorted(s.universe_.begin(), s.universe_.end()) ||
      std::adjacent_find(s.universe_.begin(), s.universe_.end()) != s.universe_.end()) {
    throw DomainError("from_indices: universe not sorted and duplicate free");
  }
  for (const auto& [name, ar] : s.sig_.symbols()) s.rels_[name];
  for (auto& [name, ts] : rels) {
    if (!s.sig_.contains(name)) throw SignatureMismatch("relation " + name + " not in signature");
    const auto ar = static_cast<std::size_t>(s.sig_.arity(name));
    for (const auto& t : ts) {
      if (t.size() != ar) throw DomainError("tuple length mismatch for " + name);
      for (Index i : t) {
        if (i >= s.universe_.size()) throw DomainError("tuple index out of range for " + name);
      }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    s.rels_[name] = std::move(ts);
  }
  s.point_ = std::move(point);
  s.validate_point();
  return s;
}

void Structure::validate_point() {
  if (point_ && !contains(*point_)) throw DomainError("point '" + *point_ + "' not in universe");
}

std::optional<Index> Structure::index_of(std::string_view x) const {
  auto it = std::lower_bound(universe_.begin(), universe_.end(), x,
                             [](const Elem& a, std::string_view b) { return a < b; });
  if (it == universe_.end() || *it != x) return std::nullopt;
  return static_cast<Index>(it - universe_.begin());
}

Index Structure::at(std::string_view x) const {
  auto i = index_of(x);
  if (!i) throw MalformedMap("element '" + std::string(x) + "' not in universe");
  return *i;
}

const std::vector<IndexTuple>& Structure::tuples(std::string_view symbol) const {
  auto it = rels_.find(symbol);
  if (it == rels_.end()) throw SignatureMismatch("unknown symbol " + std::string(symbol));
  return it->second;
}

std::vector<Tuple> Structure::tuples_by_name(std::string_view symbol) const {
  std::vector<Tuple> out;
  for (const auto& t : tuples(symbol)) {
    Tuple named;
    for (Index i : t) named.push_back(universe_[i]);
    out.push_back(std::move(named));
  }
  return out;
}

bool Structure::holds(std::string_view symbol, std::span<const Index> t) const {
  const auto& ts = tuples(symbol);
  return std::binary_search(ts.begin(), ts.end(), t, [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
}

bool Structure::holds(std::string_view symbol, std::span<const Elem> t) const {
  IndexTuple it;
  it.reserve(t.size());
  for (const auto& x : t) {
    auto i = index_of(x);
    if (!i) return false;
    it.push_back(*i);
  }
  return holds(symbol, std::span<const Index>(it));
}

std::size_t Structure::tuple_count() const {
  std::size_t n = 0;
  for (const auto& [_, ts] : rels_) n += ts.size();
  return n;
}

Index Structure::point_index() const {
  if (!point_) throw DomainError("structure is not pointed");
  return at(*point_);
}

Structure Structure::with_point(const Elem& p) const {
  Structure s = *this;
  s.point_ = p;
  s.validate_point();
  return s;
}

Structure Structure::unpointed() const {
  Structure s = *this;
  s.point_.reset();
  return s;
}

std::string structure_id(const Structure& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ',';
    out += a.universe()[i];
  }
  out += '|';
  bool first_sym = true;
  for (const auto& [name, ar] : a.signature().symbols()) {
    if (!first_sym) out += ';';
    first_sym = false;
    out += name + ':';
    bool first = true;
    for (const auto& t : a.tuples(name)) {
      if (!first) out += ',';
      first = false;
      // single-character elements read best juxtaposed
      bool short_ids = std::all_of(t.begin(), t.end(), [&](Index i) { return a.universe()[i].size() == 1; });
      for (std::size_t j = 0; j < t.size(); ++j) {
        if (j && !short_ids) out += '.';
        out += a.universe()[t[j]];
      }
    }
  }
  if (a.pointed()) out += "|*" + *a.point();
  out += '}';
  return out;
}

Structure induced(const Structure& a, std::span<const Elem> subset) {
  std::vector<Elem> keep(subset.begin(), subset.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<std::optional<Index>> remap(a.size());
  for (std::size_t i = 0; i < keep.size(); ++i) remap[a.at(keep[i])] = static_cast<Index>(i);
  std::map<std::string, std::vector<IndexTuple>, std::less<>> rels;
  for (const auto& [name, ar] : a.signature().symbols()) {
    auto& out = rels[name];
    for (const auto& t : a.tuples(name)) {
      IndexTuple u;
      bool inside = true;
      for (Index i : t) {
        if (!remap[i]) {
          inside = false;
          break;
        }
        u.push_back(*remap[i]);
      }
      if (inside) out.push_back(std::move(u));
    }
  }
  std::optional<Elem> p;
  if (a.pointed() && std::binary_search(keep.begin(), keep.end(), *a.point())) p = a.point();
  return Structure::from_indices(a.signature(), std::move(keep), std::move(rels), p);
}

// ---- StructMap -------------------------------------------------------------

StructMap::StructMap(std::shared_ptr<const Structure> source, std::shared_ptr<const Structure> target,
                     std::vector<Elem> image)
    : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {
  if (image_.size() != source_->size()) {
    throw MalformedMap("assignment covers " + std::to_string(image_.size()) + " of " +
                       std::to_string(source_->size()) + " source elements");
  }
  for (const auto& y : image_) {
    if (!target_->contains(y)) throw MalformedMap("image '" + y + "' not in target universe");
  }
}

StructMap::StructMap(const Structure& source, const Structure& target, std::vector<Elem> image)
    : StructMap(std::make_shared<const Structure>(source), std::make_shared<const Structure>(target),
                std::move(image)) {}

StructMap StructMap::from_pairs(const Structure& source, const Structure& target,
                                const std::map<Elem, Elem>& assignment) {
  std::vector<Elem> image;
  for (const auto& x : source.universe()) {
    auto it = assignment.find(x);
    if (it == assignment.end()) throw MalformedMap("no value assigned to '" + x + "'");
    image.push_back(it->second);
  }
  if (assignment.size() != source.size()) throw MalformedMap("assignment mentions non-source elements");
  return StructMap(source, target, std::move(image));
}

StructMap StructMap::identity(const Structure& a) {
  auto p = std::make_shared<const Structure>(a);
  return StructMap(p, p, a.universe());
}

const Elem& StructMap::operator()(std::string_view x) const { return image_[source_->at(x)]; }

std::vector<Index> StructMap::target_indices() const {
  std::vector<Index> out;
  out.reserve(image_.size());
  for (const auto& y : image_) out.push_back(target_->at(y));
  return out;
}

StructMap compose(const StructMap& g, const StructMap& f) {
  if (!(f.target() == g.source())) throw MalformedMap("compose: endpoints do not match");
  std::vector<Elem> image;
  image.reserve(f.source().size());
  for (const auto& y : f.image()) image.push_back(g(y));
  return StructMap(f.source_ptr(), g.target_ptr(), std::move(image));
}

// ---- classification --------------------------------------------------------

std::string_view to_string(MapClass c) {
  switch (c) {
    case MapClass::not_hom: return "not_hom";
    case MapClass::hom: return "hom";
    case MapClass::embedding: return "embedding";
    case MapClass::surjective_hom: return "surjective_hom";
    case MapClass::iso: return "iso";
  }
  return "?";
}

bool at_least_hom(MapClass c) { return c != MapClass::not_hom; }

namespace {

bool preserves(const StructMap& f, const std::vector<Index>& img) {
  const auto& a = f.source();
  const auto& b = f.target();
  if (!(a.signature() == b.signature())) return false;
  if (a.pointed() && b.pointed() && img[a.point_index()] != b.point_index()) return false;
  IndexTuple u;
  for (const auto& [name, ar] : a.signature().symbols()) {
    for (const auto& t : a.tuples(name)) {
      u.clear();
      for (Index i : t) u.push_back(img[i]);
      if (!b.holds(name, std::span<const Index>(u))) return false;
    }
  }
  return true;
}

// Relations on the image pull back: every target tuple inside the image comes
// from a source tuple.  For an injective map comparing counts of the tuples
// landing fully inside the image is enough.
bool reflects_injective(const StructMap& f, const std::vector<Index>& img) {
  const auto& a = f.source();
  const auto& b = f.target();
  std::vector<char> in_image(b.size(), 0);
  for (Index j : img) in_image[j] = 1;
  for (const auto& [name, ar] : a.signature().symbols()) {
    std::size_t inside = 0;
    for (const auto& t : b.tuples(name)) {
      if (std::all_of(t.begin(), t.end(), [&](Index j) { return in_image[j]; })) ++inside;
    }
    if (inside != a.tuples(name).size()) return false;
  }
  return true;
}

}  // namespace

MapClass classify_map(const StructMap& f) {
  auto img = f.target_indices();
  if (!preserves(f, img)) return MapClass::not_hom;
  std::vector<Index> sorted = img;
  std::sort(sorted.begin(), sorted.end());
  bool injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  bool surjective = sorted.size() == f.target().size();
  bool embedding = injective && reflects_injective(f, img);
  if (embedding && surjective) return MapClass::iso;
  if (embedding) return MapClass::embedding;
  if (surjective) return MapClass::surjective_hom;
  return MapClass::hom;
}

bool is_hom(const StructMap& f) { return preserves(f, f.target_indices()); }

bool is_embedding(const StructMap& f) {
  auto c = classify_map(f);
  return c == MapClass::embedding || c == MapClass::iso;
}

}  // namespace fvm
