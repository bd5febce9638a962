#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fvm/term.hpp"

namespace fvm {

using Index = std::uint32_t;
using Tuple = std::vector<Elem>;
using IndexTuple = std::vector<Index>;

class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<std::pair<const std::string, int>> symbols);
  explicit Signature(std::map<std::string, int, std::less<>> symbols);

  const std::map<std::string, int, std::less<>>& symbols() const { return symbols_; }
  bool contains(std::string_view name) const { return symbols_.find(name) != symbols_.end(); }
  int arity(std::string_view name) const;
  bool empty() const { return symbols_.empty(); }
  // All arities in {1,2}.
  bool modal() const;
  bool subset_of(const Signature& other) const;
  Signature with(const std::string& name, int arity) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, int, std::less<>> symbols_;
};

// A finite structure, optionally pointed.  The universe is kept sorted and
// every relation is a sorted, duplicate-free list of index tuples, so two
// structures are equal exactly when their canonical forms are.
class Structure {
 public:
  using Relations = std::map<std::string, std::vector<Tuple>, std::less<>>;

  Structure() = default;
  Structure(Signature sig, std::vector<Elem> universe, const Relations& relations = {},
            std::optional<Elem> point = std::nullopt);

  // Builds from index tuples over an already sorted, duplicate-free universe.
  static Structure from_indices(Signature sig, std::vector<Elem> sorted_universe,
                                std::map<std::string, std::vector<IndexTuple>, std::less<>> rels,
                                std::optional<Elem> point = std::nullopt);

  const Signature& signature() const { return sig_; }
  const std::vector<Elem>& universe() const { return universe_; }
  std::size_t size() const { return universe_.size(); }
  bool empty() const { return universe_.empty(); }

  std::optional<Index> index_of(std::string_view x) const;
  Index at(std::string_view x) const;  // throws MalformedMap when absent
  bool contains(std::string_view x) const { return index_of(x).has_value(); }

  const std::vector<IndexTuple>& tuples(std::string_view symbol) const;
  std::vector<Tuple> tuples_by_name(std::string_view symbol) const;
  bool holds(std::string_view symbol, std::span<const Index> t) const;
  bool holds(std::string_view symbol, std::span<const Elem> t) const;
  std::size_t tuple_count() const;

  bool pointed() const { return point_.has_value(); }
  const std::optional<Elem>& point() const { return point_; }
  Index point_index() const;
  Structure with_point(const Elem& p) const;
  Structure unpointed() const;

  friend bool operator==(const Structure& a, const Structure& b) {
    return a.sig_ == b.sig_ && a.universe_ == b.universe_ && a.rels_ == b.rels_ &&
           a.point_ == b.point_;
  }

 private:
  void validate_point();

  Signature sig_;
  std::vector<Elem> universe_;
  std::map<std::string, std::vector<IndexTuple>, std::less<>> rels_;
  std::optional<Elem> point_;
};

// Compact one-line identifier used in reports, e.g. "{a,b|E:ab,bb|*a}".
std::string structure_id(const Structure& a);

// Substructure induced on a subset of the universe (point kept if present).
Structure induced(const Structure& a, std::span<const Elem> subset);

// A total function between universes.  Source and target are shared and
// immutable, so copies are cheap.
class StructMap {
 public:
  StructMap(std::shared_ptr<const Structure> source, std::shared_ptr<const Structure> target,
            std::vector<Elem> image);
  StructMap(const Structure& source, const Structure& target, std::vector<Elem> image);
  static StructMap from_pairs(const Structure& source, const Structure& target,
                              const std::map<Elem, Elem>& assignment);
  static StructMap identity(const Structure& a);

  const Structure& source() const { return *source_; }
  const Structure& target() const { return *target_; }
  const std::shared_ptr<const Structure>& source_ptr() const { return source_; }
  const std::shared_ptr<const Structure>& target_ptr() const { return target_; }

  const Elem& operator()(std::string_view x) const;
  const Elem& at(Index i) const { return image_[i]; }
  const std::vector<Elem>& image() const { return image_; }
  std::vector<Index> target_indices() const;

  friend bool operator==(const StructMap& f, const StructMap& g) {
    return *f.source_ == *g.source_ && *f.target_ == *g.target_ && f.image_ == g.image_;
  }

 private:
  std::shared_ptr<const Structure> source_, target_;
  std::vector<Elem> image_;
};

// g ∘ f
StructMap compose(const StructMap& g, const StructMap& f);

enum class MapClass { not_hom, hom, embedding, surjective_hom, iso };
std::string_view to_string(MapClass c);

MapClass classify_map(const StructMap& f);
bool is_hom(const StructMap& f);
bool is_embedding(const StructMap& f);
bool at_least_hom(MapClass c);

}  // namespace fvm
