#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fvm {

using Elem = std::string;

// Composite element identifiers.  A composite is a bracket group, one of
// [..] (.) {..} <..>, whose items are separated by top-level commas.  Items
// that are not bracket-balanced, contain a top-level comma or a backslash
// are written with every special character backslash-escaped, which keeps
// decoding injective.
namespace term {

std::string group(char open, std::span<const std::string> items);
std::string group(char open, std::initializer_list<std::string> items);

bool is_group(std::string_view s, char open);

// Throws DomainError when s is not a single group opened by `open`.
std::vector<std::string> items(std::string_view s, char open);

// Shorthands for the shapes used throughout.
inline std::string tagged(std::size_t tag, const std::string& x) {
  return group('(', {std::to_string(tag), x});
}

}  // namespace term
}  // namespace fvm
