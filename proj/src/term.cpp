#include "fvm/term.hpp"

#include "fvm/errors.hpp"

namespace fvm::term {
namespace {

constexpr std::string_view kSpecial = "\\,[](){}<>";

char closer(char open) {
  switch (open) {
    case '[': return ']';
    case '(': return ')';
    case '{': return '}';
    case '<': return '>';
  }
  throw DomainError(std::string("not a bracket: ") + open);
}

bool is_opener(char c) { return c == '[' || c == '(' || c == '{' || c == '<'; }
bool is_closer(char c) { return c == ']' || c == ')' || c == '}' || c == '>'; }

bool plain(std::string_view s) {
  if (s.empty()) return false;
  std::string stack;
  for (char c : s) {
    if (c == '\\') return false;
    if (c == ',' && stack.empty()) return false;
    if (is_opener(c)) {
      stack.push_back(closer(c));
    } else if (is_closer(c)) {
      if (stack.empty() || stack.back() != c) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

void append_item(std::string& out, const std::string& item) {
  if (item.empty()) throw DomainError("empty item in composite identifier");
  if (plain(item)) {
    out += item;
    return;
  }
  for (char c : item) {
    if (kSpecial.find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
}

std::string unescape(std::string_view piece) {
  std::string out;
  out.reserve(piece.size());
  for (std::size_t i = 0; i < piece.size(); ++i) {
    if (piece[i] == '\\' && i + 1 < piece.size()) ++i;
    out += piece[i];
  }
  return out;
}

}  // namespace

std::string group(char open, std::span<const std::string> xs) {
  std::string out(1, open);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    append_item(out, xs[i]);
  }
  out += closer(open);
  return out;
}

std::string group(char open, std::initializer_list<std::string> xs) {
  return group(open, std::span<const std::string>(xs.begin(), xs.size()));
}

namespace {

// Splits the body of a group; returns false on any structural problem.
bool split(std::string_view s, char open, std::vector<std::string>* out) {
  if (s.size() < 2 || s.front() != open || s.back() != closer(open)) return false;
  std::string stack;
  std::size_t start = 1;
  bool escaped_piece = false;
  auto flush = [&](std::size_t end) {
    if (!out) return;
    auto piece = s.substr(start, end - start);
    out->push_back(escaped_piece ? unescape(piece) : std::string(piece));
  };
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '\\') {
      escaped_piece = true;
      ++i;
      if (i + 1 >= s.size()) return false;
      continue;
    }
    if (is_opener(c)) {
      stack.push_back(closer(c));
    } else if (is_closer(c)) {
      if (stack.empty() || stack.back() != c) return false;
      stack.pop_back();
    } else if (c == ',' && stack.empty()) {
      if (i == start) return false;
      flush(i);
      start = i + 1;
      escaped_piece = false;
    }
  }
  if (!stack.empty()) return false;
  if (s.size() == 2) return true;  // empty group
  if (start == s.size() - 1) return false;
  flush(s.size() - 1);
  return true;
}

}  // namespace

bool is_group(std::string_view s, char open) { return split(s, open, nullptr); }

std::vector<std::string> items(std::string_view s, char open) {
  std::vector<std::string> out;
  if (!split(s, open, &out)) {
    throw DomainError("malformed composite identifier '" + std::string(s) + "'");
  }
  return out;
}

}  // namespace fvm::term
