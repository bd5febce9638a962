#pragma once

#include <string>
#include <vector>

namespace fvm {

struct LawLine {
  std::string law;
  std::string subject;
  bool pass = true;
  std::string detail;
};

// One machine-readable line per check:
//   LAW <name> <structure-id> PASS|FAIL <counterexample?>
// Header lines start with '#'.
struct LawReport {
  std::vector<std::string> header;
  std::vector<LawLine> lines;
  bool sampled = false;

  bool passed() const;
  std::size_t failures() const;
  void add(std::string law, std::string subject, bool pass, std::string detail = {});
  void append(const LawReport& other);
  const LawLine* first_failure() const;
  std::string text() const;
};

}  // namespace fvm
