#include "fvm/report.hpp"

#include <algorithm>

namespace fvm {

bool LawReport::passed() const { return failures() == 0; }

std::size_t LawReport::failures() const {
  return static_cast<std::size_t>(std::count_if(lines.begin(), lines.end(), [](const LawLine& l) { return !l.pass; }));
}

void LawReport::add(std::string law, std::string subject, bool pass, std::string detail) {
  lines.push_back({std::move(law), std::move(subject), pass, std::move(detail)});
}

void LawReport::append(const LawReport& other) {
  header.insert(header.end(), other.header.begin(), other.header.end());
  lines.insert(lines.end(), other.lines.begin(), other.lines.end());
  sampled = sampled || other.sampled;
}

const LawLine* LawReport::first_failure() const {
  for (const auto& l : lines)
    if (!l.pass) return &l;
  return nullptr;
}

std::string LawReport::text() const {
  std::string out;
  for (const auto& h : header) out += "# " + h + "\n";
  for (const auto& l : lines) {
    out += "LAW " + l.law + " " + l.subject + (l.pass ? " PASS" : " FAIL");
    if (!l.detail.empty()) out += " " + l.detail;
    out += "\n";
  }
  return out;
}

}  // namespace fvm
