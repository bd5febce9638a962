#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fvm/kleisli_laws.hpp"

namespace fvm {

const std::vector<std::string>& suite_names();

struct SuiteConfig {
  Signature signature{{"E", 2}};
  std::size_t size = 2;            // structures of size <= size
  int k = 2;                       // rounds / pebbles / depth, from 1 up to k
  int len = 3;                     // truncation of P and Cos, from 2 up to len
  std::size_t graph_vertices = 4;  // graphs for Cos
  std::uint64_t seed = 20240601;
  std::vector<std::string> suites = suite_names();
  // Swap in the checker mutants (truncated coextension, unrestricted coproduct κ).
  bool mutate = false;
};

// Throws DomainError for an unknown suite name or a bound that is not positive.
void validate(const SuiteConfig& cfg);

LawReport run_one_suite(const std::string& name, const SuiteConfig& cfg);

struct SuiteResult {
  int exit_code = 0;  // 0 iff every line passes
  std::string report;
};

// Runs the selected suites in order; the report depends only on cfg.
SuiteResult run_suite(const SuiteConfig& cfg);

// Embedding preservation, (S2′), lifting iso, openness preservation and the
// path-image condition, over every coalgebra of the law's source comonad on
// `bases` (and every lift of those).
LawReport full_check(const KleisliLawSpec& law, std::span<const Structure> bases);

// Collapses a report to one line per law: count of checks, failures and the
// first failing subject.
LawReport summarize(const LawReport& r, const std::string& prefix);

}  // namespace fvm
