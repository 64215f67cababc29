#pragma once

#include <string>
#include <utility>
#include <vector>

#include "twc/decider.hpp"
#include "twc/group_ring.hpp"

namespace twc {

struct UnresolvedPair {
  Word x, y;
  std::string reason;
};

// One merged twisted-conjugacy class of Reidemeister-trace terms. Classes with
// zero coefficient sum are reported too; only nonzero sums are counted.
struct ClassReport {
  Word representative;  // least member in word order
  BigInt total;
  std::vector<std::pair<Word, BigInt>> members;
};

// Log entry for one pairwise decision; x precedes y in term order. Shortcut
// merges come from the identity x ~ f(x) and carry a verified witness but no
// linear-system trace.
struct PairDecision {
  Word x, y;
  bool shortcut = false;
  Verdict verdict;
  DecisionTrace trace;
};

struct NielsenResult {
  enum class Status { Exact, Partial };
  Status status = Status::Exact;
  // Exact: the Nielsen number. Partial: a certified lower bound (the class
  // count under the merge of every unresolved pair; the true partition refines
  // that merge, and refining can only increase the nonzero-class count).
  long long value = 0;
  std::vector<UnresolvedPair> unresolved;
  std::vector<ClassReport> classes;  // decided partition, zero-sum classes included
  std::vector<PairDecision> decisions;
  int max_level = 1;  // deepest quotient examined by any decision
};

struct NielsenOptions {
  // Re-decide every pair independently after the union-find pass and throw
  // logic_error if any verdict contradicts the merged partition.
  bool verify_all_pairs = false;
};

// Number of nonzero-coefficient twisted conjugacy classes among the terms of
// the Reidemeister trace of f.
NielsenResult nielsen_number(const Endomorphism& f, const DeciderConfig& cfg = {},
                             const NielsenOptions& opts = {});

}  // namespace twc
