#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "twc/hall.hpp"
#include "twc/intlinalg.hpp"
#include "twc/word.hpp"

namespace twc {

// Outcome of a twisted-conjugacy decision. A Conjugate verdict always carries
// an exactly verified witness; Distinct carries the level whose linear system
// was unsolvable; Undecided carries the failure taxonomy. level is also set on
// Conjugate (the level whose candidate stage produced the witness).
struct Verdict {
  enum class Kind { Distinct, Conjugate, Undecided };
  enum class Failure { None, MatrixFailure, DepthExceeded };

  Kind kind = Kind::Undecided;
  int level = 0;
  std::optional<Word> witness;
  Failure failure = Failure::None;

  bool decided() const { return kind != Kind::Undecided; }

  static Verdict distinct(int level);
  static Verdict conjugate(Word w, int level);
  static Verdict matrix_failure(int level);
  static Verdict depth_exceeded(int cap);
};

struct DeciderConfig {
  // Deepest nilpotent quotient examined before giving up; must be in
  // [1, the basis hard cap].
  int depth_cap = 5;
  // Length bound for brute-force candidate enumeration; defaults to the
  // level reached when unset.
  std::optional<int> candidate_length_cap;
  // When false, the four-form weight-2 candidate construction is replaced by
  // the brute-force enumeration used at deeper levels.
  bool enable_level2_forms = true;
};

// Per-level log of the linear systems examined and candidates tested.
struct LevelRecord {
  int level = 0;
  SolutionKind system = SolutionKind::NoSolution;
  IntVector solution;  // particular solution; empty when NoSolution
  std::vector<Word> candidates;
};

struct DecisionTrace {
  std::vector<LevelRecord> levels;
  int max_level = 0;

  const LevelRecord& at_level(int n) const;
};

// Reusable cache of induced maps and collected words for decision batches
// (one Nielsen number computation decides many pairs over the same maps).
// Not thread-safe; share within a single thread only.
class DeciderScratch {
public:
  const InducedMap& induced(const Endomorphism& f, int max_weight);
  const NilpotentElement& collected(const Word& w, int max_weight);

private:
  std::map<std::tuple<std::string, int, int, int>, InducedMap> maps_;
  std::map<std::tuple<std::string, int, int>, NilpotentElement> words_;
};

// Decides whether h = f(z) g z^-1 has a solution z, level by level through
// the nilpotent quotients.
Verdict decide_twisted(const Endomorphism& f, const Word& g, const Word& h,
                       const DeciderConfig& cfg = {}, DecisionTrace* trace = nullptr,
                       DeciderScratch* scratch = nullptr);

// Decides whether h = f(z) k p(z)^-1 has a solution z; f and p may have a
// domain rank different from their codomain rank.
Verdict decide_doubly(const Endomorphism& f, const Endomorphism& p, const Word& h,
                      const Word& k, const DeciderConfig& cfg = {},
                      DecisionTrace* trace = nullptr, DeciderScratch* scratch = nullptr);

// Rank-1 domain: z = a^n, so search n in [-cap, cap] and fall back to the
// abelian necessary condition. Conjugate(a^n) on a verified match; Distinct(1)
// when no integer n satisfies even the abelianized equation; Undecided
// otherwise.
Verdict decide_rank1_domain(const Endomorphism& f, const Endomorphism& p, const Word& h,
                            const Word& k, int cap);

// Rank-1 codomain: the codomain is abelian, so the single linear equation is
// the whole story and the decision is complete (never Undecided).
Verdict decide_rank1_codomain(const Endomorphism& f, const Endomorphism& p, const Word& h,
                              const Word& k);

// All distinct freely reduced arrangements of the multiset with |z_i| copies
// of g_i^{sign(z_i)}, in lexicographic letter order.
std::vector<Word> candidates_from_abelian(const IntVector& z, int rank);

// For each previous candidate, inserts every nonzero weight-2 commutator power
// of `weight2` at every letter boundary (scanned end to start) in each of the
// four sign-variant forms whose class-2 collection equals that power.
// Duplicates are removed keeping first occurrence.
std::vector<Word> candidates_level2(const std::vector<Word>& prev, const IntVector& weight2,
                                    const std::shared_ptr<const HallBasis>& basis);

// All freely reduced words of length <= length, ordered by length then
// lexicographically; count = 1 + sum_i 2k(2k-1)^{i-1}.
std::vector<Word> brute_candidates(int rank, int length);

// True iff f(w) g w^-1 = h as reduced words.
bool check_candidate(const Endomorphism& f, const Word& g, const Word& h, const Word& w);

// True iff f(w) k p(w)^-1 = h as reduced words.
bool check_candidate_doubly(const Endomorphism& f, const Endomorphism& p, const Word& h,
                            const Word& k, const Word& w);

}  // namespace twc
