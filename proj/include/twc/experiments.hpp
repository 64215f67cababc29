#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "twc/decider.hpp"
#include "twc/word.hpp"

namespace twc {

// Uniform draw over the nonempty freely reduced words of length at most
// max_length. Consumes a deterministic number of rng draws per call.
Word random_word(int rank, int max_length, std::mt19937_64& rng);

// Each generator image is an independent random_word over the codomain.
Endomorphism random_endomorphism(int domain_rank, int codomain_rank, int max_length,
                                 std::mt19937_64& rng);

struct TrialRecord {
  enum class Outcome { Success, MatrixFailure, ComplexityFailure };

  std::uint64_t seed = 0;          // per-trial rng seed, derived from base seed + index
  std::vector<Endomorphism> maps;  // one map per twisted trial, two per doubly trial
  std::vector<Word> words;         // empty for twisted trials, {h, k} for doubly
  Outcome outcome = Outcome::Success;
  // A twisted trial can hit both failure kinds on different pairs; outcome
  // then reports the matrix kind and both flags stay set.
  bool matrix_failure = false;      // some linear system had infinitely many solutions
  bool complexity_failure = false;  // depth cap, enumeration cap, or deadline hit
  int depth = 1;                    // max nilpotency level used across the trial's decisions
  double elapsed_seconds = 0.0;
};

// One aggregate row per parameter cell. Depth statistics run over successful
// trials only; percentages run over all trials and need not sum to 100.
struct SummaryRow {
  int k1 = 0;  // twisted experiments set k1 == k2 == k
  int k2 = 0;
  int l = 0;
  long long trials = 0;
  long long successes = 0;
  long long matrix_failures = 0;
  long long complexity_failures = 0;
  long long depth_sum = 0;     // over successes
  long long depth_sq_sum = 0;  // over successes

  double success_pct() const;
  double matrix_failure_pct() const;
  double complexity_failure_pct() const;
  double avg_depth() const;    // 0 when no trial succeeded
  double depth_sigma() const;  // population sigma over successes
};

struct SummaryTable {
  std::vector<SummaryRow> rows;
};

struct ExperimentOptions {
  int threads = 0;  // 0 picks hardware concurrency
  std::chrono::milliseconds per_trial_timeout{30000};
  // When set, receives one JSON object per line per trial, in trial order.
  std::ostream* trial_log = nullptr;
};

// Per trial: draw one rank-k endomorphism, run the Nielsen number computation,
// classify. Success means every Reidemeister class pair was decided. Trials
// are scheduled on a pool but seeded by index, so identical parameters and
// base seed give a bit-identical row at any thread count.
SummaryRow run_single_experiment(int k, int l, long long trials, std::uint64_t base_seed,
                                 const DeciderConfig& cfg = {},
                                 const ExperimentOptions& opts = {});

// Per trial: draw maps f, p and words h, k (in that rng order), run the doubly
// twisted decision. A drawn coincidence h == k counts as a depth-1 success.
SummaryRow run_double_experiment(int k1, int k2, int l, long long trials,
                                 std::uint64_t base_seed, const DeciderConfig& cfg = {},
                                 const ExperimentOptions& opts = {});

// Fixed header, derived statistics to two decimals.
std::string to_csv(const SummaryTable& table);
std::string to_json(const SummaryTable& table);

}  // namespace twc
