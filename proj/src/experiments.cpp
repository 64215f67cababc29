#include "twc/experiments.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "twc/budget.hpp"
#include "twc/hall.hpp"
#include "twc/nielsen.hpp"
#include "twc/text.hpp"

namespace twc {
namespace {

// splitmix64 finalizer; trial seeds depend on base seed and index only, never
// on scheduling order.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t base_seed, long long index) {
  return mix64(base_seed +
               static_cast<std::uint64_t>(index + 1) * 0x9E3779B97F4A7C15ull);
}

// Unbiased uniform draw from [0, n) by masked rejection.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("draw_below needs n >= 1");
  if (n == 1) return 0;
  const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(n - 1);
  for (;;) {
    std::uint64_t v = rng() & mask;
    if (v < n) return v;
  }
}

// Letters in collation order a, a^-1, b, b^-1, ...
Letter letter_at(int index) {
  int gen = index / 2 + 1;
  return index % 2 == 0 ? gen : -gen;
}

}  // namespace

Word random_word(int rank, int max_length, std::mt19937_64& rng) {
  if (rank < 1) throw std::invalid_argument("random_word needs rank >= 1");
  if (max_length < 1) throw std::invalid_argument("random_word needs max_length >= 1");
  const std::uint64_t alphabet = 2 * static_cast<std::uint64_t>(rank);

  // counts[i] = number of reduced words of length i+1; a word is drawn by
  // picking its length with these weights, then its letters uniformly, which
  // is uniform over the whole set.
  std::vector<std::uint64_t> counts(max_length);
  std::uint64_t total = 0;
  std::uint64_t c = alphabet;
  for (int i = 0; i < max_length; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() - c)
      throw ComplexityError("random word space exceeds 64-bit count");
    counts[i] = c;
    total += c;
    if (i + 1 < max_length) {
      if (c > std::numeric_limits<std::uint64_t>::max() / (alphabet - 1))
        throw ComplexityError("random word space exceeds 64-bit count");
      c *= alphabet - 1;
    }
  }

  std::uint64_t u = draw_below(rng, total);
  int length = 0;
  while (u >= counts[length]) u -= counts[length++];
  ++length;

  std::vector<Letter> letters;
  letters.reserve(length);
  letters.push_back(letter_at(static_cast<int>(draw_below(rng, alphabet))));
  for (int i = 1; i < length; ++i) {
    // Any letter except the inverse of the previous one keeps the word reduced.
    int r = static_cast<int>(draw_below(rng, alphabet - 1));
    for (int idx = 0;; ++idx) {
      Letter cand = letter_at(idx);
      if (cand == -letters.back()) continue;
      if (r-- == 0) {
        letters.push_back(cand);
        break;
      }
    }
  }
  return Word(rank, std::move(letters));
}

Endomorphism random_endomorphism(int domain_rank, int codomain_rank, int max_length,
                                 std::mt19937_64& rng) {
  std::vector<Word> images;
  images.reserve(domain_rank);
  for (int i = 0; i < domain_rank; ++i)
    images.push_back(random_word(codomain_rank, max_length, rng));
  return Endomorphism(domain_rank, codomain_rank, std::move(images));
}

double SummaryRow::success_pct() const {
  return trials == 0 ? 0.0 : 100.0 * static_cast<double>(successes) / static_cast<double>(trials);
}

double SummaryRow::matrix_failure_pct() const {
  return trials == 0 ? 0.0
                     : 100.0 * static_cast<double>(matrix_failures) / static_cast<double>(trials);
}

double SummaryRow::complexity_failure_pct() const {
  return trials == 0 ? 0.0
                     : 100.0 * static_cast<double>(complexity_failures) /
                           static_cast<double>(trials);
}

double SummaryRow::avg_depth() const {
  return successes == 0 ? 0.0
                        : static_cast<double>(depth_sum) / static_cast<double>(successes);
}

double SummaryRow::depth_sigma() const {
  if (successes == 0) return 0.0;
  double mean = avg_depth();
  double var = static_cast<double>(depth_sq_sum) / static_cast<double>(successes) - mean * mean;
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

namespace {

TrialRecord run_twisted_trial(int k, int l, std::uint64_t seed, const DeciderConfig& cfg,
                              std::chrono::milliseconds timeout) {
  std::mt19937_64 rng(seed);
  TrialRecord rec;
  rec.seed = seed;
  rec.maps.push_back(random_endomorphism(k, k, l, rng));
  auto t0 = std::chrono::steady_clock::now();
  try {
    budget::ScopedDeadline deadline(timeout);
    NielsenResult r = nielsen_number(rec.maps[0], cfg);
    rec.depth = r.max_level;
    for (const auto& d : r.decisions) {
      if (d.verdict.kind != Verdict::Kind::Undecided) continue;
      if (d.verdict.failure == Verdict::Failure::MatrixFailure) rec.matrix_failure = true;
      if (d.verdict.failure == Verdict::Failure::DepthExceeded) rec.complexity_failure = true;
    }
    if (!r.unresolved.empty())
      rec.outcome = rec.matrix_failure ? TrialRecord::Outcome::MatrixFailure
                                       : TrialRecord::Outcome::ComplexityFailure;
  } catch (const TimeoutError&) {
    rec.complexity_failure = true;
    rec.outcome = TrialRecord::Outcome::ComplexityFailure;
  } catch (const ComplexityError&) {
    rec.complexity_failure = true;
    rec.outcome = TrialRecord::Outcome::ComplexityFailure;
  }
  rec.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

TrialRecord run_doubly_trial(int k1, int k2, int l, std::uint64_t seed,
                             const DeciderConfig& cfg, std::chrono::milliseconds timeout) {
  std::mt19937_64 rng(seed);
  TrialRecord rec;
  rec.seed = seed;
  rec.maps.push_back(random_endomorphism(k1, k2, l, rng));
  rec.maps.push_back(random_endomorphism(k1, k2, l, rng));
  rec.words.push_back(random_word(k2, l, rng));
  rec.words.push_back(random_word(k2, l, rng));
  auto t0 = std::chrono::steady_clock::now();
  try {
    budget::ScopedDeadline deadline(timeout);
    Verdict v = decide_doubly(rec.maps[0], rec.maps[1], rec.words[0], rec.words[1], cfg);
    rec.depth = std::max(1, v.level);
    if (!v.decided()) {
      if (v.failure == Verdict::Failure::MatrixFailure) {
        rec.matrix_failure = true;
        rec.outcome = TrialRecord::Outcome::MatrixFailure;
      } else {
        rec.complexity_failure = true;
        rec.outcome = TrialRecord::Outcome::ComplexityFailure;
      }
    }
  } catch (const TimeoutError&) {
    rec.complexity_failure = true;
    rec.outcome = TrialRecord::Outcome::ComplexityFailure;
  } catch (const ComplexityError&) {
    rec.complexity_failure = true;
    rec.outcome = TrialRecord::Outcome::ComplexityFailure;
  }
  rec.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

const char* outcome_name(TrialRecord::Outcome o) {
  switch (o) {
    case TrialRecord::Outcome::Success: return "success";
    case TrialRecord::Outcome::MatrixFailure: return "matrix_failure";
    default: return "complexity_failure";
  }
}

void log_trials(std::ostream& out, const std::vector<TrialRecord>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TrialRecord& r = records[i];
    nlohmann::json j;
    j["trial"] = i;
    j["seed"] = r.seed;
    nlohmann::json maps = nlohmann::json::array();
    for (const auto& f : r.maps) maps.push_back(print_endomorphism(f));
    j["maps"] = std::move(maps);
    if (!r.words.empty()) {
      nlohmann::json words = nlohmann::json::array();
      for (const auto& w : r.words) words.push_back(print_word(w));
      j["words"] = std::move(words);
    }
    j["outcome"] = outcome_name(r.outcome);
    j["matrix_failure"] = r.matrix_failure;
    j["complexity_failure"] = r.complexity_failure;
    j["depth"] = r.depth;
    j["elapsed_seconds"] = r.elapsed_seconds;
    out << j.dump() << '\n';
  }
}

// Runs trials on a slot-indexed pool and aggregates sequentially, so the row
// is identical at any thread count.
template <typename TrialFn>
SummaryRow run_pool(SummaryRow row, long long trials, std::uint64_t base_seed,
                    const ExperimentOptions& opts, TrialFn&& trial_fn) {
  if (trials < 0) throw std::invalid_argument("trial count must be nonnegative");
  row.trials = trials;
  if (trials == 0) return row;

  std::vector<std::optional<TrialRecord>> slots(static_cast<std::size_t>(trials));
  std::atomic<long long> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  int nthreads = opts.threads > 0 ? opts.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  if (static_cast<long long>(nthreads) > trials) nthreads = static_cast<int>(trials);

  auto worker = [&] {
    for (;;) {
      long long i = next.fetch_add(1);
      if (i >= trials) return;
      try {
        slots[static_cast<std::size_t>(i)] = trial_fn(trial_seed(base_seed, i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(trials);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  std::vector<TrialRecord> records;
  records.reserve(slots.size());
  for (auto& s : slots) records.push_back(std::move(*s));
  for (const TrialRecord& r : records) {
    if (r.matrix_failure) ++row.matrix_failures;
    if (r.complexity_failure) ++row.complexity_failures;
    if (r.outcome == TrialRecord::Outcome::Success) {
      ++row.successes;
      row.depth_sum += r.depth;
      row.depth_sq_sum += static_cast<long long>(r.depth) * r.depth;
    }
  }
  if (opts.trial_log) log_trials(*opts.trial_log, records);
  return row;
}

}  // namespace

SummaryRow run_single_experiment(int k, int l, long long trials, std::uint64_t base_seed,
                                 const DeciderConfig& cfg, const ExperimentOptions& opts) {
  SummaryRow row;
  row.k1 = k;
  row.k2 = k;
  row.l = l;
  return run_pool(row, trials, base_seed, opts, [&](std::uint64_t seed) {
    return run_twisted_trial(k, l, seed, cfg, opts.per_trial_timeout);
  });
}

SummaryRow run_double_experiment(int k1, int k2, int l, long long trials,
                                 std::uint64_t base_seed, const DeciderConfig& cfg,
                                 const ExperimentOptions& opts) {
  SummaryRow row;
  row.k1 = k1;
  row.k2 = k2;
  row.l = l;
  return run_pool(row, trials, base_seed, opts, [&](std::uint64_t seed) {
    return run_doubly_trial(k1, k2, l, seed, cfg, opts.per_trial_timeout);
  });
}

std::string to_csv(const SummaryTable& table) {
  std::string out =
      "k1,k2,l,trials,success_pct,matrix_failure_pct,complexity_failure_pct,avg_depth,"
      "depth_sigma\n";
  char buf[256];
  for (const SummaryRow& r : table.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%lld,%.2f,%.2f,%.2f,%.2f,%.2f\n", r.k1, r.k2,
                  r.l, r.trials, r.success_pct(), r.matrix_failure_pct(),
                  r.complexity_failure_pct(), r.avg_depth(), r.depth_sigma());
    out += buf;
  }
  return out;
}

std::string to_json(const SummaryTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SummaryRow& r : table.rows) {
    nlohmann::json j;
    j["k1"] = r.k1;
    j["k2"] = r.k2;
    j["l"] = r.l;
    j["trials"] = r.trials;
    j["successes"] = r.successes;
    j["matrix_failures"] = r.matrix_failures;
    j["complexity_failures"] = r.complexity_failures;
    j["success_pct"] = r.success_pct();
    j["matrix_failure_pct"] = r.matrix_failure_pct();
    j["complexity_failure_pct"] = r.complexity_failure_pct();
    j["avg_depth"] = r.avg_depth();
    j["depth_sigma"] = r.depth_sigma();
    rows.push_back(std::move(j));
  }
  nlohmann::json doc;
  doc["rows"] = std::move(rows);
  return doc.dump(2);
}

}  // namespace twc
