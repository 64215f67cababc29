#include "twc/decider.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <utility>

#include "twc/budget.hpp"
#include "twc/text.hpp"

namespace twc {

Verdict Verdict::distinct(int level) {
  Verdict v;
  v.kind = Kind::Distinct;
  v.level = level;
  return v;
}

Verdict Verdict::conjugate(Word w, int level) {
  Verdict v;
  v.kind = Kind::Conjugate;
  v.level = level;
  v.witness = std::move(w);
  return v;
}

Verdict Verdict::matrix_failure(int level) {
  Verdict v;
  v.kind = Kind::Undecided;
  v.failure = Failure::MatrixFailure;
  v.level = level;
  return v;
}

Verdict Verdict::depth_exceeded(int cap) {
  Verdict v;
  v.kind = Kind::Undecided;
  v.failure = Failure::DepthExceeded;
  v.level = cap;
  return v;
}

const LevelRecord& DecisionTrace::at_level(int n) const {
  for (const LevelRecord& r : levels)
    if (r.level == n) return r;
  throw std::out_of_range("no record for level " + std::to_string(n));
}

const InducedMap& DeciderScratch::induced(const Endomorphism& f, int max_weight) {
  auto key = std::make_tuple(print_endomorphism(f), f.domain_rank(), f.codomain_rank(),
                             max_weight);
  auto it = maps_.find(key);
  if (it == maps_.end())
    it = maps_.emplace(key, induced_map(f, build_basis(f.domain_rank(), max_weight))).first;
  return it->second;
}

const NilpotentElement& DeciderScratch::collected(const Word& w, int max_weight) {
  auto key = std::make_tuple(print_word(w), w.rank(), max_weight);
  auto it = words_.find(key);
  if (it == words_.end())
    it = words_.emplace(key, collect(w, build_basis(w.rank(), max_weight))).first;
  return it->second;
}

bool check_candidate(const Endomorphism& f, const Word& g, const Word& h, const Word& w) {
  return multiply(multiply(apply(f, w), g), invert(w)) == h;
}

bool check_candidate_doubly(const Endomorphism& f, const Endomorphism& p, const Word& h,
                            const Word& k, const Word& w) {
  return multiply(multiply(apply(f, w), k), invert(apply(p, w))) == h;
}

std::vector<Word> candidates_from_abelian(const IntVector& z, int rank) {
  if (z.size() != rank) throw std::invalid_argument("solution length differs from rank");
  std::vector<Letter> letters;
  for (int i = 0; i < rank; ++i) {
    long long c = to_long_long(z(i));
    for (long long j = 0; j < std::llabs(c); ++j)
      letters.push_back(c > 0 ? Letter(i + 1) : Letter(-(i + 1)));
  }
  auto by_key = [](Letter a, Letter b) { return letter_key(a) < letter_key(b); };
  std::sort(letters.begin(), letters.end(), by_key);
  std::vector<Word> out;
  do {
    out.emplace_back(rank, letters);
  } while (std::next_permutation(letters.begin(), letters.end(), by_key));
  return out;
}

namespace {

std::vector<Word> level2_candidates_impl(const std::vector<Word>& prev, const IntVector& weight2,
                                         const std::shared_ptr<const HallBasis>& basis,
                                         std::size_t cap) {
  if (basis->max_weight() < 2)
    throw std::invalid_argument("basis must extend to weight 2");
  if (weight2.size() != basis->weight_count(2))
    throw std::invalid_argument("exponent length differs from the weight-2 block");
  const int rank = basis->rank();
  const int begin2 = basis->weight_begin(2);
  static constexpr std::pair<int, int> kForms[] = {{1, 1}, {-1, -1}, {-1, 1}, {1, -1}};

  std::vector<Word> out = prev;
  for (int t = 0; t < basis->weight_count(2); ++t) {
    if (weight2(t).is_zero()) continue;
    long long e = to_long_long(weight2(t));
    const BasicCommutator& c = basis->entry(begin2 + t);
    std::vector<Word> next;
    std::set<Word> seen;
    for (const Word& w : out) {
      budget::check();
      for (int pos = static_cast<int>(w.length()); pos >= 0; --pos) {
        for (auto [s, u] : kForms) {
          Word x = Word::generator(rank, c.left + 1, s);
          Word y = Word::generator(rank, c.right + 1, u);
          Word inserted = pow(multiply(multiply(x, y), multiply(invert(x), invert(y))),
                              e * s * u);
          std::vector<Letter> ls(w.letters().begin(), w.letters().begin() + pos);
          ls.insert(ls.end(), inserted.letters().begin(), inserted.letters().end());
          ls.insert(ls.end(), w.letters().begin() + pos, w.letters().end());
          Word cand(rank, std::move(ls));
          if (seen.insert(cand).second) {
            if (next.size() >= cap)
              throw ComplexityError("level-2 candidate enumeration bound exceeded");
            next.push_back(std::move(cand));
          }
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<Word> candidates_level2(const std::vector<Word>& prev, const IntVector& weight2,
                                    const std::shared_ptr<const HallBasis>& basis) {
  return level2_candidates_impl(prev, weight2, basis, std::size_t(-1) / 2);
}

std::vector<Word> brute_candidates(int rank, int length) {
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
  if (length < 0) throw std::invalid_argument("length must be nonnegative");
  BigInt count(1), layer(2 * rank);
  for (int i = 1; i <= length; ++i) {
    count += layer;
    layer *= BigInt(2 * rank - 1);
  }
  if (count > BigInt(1000000))
    throw ComplexityError("word enumeration bound exceeded");

  std::vector<Letter> alphabet;  // collation order: a, a^-1, b, b^-1, ...
  for (int g = 1; g <= rank; ++g) {
    alphabet.push_back(Letter(g));
    alphabet.push_back(Letter(-g));
  }
  std::vector<Word> out;
  out.push_back(Word::identity(rank));
  std::vector<std::vector<Letter>> frontier{{}};
  for (int len = 1; len <= length; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : frontier) {
      for (Letter l : alphabet) {
        if (!w.empty() && w.back() == -l) continue;
        auto v = w;
        v.push_back(l);
        out.emplace_back(rank, v);
        next.push_back(std::move(v));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

namespace {

constexpr long long kArrangementLetterCap = 14;
constexpr std::size_t kLevel2CandidateCap = 200000;

void record(DecisionTrace* trace, LevelRecord rec) {
  if (!trace) return;
  trace->max_level = std::max(trace->max_level, rec.level);
  trace->levels.push_back(std::move(rec));
}

Verdict engine_doubly(const Endomorphism& f, const Endomorphism& p, const Word& h,
                      const Word& k, const DeciderConfig& cfg, DecisionTrace* trace,
                      DeciderScratch* scratch) {
  if (f.domain_rank() != p.domain_rank() || f.codomain_rank() != p.codomain_rank())
    throw std::invalid_argument("maps have mismatched ranks");
  if (h.rank() != f.codomain_rank() || k.rank() != f.codomain_rank())
    throw std::invalid_argument("words are not in the codomain group");
  if (cfg.depth_cap < 1) throw std::invalid_argument("depth cap must be at least 1");
  if (cfg.depth_cap > 6)
    throw std::invalid_argument("depth cap exceeds the basis hard cap");

  const int dom = f.domain_rank();
  if (h == k) return Verdict::conjugate(Word::identity(dom), 1);

  DeciderScratch local;
  DeciderScratch& sc = scratch ? *scratch : local;

  auto try_candidates = [&](const std::vector<Word>& cands,
                            int level) -> std::optional<Verdict> {
    for (const Word& w : cands) {
      budget::check();
      if (check_candidate_doubly(f, p, h, k, w)) return Verdict::conjugate(w, level);
      Word wi = invert(w);
      if (check_candidate_doubly(f, p, h, k, wi)) return Verdict::conjugate(wi, level);
    }
    return std::nullopt;
  };

  IntMatrix A = abelian_matrix(f) - abelian_matrix(p);
  IntVector rhs = abelianization(h) - abelianization(k);
  SolutionSet<BigInt> sol = solve_linear(A, rhs);

  LevelRecord rec;
  rec.level = 1;
  rec.system = sol.kind;
  if (sol.kind != SolutionKind::NoSolution) rec.solution = sol.particular;
  if (sol.kind == SolutionKind::NoSolution) {
    record(trace, std::move(rec));
    return Verdict::distinct(1);
  }
  if (sol.kind == SolutionKind::Infinite) {
    record(trace, std::move(rec));
    return Verdict::matrix_failure(1);
  }

  // Arrangement candidates are a witness heuristic; skip them when the
  // abelian solution is too heavy to enumerate.
  BigInt mass(0);
  for (Eigen::Index i = 0; i < sol.particular.size(); ++i) mass += abs(sol.particular(i));
  std::vector<Word> prev;
  if (mass <= BigInt(kArrangementLetterCap))
    prev = candidates_from_abelian(sol.particular, dom);
  rec.candidates = prev;
  record(trace, std::move(rec));
  if (auto v = try_candidates(prev, 1)) return *v;

  std::vector<IntVector> chunks{sol.particular};

  for (int n = 2; n <= cfg.depth_cap; ++n) {
    budget::check();
    auto dom_basis = build_basis(dom, n);
    auto cod_basis = build_basis(f.codomain_rank(), n);
    const InducedMap& mf = sc.induced(f, n);
    const InducedMap& mp = sc.induced(p, n);

    // Zero-extension lift: the solved lower-weight exponents, weight-n slots
    // open. An exponent vector is its own normal form, so this is a valid
    // element of the level-n quotient.
    IntVector acc = IntVector::Zero(dom_basis->size());
    for (int w = 1; w < n; ++w)
      for (int j = 0; j < dom_basis->weight_count(w); ++j)
        acc(dom_basis->weight_begin(w) + j) = chunks[w - 1](j);
    NilpotentElement z0(dom_basis, std::move(acc));

    const NilpotentElement& hh = sc.collected(h, n);
    NilpotentElement t =
        nmultiply(nmultiply(apply(mf, z0), sc.collected(k, n)), ninvert(apply(mp, z0)));

    const int cb = cod_basis->weight_begin(n), cw = cod_basis->weight_count(n);
    for (int idx = 0; idx < cb; ++idx)
      if (hh.exponent(idx) != t.exponent(idx))
        throw std::logic_error("lower-weight discrepancy after a solved level");
    IntVector d(cw);
    for (int j = 0; j < cw; ++j) d(j) = hh.exponent(cb + j) - t.exponent(cb + j);

    IntMatrix M = mf.graded(n) - mp.graded(n);
    sol = solve_linear(M, d);

    LevelRecord r;
    r.level = n;
    r.system = sol.kind;
    if (sol.kind != SolutionKind::NoSolution) r.solution = sol.particular;
    if (sol.kind == SolutionKind::NoSolution) {
      record(trace, std::move(r));
      return Verdict::distinct(n);
    }
    if (sol.kind == SolutionKind::Infinite) {
      record(trace, std::move(r));
      return Verdict::matrix_failure(n);
    }
    chunks.push_back(sol.particular);

    std::vector<Word> cands;
    if (n == 2 && cfg.enable_level2_forms) {
      cands = level2_candidates_impl(prev, sol.particular, dom_basis, kLevel2CandidateCap);
    } else {
      cands = brute_candidates(dom, cfg.candidate_length_cap.value_or(n));
    }
    r.candidates = cands;
    record(trace, std::move(r));
    if (auto v = try_candidates(cands, n)) return *v;
  }
  return Verdict::depth_exceeded(cfg.depth_cap);
}

}  // namespace

Verdict decide_twisted(const Endomorphism& f, const Word& g, const Word& h,
                       const DeciderConfig& cfg, DecisionTrace* trace,
                       DeciderScratch* scratch) {
  if (f.domain_rank() != f.codomain_rank())
    throw std::invalid_argument("twisted decision needs matching ranks");
  return engine_doubly(f, Endomorphism::identity(f.domain_rank()), h, g, cfg, trace,
                       scratch);
}

Verdict decide_doubly(const Endomorphism& f, const Endomorphism& p, const Word& h,
                      const Word& k, const DeciderConfig& cfg, DecisionTrace* trace,
                      DeciderScratch* scratch) {
  return engine_doubly(f, p, h, k, cfg, trace, scratch);
}

Verdict decide_rank1_domain(const Endomorphism& f, const Endomorphism& p, const Word& h,
                            const Word& k, int cap) {
  if (f.domain_rank() != 1 || p.domain_rank() != 1)
    throw std::invalid_argument("domain rank must be 1");
  if (f.codomain_rank() != p.codomain_rank())
    throw std::invalid_argument("maps have mismatched ranks");
  if (h.rank() != f.codomain_rank() || k.rank() != f.codomain_rank())
    throw std::invalid_argument("words are not in the codomain group");
  if (cap < 0) throw std::invalid_argument("search bound must be nonnegative");

  for (int n = 0; n <= cap; ++n) {
    budget::check();
    for (int e : {n, -n}) {
      Word w = pow(Word::generator(1, 1), e);
      if (check_candidate_doubly(f, p, h, k, w)) return Verdict::conjugate(w, 1);
      if (n == 0) break;
    }
  }

  // Abelian necessary condition: c n = d must have an integer solution.
  IntVector c = abelianization(f.image(1)) - abelianization(p.image(1));
  IntVector d = abelianization(h) - abelianization(k);
  bool solvable = true;
  Eigen::Index pivot = -1;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (!c(i).is_zero()) {
      pivot = i;
      break;
    }
  if (pivot < 0) {
    solvable = is_zero(d);
  } else if ((d(pivot) % c(pivot)).is_zero()) {
    BigInt n0 = d(pivot) / c(pivot);
    for (Eigen::Index i = 0; i < c.size(); ++i)
      if (c(i) * n0 != d(i)) solvable = false;
  } else {
    solvable = false;
  }
  if (!solvable) return Verdict::distinct(1);
  return Verdict::depth_exceeded(cap);
}

Verdict decide_rank1_codomain(const Endomorphism& f, const Endomorphism& p, const Word& h,
                              const Word& k) {
  if (f.codomain_rank() != 1 || p.codomain_rank() != 1)
    throw std::invalid_argument("codomain rank must be 1");
  if (f.domain_rank() != p.domain_rank())
    throw std::invalid_argument("maps have mismatched ranks");
  if (h.rank() != 1 || k.rank() != 1)
    throw std::invalid_argument("words are not in the codomain group");

  const int q = f.domain_rank();
  IntMatrix A = abelian_matrix(f) - abelian_matrix(p);
  IntVector b = abelianization(h) - abelianization(k);
  SolutionSet<BigInt> sol = solve_linear(A, b);
  if (sol.kind == SolutionKind::NoSolution) return Verdict::distinct(1);

  Word w = Word::identity(q);
  for (int j = 0; j < q; ++j)
    w = multiply(w, pow(Word::generator(q, j + 1), to_long_long(sol.particular(j))));
  if (!check_candidate_doubly(f, p, h, k, w))
    throw std::logic_error("rank-1 codomain witness failed verification");
  return Verdict::conjugate(w, 1);
}

}  // namespace twc
