#include "twc/nielsen.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "twc/budget.hpp"

namespace twc {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int i, int j) { parent[find(i)] = find(j); }
};

std::string failure_reason(const Verdict& v) {
  if (v.failure == Verdict::Failure::MatrixFailure)
    return "matrix failure at level " + std::to_string(v.level);
  return "depth cap " + std::to_string(v.level) + " exceeded";
}

long long nonzero_class_count(UnionFind uf, const std::vector<std::pair<Word, BigInt>>& terms) {
  std::map<int, BigInt> sums;
  for (int i = 0; i < static_cast<int>(terms.size()); ++i) {
    auto [it, fresh] = sums.emplace(uf.find(i), terms[i].second);
    if (!fresh) it->second += terms[i].second;
  }
  long long n = 0;
  for (const auto& [root, sum] : sums)
    if (!sum.is_zero()) ++n;
  return n;
}

}  // namespace

NielsenResult nielsen_number(const Endomorphism& f, const DeciderConfig& cfg,
                             const NielsenOptions& opts) {
  if (f.domain_rank() != f.codomain_rank())
    throw std::invalid_argument("Nielsen number needs an endomorphism");

  GroupRingElement rt = reidemeister_trace(f);
  std::vector<std::pair<Word, BigInt>> terms(rt.terms().begin(), rt.terms().end());
  const int m = static_cast<int>(terms.size());

  NielsenResult res;
  UnionFind uf(m);

  // Pre-merge shortcut: x and f^j(x) are always twisted conjugate, with the
  // witness z = (f^{j-1}(x) ... f(x) x)^-1 for h = f(z) y z^-1, h = x,
  // y = f^j(x) (and z uninverted for the mirror direction).
  constexpr int kShortcutIterates = 3;
  std::vector<std::vector<Word>> images(kShortcutIterates);
  for (int j = 1; j <= kShortcutIterates; ++j) {
    Endomorphism fj = iterate(f, j);
    images[j - 1].reserve(m);
    for (const auto& [w, c] : terms) images[j - 1].push_back(apply(fj, w));
  }
  auto chain = [&](const Word& x, int j) {
    Word u = Word::identity(f.domain_rank());
    for (int t = j - 1; t >= 0; --t)
      u = multiply(u, t == 0 ? x : apply(iterate(f, t), x));
    return u;
  };
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (uf.find(i) == uf.find(j)) continue;
      for (int it = 1; it <= kShortcutIterates; ++it) {
        Word z = Word::identity(f.domain_rank());
        if (images[it - 1][i] == terms[j].first)
          z = invert(chain(terms[i].first, it));
        else if (images[it - 1][j] == terms[i].first)
          z = chain(terms[j].first, it);
        else
          continue;
        if (!check_candidate(f, terms[j].first, terms[i].first, z))
          throw std::logic_error("shortcut witness failed verification");
        uf.unite(i, j);
        PairDecision d{terms[i].first, terms[j].first, true, Verdict::conjugate(z, 1), {}};
        res.decisions.push_back(std::move(d));
        break;
      }
    }
  }

  // Remaining pairs, cheapest first: total word length ascending, then term
  // order. Redundant pairs are skipped via union-find.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return terms[a.first].first.length() + terms[a.second].first.length() <
           terms[b.first].first.length() + terms[b.second].first.length();
  });

  DeciderScratch scratch;
  std::vector<std::pair<int, int>> distinct_pairs, unresolved_pairs;
  for (auto [i, j] : pairs) {
    budget::check();
    if (uf.find(i) == uf.find(j)) continue;
    PairDecision d{terms[i].first, terms[j].first, false, Verdict::distinct(1), {}};
    d.verdict = decide_twisted(f, terms[j].first, terms[i].first, cfg, &d.trace, &scratch);
    res.max_level = std::max({res.max_level, d.trace.max_level, d.verdict.level});
    switch (d.verdict.kind) {
      case Verdict::Kind::Conjugate:
        uf.unite(i, j);
        break;
      case Verdict::Kind::Distinct:
        distinct_pairs.emplace_back(i, j);
        break;
      case Verdict::Kind::Undecided:
        unresolved_pairs.emplace_back(i, j);
        res.unresolved.push_back({terms[i].first, terms[j].first, failure_reason(d.verdict)});
        break;
    }
    res.decisions.push_back(std::move(d));
  }

  // Transitivity hygiene: a Distinct verdict inside one merged class means the
  // decider contradicted itself.
  for (auto [i, j] : distinct_pairs)
    if (uf.find(i) == uf.find(j))
      throw std::logic_error("distinct verdict between merged terms");

  if (opts.verify_all_pairs) {
    for (auto [i, j] : pairs) {
      Verdict v = decide_twisted(f, terms[j].first, terms[i].first, cfg);
      if (uf.find(i) == uf.find(j) && v.kind == Verdict::Kind::Distinct)
        throw std::logic_error("independent decision contradicts a merge");
      if (uf.find(i) != uf.find(j) && v.kind == Verdict::Kind::Conjugate)
        throw std::logic_error("independent decision contradicts a separation");
    }
  }

  // The true partition lies between the decided one and the merge of all
  // unresolved pairs; when both extremes count the same the number is pinned.
  long long decided = nonzero_class_count(uf, terms);
  UnionFind optimistic = uf;
  for (auto [i, j] : unresolved_pairs) optimistic.unite(i, j);
  long long lower = nonzero_class_count(optimistic, terms);
  if (lower == decided) {
    res.status = NielsenResult::Status::Exact;
    res.value = decided;
  } else {
    res.status = NielsenResult::Status::Partial;
    res.value = lower;
  }

  // Class report under the decided partition, ordered by least member.
  std::map<int, ClassReport> classes;
  for (int i = 0; i < m; ++i) {
    int root = uf.find(i);
    auto it = classes.find(root);
    if (it == classes.end()) {
      // Term order is word order, so the first member seen is the least.
      ClassReport r{terms[i].first, BigInt(0), {}};
      it = classes.emplace(root, std::move(r)).first;
    }
    it->second.total += terms[i].second;
    it->second.members.push_back(terms[i]);
  }
  for (auto& [root, r] : classes) res.classes.push_back(std::move(r));
  std::sort(res.classes.begin(), res.classes.end(),
            [](const ClassReport& a, const ClassReport& b) {
              return a.representative < b.representative;
            });
  return res;
}

}  // namespace twc
