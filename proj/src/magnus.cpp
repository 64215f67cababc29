#include "magnus.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

#include "twc/budget.hpp"

namespace twc::detail {

namespace {

using Rat = boost::multiprecision::cpp_rational;

std::uint64_t pow_u64(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

TruncPoly poly_one(int rank, int level) {
  TruncPoly p;
  p.rank = rank;
  p.level = level;
  p.terms.emplace(MonoKey{0, 0}, BigInt(1));
  return p;
}

void poly_add_term(TruncPoly& p, MonoKey key, const BigInt& c) {
  if (c.is_zero() || key.first > p.level) return;
  auto [it, inserted] = p.terms.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) p.terms.erase(it);
  }
}

TruncPoly poly_mul(const TruncPoly& a, const TruncPoly& b) {
  TruncPoly r;
  r.rank = a.rank;
  r.level = a.level;
  const std::uint64_t k = static_cast<std::uint64_t>(a.rank);
  for (const auto& [ka, ca] : a.terms) {
    for (const auto& [kb, cb] : b.terms) {
      int d = ka.first + kb.first;
      if (d > r.level) break;  // b's terms are degree-sorted
      poly_add_term(r, {d, ka.second * pow_u64(k, kb.first) + kb.second}, ca * cb);
    }
  }
  return r;
}

bool poly_is_one(const TruncPoly& p) {
  return p.terms.size() == 1 && p.terms.begin()->first == MonoKey{0, 0} &&
         p.terms.begin()->second == BigInt(1);
}

void poly_mul_gen_right(TruncPoly& p, int gen0, int sign) {
  const std::uint64_t k = static_cast<std::uint64_t>(p.rank);
  const std::uint64_t g = static_cast<std::uint64_t>(gen0);
  std::map<MonoKey, BigInt> out = p.terms;
  if (sign > 0) {
    for (const auto& [key, c] : p.terms) {
      if (key.first + 1 > p.level) continue;
      MonoKey nk{key.first + 1, key.second * k + g};
      auto [it, inserted] = out.emplace(nk, c);
      if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  } else {
    for (const auto& [key, c] : p.terms) {
      std::uint64_t code = key.second;
      BigInt coeff = c;
      for (int j = 1; key.first + j <= p.level; ++j) {
        code = code * k + g;
        coeff = -coeff;
        MonoKey nk{key.first + j, code};
        auto [it, inserted] = out.emplace(nk, coeff);
        if (!inserted) {
          it->second += coeff;
          if (it->second.is_zero()) out.erase(it);
        }
      }
    }
  }
  p.terms = std::move(out);
}

TruncPoly series_of_word(const Word& w, int level) {
  TruncPoly p = poly_one(w.rank(), level);
  int steps = 0;
  for (Letter l : w.letters()) {
    poly_mul_gen_right(p, std::abs(l) - 1, l > 0 ? 1 : -1);
    if ((++steps & 63) == 0) budget::check();
  }
  return p;
}

TruncPoly poly_int_power(const TruncPoly& m, const BigInt& e) {
  TruncPoly n = m;  // N = m - 1
  n.terms.erase(MonoKey{0, 0});
  TruncPoly acc = poly_one(m.rank, m.level);
  TruncPoly npow = poly_one(m.rank, m.level);
  for (unsigned j = 1;; ++j) {
    npow = poly_mul(npow, n);
    if (npow.terms.empty()) break;
    BigInt c = binomial(e, j);
    if (!c.is_zero()) {
      TruncPoly scaled = npow;
      for (auto& [key, v] : scaled.terms) v *= c;
      for (const auto& [key, v] : scaled.terms) poly_add_term(acc, key, v);
    }
  }
  return acc;
}

std::map<std::uint64_t, BigInt> homogeneous_part(const TruncPoly& p, int d) {
  std::map<std::uint64_t, BigInt> out;
  for (auto it = p.terms.lower_bound(MonoKey{d, 0});
       it != p.terms.end() && it->first.first == d; ++it)
    out.emplace(it->first.second, it->second);
  return out;
}

namespace {

// Row-echelon store over the rationals for the span of the basic Lie
// monomials of one (rank, weight): each row is normalized with unit leading
// coefficient and remembers its expression in the original columns.
class LieSolver {
public:
  LieSolver(int rank, int weight) : rank_(rank), weight_(weight) {
    auto basis = build_basis(rank, weight);
    const int begin = basis->weight_begin(weight), end = basis->weight_end(weight);
    ncols_ = end - begin;

    // Lie polynomials of every basis entry up to this weight, recursively:
    // generators are the variables, brackets are ring commutators.
    std::vector<TruncPoly> lie(basis->size());
    for (int idx = 0; idx < basis->size(); ++idx) {
      const BasicCommutator& c = basis->entry(idx);
      if (c.is_generator()) {
        TruncPoly p;
        p.rank = rank;
        p.level = weight;
        p.terms.emplace(MonoKey{1, static_cast<std::uint64_t>(c.generator - 1)}, BigInt(1));
        lie[idx] = std::move(p);
      } else {
        TruncPoly uv = poly_mul(lie[c.left], lie[c.right]);
        TruncPoly vu = poly_mul(lie[c.right], lie[c.left]);
        for (auto& [key, v] : vu.terms) v = -v;
        for (const auto& [key, v] : vu.terms) poly_add_term(uv, key, v);
        lie[idx] = std::move(uv);
      }
      budget::check();
    }

    columns_.resize(ncols_);
    for (int j = 0; j < ncols_; ++j) {
      for (const auto& [key, c] : lie[begin + j].terms)
        columns_[j].emplace_back(key.second, c);
      insert_column(j);
      budget::check();
    }
  }

  IntVector solve(const std::map<std::uint64_t, BigInt>& lambda) const {
    std::map<std::uint64_t, Rat> r;
    for (const auto& [code, c] : lambda) r.emplace(code, Rat(c.rep()));
    std::vector<Rat> e(ncols_, Rat(0));
    while (!r.empty()) {
      auto lead = r.begin();
      auto row = rows_.find(lead->first);
      if (row == rows_.end())
        throw std::logic_error("element outside the basic Lie monomial span");
      Rat coef = lead->second;
      r.erase(lead);
      for (const auto& [code, v] : row->second.vec) {
        auto [it, inserted] = r.emplace(code, -coef * v);
        if (!inserted) {
          it->second -= coef * v;
          if (it->second == 0) r.erase(it);
        } else if (it->second == 0) {
          r.erase(it);
        }
      }
      for (const auto& [j, v] : row->second.combo) e[j] += coef * v;
    }
    IntVector out(ncols_);
    for (int j = 0; j < ncols_; ++j) {
      if (boost::multiprecision::denominator(e[j]) != 1)
        throw std::logic_error("non-integer coordinates over the Lie basis");
      out(j) = BigInt(boost::multiprecision::cpp_int(boost::multiprecision::numerator(e[j])));
    }
    verify(lambda, out);
    return out;
  }

private:
  struct Row {
    std::map<std::uint64_t, Rat> vec;  // trailing part; leading coeff 1 implicit
    std::map<int, Rat> combo;          // expression in original columns
  };

  void insert_column(int j) {
    std::map<std::uint64_t, Rat> v;
    for (const auto& [code, c] : columns_[j]) v.emplace(code, Rat(c.rep()));
    std::map<int, Rat> combo{{j, Rat(1)}};
    while (!v.empty()) {
      auto lead = v.begin();
      auto row = rows_.find(lead->first);
      if (row == rows_.end()) {
        Rat pivot = lead->second;
        std::uint64_t code = lead->first;
        v.erase(lead);
        Row nr;
        for (auto& [c2, val] : v) nr.vec.emplace(c2, val / pivot);
        for (auto& [c2, val] : combo) nr.combo.emplace(c2, val / pivot);
        rows_.emplace(code, std::move(nr));
        return;
      }
      Rat coef = lead->second;
      v.erase(lead);
      for (const auto& [code, val] : row->second.vec) {
        auto [it, inserted] = v.emplace(code, -coef * val);
        if (!inserted) {
          it->second -= coef * val;
          if (it->second == 0) v.erase(it);
        } else if (it->second == 0) {
          v.erase(it);
        }
      }
      for (const auto& [c2, val] : row->second.combo) {
        auto [it, inserted] = combo.emplace(c2, -coef * val);
        if (!inserted) it->second -= coef * val;
      }
    }
    throw std::logic_error("dependent basic Lie monomials");  // cannot happen
  }

  void verify(const std::map<std::uint64_t, BigInt>& lambda, const IntVector& e) const {
    std::map<std::uint64_t, BigInt> acc;
    for (int j = 0; j < ncols_; ++j) {
      if (e(j).is_zero()) continue;
      for (const auto& [code, c] : columns_[j]) {
        auto [it, inserted] = acc.emplace(code, e(j) * c);
        if (!inserted) {
          it->second += e(j) * c;
          if (it->second.is_zero()) acc.erase(it);
        }
      }
    }
    if (acc != lambda) throw std::logic_error("Lie coordinate verification failed");
  }

  int rank_, weight_, ncols_ = 0;
  std::vector<std::vector<std::pair<std::uint64_t, BigInt>>> columns_;
  std::map<std::uint64_t, Row> rows_;
};

const LieSolver& lie_solver(int rank, int weight) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<LieSolver>> cache;
  std::unique_lock lock(mu);
  auto key = std::make_pair(rank, weight);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  lock.unlock();
  auto solver = std::make_unique<LieSolver>(rank, weight);  // may throw on timeout
  lock.lock();
  auto [it2, inserted] = cache.emplace(key, std::move(solver));
  return *it2->second;
}

// Series of a basis entry's word expansion, cached per (rank, level, index).
const TruncPoly& entry_series(const HallBasis& basis, int idx) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<TruncPoly>> cache;
  std::unique_lock lock(mu);
  auto key = std::make_tuple(basis.rank(), basis.max_weight(), idx);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  lock.unlock();
  auto p = std::make_unique<TruncPoly>(series_of_word(basis.expand(idx), basis.max_weight()));
  lock.lock();
  auto [it2, inserted] = cache.emplace(key, std::move(p));
  return *it2->second;
}

}  // namespace

IntVector solve_lie(int rank, int weight, const std::map<std::uint64_t, BigInt>& lambda) {
  return lie_solver(rank, weight).solve(lambda);
}

IntVector series_collect(const Word& w, const HallBasis& basis) {
  const int level = basis.max_weight();
  TruncPoly r = series_of_word(w, level);
  IntVector e = IntVector::Zero(basis.size());
  for (int wgt = 1; wgt <= level; ++wgt) {
    budget::check();
    std::map<std::uint64_t, BigInt> lambda = homogeneous_part(r, wgt);
    if (lambda.empty()) continue;
    IntVector x = solve_lie(basis.rank(), wgt, lambda);
    const int begin = basis.weight_begin(wgt);
    for (int j = 0; j < x.size(); ++j) {
      e(begin + j) = x(j);
      if (x(j).is_zero()) continue;
      // Divide the block off on the left so the residue starts at weight+1.
      r = poly_mul(poly_int_power(entry_series(basis, begin + j), -x(j)), r);
    }
  }
  if (!poly_is_one(r))
    throw std::logic_error("series collection left a nontrivial residue");
  return e;
}

}  // namespace twc::detail
