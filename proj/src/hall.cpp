#include "twc/hall.hpp"

#include <cstdlib>
#include <mutex>
#include <tuple>
#include <utility>

#include "magnus.hpp"
#include "twc/budget.hpp"
#include "twc/text.hpp"

namespace twc {

long long witt_count(int rank, int weight) {
  if (rank < 1 || weight < 1) throw std::invalid_argument("rank and weight must be positive");
  // Moebius mu(d) over divisors d of the weight.
  long long sum = 0;
  for (int d = 1; d <= weight; ++d) {
    if (weight % d != 0) continue;
    int m = d, mu = 1;
    bool square = false;
    for (int p = 2; p * p <= m; ++p) {
      if (m % p != 0) continue;
      m /= p;
      mu = -mu;
      if (m % p == 0) square = true;
      while (m % p == 0) m /= p;
    }
    if (square) continue;
    if (m > 1) mu = -mu;
    long long pw = 1;
    for (int i = 0; i < weight / d; ++i) pw *= rank;
    sum += mu * pw;
  }
  return sum / weight;
}

struct HallBasis::ConjCache {
  std::mutex mu;
  std::map<std::tuple<int, int, int>, IntVector> table;
};

HallBasis::HallBasis(int rank, int max_weight) : rank_(rank), max_weight_(max_weight) {
  weight_begin_.assign(max_weight + 1, 0);
  for (int i = 1; i <= rank; ++i) {
    BasicCommutator c;
    c.weight = 1;
    c.generator = i;
    entries_.push_back(c);
    expansions_.push_back(Word::generator(rank, i));
    texts_.push_back(generator_name(rank, i));
  }
  weight_begin_[0] = 0;
  weight_begin_[1] = static_cast<int>(entries_.size());

  for (int w = 2; w <= max_weight; ++w) {
    const int known = static_cast<int>(entries_.size());
    for (int u = 0; u < known; ++u) {
      for (int v = u + 1; v < known; ++v) {
        if (entries_[u].weight + entries_[v].weight != w) continue;
        if (!entries_[v].is_generator() && entries_[v].left > u) continue;
        BasicCommutator c;
        c.weight = w;
        c.left = u;
        c.right = v;
        entries_.push_back(c);
        const Word &wu = expansions_[u], &wv = expansions_[v];
        expansions_.push_back(multiply(multiply(wu, wv), multiply(invert(wu), invert(wv))));
        texts_.push_back("[" + texts_[u] + "," + texts_[v] + "]");
      }
    }
    weight_begin_[w] = static_cast<int>(entries_.size());
  }
  conj_cache_ = std::make_shared<ConjCache>();
}

std::shared_ptr<const HallBasis> build_basis(int rank, int max_weight, int hard_cap) {
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
  if (max_weight < 1) throw std::invalid_argument("max weight must be at least 1");
  if (max_weight > hard_cap)
    throw ComplexityError("max weight " + std::to_string(max_weight) +
                          " exceeds the hard cap " + std::to_string(hard_cap));
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const HallBasis>> cache;
  std::scoped_lock lock(mu);
  auto key = std::make_pair(rank, max_weight);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::shared_ptr<const HallBasis>(new HallBasis(rank, max_weight)))
             .first;
  return it->second;
}

NilpotentElement::NilpotentElement(std::shared_ptr<const HallBasis> basis)
    : basis_(std::move(basis)), exponents_(IntVector::Zero(basis_->size())) {}

NilpotentElement::NilpotentElement(std::shared_ptr<const HallBasis> basis, IntVector exponents)
    : basis_(std::move(basis)), exponents_(std::move(exponents)) {
  if (exponents_.size() != basis_->size())
    throw std::invalid_argument("exponent vector length differs from basis size");
}

bool NilpotentElement::is_identity() const { return twc::is_zero(exponents_); }

bool operator==(const NilpotentElement& a, const NilpotentElement& b) {
  if (a.basis_->rank() != b.basis_->rank() ||
      a.basis_->max_weight() != b.basis_->max_weight())
    return false;
  for (Eigen::Index i = 0; i < a.exponents_.size(); ++i)
    if (a.exponents_(i) != b.exponents_(i)) return false;
  return true;
}

// Internal access point for the memoized structure constants.
class CollectorAccess {
public:
  // Normal form of c_i^{-s} c_j c_i^{s} for j > i, s = +-1: exponent 1 on c_j
  // plus corrections of weight >= weight(i) + weight(j), all at indices > j.
  // Bootstrapped through the series route, so no circularity with collect.
  static const IntVector& conj_basis(const HallBasis& b, int j, int i, int s) {
    auto& cache = *b.conj_cache_;
    const auto key = std::make_tuple(j, i, s);
    {
      std::scoped_lock lock(cache.mu);
      auto it = cache.table.find(key);
      if (it != cache.table.end()) return it->second;
    }
    Word ui = s > 0 ? b.expand(i) : invert(b.expand(i));
    Word w = multiply(multiply(invert(ui), b.expand(j)), ui);
    IntVector v = detail::series_collect(w, b);
    for (int idx = 0; idx <= j; ++idx) {
      if (v(idx) != BigInt(idx == j ? 1 : 0))
        throw std::logic_error("structure constant fails its support invariant");
    }
    std::scoped_lock lock(cache.mu);
    return cache.table.emplace(key, std::move(v)).first->second;
  }
};

namespace {

constexpr long long kConjExponentCap = 100000;

bool tail_nonempty(const IntVector& x, int i) {
  for (Eigen::Index j = i + 1; j < x.size(); ++j)
    if (!x(j).is_zero()) return true;
  return false;
}

IntVector nf_mult_power(const HallBasis& b, IntVector x, int i, const BigInt& e);

// x * y for normal-form exponent vectors, folding y's factors in basis order.
IntVector nmul(const HallBasis& b, IntVector x, const IntVector& y) {
  for (Eigen::Index j = 0; j < y.size(); ++j)
    if (!y(j).is_zero()) x = nf_mult_power(b, std::move(x), static_cast<int>(j), y(j));
  return x;
}

IntVector ninv(const HallBasis& b, const IntVector& x) {
  IntVector acc = IntVector::Zero(x.size());
  for (Eigen::Index j = x.size() - 1; j >= 0; --j)
    if (!x(j).is_zero()) acc = nf_mult_power(b, std::move(acc), static_cast<int>(j), -x(j));
  return acc;
}

IntVector npow_vec(const HallBasis& b, const IntVector& x, const BigInt& e) {
  IntVector base = e.sign() < 0 ? ninv(b, x) : x;
  BigInt m = abs(e);
  IntVector acc = IntVector::Zero(x.size());
  if (m.is_zero()) return acc;
  const auto& rep = m.rep();
  for (int bit = static_cast<int>(boost::multiprecision::msb(rep)); bit >= 0; --bit) {
    acc = nmul(b, acc, acc);
    if (boost::multiprecision::bit_test(rep, static_cast<unsigned>(bit)))
      acc = nmul(b, std::move(acc), base);
  }
  return acc;
}

// Normal form of c_i^{-s} t c_i^{s} for a tail t supported on indices > i.
IntVector conj_once(const HallBasis& b, const IntVector& t, int i, int s) {
  budget::check();
  IntVector acc = IntVector::Zero(t.size());
  for (Eigen::Index j = i + 1; j < t.size(); ++j) {
    if (t(j).is_zero()) continue;
    const IntVector& cb = CollectorAccess::conj_basis(b, static_cast<int>(j), i, s);
    acc = nmul(b, std::move(acc), npow_vec(b, cb, t(j)));
  }
  return acc;
}

// x * c_i^e. The factors at indices <= i absorb e directly; the tail beyond i
// is conjugated past c_i^e, its corrections landing strictly above i.
IntVector nf_mult_power(const HallBasis& b, IntVector x, int i, const BigInt& e) {
  if (e.is_zero()) return x;
  if (!tail_nonempty(x, i)) {
    x(i) += e;
    return x;
  }
  IntVector tail = IntVector::Zero(x.size());
  for (Eigen::Index j = i + 1; j < x.size(); ++j) {
    tail(j) = x(j);
    x(j) = BigInt(0);
  }
  x(i) += e;
  BigInt m = abs(e);
  if (m > BigInt(kConjExponentCap))
    throw ComplexityError("conjugation exponent exceeds the supported bound");
  const int s = e.sign();
  long long reps = to_long_long(m);
  for (long long r = 0; r < reps; ++r) tail = conj_once(b, tail, i, s);
  x += tail;
  return x;
}

const std::shared_ptr<const HallBasis>& check_same_basis(const NilpotentElement& a,
                                                         const NilpotentElement& b) {
  if (a.basis()->rank() != b.basis()->rank() ||
      a.basis()->max_weight() != b.basis()->max_weight())
    throw std::invalid_argument("elements over different bases");
  return a.basis();
}

NilpotentElement bracket(const NilpotentElement& x, const NilpotentElement& y) {
  return nmultiply(nmultiply(x, y), nmultiply(ninvert(x), ninvert(y)));
}

}  // namespace

NilpotentElement collect(const Word& w, const std::shared_ptr<const HallBasis>& basis) {
  if (w.rank() != basis->rank())
    throw std::invalid_argument("word rank differs from basis rank");
  IntVector x = IntVector::Zero(basis->size());
  int steps = 0;
  for (Letter l : w.letters()) {
    x = nf_mult_power(*basis, std::move(x), std::abs(l) - 1, BigInt(l > 0 ? 1 : -1));
    if ((++steps & 63) == 0) budget::check();
  }
  return NilpotentElement(basis, std::move(x));
}

NilpotentElement collect_by_series(const Word& w, const std::shared_ptr<const HallBasis>& basis) {
  if (w.rank() != basis->rank())
    throw std::invalid_argument("word rank differs from basis rank");
  return NilpotentElement(basis, detail::series_collect(w, *basis));
}

NilpotentElement nmultiply(const NilpotentElement& x, const NilpotentElement& y) {
  const auto& basis = check_same_basis(x, y);
  return NilpotentElement(basis, nmul(*basis, x.exponents(), y.exponents()));
}

NilpotentElement ninvert(const NilpotentElement& x) {
  return NilpotentElement(x.basis(), ninv(*x.basis(), x.exponents()));
}

NilpotentElement npow(const NilpotentElement& x, const BigInt& e) {
  return NilpotentElement(x.basis(), npow_vec(*x.basis(), x.exponents(), e));
}

std::string normal_form_text(const NilpotentElement& x) {
  std::string out;
  const HallBasis& b = *x.basis();
  for (int i = 0; i < b.size(); ++i) {
    const BigInt& e = x.exponent(i);
    if (e.is_zero()) continue;
    if (!out.empty()) out += " * ";
    out += b.entry_text(i);
    if (e != BigInt(1)) out += "^" + to_string(e);
  }
  return out.empty() ? "1" : out;
}

InducedMap induced_map(const Endomorphism& f,
                       const std::shared_ptr<const HallBasis>& domain_basis) {
  if (f.domain_rank() != domain_basis->rank())
    throw std::invalid_argument("domain rank differs from basis rank");
  InducedMap m;
  m.domain = domain_basis;
  m.codomain = build_basis(f.codomain_rank(), domain_basis->max_weight(),
                           domain_basis->max_weight());
  m.entry_images.reserve(domain_basis->size());
  for (int idx = 0; idx < domain_basis->size(); ++idx) {
    const BasicCommutator& c = domain_basis->entry(idx);
    if (c.is_generator())
      m.entry_images.push_back(collect(apply(f, domain_basis->expand(idx)), m.codomain));
    else
      m.entry_images.push_back(bracket(m.entry_images[c.left], m.entry_images[c.right]));
  }
  m.generator_images.assign(m.entry_images.begin(),
                            m.entry_images.begin() + domain_basis->rank());

  for (int w = 1; w <= domain_basis->max_weight(); ++w) {
    const int dom_begin = domain_basis->weight_begin(w);
    const int rows = m.codomain->weight_count(w), cols = domain_basis->weight_count(w);
    IntMatrix g = IntMatrix::Zero(rows, cols);
    for (int j = 0; j < cols; ++j) {
      const IntVector& img = m.entry_images[dom_begin + j].exponents();
      for (int idx = 0; idx < m.codomain->weight_begin(w); ++idx)
        if (!img(idx).is_zero())
          throw std::logic_error("induced image violates the weight filtration");
      g.col(j) = img.segment(m.codomain->weight_begin(w), rows);
    }
    m.graded_matrices.push_back(std::move(g));
  }
  return m;
}

NilpotentElement apply(const InducedMap& m, const NilpotentElement& x) {
  if (x.basis()->rank() != m.domain->rank() ||
      x.basis()->max_weight() != m.domain->max_weight())
    throw std::invalid_argument("element basis differs from the map's domain");
  NilpotentElement acc(m.codomain);
  for (int j = 0; j < m.domain->size(); ++j)
    if (!x.exponent(j).is_zero()) acc = nmultiply(acc, npow(m.entry_images[j], x.exponent(j)));
  return acc;
}

}  // namespace twc
