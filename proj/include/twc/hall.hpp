#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "twc/matrix.hpp"
#include "twc/word.hpp"

namespace twc {

// Raised when a request exceeds a configured complexity bound (weight caps,
// conjugation exponent bounds and the like), as opposed to invalid input.
class ComplexityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// One basic commutator. Generators are the weight-1 entries; a bracket stores
// the basis indices of its two components, which always precede it.
struct BasicCommutator {
  int weight = 1;
  int generator = 0;       // 1-based generator index when weight = 1, else 0
  int left = -1, right = -1;  // basis indices of components for brackets

  bool is_generator() const { return weight == 1; }
};

// Number of basic commutators of the given weight on k generators
// (Witt's formula); always an exact integer.
long long witt_count(int rank, int weight);

// Ordered Hall basis of basic commutators of weight <= max_weight, rank
// generators. Entries are ordered by weight, then lexicographically by the
// (left, right) component indices; generators come first in index order.
// A bracket [u, v] is basic iff u < v and, when v = [x, y], x <= u.
//
// Immutable after construction apart from internal memo tables, which are
// guarded; instances are shared and safe to use from many threads.
class HallBasis {
public:
  int rank() const { return rank_; }
  int max_weight() const { return max_weight_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const BasicCommutator& entry(int idx) const { return entries_[idx]; }

  // Basis indices of weight-w entries form the range [begin, end).
  int weight_begin(int w) const { return weight_begin_[w - 1]; }
  int weight_end(int w) const { return weight_begin_[w]; }
  int weight_count(int w) const { return weight_end(w) - weight_begin(w); }

  // The commutator written out as a word, brackets expanded as
  // [x, y] = x y x^-1 y^-1.
  const Word& expand(int idx) const { return expansions_[idx]; }

  // Recursive bracket notation, e.g. "[a,[a,b]]".
  const std::string& entry_text(int idx) const { return texts_[idx]; }

private:
  friend std::shared_ptr<const HallBasis> build_basis(int rank, int max_weight, int hard_cap);
  friend class CollectorAccess;

  HallBasis(int rank, int max_weight);

  int rank_;
  int max_weight_;
  std::vector<BasicCommutator> entries_;
  std::vector<int> weight_begin_;  // size max_weight_+1; entry w-1 = first index of weight w
  std::vector<Word> expansions_;
  std::vector<std::string> texts_;

  struct ConjCache;
  std::shared_ptr<ConjCache> conj_cache_;  // memoized structure constants
};

// Shared, cached basis; instances for equal (rank, max_weight) are the same
// object. Throws ComplexityError when max_weight exceeds hard_cap.
std::shared_ptr<const HallBasis> build_basis(int rank, int max_weight, int hard_cap = 6);

// Element of the free class-n nilpotent group on basis->rank() generators, as
// the exponent vector of its Hall normal form over basis entries.
class NilpotentElement {
public:
  explicit NilpotentElement(std::shared_ptr<const HallBasis> basis);
  NilpotentElement(std::shared_ptr<const HallBasis> basis, IntVector exponents);

  const std::shared_ptr<const HallBasis>& basis() const { return basis_; }
  const IntVector& exponents() const { return exponents_; }
  const BigInt& exponent(int idx) const { return exponents_(idx); }
  bool is_identity() const;

  friend bool operator==(const NilpotentElement& a, const NilpotentElement& b);
  friend bool operator!=(const NilpotentElement& a, const NilpotentElement& b) {
    return !(a == b);
  }

private:
  std::shared_ptr<const HallBasis> basis_;
  IntVector exponents_;
};

// Hall normal form of the image of w in the class-n quotient, by
// collection-from-the-left with memoized structure constants.
NilpotentElement collect(const Word& w, const std::shared_ptr<const HallBasis>& basis);

// Same value as collect, computed along an independent route: the word's
// series expansion in the truncated free associative ring, peeled weight by
// weight against the Lie monomials of the basis. Slower; used to cross-check.
NilpotentElement collect_by_series(const Word& w, const std::shared_ptr<const HallBasis>& basis);

NilpotentElement nmultiply(const NilpotentElement& x, const NilpotentElement& y);
NilpotentElement ninvert(const NilpotentElement& x);
NilpotentElement npow(const NilpotentElement& x, const BigInt& e);

// "a * b * [a,b]^-1" style rendering of the normal form; identity prints "1".
std::string normal_form_text(const NilpotentElement& x);

// The quotient map induced by an endomorphism of free groups, together with
// its graded action. graded(w) is the weight-w block: column j holds the
// weight-w exponents of the image of the j-th weight-w domain basis entry.
struct InducedMap {
  std::shared_ptr<const HallBasis> domain;
  std::shared_ptr<const HallBasis> codomain;
  std::vector<NilpotentElement> generator_images;  // one per domain generator
  std::vector<NilpotentElement> entry_images;      // one per domain basis entry
  std::vector<IntMatrix> graded_matrices;          // indexed by weight-1

  const IntMatrix& graded(int w) const { return graded_matrices[w - 1]; }
};

// Images of all domain basis entries in the codomain quotient of the same
// max-weight; bracket entries map to brackets of images.
InducedMap induced_map(const Endomorphism& f, const std::shared_ptr<const HallBasis>& domain_basis);

NilpotentElement apply(const InducedMap& m, const NilpotentElement& x);

}  // namespace twc
