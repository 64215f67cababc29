#pragma once

#include <map>
#include <string>

#include "twc/bigint.hpp"
#include "twc/word.hpp"

namespace twc {

// Element of the integral group ring of a free group: a finite formal sum of
// words with integer coefficients. Terms with coefficient zero are dropped, so
// equality of the term maps is equality of elements.
class GroupRingElement {
public:
  explicit GroupRingElement(int rank);
  GroupRingElement(const Word& w, BigInt coefficient = BigInt(1));

  static GroupRingElement zero(int rank) { return GroupRingElement(rank); }
  static GroupRingElement one(int rank) { return GroupRingElement(Word::identity(rank)); }

  int rank() const { return rank_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Word, BigInt>& terms() const { return terms_; }
  BigInt coefficient(const Word& w) const;

  GroupRingElement& operator+=(const GroupRingElement& o);
  GroupRingElement& operator-=(const GroupRingElement& o);
  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  GroupRingElement operator-() const;

  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator*(const BigInt& c, const GroupRingElement& a);

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.rank_ == b.rank_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const GroupRingElement& a, const GroupRingElement& b) { return !(a == b); }

private:
  void add_term(const Word& w, const BigInt& c);

  int rank_;
  std::map<Word, BigInt> terms_;
};

// Sum of coefficients; the ring map induced by killing the group.
BigInt augmentation(const GroupRingElement& e);

// Free (Fox) partial derivative of w with respect to generator i. Satisfies
// d(uv) = du + u dv, d(g_i) = 1, d(g_i^-1) = -g_i^-1.
GroupRingElement fox_derivative(const Word& w, int generator_index);

// 1 - sum_i d(f(g_i))/d(g_i), for an endomorphism f of a free group.
GroupRingElement reidemeister_trace(const Endomorphism& f);

// Terms in word order (length, then letters); e.g. "-1 - b" or "2a + ab^-1".
std::string to_string(const GroupRingElement& e);

}  // namespace twc
