#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace twc {

// Arbitrary-precision signed integer with a closed constructor set.
//
// The closed set matters: Eigen resolves its operator overloads by probing
// is_convertible against candidate scalar types, and an open converting
// constructor template would drag whole matrix expressions into that probe.
// Keeping only the constructors below makes every such probe a clean "no".
class BigInt {
public:
  using Rep = boost::multiprecision::cpp_int;

  BigInt() : v_(0) {}
  BigInt(int v) : v_(v) {}
  BigInt(long v) : v_(v) {}
  BigInt(long long v) : v_(v) {}
  BigInt(unsigned int v) : v_(v) {}
  BigInt(unsigned long v) : v_(v) {}
  BigInt(unsigned long long v) : v_(v) {}
  explicit BigInt(const std::string& decimal) : v_(decimal) {}
  explicit BigInt(Rep v) : v_(std::move(v)) {}

  const Rep& rep() const { return v_; }

  BigInt& operator+=(const BigInt& o) { v_ += o.v_; return *this; }
  BigInt& operator-=(const BigInt& o) { v_ -= o.v_; return *this; }
  BigInt& operator*=(const BigInt& o) { v_ *= o.v_; return *this; }
  // Division and remainder truncate toward zero, like built-in integers.
  BigInt& operator/=(const BigInt& o) { v_ /= o.v_; return *this; }
  BigInt& operator%=(const BigInt& o) { v_ %= o.v_; return *this; }

  friend BigInt operator+(BigInt a, const BigInt& b) { return a += b; }
  friend BigInt operator-(BigInt a, const BigInt& b) { return a -= b; }
  friend BigInt operator*(BigInt a, const BigInt& b) { return a *= b; }
  friend BigInt operator/(BigInt a, const BigInt& b) { return a /= b; }
  friend BigInt operator%(BigInt a, const BigInt& b) { return a %= b; }

  BigInt operator-() const { BigInt r; r.v_ = -v_; return r; }
  BigInt operator+() const { return *this; }

  friend bool operator==(const BigInt& a, const BigInt& b) { return a.v_ == b.v_; }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return a.v_ != b.v_; }
  friend bool operator<(const BigInt& a, const BigInt& b) { return a.v_ < b.v_; }
  friend bool operator<=(const BigInt& a, const BigInt& b) { return a.v_ <= b.v_; }
  friend bool operator>(const BigInt& a, const BigInt& b) { return a.v_ > b.v_; }
  friend bool operator>=(const BigInt& a, const BigInt& b) { return a.v_ >= b.v_; }

  bool is_zero() const { return v_.is_zero(); }
  bool is_odd() const { return boost::multiprecision::bit_test(abs_rep(), 0); }
  int sign() const { return v_.sign(); }

  friend std::ostream& operator<<(std::ostream& os, const BigInt& x) { return os << x.v_; }

private:
  Rep abs_rep() const { return boost::multiprecision::abs(v_); }
  Rep v_;
};

inline std::string to_string(const BigInt& x) { return x.rep().str(); }

inline BigInt abs(const BigInt& x) { return x.sign() < 0 ? -x : x; }

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  return BigInt(boost::multiprecision::gcd(a.rep(), b.rep()));
}

// Quotient of an exactly divisible pair; throws if the division has a remainder.
inline BigInt exact_div(const BigInt& a, const BigInt& b) {
  if (b.is_zero()) throw std::domain_error("exact_div by zero");
  if (!(a % b).is_zero()) throw std::domain_error("exact_div with nonzero remainder");
  return a / b;
}

// binomial(n, k) for integer n (possibly negative) and small k >= 0.
inline BigInt binomial(const BigInt& n, unsigned k) {
  BigInt r(1);
  for (unsigned i = 0; i < k; ++i) {
    r *= n - BigInt(i);
    r = exact_div(r, BigInt(i + 1));  // product of i+1 consecutive integers
  }
  return r;
}

// Checked narrowing; throws std::overflow_error when out of range.
inline long long to_long_long(const BigInt& x) {
  static const BigInt lo(std::numeric_limits<long long>::min());
  static const BigInt hi(std::numeric_limits<long long>::max());
  if (x < lo || hi < x) throw std::overflow_error("BigInt does not fit in long long");
  return x.rep().convert_to<long long>();
}

}  // namespace twc

namespace Eigen {

template <>
struct NumTraits<twc::BigInt> : GenericNumTraits<twc::BigInt> {
  using Real = twc::BigInt;
  using NonInteger = twc::BigInt;
  using Nested = twc::BigInt;
  using Literal = long long;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 60,
    MulCost = 120,
  };
  static inline Real epsilon() { return twc::BigInt(0); }
  static inline Real dummy_precision() { return twc::BigInt(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
