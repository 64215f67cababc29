#pragma once

// Internal engine behind collect_by_series and the structure-constant
// bootstrap: truncated free associative ring over the integers, plus an exact
// solver expressing homogeneous Lie elements in the basic-commutator basis.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "twc/bigint.hpp"
#include "twc/hall.hpp"
#include "twc/word.hpp"

namespace twc::detail {

// Monomial in noncommuting variables X_1..X_k: (degree, code), where code
// packs the digit string base k, leftmost factor most significant. Ordering
// of keys is degree-major, then lexicographic: the order the peeling and the
// row-echelon solver both rely on.
using MonoKey = std::pair<int, std::uint64_t>;

struct TruncPoly {
  int rank = 0;
  int level = 0;  // terms of degree > level are dropped
  std::map<MonoKey, BigInt> terms;
};

TruncPoly poly_one(int rank, int level);
void poly_add_term(TruncPoly& p, MonoKey key, const BigInt& c);
TruncPoly poly_mul(const TruncPoly& a, const TruncPoly& b);
bool poly_is_one(const TruncPoly& p);

// p *= (1 + X_g)           for sign = +1
// p *= sum_j (-X_g)^j      for sign = -1   (the series of (1 + X_g)^-1)
void poly_mul_gen_right(TruncPoly& p, int gen0, int sign);

// The word's image under g_i -> 1 + X_i, truncated at the given degree.
TruncPoly series_of_word(const Word& w, int level);

// (1 + N)^e for the poly m = 1 + N with N of positive lowest degree;
// e may be any integer, via the binomial series (finite by nilpotency).
TruncPoly poly_int_power(const TruncPoly& m, const BigInt& e);

// Degree-d homogeneous slice, keyed by monomial code.
std::map<std::uint64_t, BigInt> homogeneous_part(const TruncPoly& p, int d);

// Exponents (over weight-w basis entries of rank k) expressing the degree-w
// Lie element lambda as an integer combination of basic Lie monomials.
// Throws std::logic_error when lambda is not such a combination.
IntVector solve_lie(int rank, int weight, const std::map<std::uint64_t, BigInt>& lambda);

// Full series-route collection: exponent vector over all basis entries.
IntVector series_collect(const Word& w, const HallBasis& basis);

}  // namespace twc::detail
