#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "twc/group_ring.hpp"
#include "twc/text.hpp"

using namespace twc;

namespace {

Word rand_word(int rank, int max_len, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> gen(1, rank);
  std::uniform_int_distribution<int> sign(0, 1);
  std::vector<Letter> letters;
  int n = len(rng);
  for (int i = 0; i < n; ++i) letters.push_back(sign(rng) ? gen(rng) : -gen(rng));
  return Word(rank, letters);
}

GroupRingElement term(int rank, const char* word, long long coeff) {
  return GroupRingElement(parse_word(rank, word), BigInt(coeff));
}

}  // namespace

TEST_CASE("fox derivative fixtures") {
  CHECK(fox_derivative(parse_word(2, "ab"), 1) == GroupRingElement::one(2));
  CHECK(fox_derivative(parse_word(2, "b^2a^4"), 2) ==
        GroupRingElement::one(2) + term(2, "b", 1));
  CHECK(fox_derivative(parse_word(2, "a^-1"), 1) == term(2, "a^-1", -1));
  CHECK(fox_derivative(parse_word(2, "b"), 1).is_zero());
  CHECK_THROWS_AS(fox_derivative(parse_word(2, "ab"), 3), std::invalid_argument);
}

TEST_CASE("product rule holds on random pairs") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 1000; ++t) {
    Word u = rand_word(3, 6, rng), v = rand_word(3, 6, rng);
    for (int i = 1; i <= 3; ++i) {
      GroupRingElement left = fox_derivative(multiply(u, v), i);
      GroupRingElement right =
          fox_derivative(u, i) + GroupRingElement(u) * fox_derivative(v, i);
      CHECK(left == right);
    }
  }
}

TEST_CASE("fundamental identity w - 1 = sum d_i(w) (g_i - 1)") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 500; ++t) {
    Word w = rand_word(3, 8, rng);
    GroupRingElement sum = GroupRingElement::zero(3);
    for (int i = 1; i <= 3; ++i) {
      GroupRingElement gi_minus_1 =
          GroupRingElement(Word::generator(3, i)) - GroupRingElement::one(3);
      sum += fox_derivative(w, i) * gi_minus_1;
    }
    CHECK(sum == GroupRingElement(w) - GroupRingElement::one(3));
  }
}

TEST_CASE("reidemeister trace fixtures") {
  GroupRingElement rt1 = reidemeister_trace(parse_endomorphism(2, 2, "a=ab, b=b^2a^4"));
  CHECK(rt1 == term(2, "1", -1) - term(2, "b", 1));
  CHECK(to_string(rt1) == "-1 - b");

  GroupRingElement rt2 =
      reidemeister_trace(parse_endomorphism(2, 2, "a=aba^-1, b=a^-2b^4"));
  GroupRingElement expected2 = term(2, "aba^-1", 1) - term(2, "a^-2", 1) -
                               term(2, "a^-2b", 1) - term(2, "a^-2b^2", 1) -
                               term(2, "a^-2b^3", 1);
  CHECK(rt2 == expected2);
  CHECK(to_string(rt2) == "-a^-2 + aba^-1 - a^-2b - a^-2b^2 - a^-2b^3");

  GroupRingElement rt_id = reidemeister_trace(Endomorphism::identity(2));
  CHECK(rt_id == term(2, "1", -1));
  CHECK(to_string(rt_id) == "-1");

  CHECK_THROWS_AS(reidemeister_trace(parse_endomorphism(2, 3, "a=c, b=a")),
                  std::invalid_argument);
}

TEST_CASE("no zero coefficients survive collection") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> gen(1, 2);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int t = 0; t < 300; ++t) {
    std::vector<Word> images;
    for (int i = 0; i < 2; ++i) {
      Word w = rand_word(2, 5, rng);
      images.push_back(w);
    }
    GroupRingElement rt = reidemeister_trace(Endomorphism(2, 2, images));
    for (const auto& [w, c] : rt.terms()) CHECK(c != BigInt(0));
  }
  // Cancellation drops terms entirely: d(a)/da - d(a)/da = 0.
  GroupRingElement zero = fox_derivative(parse_word(2, "a"), 1) -
                          fox_derivative(parse_word(2, "a"), 1);
  CHECK(zero.is_zero());
  CHECK(zero.terms().empty());
}

TEST_CASE("augmentation sums coefficients") {
  CHECK(augmentation(term(2, "ab", 3) - term(2, "b", 5)) == BigInt(-2));
  CHECK(augmentation(GroupRingElement::zero(2)) == BigInt(0));
}

TEST_CASE("serialized form round trips through term construction") {
  GroupRingElement e = term(2, "1", 2) + term(2, "ab^-1", -3);
  CHECK(to_string(e) == "2 - 3ab^-1");
  CHECK(e.coefficient(parse_word(2, "ab^-1")) == BigInt(-3));
  CHECK(e.coefficient(parse_word(2, "b")) == BigInt(0));
}
