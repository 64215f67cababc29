#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "twc/hall.hpp"
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

NilpotentElement unit(const std::shared_ptr<const HallBasis>& b, int idx) {
  IntVector v = IntVector::Zero(b->size());
  v(idx) = BigInt(1);
  return NilpotentElement(b, v);
}

}  // namespace

TEST_CASE("witt counts") {
  CHECK(witt_count(2, 1) == 2);
  CHECK(witt_count(2, 2) == 1);
  CHECK(witt_count(2, 3) == 2);
  CHECK(witt_count(2, 4) == 3);
  CHECK(witt_count(2, 5) == 6);
  CHECK(witt_count(3, 2) == 3);
}

TEST_CASE("basis matches witt counts for all small parameters") {
  for (int k = 1; k <= 4; ++k)
    for (int n = 1; n <= 5; ++n) {
      auto b = build_basis(k, n);
      for (int w = 1; w <= n; ++w) CHECK(b->weight_count(w) == witt_count(k, w));
    }
}

TEST_CASE("basis structure fixtures") {
  auto b22 = build_basis(2, 2);
  REQUIRE(b22->size() == 3);
  CHECK(b22->entry_text(0) == "a");
  CHECK(b22->entry_text(1) == "b");
  CHECK(b22->entry_text(2) == "[a,b]");
  CHECK(b22->entry(2).weight == 2);

  auto b23 = build_basis(2, 3);
  CHECK(b23->size() == 5);
  CHECK(b23->entry_text(3) == "[a,[a,b]]");
  CHECK(b23->entry_text(4) == "[b,[a,b]]");

  auto b32 = build_basis(3, 2);
  REQUIRE(b32->weight_count(2) == 3);
  CHECK(b32->entry_text(3) == "[a,b]");
  CHECK(b32->entry_text(4) == "[a,c]");
  CHECK(b32->entry_text(5) == "[b,c]");
}

TEST_CASE("basis instances are shared and capped") {
  CHECK(build_basis(2, 3).get() == build_basis(2, 3).get());
  CHECK_THROWS_AS(build_basis(2, 7), ComplexityError);
  CHECK_THROWS_AS(build_basis(0, 2), std::invalid_argument);
}

TEST_CASE("expand fixtures") {
  auto b = build_basis(2, 3);
  CHECK(b->expand(0) == parse_word(2, "a"));
  CHECK(b->expand(2) == parse_word(2, "aba^-1b^-1"));
  CHECK(b->expand(3).length() == 10);
}

TEST_CASE("collect fixtures in class 2") {
  auto b = build_basis(2, 2);
  NilpotentElement x = collect(parse_word(2, "ba"), b);
  CHECK(x.exponent(0) == BigInt(1));
  CHECK(x.exponent(1) == BigInt(1));
  CHECK(x.exponent(2) == BigInt(-1));
  CHECK(normal_form_text(x) == "a * b * [a,b]^-1");

  NilpotentElement c = collect(parse_word(2, "aba^-1b^-1"), b);
  CHECK(c == unit(b, 2));
  CHECK(normal_form_text(c) == "[a,b]");

  // Weight-3 commutators die in the class-2 quotient.
  auto b3 = build_basis(2, 3);
  for (int idx = b3->weight_begin(3); idx < b3->weight_end(3); ++idx)
    CHECK(collect(b3->expand(idx), b).is_identity());

  CHECK(normal_form_text(collect(Word::identity(2), b)) == "1");
}

TEST_CASE("every basis entry collects to its unit vector") {
  for (int rank : {2, 3}) {
    auto b = build_basis(rank, 4);
    for (int idx = 0; idx < b->size(); ++idx) {
      CHECK(collect(b->expand(idx), b) == unit(b, idx));
      CHECK(collect_by_series(b->expand(idx), b) == unit(b, idx));
    }
  }
}

TEST_CASE("collect is a homomorphism") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 1000; ++t) {
    int rank = 2 + static_cast<int>(t % 2);
    int weight = 2 + static_cast<int>(t % 3);
    auto b = build_basis(rank, weight);
    Word u = rand_word(rank, 6, rng), v = rand_word(rank, 6, rng);
    CHECK(collect(multiply(u, v), b) == nmultiply(collect(u, b), collect(v, b)));
  }
}

TEST_CASE("collect agrees with the series route") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 200; ++t) {
    int rank = 2 + static_cast<int>(t % 2);
    int weight = 2 + static_cast<int>(t % 3);
    auto b = build_basis(rank, weight);
    Word w = rand_word(rank, 8, rng);
    CHECK(collect(w, b) == collect_by_series(w, b));
  }
}

TEST_CASE("normal form is invariant under relator insertion") {
  std::mt19937_64 rng(43);
  auto b = build_basis(2, 4);
  for (int t = 0; t < 200; ++t) {
    Word w = rand_word(2, 8, rng);
    std::uniform_int_distribution<int> pick(0, b->size() - 1);
    std::uniform_int_distribution<int> cut(0, w.length());
    Word c = b->expand(pick(rng));
    Word relator = multiply(c, invert(c));  // freely reduces to 1 already
    // Splice the unreduced relator c c^-1 at a random position instead.
    std::vector<Letter> letters(w.letters().begin(), w.letters().end());
    std::vector<Letter> ins(c.letters().begin(), c.letters().end());
    for (auto it = c.letters().rbegin(); it != c.letters().rend(); ++it)
      ins.push_back(-*it);
    letters.insert(letters.begin() + cut(rng), ins.begin(), ins.end());
    Word spliced(2, letters);
    CHECK(collect(spliced, b) == collect(w, b));
    CHECK(relator.is_identity());
  }
}

TEST_CASE("group laws in the quotient") {
  std::mt19937_64 rng(44);
  auto b = build_basis(2, 4);
  NilpotentElement id(b);
  CHECK(id.is_identity());
  for (int t = 0; t < 100; ++t) {
    NilpotentElement x = collect(rand_word(2, 6, rng), b);
    NilpotentElement y = collect(rand_word(2, 6, rng), b);
    NilpotentElement z = collect(rand_word(2, 6, rng), b);
    CHECK(nmultiply(x, id) == x);
    CHECK(nmultiply(id, x) == x);
    CHECK(nmultiply(x, ninvert(x)).is_identity());
    CHECK(nmultiply(ninvert(x), x).is_identity());
    CHECK(nmultiply(nmultiply(x, y), z) == nmultiply(x, nmultiply(y, z)));
  }
  CHECK(ninvert(collect(parse_word(2, "a"), b)) == collect(parse_word(2, "a^-1"), b));
  CHECK(ninvert(collect(parse_word(2, "ba"), b)) == collect(parse_word(2, "a^-1b^-1"), b));
}

TEST_CASE("npow matches repeated multiplication") {
  std::mt19937_64 rng(45);
  auto b = build_basis(2, 3);
  for (int t = 0; t < 50; ++t) {
    NilpotentElement x = collect(rand_word(2, 5, rng), b);
    NilpotentElement acc(b);
    for (int e = 0; e <= 6; ++e) {
      CHECK(npow(x, BigInt(e)) == acc);
      CHECK(npow(x, BigInt(-e)) == ninvert(acc));
      acc = nmultiply(acc, x);
    }
  }
}

TEST_CASE("basis mismatch is rejected") {
  auto b2 = build_basis(2, 2), b3 = build_basis(2, 3);
  NilpotentElement x(b2), y(b3);
  CHECK_THROWS_AS(nmultiply(x, y), std::invalid_argument);
}

TEST_CASE("induced map fixtures") {
  auto b = build_basis(2, 2);
  InducedMap m = induced_map(parse_endomorphism(2, 2, "a=ab, b=b^2a^4"), b);
  REQUIRE(m.graded(2).rows() == 1);
  CHECK(m.graded(2)(0, 0) == BigInt(-2));
  // Oracle: collect the image of the expanded commutator directly.
  NilpotentElement img =
      collect(apply(parse_endomorphism(2, 2, "a=ab, b=b^2a^4"), parse_word(2, "aba^-1b^-1")), b);
  CHECK(img.exponent(2) == BigInt(-2));

  InducedMap ident = induced_map(Endomorphism::identity(2), b);
  for (int w = 1; w <= 2; ++w) {
    const IntMatrix& g = ident.graded(w);
    for (int i = 0; i < g.rows(); ++i)
      for (int j = 0; j < g.cols(); ++j)
        CHECK(g(i, j) == BigInt(i == j ? 1 : 0));
  }

  InducedMap psi = induced_map(parse_endomorphism(2, 2, "a=a^3, b=a^-1"), b);
  CHECK(psi.graded(2)(0, 0) == BigInt(0));
}

TEST_CASE("induced map is natural") {
  std::mt19937_64 rng(46);
  for (int t = 0; t < 100; ++t) {
    int weight = 2 + static_cast<int>(t % 3);
    auto b = build_basis(2, weight);
    std::vector<Word> images = {rand_word(2, 4, rng), rand_word(2, 4, rng)};
    Endomorphism f(2, 2, images);
    InducedMap m = induced_map(f, b);
    Word w = rand_word(2, 6, rng);
    CHECK(apply(m, collect(w, b)) == collect(apply(f, w), b));
  }
}

TEST_CASE("induced map crosses ranks") {
  // Domain rank 2, codomain rank 3; image of [a,b] lands in the codomain basis.
  auto b2 = build_basis(2, 2);
  Endomorphism f = parse_endomorphism(2, 3, "a=c, b=ab");
  InducedMap m = induced_map(f, b2);
  CHECK(m.codomain->rank() == 3);
  NilpotentElement img = apply(m, collect(parse_word(2, "aba^-1b^-1"), b2));
  CHECK(img == collect(apply(f, parse_word(2, "aba^-1b^-1")), m.codomain));
}
