#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "twc/decider.hpp"
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

Endomorphism rand_endo(int rank, int max_len, std::mt19937_64& rng) {
  std::vector<Word> images;
  for (int i = 0; i < rank; ++i) {
    Word w = rand_word(rank, max_len, rng);
    images.push_back(w);
  }
  return Endomorphism(rank, rank, images);
}

std::vector<std::string> printed(const std::vector<Word>& ws) {
  std::vector<std::string> out;
  for (const Word& w : ws) out.push_back(print_word(w));
  return out;
}

}  // namespace

TEST_CASE("distinct at level 2 with abelian solution recorded") {
  Endomorphism f = parse_endomorphism(2, 2, "a=ab, b=b^2a^4");
  DecisionTrace trace;
  Verdict v = decide_twisted(f, parse_word(2, "b"), Word::identity(2), {}, &trace);
  CHECK(v.kind == Verdict::Kind::Distinct);
  CHECK(v.level == 2);
  REQUIRE(trace.levels.size() == 2);
  CHECK(trace.at_level(1).system == SolutionKind::Unique);
  CHECK(trace.at_level(1).solution(0) == BigInt(-1));
  CHECK(trace.at_level(1).solution(1) == BigInt(0));
  CHECK(trace.at_level(2).system == SolutionKind::NoSolution);
}

TEST_CASE("conjugate found among level-2 candidates") {
  Endomorphism f = parse_endomorphism(2, 2, "a=a^2ba, b=b^2a");
  DecisionTrace trace;
  Verdict v = decide_twisted(f, parse_word(2, "a^2b"), parse_word(2, "a"), {}, &trace);
  CHECK(v.kind == Verdict::Kind::Conjugate);
  CHECK(v.level == 2);
  REQUIRE(v.witness.has_value());
  CHECK(print_word(*v.witness) == "ab^-1a^-1");
  CHECK(check_candidate(f, parse_word(2, "a^2b"), parse_word(2, "a"), *v.witness));

  REQUIRE(trace.levels.size() == 2);
  CHECK(printed(trace.at_level(1).candidates) == std::vector<std::string>{"b^-1"});
  CHECK(printed(trace.at_level(2).candidates) ==
        std::vector<std::string>{"ab^-1a^-1", "b^-2a^-1ba", "b^-1a^-1bab^-1",
                                 "b^-1ab^-1a^-1b", "bab^-1a^-1b^-1", "a^-1bab^-2"});
}

TEST_CASE("singular abelian system is a terminal matrix failure") {
  Endomorphism f = parse_endomorphism(2, 2, "a=bab^-1a^-1, b=a^-1b");
  DecisionTrace trace;
  Verdict v = decide_twisted(f, parse_word(2, "a"), Word::identity(2), {}, &trace);
  CHECK(v.kind == Verdict::Kind::Undecided);
  CHECK(v.failure == Verdict::Failure::MatrixFailure);
  CHECK(v.level == 1);
  REQUIRE(trace.levels.size() == 1);
  CHECK(trace.at_level(1).system == SolutionKind::Infinite);
}

TEST_CASE("doubly twisted distinct at level 2") {
  Endomorphism f = parse_endomorphism(2, 2, "a=b^2a, b=a^-2");
  Endomorphism p = parse_endomorphism(2, 2, "a=a^3, b=a^-1");
  DecisionTrace trace;
  Verdict v = decide_doubly(f, p, parse_word(2, "b"), parse_word(2, "b^-1"), {}, &trace);
  CHECK(v.kind == Verdict::Kind::Distinct);
  CHECK(v.level == 2);
  CHECK(trace.at_level(1).system == SolutionKind::Unique);
  CHECK(trace.at_level(1).solution(0) == BigInt(1));
  CHECK(trace.at_level(1).solution(1) == BigInt(-2));
  CHECK(printed(trace.at_level(1).candidates) ==
        std::vector<std::string>{"ab^-2", "b^-1ab^-1", "b^-2a"});
  for (const Word& c : trace.at_level(1).candidates)
    CHECK(!check_candidate_doubly(f, p, parse_word(2, "b"), parse_word(2, "b^-1"), c));
}

TEST_CASE("twisted is the doubly engine with identity second map") {
  Endomorphism f = parse_endomorphism(2, 2, "a=ab, b=b^2a^4");
  Word g = parse_word(2, "b"), h = Word::identity(2);
  Verdict direct = decide_twisted(f, g, h);
  Verdict via = decide_doubly(f, Endomorphism::identity(2), h, g);
  CHECK(direct.kind == via.kind);
  CHECK(direct.level == via.level);
}

TEST_CASE("equal words are conjugate by the identity") {
  Endomorphism f = parse_endomorphism(2, 2, "a=ab, b=b^2a^4");
  Verdict v = decide_twisted(f, parse_word(2, "ab"), parse_word(2, "ab"));
  CHECK(v.kind == Verdict::Kind::Conjugate);
  CHECK(v.level == 1);
  CHECK(v.witness->is_identity());
}

TEST_CASE("depth cap is validated and reported") {
  Endomorphism f = parse_endomorphism(2, 2, "a=ab, b=b^2a^4");
  DeciderConfig bad;
  bad.depth_cap = 0;
  CHECK_THROWS_AS(decide_twisted(f, parse_word(2, "b"), Word::identity(2), bad),
                  std::invalid_argument);
  bad.depth_cap = 7;
  CHECK_THROWS_AS(decide_twisted(f, parse_word(2, "b"), Word::identity(2), bad),
                  std::invalid_argument);

  // Cap 1: the level-2 refutation is out of reach, so the verdict degrades.
  DeciderConfig shallow;
  shallow.depth_cap = 1;
  Verdict v = decide_twisted(f, parse_word(2, "b"), Word::identity(2), shallow);
  CHECK(v.kind == Verdict::Kind::Undecided);
  CHECK(v.failure == Verdict::Failure::DepthExceeded);
  CHECK(v.level == 1);
}

TEST_CASE("rank-1 domain search") {
  Endomorphism f(1, 1, {parse_word(1, "a^2")});
  Endomorphism p(1, 1, {parse_word(1, "a")});
  Verdict v = decide_rank1_domain(f, p, parse_word(1, "a"), Word::identity(1), 10);
  CHECK(v.kind == Verdict::Kind::Conjugate);
  CHECK(print_word(*v.witness) == "a");

  Verdict trivial = decide_rank1_domain(f, p, parse_word(1, "a"), parse_word(1, "a"), 10);
  CHECK(trivial.kind == Verdict::Kind::Conjugate);
  CHECK(trivial.witness->is_identity());

  Endomorphism id1(1, 1, {parse_word(1, "a")});
  Verdict d = decide_rank1_domain(id1, id1, parse_word(1, "a^2"), Word::identity(1), 10);
  CHECK(d.kind == Verdict::Kind::Distinct);
  CHECK(d.level == 1);

  // Abelianly consistent but never equal: a^n a a^-n = a vs bab^-1.
  Endomorphism fa(1, 2, {parse_word(2, "a")});
  Verdict u = decide_rank1_domain(fa, fa, parse_word(2, "bab^-1"), parse_word(2, "a"), 7);
  CHECK(u.kind == Verdict::Kind::Undecided);
  CHECK(u.failure == Verdict::Failure::DepthExceeded);
  CHECK(u.level == 7);

  CHECK_THROWS_AS(decide_rank1_domain(parse_endomorphism(2, 2, "a=a, b=b"),
                                      parse_endomorphism(2, 2, "a=a, b=b"),
                                      parse_word(2, "a"), parse_word(2, "b"), 5),
                  std::invalid_argument);
}

TEST_CASE("rank-1 codomain is complete") {
  Endomorphism f(2, 1, {parse_word(1, "a"), parse_word(1, "a^2")});
  Endomorphism p(2, 1, {parse_word(1, "a"), parse_word(1, "a")});
  Verdict v = decide_rank1_codomain(f, p, parse_word(1, "a^3"), Word::identity(1));
  CHECK(v.kind == Verdict::Kind::Conjugate);
  CHECK(print_word(*v.witness) == "b^3");
  CHECK(check_candidate_doubly(f, p, parse_word(1, "a^3"), Word::identity(1), *v.witness));

  Verdict d = decide_rank1_codomain(f, f, parse_word(1, "a"), Word::identity(1));
  CHECK(d.kind == Verdict::Kind::Distinct);
  CHECK(d.level == 1);

  Verdict trivial = decide_rank1_codomain(f, p, parse_word(1, "a"), parse_word(1, "a"));
  CHECK(trivial.kind == Verdict::Kind::Conjugate);
  CHECK(trivial.witness->is_identity());

  CHECK_THROWS_AS(decide_rank1_codomain(parse_endomorphism(2, 2, "a=a, b=b"),
                                        parse_endomorphism(2, 2, "a=a, b=b"),
                                        parse_word(2, "a"), parse_word(2, "b")),
                  std::invalid_argument);
}

TEST_CASE("abelian candidate arrangements") {
  IntVector z(2);
  z(0) = BigInt(1);
  z(1) = BigInt(-2);
  CHECK(printed(candidates_from_abelian(z, 2)) ==
        std::vector<std::string>{"ab^-2", "b^-1ab^-1", "b^-2a"});

  IntVector zero = IntVector::Zero(2);
  CHECK(printed(candidates_from_abelian(zero, 2)) == std::vector<std::string>{"1"});
}

TEST_CASE("brute candidate enumeration") {
  CHECK(printed(brute_candidates(2, 1)) ==
        std::vector<std::string>{"1", "a", "a^-1", "b", "b^-1"});
  CHECK(brute_candidates(2, 2).size() == 17);
  CHECK(printed(brute_candidates(1, 3)) ==
        std::vector<std::string>{"1", "a", "a^-1", "a^2", "a^-2", "a^3", "a^-3"});
  CHECK_THROWS_AS(brute_candidates(5, 10), ComplexityError);
}

TEST_CASE("soundness on random small instances") {
  std::mt19937_64 rng(51);
  std::vector<Word> refuters = brute_candidates(2, 4);
  int distinct_seen = 0, conjugate_seen = 0;
  for (int t = 0; t < 200; ++t) {
    Endomorphism f = rand_endo(2, 3, rng);
    Word g = rand_word(2, 2, rng), h = rand_word(2, 2, rng);
    Verdict v = decide_twisted(f, g, h);
    if (v.kind == Verdict::Kind::Conjugate) {
      ++conjugate_seen;
      CHECK(check_candidate(f, g, h, *v.witness));
    } else if (v.kind == Verdict::Kind::Distinct) {
      ++distinct_seen;
      for (const Word& w : refuters) CHECK(!check_candidate(f, g, h, w));
    }
  }
  // The sample must actually exercise both verdicts.
  CHECK(distinct_seen > 0);
  CHECK(conjugate_seen > 0);
}

TEST_CASE("images under the map are never distinct from their source") {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 200; ++t) {
    Endomorphism f = rand_endo(2, 3, rng);
    Word g = rand_word(2, 3, rng);
    Verdict v = decide_twisted(f, g, apply(f, g));
    CHECK(v.kind != Verdict::Kind::Distinct);
  }
}

TEST_CASE("distinct verdicts are stable under deeper caps") {
  std::mt19937_64 rng(53);
  int checked = 0;
  for (int t = 0; t < 120 && checked < 40; ++t) {
    Endomorphism f = rand_endo(2, 3, rng);
    Word g = rand_word(2, 2, rng), h = rand_word(2, 2, rng);
    Verdict v = decide_twisted(f, g, h);
    if (v.kind != Verdict::Kind::Distinct) continue;
    ++checked;
    for (int cap = v.level; cap <= 6; ++cap) {
      DeciderConfig cfg;
      cfg.depth_cap = cap;
      Verdict again = decide_twisted(f, g, h, cfg);
      CHECK(again.kind == Verdict::Kind::Distinct);
      CHECK(again.level == v.level);
    }
  }
  CHECK(checked == 40);
}

TEST_CASE("determinism and scratch reuse") {
  std::mt19937_64 rng(54);
  DeciderScratch scratch;
  for (int t = 0; t < 60; ++t) {
    Endomorphism f = rand_endo(2, 3, rng);
    Word g = rand_word(2, 2, rng), h = rand_word(2, 2, rng);
    DecisionTrace t1, t2;
    Verdict v1 = decide_twisted(f, g, h, {}, &t1);
    Verdict v2 = decide_twisted(f, g, h, {}, &t2, &scratch);
    CHECK(v1.kind == v2.kind);
    CHECK(v1.level == v2.level);
    CHECK(v1.witness.has_value() == v2.witness.has_value());
    if (v1.witness) CHECK(*v1.witness == *v2.witness);
    REQUIRE(t1.levels.size() == t2.levels.size());
    for (std::size_t i = 0; i < t1.levels.size(); ++i) {
      CHECK(t1.levels[i].system == t2.levels[i].system);
      CHECK(printed(t1.levels[i].candidates) == printed(t2.levels[i].candidates));
    }
  }
}

TEST_CASE("level-2 insertion forms can be disabled") {
  Endomorphism f = parse_endomorphism(2, 2, "a=a^2ba, b=b^2a");
  DeciderConfig cfg;
  cfg.enable_level2_forms = false;
  DecisionTrace trace;
  Verdict v = decide_twisted(f, parse_word(2, "a^2b"), parse_word(2, "a"), cfg, &trace);
  // The witness is short enough for the brute fallback to find it too.
  CHECK(v.kind == Verdict::Kind::Conjugate);
  CHECK(check_candidate(f, parse_word(2, "a^2b"), parse_word(2, "a"), *v.witness));
}

TEST_CASE("rank validation") {
  Endomorphism f = parse_endomorphism(2, 3, "a=c, b=ab");
  CHECK_THROWS_AS(decide_twisted(f, parse_word(2, "a"), parse_word(2, "b")),
                  std::invalid_argument);
  Endomorphism p = parse_endomorphism(2, 2, "a=a, b=b");
  CHECK_THROWS_AS(decide_doubly(f, p, parse_word(3, "a"), parse_word(3, "b")),
                  std::invalid_argument);
}
