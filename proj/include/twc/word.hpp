#pragma once

#include <cstdint>
#include <vector>

#include "twc/matrix.hpp"

namespace twc {

// A letter is a signed generator index: +i means generator i, -i its inverse,
// with i in [1, rank].
using Letter = std::int32_t;

// Collation key giving the letter order a < a^-1 < b < b^-1 < ...
inline int letter_key(Letter l) { return 2 * (l < 0 ? -l : l) + (l < 0 ? 1 : 0); }

// Freely reduced word in a free group of a fixed rank. Immutable value type;
// every constructor reduces, so adjacent inverse pairs never survive.
class Word {
public:
  explicit Word(int rank);  // identity
  Word(int rank, std::vector<Letter> letters);

  static Word identity(int rank) { return Word(rank); }
  static Word generator(int rank, int index, int sign = 1);

  int rank() const { return rank_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  friend bool operator==(const Word& a, const Word& b) {
    return a.rank_ == b.rank_ && a.letters_ == b.letters_;
  }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

  // Total order: length first, then letter-by-letter with a < a^-1 < b < b^-1.
  friend bool operator<(const Word& a, const Word& b);

private:
  int rank_;
  std::vector<Letter> letters_;
};

Word multiply(const Word& a, const Word& b);
Word invert(const Word& w);
Word pow(const Word& w, long long e);
inline Word operator*(const Word& a, const Word& b) { return multiply(a, b); }

// Exponent-sum vector of length rank().
IntVector abelianization(const Word& w);

// Endomorphism of free groups, given by generator images. Generator i of the
// domain maps to images[i-1], a word in the codomain.
class Endomorphism {
public:
  Endomorphism(int domain_rank, int codomain_rank, std::vector<Word> images);

  static Endomorphism identity(int rank);

  int domain_rank() const { return domain_rank_; }
  int codomain_rank() const { return codomain_rank_; }
  const Word& image(int generator_index) const { return images_[generator_index - 1]; }
  const std::vector<Word>& images() const { return images_; }

  friend bool operator==(const Endomorphism& a, const Endomorphism& b) {
    return a.domain_rank_ == b.domain_rank_ && a.codomain_rank_ == b.codomain_rank_ &&
           a.images_ == b.images_;
  }

private:
  int domain_rank_;
  int codomain_rank_;
  std::vector<Word> images_;
};

Word apply(const Endomorphism& f, const Word& w);

// compose(f, g) is the map x -> f(g(x)).
Endomorphism compose(const Endomorphism& f, const Endomorphism& g);

// iterate(f, n) is the n-fold composite of an endomorphism with itself;
// iterate(f, 0) is the identity map.
Endomorphism iterate(const Endomorphism& f, int n);

// Column j is the exponent-sum vector of the image of generator j.
IntMatrix abelian_matrix(const Endomorphism& f);

}  // namespace twc
