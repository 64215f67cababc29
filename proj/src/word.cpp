#include "twc/word.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace twc {

namespace {

void check_rank(int rank) {
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
}

std::vector<Letter> reduce(int rank, const std::vector<Letter>& in) {
  std::vector<Letter> out;
  out.reserve(in.size());
  for (Letter l : in) {
    if (l == 0 || std::abs(l) > rank)
      throw std::invalid_argument("letter outside generator range");
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

}  // namespace

Word::Word(int rank) : rank_(rank) { check_rank(rank); }

Word::Word(int rank, std::vector<Letter> letters) : rank_(rank) {
  check_rank(rank);
  letters_ = reduce(rank, letters);
}

Word Word::generator(int rank, int index, int sign) {
  check_rank(rank);
  if (index < 1 || index > rank) throw std::invalid_argument("generator index out of range");
  if (sign != 1 && sign != -1) throw std::invalid_argument("generator sign must be +1 or -1");
  return Word(rank, {static_cast<Letter>(sign * index)});
}

bool operator<(const Word& a, const Word& b) {
  if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
  for (std::size_t i = 0; i < a.letters_.size(); ++i) {
    int ka = letter_key(a.letters_[i]), kb = letter_key(b.letters_[i]);
    if (ka != kb) return ka < kb;
  }
  return false;
}

Word multiply(const Word& a, const Word& b) {
  if (a.rank() != b.rank()) throw std::invalid_argument("word ranks differ");
  std::vector<Letter> joined = a.letters();
  joined.insert(joined.end(), b.letters().begin(), b.letters().end());
  return Word(a.rank(), std::move(joined));
}

Word invert(const Word& w) {
  std::vector<Letter> rev(w.letters().rbegin(), w.letters().rend());
  for (Letter& l : rev) l = -l;
  return Word(w.rank(), std::move(rev));
}

Word pow(const Word& w, long long e) {
  if (e == 0) return Word::identity(w.rank());
  Word base = e < 0 ? invert(w) : w;
  unsigned long long n = e < 0 ? -static_cast<unsigned long long>(e) : static_cast<unsigned long long>(e);
  Word acc = Word::identity(w.rank());
  while (n > 0) {
    if (n & 1) acc = multiply(acc, base);
    base = multiply(base, base);
    n >>= 1;
  }
  return acc;
}

IntVector abelianization(const Word& w) {
  IntVector v = IntVector::Zero(w.rank());
  for (Letter l : w.letters()) v(std::abs(l) - 1) += (l > 0 ? 1 : -1);
  return v;
}

Endomorphism::Endomorphism(int domain_rank, int codomain_rank, std::vector<Word> images)
    : domain_rank_(domain_rank), codomain_rank_(codomain_rank), images_(std::move(images)) {
  check_rank(domain_rank);
  check_rank(codomain_rank);
  if (images_.size() != static_cast<std::size_t>(domain_rank))
    throw std::invalid_argument("need one image per domain generator");
  for (const Word& w : images_)
    if (w.rank() != codomain_rank)
      throw std::invalid_argument("image rank differs from codomain rank");
}

Endomorphism Endomorphism::identity(int rank) {
  std::vector<Word> images;
  images.reserve(rank);
  for (int i = 1; i <= rank; ++i) images.push_back(Word::generator(rank, i));
  return Endomorphism(rank, rank, std::move(images));
}

Word apply(const Endomorphism& f, const Word& w) {
  if (w.rank() != f.domain_rank()) throw std::invalid_argument("word rank differs from domain rank");
  std::vector<Letter> out;
  for (Letter l : w.letters()) {
    const Word& img = f.image(std::abs(l));
    if (l > 0) {
      out.insert(out.end(), img.letters().begin(), img.letters().end());
    } else {
      for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) out.push_back(-*it);
    }
  }
  return Word(f.codomain_rank(), std::move(out));
}

Endomorphism compose(const Endomorphism& f, const Endomorphism& g) {
  if (g.codomain_rank() != f.domain_rank())
    throw std::invalid_argument("composition ranks incompatible");
  std::vector<Word> images;
  images.reserve(g.domain_rank());
  for (int i = 1; i <= g.domain_rank(); ++i) images.push_back(apply(f, g.image(i)));
  return Endomorphism(g.domain_rank(), f.codomain_rank(), std::move(images));
}

Endomorphism iterate(const Endomorphism& f, int n) {
  if (f.domain_rank() != f.codomain_rank())
    throw std::invalid_argument("iterate needs an endomorphism");
  if (n < 0) throw std::invalid_argument("iterate count must be nonnegative");
  if (n == 0) return Endomorphism::identity(f.domain_rank());
  Endomorphism acc = f;
  for (int i = 1; i < n; ++i) acc = compose(f, acc);
  return acc;
}

IntMatrix abelian_matrix(const Endomorphism& f) {
  IntMatrix m = IntMatrix::Zero(f.codomain_rank(), f.domain_rank());
  for (int j = 1; j <= f.domain_rank(); ++j) m.col(j - 1) = abelianization(f.image(j));
  return m;
}

}  // namespace twc
