#include "twc/group_ring.hpp"

#include <cstdlib>
#include <stdexcept>

#include "twc/text.hpp"

namespace twc {

GroupRingElement::GroupRingElement(int rank) : rank_(rank) {
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
}

GroupRingElement::GroupRingElement(const Word& w, BigInt coefficient) : rank_(w.rank()) {
  add_term(w, coefficient);
}

BigInt GroupRingElement::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? BigInt(0) : it->second;
}

void GroupRingElement::add_term(const Word& w, const BigInt& c) {
  if (w.rank() != rank_) throw std::invalid_argument("term rank differs from element rank");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& o) {
  if (o.rank_ != rank_) throw std::invalid_argument("element ranks differ");
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

GroupRingElement& GroupRingElement::operator-=(const GroupRingElement& o) {
  if (o.rank_ != rank_) throw std::invalid_argument("element ranks differ");
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

GroupRingElement GroupRingElement::operator-() const {
  GroupRingElement r(rank_);
  for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
  return r;
}

GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
  if (a.rank_ != b.rank_) throw std::invalid_argument("element ranks differ");
  GroupRingElement r(a.rank_);
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) r.add_term(multiply(wa, wb), ca * cb);
  return r;
}

GroupRingElement operator*(const BigInt& c, const GroupRingElement& a) {
  GroupRingElement r(a.rank_);
  if (c.is_zero()) return r;
  for (const auto& [w, cw] : a.terms_) r.terms_.emplace(w, c * cw);
  return r;
}

BigInt augmentation(const GroupRingElement& e) {
  BigInt s(0);
  for (const auto& [w, c] : e.terms()) s += c;
  return s;
}

GroupRingElement fox_derivative(const Word& w, int generator_index) {
  if (generator_index < 1 || generator_index > w.rank())
    throw std::invalid_argument("generator index out of range");
  GroupRingElement result(w.rank());
  Word prefix = Word::identity(w.rank());
  for (Letter l : w.letters()) {
    int gen = std::abs(l);
    Word letter = Word::generator(w.rank(), gen, l > 0 ? 1 : -1);
    if (gen == generator_index) {
      if (l > 0)
        result += GroupRingElement(prefix);
      else
        result -= GroupRingElement(multiply(prefix, letter));
    }
    prefix = multiply(prefix, letter);
  }
  return result;
}

GroupRingElement reidemeister_trace(const Endomorphism& f) {
  if (f.domain_rank() != f.codomain_rank())
    throw std::invalid_argument("trace needs an endomorphism");
  GroupRingElement t = GroupRingElement::one(f.domain_rank());
  for (int i = 1; i <= f.domain_rank(); ++i) t -= fox_derivative(f.image(i), i);
  return t;
}

std::string to_string(const GroupRingElement& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : e.terms()) {
    bool neg = c.sign() < 0;
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    BigInt mag = abs(c);
    if (w.is_identity())
      out += to_string(mag);
    else if (mag == BigInt(1))
      out += print_word(w);
    else
      out += to_string(mag) + print_word(w);
    first = false;
  }
  return out;
}

}  // namespace twc
