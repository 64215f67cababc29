#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "twc/word.hpp"

namespace twc {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }
  const std::string& message() const { return message_; }

private:
  std::size_t position_;
  std::string message_;
};

// Generators are named a..e when the rank is at most 5, and x1..xk otherwise.
std::string generator_name(int rank, int index);

// Grammar: a word is a sequence of factors, optionally separated by '*' and
// whitespace. A factor is '1' or a generator name with an optional integer
// exponent, written  name '^' exponent.  Examples: "ab^-2", "a * b^-2", "1".
Word parse_word(int rank, const std::string& text);

// Inverse of parse_word up to free reduction; runs of one generator print as
// powers ("ab^-2"), the identity prints as "1".
std::string print_word(const Word& w);

// Comma-separated generator assignments, e.g. "a=ab, b=b^2a^4". Every domain
// generator must be assigned exactly once; images are words in the codomain.
Endomorphism parse_endomorphism(int domain_rank, int codomain_rank, const std::string& text);

std::string print_endomorphism(const Endomorphism& f);

}  // namespace twc
